#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cgen/admg.hpp"
#include "cgen/dist_table.hpp"

namespace cgen {

/// Dense row-major table of discrete samples. `intervened` marks the columns
/// whose values were set by an intervention rather than observed.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Variable> columns, VarSet intervened = {});

  const std::vector<Variable>& columns() const { return columns_; }
  std::vector<std::string> column_names() const;
  VarSet column_set() const;
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t rows() const { return columns_.empty() ? 0 : data_.size() / columns_.size(); }
  bool empty() const { return rows() == 0; }
  bool has(const std::string& name) const { return column_index(name) >= 0; }
  int column_index(const std::string& name) const;
  int require_column(const std::string& name) const;

  const VarSet& intervened() const { return intervened_; }
  void set_intervened(VarSet v);

  /// Validates ranges before appending.
  void add_row(std::span<const int> values);
  void reserve(std::size_t rows) { data_.reserve(rows * columns_.size()); }
  /// Resizes to `rows` zero rows; kernels fill them through `row()`.
  void resize(std::size_t rows) { data_.assign(rows * columns_.size(), 0); }

  std::span<const int> row(std::size_t i) const { return {data_.data() + i * columns_.size(), columns_.size()}; }
  std::span<int> row(std::size_t i) { return {data_.data() + i * columns_.size(), columns_.size()}; }
  int value(std::size_t row, std::size_t col) const { return data_[row * columns_.size() + col]; }
  std::span<const int> raw() const { return data_; }

  /// Keeps the named columns (in this dataset's order); intervened marks are
  /// carried over for the kept columns.
  Dataset select(const VarSet& keep) const;
  /// Appends the rows of `other`, which must have identical columns.
  void append(const Dataset& other);

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Variable> columns_;
  VarSet intervened_;
  std::vector<int> data_;
};

/// Normalized frequency table over the joint states of `vars`.
DistTable empirical_distribution(const Dataset& d, const std::vector<std::string>& vars);

/// CSV: a header of variable names, then one integer row per sample.
void write_csv(std::ostream& out, const Dataset& d);
/// Cardinalities come from `schema`; every header name must be declared there.
Dataset read_csv(std::istream& in, const std::vector<Variable>& schema);

/// Writes `path`, plus `path + ".intervened"` (one name per line) when any
/// column is marked intervened.
void save_dataset(const std::string& path, const Dataset& d);
Dataset load_dataset(const std::string& path, const std::vector<Variable>& schema);

}  // namespace cgen
