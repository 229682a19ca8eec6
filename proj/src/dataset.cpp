#include "cgen/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cgen {

Dataset::Dataset(std::vector<Variable> columns, VarSet intervened) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    for (std::size_t j = i + 1; j < columns_.size(); ++j)
      if (columns_[i].name == columns_[j].name)
        throw std::invalid_argument("dataset: duplicate column '" + columns_[i].name + "'");
  set_intervened(std::move(intervened));
}

std::vector<std::string> Dataset::column_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

VarSet Dataset::column_set() const { return to_set(column_names()); }

int Dataset::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return static_cast<int>(i);
  return -1;
}

int Dataset::require_column(const std::string& name) const {
  int i = column_index(name);
  if (i < 0) throw std::invalid_argument("dataset has no column '" + name + "'");
  return i;
}

void Dataset::set_intervened(VarSet v) {
  for (const auto& name : v) require_column(name);
  intervened_ = std::move(v);
}

void Dataset::add_row(std::span<const int> values) {
  if (values.size() != columns_.size()) throw std::invalid_argument("dataset row has the wrong width");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < 0 || values[i] >= columns_[i].cardinality)
      throw std::invalid_argument("value " + std::to_string(values[i]) + " out of range for column '" +
                                  columns_[i].name + "'");
  data_.insert(data_.end(), values.begin(), values.end());
}

Dataset Dataset::select(const VarSet& keep) const {
  for (const auto& name : keep) require_column(name);
  std::vector<Variable> cols;
  std::vector<int> src;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (keep.count(columns_[i].name)) {
      cols.push_back(columns_[i]);
      src.push_back(static_cast<int>(i));
    }
  Dataset out(cols, set_intersect(intervened_, keep));
  out.data_.resize(rows() * cols.size());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t k = 0; k < src.size(); ++k) out.data_[r * cols.size() + k] = value(r, src[k]);
  return out;
}

void Dataset::append(const Dataset& other) {
  if (other.columns_ != columns_) throw std::invalid_argument("append: column mismatch");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

DistTable empirical_distribution(const Dataset& d, const std::vector<std::string>& vars) {
  if (d.empty()) throw std::invalid_argument("empirical distribution of an empty dataset");
  std::vector<Variable> cols;
  std::vector<int> idx;
  for (const auto& v : vars) {
    idx.push_back(d.require_column(v));
    cols.push_back(d.columns()[idx.back()]);
  }
  DistTable t = DistTable::constant(cols, 0.0);
  std::vector<int> state(cols.size());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t k = 0; k < idx.size(); ++k) state[k] = d.value(r, idx[k]);
    t.at(state) += 1.0;
  }
  const double n = static_cast<double>(d.rows());
  for (auto& v : t.values()) v /= n;
  return t;
}

void write_csv(std::ostream& out, const Dataset& d) {
  const auto names = d.column_names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  std::string line;
  char buf[16];
  for (std::size_t r = 0; r < d.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < d.num_columns(); ++c) {
      if (c) line.push_back(',');
      auto res = std::to_chars(buf, buf + sizeof buf, d.value(r, c));
      line.append(buf, res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset read_csv(std::istream& in, const std::vector<Variable>& schema) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: missing header");
  std::vector<Variable> cols;
  for (const auto& name : split_csv(line)) {
    auto it = std::find_if(schema.begin(), schema.end(), [&](const Variable& v) { return v.name == name; });
    if (it == schema.end()) throw std::invalid_argument("csv: column '" + name + "' not in the graph");
    cols.push_back(*it);
  }
  Dataset d(cols);
  std::vector<int> row(cols.size());
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv(line);
    if (cells.size() != cols.size())
      throw std::invalid_argument("csv line " + std::to_string(line_number) + ": wrong number of cells");
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const char* first = cells[k].data();
      const char* last = first + cells[k].size();
      auto res = std::from_chars(first, last, row[k]);
      if (res.ec != std::errc() || res.ptr != last)
        throw std::invalid_argument("csv line " + std::to_string(line_number) + ": bad integer '" + cells[k] + "'");
    }
    try {
      d.add_row(row);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("csv line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return d;
}

void save_dataset(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_csv(out, d);
  if (!d.intervened().empty()) {
    std::ofstream side(path + ".intervened", std::ios::binary);
    for (const auto& name : d.column_names())
      if (d.intervened().count(name)) side << name << '\n';
  }
}

Dataset load_dataset(const std::string& path, const std::vector<Variable>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open dataset '" + path + "'");
  Dataset d = read_csv(in, schema);
  std::ifstream side(path + ".intervened");
  if (side) {
    VarSet marked;
    std::string name;
    while (side >> name) marked.insert(name);
    d.set_intervened(std::move(marked));
  }
  return d;
}

}  // namespace cgen
