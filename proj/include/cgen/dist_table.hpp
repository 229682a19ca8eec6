#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgen/admg.hpp"
#include "cgen/varset.hpp"

namespace cgen {

/// Dense non-negative table over the joint states of an ordered variable
/// list, row-major (the last variable varies fastest). Used both for
/// normalized distributions and for the intermediate factors of estimand
/// evaluation.
class DistTable {
 public:
  DistTable() : values_{1.0} {}
  DistTable(std::vector<Variable> vars, std::vector<double> values);

  static DistTable scalar(double v);
  static DistTable constant(std::vector<Variable> vars, double v);
  static DistTable uniform(std::vector<Variable> vars);
  static DistTable point_mass(std::vector<Variable> vars, const Assignment& at);

  const std::vector<Variable>& vars() const { return vars_; }
  std::vector<std::string> names() const;
  VarSet var_set() const;
  bool has(const std::string& name) const { return position(name) >= 0; }
  int position(const std::string& name) const;

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double at(std::span<const int> states) const { return values_[flat_index(states)]; }
  double& at(std::span<const int> states) { return values_[flat_index(states)]; }
  /// Looks up the entry for `a`; `a` must assign every variable (extras ignored).
  double value(const Assignment& a) const;
  std::size_t flat_index(std::span<const int> states) const;
  void unflatten(std::size_t index, std::span<int> states) const;

  double total() const;
  DistTable normalized() const;
  bool is_normalized(double tol = 1e-9) const;

  /// Sums out every variable not in `keep`; kept variables stay in their order.
  DistTable marginal(const VarSet& keep) const;
  DistTable sum_out(const VarSet& drop) const;
  /// Fixes the listed variables and drops them from the table.
  DistTable slice(const Assignment& fixed) const;
  /// Same table with variables permuted to `order` (must be a permutation).
  DistTable reordered(const std::vector<std::string>& order) const;

  /// Pointwise product over the union of both variable lists.
  friend DistTable operator*(const DistTable& a, const DistTable& b);
  /// Pointwise quotient; the denominator's variables must be a subset of the
  /// numerator's. A zero denominator under a non-zero numerator throws.
  DistTable divide(const DistTable& denominator) const;

 private:
  void compute_strides();

  std::vector<Variable> vars_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumerates all joint states of `vars` in row-major order.
template <typename F>
void for_each_state(const std::vector<Variable>& vars, F&& f) {
  std::vector<int> state(vars.size(), 0);
  while (true) {
    f(std::span<const int>(state));
    int i = static_cast<int>(vars.size()) - 1;
    while (i >= 0 && ++state[i] == vars[i].cardinality) state[i--] = 0;
    if (i < 0) return;
  }
}

std::size_t state_count(const std::vector<Variable>& vars);

/// Half the L1 distance. Tables must cover the same variable set; a
/// different order is reconciled by name.
double tvd(const DistTable& p, const DistTable& q);

/// Largest absolute elementwise difference (same reconciliation as tvd).
double max_abs_diff(const DistTable& p, const DistTable& q);

}  // namespace cgen
