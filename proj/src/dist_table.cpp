#include "cgen/dist_table.hpp"

#include <cmath>
#include <numeric>

namespace cgen {

std::size_t state_count(const std::vector<Variable>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= static_cast<std::size_t>(v.cardinality);
  return n;
}

DistTable::DistTable(std::vector<Variable> vars, std::vector<double> values)
    : vars_(std::move(vars)), values_(std::move(values)) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i].name == vars_[j].name)
        throw std::invalid_argument("DistTable: duplicate variable '" + vars_[i].name + "'");
  if (values_.size() != state_count(vars_))
    throw std::invalid_argument("DistTable: value count does not match the joint state space");
  compute_strides();
}

void DistTable::compute_strides() {
  strides_.assign(vars_.size(), 1);
  for (int i = static_cast<int>(vars_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(vars_[i + 1].cardinality);
}

DistTable DistTable::scalar(double v) { return DistTable({}, {v}); }

DistTable DistTable::constant(std::vector<Variable> vars, double v) {
  std::size_t n = state_count(vars);
  return DistTable(std::move(vars), std::vector<double>(n, v));
}

DistTable DistTable::uniform(std::vector<Variable> vars) {
  std::size_t n = state_count(vars);
  return DistTable(std::move(vars), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DistTable DistTable::point_mass(std::vector<Variable> vars, const Assignment& at) {
  DistTable t = constant(std::move(vars), 0.0);
  std::vector<int> state;
  for (const auto& v : t.vars_) {
    auto it = at.find(v.name);
    if (it == at.end()) throw std::invalid_argument("point_mass: no value for '" + v.name + "'");
    if (it->second < 0 || it->second >= v.cardinality)
      throw std::invalid_argument("point_mass: value out of range for '" + v.name + "'");
    state.push_back(it->second);
  }
  t.at(state) = 1.0;
  return t;
}

std::vector<std::string> DistTable::names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

VarSet DistTable::var_set() const {
  VarSet out;
  for (const auto& v : vars_) out.insert(v.name);
  return out;
}

int DistTable::position(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::size_t DistTable::flat_index(std::span<const int> states) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) idx += strides_[i] * static_cast<std::size_t>(states[i]);
  return idx;
}

void DistTable::unflatten(std::size_t index, std::span<int> states) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    states[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
}

double DistTable::value(const Assignment& a) const {
  std::vector<int> state;
  for (const auto& v : vars_) {
    auto it = a.find(v.name);
    if (it == a.end()) throw std::invalid_argument("DistTable::value: no value for '" + v.name + "'");
    state.push_back(it->second);
  }
  return at(state);
}

double DistTable::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

DistTable DistTable::normalized() const {
  double z = total();
  if (!(z > 0)) throw EvaluationError("cannot normalize a table with zero mass");
  DistTable out = *this;
  for (auto& v : out.values_) v /= z;
  return out;
}

bool DistTable::is_normalized(double tol) const {
  for (double v : values_)
    if (v < 0) return false;
  return std::abs(total() - 1.0) <= tol;
}

DistTable DistTable::marginal(const VarSet& keep) const {
  std::vector<Variable> kept;
  std::vector<int> src_pos;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (keep.count(vars_[i].name)) {
      kept.push_back(vars_[i]);
      src_pos.push_back(static_cast<int>(i));
    }
  DistTable out = constant(kept, 0.0);
  std::vector<int> state(vars_.size()), sub(kept.size());
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    unflatten(idx, state);
    for (std::size_t k = 0; k < src_pos.size(); ++k) sub[k] = state[src_pos[k]];
    out.at(sub) += values_[idx];
  }
  return out;
}

DistTable DistTable::sum_out(const VarSet& drop) const { return marginal(set_minus(var_set(), drop)); }

DistTable DistTable::slice(const Assignment& fixed) const {
  std::vector<Variable> kept;
  std::vector<int> fixed_value(vars_.size(), -1);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = fixed.find(vars_[i].name);
    if (it == fixed.end()) {
      kept.push_back(vars_[i]);
    } else {
      if (it->second < 0 || it->second >= vars_[i].cardinality)
        throw std::invalid_argument("slice: value out of range for '" + vars_[i].name + "'");
      fixed_value[i] = it->second;
    }
  }
  DistTable out = constant(kept, 0.0);
  std::vector<int> state(vars_.size()), sub(kept.size());
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    unflatten(idx, state);
    bool match = true;
    std::size_t k = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (fixed_value[i] >= 0) {
        if (state[i] != fixed_value[i]) match = false;
      } else {
        sub[k++] = state[i];
      }
    }
    if (match) out.at(sub) = values_[idx];
  }
  return out;
}

DistTable DistTable::reordered(const std::vector<std::string>& order) const {
  if (order.size() != vars_.size()) throw std::invalid_argument("reordered: not a permutation");
  std::vector<Variable> vars;
  std::vector<int> src_pos;
  for (const auto& name : order) {
    int p = position(name);
    if (p < 0) throw std::invalid_argument("reordered: unknown variable '" + name + "'");
    vars.push_back(vars_[p]);
    src_pos.push_back(p);
  }
  DistTable out = constant(vars, 0.0);
  std::vector<int> state(vars_.size()), dst(vars_.size());
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    unflatten(idx, state);
    for (std::size_t k = 0; k < src_pos.size(); ++k) dst[k] = state[src_pos[k]];
    out.at(dst) = values_[idx];
  }
  return out;
}

namespace {

// Positions of each of `part`'s variables inside `whole`.
std::vector<int> embed(const DistTable& part, const std::vector<Variable>& whole) {
  std::vector<int> pos;
  for (const auto& v : part.vars()) {
    int p = -1;
    for (std::size_t i = 0; i < whole.size(); ++i)
      if (whole[i].name == v.name) {
        if (whole[i].cardinality != v.cardinality)
          throw std::invalid_argument("cardinality mismatch for '" + v.name + "'");
        p = static_cast<int>(i);
      }
    pos.push_back(p);
  }
  return pos;
}

}  // namespace

DistTable operator*(const DistTable& a, const DistTable& b) {
  std::vector<Variable> vars = a.vars();
  for (const auto& v : b.vars())
    if (a.position(v.name) < 0) vars.push_back(v);
  auto pa = embed(a, vars);
  auto pb = embed(b, vars);
  DistTable out = DistTable::constant(vars, 0.0);
  std::vector<int> state(vars.size()), sa(a.vars().size()), sb(b.vars().size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out.unflatten(idx, state);
    for (std::size_t k = 0; k < pa.size(); ++k) sa[k] = state[pa[k]];
    for (std::size_t k = 0; k < pb.size(); ++k) sb[k] = state[pb[k]];
    out.values()[idx] = a.at(sa) * b.at(sb);
  }
  return out;
}

DistTable DistTable::divide(const DistTable& denominator) const {
  auto pd = embed(denominator, vars_);
  for (std::size_t k = 0; k < pd.size(); ++k)
    if (pd[k] < 0)
      throw std::invalid_argument("divide: denominator variable '" + denominator.vars()[k].name +
                                  "' missing from numerator");
  DistTable out = *this;
  std::vector<int> state(vars_.size()), sd(pd.size());
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    unflatten(idx, state);
    for (std::size_t k = 0; k < pd.size(); ++k) sd[k] = state[pd[k]];
    double den = denominator.at(sd);
    if (den == 0.0) {
      if (values_[idx] != 0.0) throw EvaluationError("division by a zero-probability denominator");
      throw EvaluationError("0/0 in quotient: input distribution is not strictly positive");
    }
    out.values_[idx] = values_[idx] / den;
  }
  return out;
}

namespace {

DistTable aligned(const DistTable& p, const DistTable& q) {
  if (p.var_set() != q.var_set() || p.vars().size() != q.vars().size())
    throw std::invalid_argument("distribution tables cover different variables");
  return q.reordered(p.names());
}

}  // namespace

double tvd(const DistTable& p, const DistTable& q) {
  DistTable qa = aligned(p, q);
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p.values()[i] - qa.values()[i]);
  return 0.5 * s;
}

double max_abs_diff(const DistTable& p, const DistTable& q) {
  DistTable qa = aligned(p, q);
  double m = 0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p.values()[i] - qa.values()[i]));
  return m;
}

}  // namespace cgen
