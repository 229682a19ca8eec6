#include "cgen/models.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace cgen {

ConditionalModel::ConditionalModel(Variable target, std::vector<Variable> context)
    : target_(std::move(target)), context_(std::move(context)) {
  for (const auto& c : context_)
    if (c.name == target_.name) throw std::invalid_argument("model target '" + target_.name + "' in its own context");
}

std::vector<std::string> ConditionalModel::context_names() const {
  std::vector<std::string> out;
  for (const auto& c : context_) out.push_back(c.name);
  return out;
}

std::size_t ConditionalModel::context_configurations() const { return state_count(context_); }

std::size_t ConditionalModel::context_index(std::span<const int> ctx) const {
  if (ctx.size() != context_.size()) throw std::invalid_argument("context has the wrong width");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx[i] < 0 || ctx[i] >= context_[i].cardinality)
      throw std::invalid_argument("context value out of range for '" + context_[i].name + "'");
    idx = idx * static_cast<std::size_t>(context_[i].cardinality) + static_cast<std::size_t>(ctx[i]);
  }
  return idx;
}

int ConditionalModel::sample(std::span<const int> ctx, Rng& rng) const {
  auto p = distribution(ctx);
  double u = uniform01(rng);
  double acc = 0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(p.size()) - 1;
}

int ConditionalModel::sample(const Assignment& ctx, Rng& rng) const {
  std::vector<int> values;
  for (const auto& c : context_) {
    auto it = ctx.find(c.name);
    if (it == ctx.end()) throw std::invalid_argument("missing context variable '" + c.name + "'");
    values.push_back(it->second);
  }
  return sample(std::span<const int>(values), rng);
}

CptModel::CptModel(Variable target, std::vector<Variable> context, std::vector<double> table, std::string kind)
    : ConditionalModel(std::move(target), std::move(context)), table_(std::move(table)), kind_(std::move(kind)) {
  const std::size_t k = static_cast<std::size_t>(target_.cardinality);
  if (table_.size() != context_configurations() * k) throw std::invalid_argument("CPT has the wrong size");
  cumulative_.resize(table_.size());
  for (std::size_t r = 0; r < context_configurations(); ++r) {
    double acc = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double p = table_[r * k + j];
      if (p < 0 || !std::isfinite(p)) throw std::invalid_argument("CPT entries must be finite and non-negative");
      acc += p;
      cumulative_[r * k + j] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) throw std::invalid_argument("CPT row does not sum to 1");
  }
}

std::span<const double> CptModel::row(std::size_t index) const {
  const std::size_t k = static_cast<std::size_t>(target_.cardinality);
  return {table_.data() + index * k, k};
}

std::span<const double> CptModel::distribution(std::span<const int> ctx) const { return row(context_index(ctx)); }

int CptModel::sample(std::span<const int> ctx, Rng& rng) const {
  const std::size_t k = static_cast<std::size_t>(target_.cardinality);
  const double* cum = cumulative_.data() + context_index(ctx) * k;
  const double u = uniform01(rng) * cum[k - 1];
  auto it = std::upper_bound(cum, cum + k - 1, u);
  return static_cast<int>(it - cum);
}

UniformModel::UniformModel(Variable target)
    : ConditionalModel(std::move(target), {}),
      probs_(static_cast<std::size_t>(target_.cardinality), 1.0 / target_.cardinality) {}

std::span<const double> UniformModel::distribution(std::span<const int> ctx) const {
  if (!ctx.empty()) throw std::invalid_argument("uniform model takes no context");
  return probs_;
}

int UniformModel::sample(std::span<const int> ctx, Rng& rng) const {
  if (!ctx.empty()) throw std::invalid_argument("uniform model takes no context");
  std::uniform_int_distribution<int> pick(0, target_.cardinality - 1);
  return pick(rng);
}

ModelPtr uniform_model(const Variable& v) { return std::make_shared<UniformModel>(v); }

namespace kernels {

namespace {

std::size_t config_space(const Dataset& d, std::span<const int> columns) {
  std::size_t n = 1;
  for (int c : columns) n *= static_cast<std::size_t>(d.columns()[c].cardinality);
  return n;
}

inline std::size_t config_of(const Dataset& d, std::span<const int> columns, std::size_t row) {
  std::size_t idx = 0;
  for (int c : columns)
    idx = idx * static_cast<std::size_t>(d.columns()[c].cardinality) + static_cast<std::size_t>(d.value(row, c));
  return idx;
}

}  // namespace

std::vector<std::uint64_t> count_configurations_serial(const Dataset& d, std::span<const int> columns) {
  std::vector<std::uint64_t> counts(config_space(d, columns), 0);
  for (std::size_t r = 0; r < d.rows(); ++r) ++counts[config_of(d, columns, r)];
  return counts;
}

std::vector<std::uint64_t> count_configurations(const Dataset& d, std::span<const int> columns, int workers) {
  const std::size_t space = config_space(d, columns);
  const auto rows = static_cast<std::int64_t>(d.rows());
  std::vector<std::uint64_t> counts(space, 0);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<std::uint64_t> local(space, 0);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) ++local[config_of(d, columns, static_cast<std::size_t>(r))];
#pragma omp critical
    for (std::size_t i = 0; i < space; ++i) counts[i] += local[i];
  }
  return counts;
}

}  // namespace kernels

std::shared_ptr<const CptModel> fit_conditional(const Dataset& d, const std::string& target,
                                                const std::vector<std::string>& context, double alpha,
                                                int workers) {
  if (d.empty()) throw std::invalid_argument("cannot fit a model on an empty dataset");
  if (!(alpha >= 0)) throw std::invalid_argument("smoothing alpha must be non-negative");
  if (std::find(context.begin(), context.end(), target) != context.end())
    throw std::invalid_argument("target '" + target + "' appears in its own context");
  std::vector<int> columns;
  std::vector<Variable> ctx_vars;
  for (const auto& c : context) {
    columns.push_back(d.require_column(c));
    ctx_vars.push_back(d.columns()[columns.back()]);
  }
  columns.push_back(d.require_column(target));
  const Variable tvar = d.columns()[columns.back()];

  const auto counts = kernels::count_configurations(d, columns, workers);
  const std::size_t k = static_cast<std::size_t>(tvar.cardinality);
  std::vector<double> table(counts.size());
  for (std::size_t r = 0; r < counts.size() / k; ++r) {
    double n = 0;
    for (std::size_t j = 0; j < k; ++j) n += static_cast<double>(counts[r * k + j]);
    const double denom = n + alpha * static_cast<double>(k);
    for (std::size_t j = 0; j < k; ++j)
      table[r * k + j] = denom > 0 ? (static_cast<double>(counts[r * k + j]) + alpha) / denom : 1.0 / k;
  }
  return std::make_shared<CptModel>(tvar, ctx_vars, std::move(table), "cpt");
}

std::shared_ptr<const CptModel> exact_conditional(const DistTable& joint, const std::string& target,
                                                  const std::vector<std::string>& context) {
  if (std::find(context.begin(), context.end(), target) != context.end())
    throw std::invalid_argument("target '" + target + "' appears in its own context");
  std::vector<std::string> order = context;
  order.push_back(target);
  for (const auto& v : order)
    if (!joint.has(v)) throw std::invalid_argument("joint table has no variable '" + v + "'");
  DistTable m = joint.marginal(to_set(order)).reordered(order);
  const auto& vars = m.vars();
  const Variable tvar = vars.back();
  std::vector<Variable> ctx_vars(vars.begin(), vars.end() - 1);
  const std::size_t k = static_cast<std::size_t>(tvar.cardinality);
  std::vector<double> table(m.values().begin(), m.values().end());
  for (std::size_t r = 0; r < table.size() / k; ++r) {
    double n = 0;
    for (std::size_t j = 0; j < k; ++j) n += table[r * k + j];
    if (!(n > 0)) throw std::invalid_argument("context configuration with zero probability mass");
    for (std::size_t j = 0; j < k; ++j) table[r * k + j] /= n;
  }
  return std::make_shared<CptModel>(tvar, ctx_vars, std::move(table), "exact");
}

DistTable model_factor(const ConditionalModel& m) {
  std::vector<Variable> vars = m.context();
  vars.push_back(m.target());
  DistTable f = DistTable::constant(vars, 0.0);
  std::vector<int> ctx(m.context().size());
  std::size_t idx = 0;
  for_each_state(m.context(), [&](std::span<const int> c) {
    auto p = m.distribution(c);
    for (double v : p) f.values()[idx++] = v;
  });
  return f;
}

}  // namespace cgen
