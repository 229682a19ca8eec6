#include "cgen/idgen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cgen {

Proposal parse_proposal(const std::string& s) {
  if (s == "uniform") return Proposal::uniform;
  if (s == "marginal") return Proposal::marginal;
  throw std::invalid_argument("unknown proposal '" + s + "' (expected uniform or marginal)");
}

std::string to_string(Proposal p) { return p == Proposal::uniform ? "uniform" : "marginal"; }

TrainingData::TrainingData(Dataset d) : data_(std::move(d)) {}

TrainingData::TrainingData(DistTable law, VarSet intervened)
    : data_(std::move(law)), law_intervened_(std::move(intervened)) {
  for (const auto& v : law_intervened_)
    if (!std::get<DistTable>(data_).has(v)) throw std::invalid_argument("intervened column '" + v + "' not in law");
}

std::vector<Variable> TrainingData::columns() const { return exact() ? law().vars() : dataset().columns(); }

VarSet TrainingData::column_set() const { return exact() ? law().var_set() : dataset().column_set(); }

bool TrainingData::has(const std::string& v) const { return exact() ? law().has(v) : dataset().has(v); }

const VarSet& TrainingData::intervened() const { return exact() ? law_intervened_ : dataset().intervened(); }

std::size_t TrainingData::rows() const { return exact() ? 0 : dataset().rows(); }

TrainingData TrainingData::restrict(const VarSet& keep) const {
  const VarSet k = set_intersect(keep, column_set());
  if (exact()) return TrainingData(law().marginal(k), set_intersect(law_intervened_, k));
  return TrainingData(dataset().select(k));
}

ModelPtr TrainingData::fit(const std::string& target, const std::vector<std::string>& context,
                           const IdGenOptions& opt) const {
  if (exact()) return exact_conditional(law(), target, context);
  return fit_conditional(dataset(), target, context, opt.alpha, opt.workers);
}

SamplingNetwork conditional_gms(const VarSet& y, const VarSet& x, const Admg& g, const TrainingData& d,
                                const VarSet& x_hat, const Admg& g_hat, const std::vector<std::string>& order,
                                const IdGenOptions& opt) {
  g.require_known(y);
  g_hat.require_known(set_union(y, set_union(x, x_hat)));
  SamplingNetwork h(order);
  for (const auto& v : set_union(x, x_hat)) h.add_placeholder(g_hat.variable(v));
  std::vector<std::string> prefix;
  for (const auto& v : order) {
    if (!g_hat.contains(v)) continue;
    if (y.count(v)) {
      for (const auto& c : prefix)
        if (!d.has(c)) throw std::invalid_argument("context variable '" + c + "' is not in the training data");
      if (!d.has(v)) throw std::invalid_argument("variable '" + v + "' is not in the training data");
      h.add_model(d.fit(v, prefix, opt));
    }
    prefix.push_back(v);
  }
  return h;
}

namespace {

std::vector<std::string> restrict_order(const std::vector<std::string>& order, const VarSet& s) {
  std::vector<std::string> out;
  for (const auto& v : order)
    if (s.count(v)) out.push_back(v);
  return out;
}

// Samplers for X_Z: independent uniforms, or a chain fitted to the
// marginal of X_Z in the current data.
std::vector<ModelPtr> proposal_models(const std::vector<std::string>& x_z, const Admg& g, const TrainingData& d,
                                      const IdGenOptions& opt) {
  std::vector<ModelPtr> out;
  std::vector<std::string> prefix;
  for (const auto& v : x_z) {
    if (opt.proposal == Proposal::uniform)
      out.push_back(uniform_model(g.variable(v)));
    else
      out.push_back(d.fit(v, prefix, opt));
    prefix.push_back(v);
  }
  return out;
}

}  // namespace

RecursionState update(const VarSet& y, const VarSet& s_prime, const VarSet& x, const Admg& g, const TrainingData& d,
                      const VarSet& x_hat, const Admg& g_hat, const std::vector<std::string>& order,
                      const IdGenOptions& opt, std::uint64_t stream) {
  if (s_prime.empty()) throw std::invalid_argument("update needs a non-empty S'");
  const VarSet x_z = set_minus(x, s_prime);
  SamplingNetwork h = conditional_gms(s_prime, x_z, g, d, x_hat, g_hat, order, opt);
  const auto proposals = proposal_models(restrict_order(order, x_z), g, d, opt);
  const VarSet x_hat_next = set_union(x_hat, x_z);
  const VarSet kept = set_union(x_hat_next, s_prime);

  std::optional<TrainingData> next;
  if (d.exact()) {
    DistTable law = d.law().marginal(x_hat);
    for (const auto& m : proposals) law = law * model_factor(*m);
    for (const auto& v : restrict_order(order, s_prime)) law = law * model_factor(*h.node(v).model);
    next.emplace(law.reordered(restrict_order(order, kept)), x_hat_next);
  } else {
    if (d.rows() == 0) throw std::invalid_argument("update needs a non-empty dataset");
    for (const auto& m : proposals) h.set_model(m);
    const auto rows = static_cast<std::size_t>(
        std::max(1.0, std::round(static_cast<double>(d.rows()) * opt.dprime_multiplier)));
    Dataset sample = ancestral_sample(h, {}, rows, mix_seed(opt.seed, stream), opt.workers, &d.dataset());
    sample.set_intervened(x_hat_next);
    next.emplace(std::move(sample));
  }
  return RecursionState{y,
                        set_intersect(x, s_prime),
                        induced_subgraph(g, s_prime),
                        std::move(*next),
                        x_hat_next,
                        remove_incoming(induced_subgraph(g_hat, kept), x_hat_next)};
}

namespace {

struct IdGenRecursion {
  const std::vector<std::string>& order;
  const IdGenOptions& opt;
  TraceLog& trace;
  std::uint64_t updates = 0;

  std::variant<SamplingNetwork, Hedge> run(const RecursionState& s) {
    const VarSet v = s.g.variable_set();

    if (s.x.empty()) {
      trace.record(Step::S1, s.y, s.x);
      return conditional_gms(v, {}, s.g, s.d, s.x_hat, s.g_hat, order, opt);
    }

    VarSet an_y = ancestors(s.g, s.y);
    if (an_y != v) {
      trace.record(Step::S2, s.y, s.x);
      const VarSet keep = set_union(an_y, s.x_hat);
      return run({s.y, set_intersect(s.x, an_y), induced_subgraph(s.g, an_y), s.d.restrict(keep), s.x_hat,
                  induced_subgraph(s.g_hat, keep)});
    }

    VarSet w = set_minus(set_minus(v, s.x), ancestors(remove_incoming(s.g, s.x), s.y));
    if (!w.empty()) {
      trace.record(Step::S3, s.y, s.x);
      return run({s.y, set_union(s.x, w), s.g, s.d, s.x_hat, s.g_hat});
    }

    auto components = c_components(induced_subgraph(s.g, set_minus(v, s.x)));
    if (components.size() > 1) {
      trace.record(Step::S4, s.y, s.x);
      std::vector<SamplingNetwork> parts;
      for (const auto& c : components) {
        auto sub = run({c, set_minus(v, c), s.g, s.d, s.x_hat, s.g_hat});
        if (std::holds_alternative<Hedge>(sub)) return sub;
        parts.push_back(std::move(std::get<SamplingNetwork>(sub)));
      }
      return merge_network(parts);
    }

    const VarSet& c = components.front();
    auto whole = c_components(s.g);
    if (whole.size() == 1) {
      trace.record(Step::S5, s.y, s.x);
      return Hedge{v, c};
    }

    for (const auto& comp : whole) {
      if (comp == c) {
        trace.record(Step::S6, s.y, s.x);
        return conditional_gms(c, s.x, s.g, s.d, s.x_hat, s.g_hat, order, opt);
      }
    }

    for (const auto& s_prime : whole) {
      if (!is_subset(c, s_prime)) continue;
      trace.record(Step::S7, s.y, s.x);
      return run(update(s.y, s_prime, s.x, s.g, s.d, s.x_hat, s.g_hat, order, opt, updates++));
    }

    throw std::logic_error("sampling recursion reached no step");
  }
};

void check_schema(const Admg& g, const TrainingData& d) {
  for (const auto& c : d.columns())
    if (g.contains(c.name) && g.cardinality(c.name) != c.cardinality)
      throw std::invalid_argument("column '" + c.name + "' has cardinality " + std::to_string(c.cardinality) +
                                  " but the graph declares " + std::to_string(g.cardinality(c.name)));
}

}  // namespace

IdGenResult idgen(const VarSet& y, const VarSet& x, const Admg& g, const TrainingData& d, const IdGenOptions& opt) {
  g.require_known(y);
  g.require_known(x);
  if (y.empty()) throw std::invalid_argument("query needs at least one target variable");
  if (!disjoint(y, x)) throw std::invalid_argument("target and intervention sets overlap");
  check_schema(g, d);
  IdGenResult result;
  const auto order = topological_order(g);
  IdGenRecursion rec{order, opt, result.trace};
  result.outcome = rec.run({y, x, g, d, {}, g});
  return result;
}

IdcGenResult idc_gen(const QuerySpec& q, const Admg& g, const TrainingData& d, const IdGenOptions& opt) {
  q.validate(g);
  if (!q.conditional()) throw std::invalid_argument("conditional query needs a non-empty given set");
  IdcGenResult out;
  out.reduction = reduce_conditioning(q.targets, q.do_vars(), q.given_vars(), g);
  const VarSet& x = out.reduction.x;
  const VarSet& z = out.reduction.z;
  auto inner = idgen(set_union(q.targets, z), x, g, d, opt);
  out.trace = inner.trace;
  if (!inner.identified()) {
    out.outcome = inner.hedge();
    return out;
  }
  SamplingNetwork h1 = std::move(inner.network());
  fill_placeholders_uniform(h1, x);

  const auto order = topological_order(g);
  const auto x_order = restrict_order(order, x);
  const auto z_order = restrict_order(order, z);
  const auto y_order = restrict_order(order, q.targets);
  std::vector<std::string> rest = z_order;
  rest.insert(rest.end(), y_order.begin(), y_order.end());
  std::vector<Variable> x_vars, all_vars;
  for (const auto& v : x_order) x_vars.push_back(g.variable(v));
  all_vars = x_vars;
  for (const auto& v : rest) all_vars.push_back(g.variable(v));
  const std::size_t cells = state_count(x_vars);

  // Training set (or law) over x', z', y with x' on a uniform grid.
  std::optional<TrainingData> grid;
  if (d.exact()) {
    DistTable joint = DistTable::constant(all_vars, 0.0);
    std::size_t cell = 0;
    std::vector<int> state(all_vars.size());
    for_each_state(x_vars, [&](std::span<const int> xs) {
      Assignment fixed;
      for (std::size_t i = 0; i < xs.size(); ++i) fixed[x_order[i]] = xs[i];
      DistTable law = network_law(h1, fixed).marginal(to_set(rest)).reordered(rest);
      std::copy(xs.begin(), xs.end(), state.begin());
      std::size_t k = 0;
      for_each_state(law.vars(), [&](std::span<const int> rs) {
        std::copy(rs.begin(), rs.end(), state.begin() + static_cast<std::ptrdiff_t>(xs.size()));
        joint.at(state) = law.values()[k++] / static_cast<double>(cells);
      });
      ++cell;
    });
    grid.emplace(joint, x);
  } else {
    const auto total = static_cast<std::size_t>(
        std::max(1.0, std::round(static_cast<double>(d.rows()) * opt.dprime_multiplier)));
    const std::size_t per_cell = std::max<std::size_t>(1, total / cells);
    Dataset train(all_vars, x);
    train.reserve(per_cell * cells);
    std::uint64_t cell = 0;
    std::vector<int> row(all_vars.size());
    for_each_state(x_vars, [&](std::span<const int> xs) {
      Assignment fixed;
      for (std::size_t i = 0; i < xs.size(); ++i) fixed[x_order[i]] = xs[i];
      Dataset s = ancestral_sample(h1, fixed, per_cell, mix_seed(opt.seed, (1ull << 32) + cell), opt.workers);
      std::vector<int> cols;
      for (const auto& v : rest) cols.push_back(s.require_column(v));
      std::copy(xs.begin(), xs.end(), row.begin());
      for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t k = 0; k < cols.size(); ++k) row[xs.size() + k] = s.value(r, cols[k]);
        train.add_row(row);
      }
      ++cell;
    });
    grid.emplace(std::move(train));
  }

  SamplingNetwork h2(order);
  for (const auto& v : set_union(x, z)) h2.add_placeholder(g.variable(v));
  std::vector<std::string> context = x_order;
  context.insert(context.end(), z_order.begin(), z_order.end());
  for (const auto& v : y_order) {
    h2.add_model(grid->fit(v, context, opt));
    context.push_back(v);
  }
  out.outcome = std::move(h2);
  return out;
}

QueryRun run_query(const QuerySpec& q, const Admg& g, const TrainingData& d, std::size_t n,
                   const IdGenOptions& opt) {
  q.validate(g);
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  QueryRun run;
  Assignment fixed = q.intervention;
  SamplingNetwork h;
  if (q.conditional()) {
    auto r = idc_gen(q, g, d, opt);
    run.trace = r.trace;
    if (!r.identified()) {
      run.outcome = r.hedge();
      return run;
    }
    h = r.network();
    fixed.insert(q.given.begin(), q.given.end());
  } else {
    auto r = idgen(q.targets, q.do_vars(), g, d, opt);
    run.trace = r.trace;
    if (!r.identified()) {
      run.outcome = r.hedge();
      return run;
    }
    h = std::move(r.network());
    fill_placeholders_uniform(h, q.do_vars());
  }
  run.samples = project_targets(ancestral_sample(h, fixed, n, mix_seed(opt.seed, 1ull << 40), opt.workers),
                                q.targets);
  run.outcome = std::move(h);
  return run;
}

}  // namespace cgen
