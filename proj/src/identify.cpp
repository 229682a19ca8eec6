#include "cgen/identify.hpp"

#include <sstream>

namespace cgen {

std::string Hedge::to_string() const {
  return "hedge F=" + format_set(f) + " F'=" + format_set(f_prime);
}

std::vector<int> TraceLog::steps() const {
  std::vector<int> out;
  for (const auto& e : entries) out.push_back(static_cast<int>(e.step));
  return out;
}

std::string TraceLog::compact() const {
  std::string out = "[";
  for (std::size_t i = 0; i < entries.size(); ++i)
    out += (i ? ", " : "") + std::to_string(static_cast<int>(entries[i].step));
  return out + "]";
}

std::string TraceLog::detailed() const {
  std::ostringstream out;
  for (const auto& e : entries)
    out << "S" << static_cast<int>(e.step) << "  Y=" << format_set(e.y) << "  X=" << format_set(e.x) << '\n';
  return out.str();
}

namespace {

struct IdRecursion {
  const std::vector<std::string>& root_order;
  TraceLog& trace;

  // Root topological order restricted to the variables of g.
  std::vector<std::string> order_of(const Admg& g) const {
    std::vector<std::string> out;
    for (const auto& v : root_order)
      if (g.contains(v)) out.push_back(v);
    return out;
  }

  std::vector<std::string> ordered(const VarSet& s) const {
    std::vector<std::string> out;
    for (const auto& v : root_order)
      if (s.count(v)) out.push_back(v);
    return out;
  }

  std::variant<EstimandPtr, Hedge> run(const VarSet& y, const VarSet& x, const DistRef& p, const Admg& g) {
    const VarSet v = g.variable_set();

    if (x.empty()) {
      trace.record(Step::S1, y, x);
      return make_term(ordered(y), {}, p);
    }

    VarSet an_y = ancestors(g, y);
    if (an_y != v) {
      trace.record(Step::S2, y, x);
      return run(y, set_intersect(x, an_y), p, induced_subgraph(g, an_y));
    }

    VarSet w = set_minus(set_minus(v, x), ancestors(remove_incoming(g, x), y));
    if (!w.empty()) {
      trace.record(Step::S3, y, x);
      return run(y, set_union(x, w), p, g);
    }

    auto components = c_components(induced_subgraph(g, set_minus(v, x)));
    if (components.size() > 1) {
      trace.record(Step::S4, y, x);
      std::vector<EstimandPtr> factors;
      for (const auto& s : components) {
        auto sub = run(s, set_minus(v, s), p, g);
        if (std::holds_alternative<Hedge>(sub)) return sub;
        factors.push_back(std::get<EstimandPtr>(sub));
      }
      return make_sum(ordered(set_minus(v, set_union(y, x))), make_product(std::move(factors)));
    }

    const VarSet& s = components.front();
    auto whole = c_components(g);
    if (whole.size() == 1) {
      trace.record(Step::S5, y, x);
      return Hedge{v, s};
    }

    for (const auto& c : whole) {
      if (c == s) {
        trace.record(Step::S6, y, x);
        std::vector<EstimandPtr> factors;
        std::vector<std::string> prefix;
        for (const auto& vi : order_of(g)) {
          if (s.count(vi)) factors.push_back(make_term({vi}, prefix, p));
          prefix.push_back(vi);
        }
        return make_sum(ordered(set_minus(s, y)), make_product(std::move(factors)));
      }
    }

    for (const auto& s_prime : whole) {
      if (!is_subset(s, s_prime)) continue;
      trace.record(Step::S7, y, x);
      // P'(s') = Π_{Vi ∈ S'} P(vi | prefix ∩ S', prefix ∖ S').
      std::vector<EstimandPtr> factors;
      std::vector<std::string> inside, outside;
      for (const auto& vi : order_of(g)) {
        if (s_prime.count(vi)) {
          std::vector<std::string> context = inside;
          context.insert(context.end(), outside.begin(), outside.end());
          factors.push_back(make_term({vi}, context, p));
          inside.push_back(vi);
        } else {
          outside.push_back(vi);
        }
      }
      DistRef next{make_product(std::move(factors)), s_prime};
      return run(y, set_intersect(x, s_prime), next, induced_subgraph(g, s_prime));
    }

    throw std::logic_error("identification recursion reached no step");
  }
};

void check_query(const VarSet& y, const VarSet& x, const Admg& g) {
  g.require_known(y);
  g.require_known(x);
  if (y.empty()) throw std::invalid_argument("query needs at least one target variable");
  if (!disjoint(y, x)) throw std::invalid_argument("target and intervention sets overlap");
}

}  // namespace

IdResult id(const VarSet& y, const VarSet& x, const Admg& g) {
  check_query(y, x, g);
  IdResult result;
  auto order = topological_order(g);
  IdRecursion rec{order, result.trace};
  result.outcome = rec.run(y, x, DistRef{nullptr, g.variable_set()}, g);
  return result;
}

Rule2Reduction reduce_conditioning(const VarSet& y, const VarSet& x, const VarSet& z, const Admg& g) {
  Rule2Reduction r{x, z, {}};
  bool moved = true;
  while (moved) {
    moved = false;
    for (const auto& alpha : g.ordered(r.z)) {
      VarSet rest = r.z;
      rest.erase(alpha);
      Admg cut = remove_outgoing(remove_incoming(g, r.x), {alpha});
      if (d_separated(cut, y, {alpha}, set_union(r.x, rest))) {
        r.x.insert(alpha);
        r.z = rest;
        r.moved.push_back(alpha);
        moved = true;
        break;
      }
    }
  }
  return r;
}

IdcResult idc(const VarSet& y, const VarSet& x, const VarSet& z, const Admg& g) {
  check_query(y, x, g);
  g.require_known(z);
  if (!disjoint(y, z) || !disjoint(x, z))
    throw std::invalid_argument("conditioning set overlaps target or intervention set");
  IdcResult out;
  out.reduction = reduce_conditioning(y, x, z, g);
  out.inner = id(set_union(y, out.reduction.z), out.reduction.x, g);
  if (out.inner.identified() && !out.reduction.z.empty()) {
    const EstimandPtr& joint = out.inner.estimand();
    out.inner.outcome = make_quotient(joint, make_sum(g.ordered(y), joint));
  }
  return out;
}

}  // namespace cgen
