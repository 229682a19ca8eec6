#include "cgen/estimand.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace cgen {

EstimandPtr make_term(std::vector<std::string> targets, std::vector<std::string> context, DistRef dist) {
  if (targets.empty()) throw std::invalid_argument("term needs at least one target");
  return std::make_shared<Estimand>(CondTerm{std::move(targets), std::move(context), std::move(dist)});
}

EstimandPtr make_sum(std::vector<std::string> vars, EstimandPtr child) {
  if (vars.empty()) return child;
  return std::make_shared<Estimand>(SumOver{std::move(vars), std::move(child)});
}

EstimandPtr make_product(std::vector<EstimandPtr> factors) {
  if (factors.empty()) throw std::invalid_argument("empty product");
  if (factors.size() == 1) return factors.front();
  return std::make_shared<Estimand>(Product{std::move(factors)});
}

EstimandPtr make_quotient(EstimandPtr numerator, EstimandPtr denominator) {
  return std::make_shared<Estimand>(Quotient{std::move(numerator), std::move(denominator)});
}

VarSet free_variables(const Estimand& e) {
  return std::visit(
      [](const auto& n) -> VarSet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondTerm>) {
          VarSet out = set_union(to_set(n.targets), to_set(n.context));
          if (!n.dist.observational())
            out = set_union(out, set_minus(free_variables(*n.dist.nested), n.dist.domain));
          return out;
        } else if constexpr (std::is_same_v<T, SumOver>) {
          return set_minus(free_variables(*n.child), to_set(n.vars));
        } else if constexpr (std::is_same_v<T, Product>) {
          VarSet out;
          for (const auto& f : n.factors) out = set_union(out, free_variables(*f));
          return out;
        } else {
          return set_union(free_variables(*n.numerator), free_variables(*n.denominator));
        }
      },
      e.node());
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const DistTable& obs) : obs_(obs) {}

  DistTable eval(const Estimand& e) {
    auto it = cache_.find(&e);
    if (it != cache_.end()) return it->second;
    DistTable out = std::visit([this](const auto& n) { return eval_node(n); }, e.node());
    cache_.emplace(&e, out);
    return out;
  }

 private:
  DistTable eval_node(const CondTerm& t) {
    DistTable source = obs_;
    VarSet domain = obs_.var_set();
    if (!t.dist.observational()) {
      source = eval(*t.dist.nested);
      domain = t.dist.domain;
    }
    for (const auto& v : t.targets)
      if (!source.has(v)) throw EvaluationError("term variable '" + v + "' not covered by its distribution");
    for (const auto& v : t.context)
      if (!source.has(v)) throw EvaluationError("term variable '" + v + "' not covered by its distribution");
    VarSet targets = to_set(t.targets);
    VarSet keep = set_union(set_union(targets, to_set(t.context)), set_minus(source.var_set(), domain));
    DistTable joint = source.marginal(keep);
    if (t.context.empty() && set_minus(source.var_set(), domain).empty()) return joint;
    return joint.divide(joint.sum_out(targets));
  }

  DistTable eval_node(const SumOver& s) {
    DistTable child = eval(*s.child);
    for (const auto& v : s.vars)
      if (!child.has(v)) throw EvaluationError("summation variable '" + v + "' is not free in its body");
    return child.sum_out(to_set(s.vars));
  }

  DistTable eval_node(const Product& p) {
    DistTable out = DistTable::scalar(1.0);
    for (const auto& f : p.factors) out = out * eval(*f);
    return out;
  }

  DistTable eval_node(const Quotient& q) {
    DistTable num = eval(*q.numerator);
    DistTable den = eval(*q.denominator);
    if (!is_subset(den.var_set(), num.var_set())) num = num * DistTable::constant(den.vars(), 1.0);
    return num.divide(den);
  }

  const DistTable& obs_;
  std::map<const Estimand*, DistTable> cache_;
};

}  // namespace

DistTable evaluate_estimand(const Estimand& e, const DistTable& obs) {
  for (double v : obs.values())
    if (!(v > 0)) throw EvaluationError("observational table must be strictly positive");
  DistTable out = Evaluator(obs).eval(e);
  std::vector<std::string> order;
  for (const auto& v : obs.vars())
    if (out.has(v.name)) order.push_back(v.name);
  if (order.size() != out.vars().size()) throw EvaluationError("estimand references unknown variables");
  return out.reordered(order);
}

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

class Printer {
 public:
  explicit Printer(const Estimand& root) {
    for (const auto& v : free_variables(root)) bind(v, lower(v));
  }

  std::string print(const Estimand& e) {
    return std::visit([this](const auto& n) { return print_node(n); }, e.node());
  }

 private:
  using Scope = std::map<std::string, std::string>;

  void bind(const std::string& var, const std::string& display) {
    scope_[var] = display;
    used_[display]++;
  }

  std::string name(const std::string& var) const {
    auto it = scope_.find(var);
    return it == scope_.end() ? lower(var) : it->second;
  }

  std::string join_names(const std::vector<std::string>& vars) const {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? "," : "") + name(vars[i]);
    return out;
  }

  // Prints `body` under a summation over `vars`, priming indices whose plain
  // name is already bound in an enclosing scope.
  template <typename Body>
  std::string with_sum(const std::vector<std::string>& vars, Body&& body) {
    if (vars.empty()) return body();
    Scope saved_scope = scope_;
    auto saved_used = used_;
    for (const auto& v : vars) {
      std::string display = lower(v);
      while (used_[display] > 0) display += "'";
      bind(v, display);
    }
    std::string head = "Σ_{" + join_names(vars) + "} ";
    std::string out = head + body();
    scope_ = std::move(saved_scope);
    used_ = std::move(saved_used);
    return out;
  }

  std::string print_node(const CondTerm& t) {
    if (t.dist.observational()) {
      std::string out = "P(" + join_names(t.targets);
      if (!t.context.empty()) out += "|" + join_names(t.context);
      return out + ")";
    }
    // Terms of an intermediate distribution are expanded in place.
    const Estimand& nested = *t.dist.nested;
    VarSet nested_vars = set_intersect(free_variables(nested), t.dist.domain);
    auto ordered_minus = [&](const VarSet& keep) {
      std::vector<std::string> out;
      for (const auto& v : nested_vars)
        if (!keep.count(v)) out.push_back(v);
      return out;
    };
    VarSet targets = to_set(t.targets);
    VarSet context = to_set(t.context);
    if (t.context.empty()) return with_sum(ordered_minus(targets), [&] { return print(nested); });
    std::string num = with_sum(ordered_minus(set_union(targets, context)), [&] { return print(nested); });
    std::string den = with_sum(ordered_minus(context), [&] { return print(nested); });
    return "[" + num + "] / [" + den + "]";
  }

  std::string print_node(const SumOver& s) {
    return with_sum(s.vars, [&] { return print(*s.child); });
  }

  static bool is_plain_term(const Estimand& e) {
    auto* t = std::get_if<CondTerm>(&e.node());
    return t != nullptr && t->dist.observational();
  }

  std::string print_node(const Product& p) {
    bool plain = std::all_of(p.factors.begin(), p.factors.end(),
                             [](const EstimandPtr& f) { return is_plain_term(*f); });
    std::string sep = plain ? " " : " · ";
    std::string out;
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
      std::string part = print(*p.factors[i]);
      bool needs_brackets = i + 1 < p.factors.size() && !part.empty() && part.rfind("Σ", 0) == 0;
      if (needs_brackets) part = "[" + part + "]";
      out += (i ? sep : "") + part;
    }
    return out;
  }

  std::string print_node(const Quotient& q) {
    return "(" + print(*q.numerator) + ") / (" + print(*q.denominator) + ")";
  }

  Scope scope_;
  std::map<std::string, int> used_;
};

}  // namespace

std::string to_string(const Estimand& e) { return Printer(e).print(e); }

}  // namespace cgen
