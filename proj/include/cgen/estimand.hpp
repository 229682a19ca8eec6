#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cgen/dist_table.hpp"
#include "cgen/varset.hpp"

namespace cgen {

class Estimand;
using EstimandPtr = std::shared_ptr<const Estimand>;

/// The distribution a term is read from: the observational P, or an
/// intermediate distribution P' built by an earlier recursion step. A nested
/// P' is a distribution over `domain`; any other free variable of it acts as
/// a fixed parameter.
struct DistRef {
  EstimandPtr nested;
  VarSet domain;

  bool observational() const { return nested == nullptr; }
};

/// P(targets | context) read from `dist`.
struct CondTerm {
  std::vector<std::string> targets;
  std::vector<std::string> context;
  DistRef dist;
};

struct SumOver {
  std::vector<std::string> vars;
  EstimandPtr child;
};

struct Product {
  std::vector<EstimandPtr> factors;
};

struct Quotient {
  EstimandPtr numerator;
  EstimandPtr denominator;
};

/// Immutable expression tree over observational conditionals.
class Estimand {
 public:
  using Node = std::variant<CondTerm, SumOver, Product, Quotient>;

  explicit Estimand(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

EstimandPtr make_term(std::vector<std::string> targets, std::vector<std::string> context, DistRef dist);
/// Returns `child` unchanged when `vars` is empty.
EstimandPtr make_sum(std::vector<std::string> vars, EstimandPtr child);
/// A single factor is returned as is.
EstimandPtr make_product(std::vector<EstimandPtr> factors);
EstimandPtr make_quotient(EstimandPtr numerator, EstimandPtr denominator);

/// Variables the value of `e` depends on.
VarSet free_variables(const Estimand& e);

/// Exact evaluation against an observational table. The result is indexed by
/// the free variables of `e` in the order of `obs`.
DistTable evaluate_estimand(const Estimand& e, const DistTable& obs);

/// Renders the estimand in the usual notation, e.g.
/// `Σ_{s} P(s|x) · Σ_{x'} P(x') P(r|x',s)`. Variables are lower-cased and a
/// summation index that shadows a bound name gets a prime.
std::string to_string(const Estimand& e);

}  // namespace cgen
