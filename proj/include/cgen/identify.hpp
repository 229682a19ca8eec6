#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cgen/admg.hpp"
#include "cgen/estimand.hpp"

namespace cgen {

/// Witness of non-identifiability: the graph's variables at the failing
/// recursion level and the single c-component left after removing X.
struct Hedge {
  VarSet f;
  VarSet f_prime;

  std::string to_string() const;
};

enum class Step { S1 = 1, S2, S3, S4, S5, S6, S7 };

struct TraceEntry {
  Step step;
  VarSet y;
  VarSet x;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Steps entered by the identification recursion, depth first.
struct TraceLog {
  std::vector<TraceEntry> entries;

  void record(Step s, const VarSet& y, const VarSet& x) { entries.push_back({s, y, x}); }
  std::vector<int> steps() const;
  /// "[3, 7, 2, 6]"
  std::string compact() const;
  /// One line per entry with the (Y, X) sets.
  std::string detailed() const;

  friend bool operator==(const TraceLog&, const TraceLog&) = default;
};

struct IdResult {
  std::variant<EstimandPtr, Hedge> outcome;
  TraceLog trace;

  bool identified() const { return std::holds_alternative<EstimandPtr>(outcome); }
  const EstimandPtr& estimand() const { return std::get<EstimandPtr>(outcome); }
  const Hedge& hedge() const { return std::get<Hedge>(outcome); }
};

/// Symbolic identification of P_x(y). Throws std::invalid_argument when y is
/// empty or overlaps x.
IdResult id(const VarSet& y, const VarSet& x, const Admg& g);

/// Result of pushing conditioning variables into the intervention set with
/// do-calculus rule 2.
struct Rule2Reduction {
  VarSet x;
  VarSet z;
  std::vector<std::string> moved;
};

/// Repeatedly moves the first (declaration order) α ∈ z with
/// (y ⟂ α | x, z∖{α}) in G with incoming edges of x and outgoing edges of α cut.
Rule2Reduction reduce_conditioning(const VarSet& y, const VarSet& x, const VarSet& z, const Admg& g);

struct IdcResult {
  IdResult inner;
  Rule2Reduction reduction;

  bool identified() const { return inner.identified(); }
  const EstimandPtr& estimand() const { return inner.estimand(); }
};

/// Identification of P_x(y | z). The estimand is P'/Σ_y P' with
/// P' = id(y ∪ z', x'); when z' is empty it is id's estimand itself.
IdcResult idc(const VarSet& y, const VarSet& x, const VarSet& z, const Admg& g);

}  // namespace cgen
