#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cgen/admg.hpp"
#include "cgen/dataset.hpp"
#include "cgen/identify.hpp"
#include "cgen/models.hpp"
#include "cgen/query.hpp"
#include "cgen/sampling_network.hpp"

namespace cgen {

/// How step 7 draws the values of the newly intervened variables.
enum class Proposal { uniform, marginal };

Proposal parse_proposal(const std::string& s);
std::string to_string(Proposal p);

struct IdGenOptions {
  std::uint64_t seed = 0;
  Proposal proposal = Proposal::uniform;
  /// |D'| = |D| * dprime_multiplier at every step-7 regeneration.
  double dprime_multiplier = 1.0;
  int workers = 0;
  double alpha = 1.0;
};

/// What the recursion trains on: a sample table (models are fitted CPTs) or
/// an exact law over the same columns (models are exact conditionals and
/// step 7 computes the regenerated law in closed form).
class TrainingData {
 public:
  explicit TrainingData(Dataset d);
  explicit TrainingData(DistTable law, VarSet intervened = {});

  bool exact() const { return std::holds_alternative<DistTable>(data_); }
  const Dataset& dataset() const { return std::get<Dataset>(data_); }
  const DistTable& law() const { return std::get<DistTable>(data_); }

  std::vector<Variable> columns() const;
  VarSet column_set() const;
  bool has(const std::string& v) const;
  const VarSet& intervened() const;
  /// Sample count; 0 for an exact law.
  std::size_t rows() const;

  TrainingData restrict(const VarSet& keep) const;
  ModelPtr fit(const std::string& target, const std::vector<std::string>& context, const IdGenOptions& opt) const;

 private:
  std::variant<Dataset, DistTable> data_;
  VarSet law_intervened_;
};

/// Parameter tuple of one recursion level.
struct RecursionState {
  VarSet y;
  VarSet x;
  Admg g;
  TrainingData d;
  VarSet x_hat;
  Admg g_hat;
};

/// Placeholders for x ∪ x_hat, then one model per member of y in `order`
/// (restricted to g_hat) with every earlier g_hat variable as context.
SamplingNetwork conditional_gms(const VarSet& y, const VarSet& x, const Admg& g, const TrainingData& d,
                                const VarSet& x_hat, const Admg& g_hat, const std::vector<std::string>& order,
                                const IdGenOptions& opt);

/// Step-7 regeneration: samples S' under do(X_Z) with X_Z = x ∖ s_prime drawn
/// from the proposal and x_hat carried over from d, and returns the state the
/// recursion continues with. `stream` separates the randomness of successive
/// calls.
RecursionState update(const VarSet& y, const VarSet& s_prime, const VarSet& x, const Admg& g, const TrainingData& d,
                      const VarSet& x_hat, const Admg& g_hat, const std::vector<std::string>& order,
                      const IdGenOptions& opt, std::uint64_t stream = 0);

struct IdGenResult {
  std::variant<SamplingNetwork, Hedge> outcome;
  TraceLog trace;

  bool identified() const { return std::holds_alternative<SamplingNetwork>(outcome); }
  const SamplingNetwork& network() const { return std::get<SamplingNetwork>(outcome); }
  SamplingNetwork& network() { return std::get<SamplingNetwork>(outcome); }
  const Hedge& hedge() const { return std::get<Hedge>(outcome); }
};

/// Compiles P_x(y) into a sampling network. Placeholders of the result are
/// x plus any variables added by step 3.
IdGenResult idgen(const VarSet& y, const VarSet& x, const Admg& g, const TrainingData& d,
                  const IdGenOptions& opt = {});

struct IdcGenResult {
  std::variant<SamplingNetwork, Hedge> outcome;
  Rule2Reduction reduction;
  TraceLog trace;

  bool identified() const { return std::holds_alternative<SamplingNetwork>(outcome); }
  const SamplingNetwork& network() const { return std::get<SamplingNetwork>(outcome); }
  const Hedge& hedge() const { return std::get<Hedge>(outcome); }
};

/// Conditional query P_x(y | z). The returned network has placeholders for
/// the reduced intervention and conditioning sets and a model chain over y
/// trained on samples drawn across a uniform grid of intervention values.
IdcGenResult idc_gen(const QuerySpec& q, const Admg& g, const TrainingData& d, const IdGenOptions& opt = {});

struct QueryRun {
  std::variant<SamplingNetwork, Hedge> outcome;
  TraceLog trace;
  Dataset samples;

  bool identified() const { return std::holds_alternative<SamplingNetwork>(outcome); }
  const SamplingNetwork& network() const { return std::get<SamplingNetwork>(outcome); }
  const Hedge& hedge() const { return std::get<Hedge>(outcome); }
};

/// Builds the network for `q` (idgen or idc_gen), fills step-3 placeholders
/// with uniform samplers and draws `n` rows of the targets.
QueryRun run_query(const QuerySpec& q, const Admg& g, const TrainingData& d, std::size_t n,
                   const IdGenOptions& opt = {});

}  // namespace cgen
