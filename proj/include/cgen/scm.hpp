#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cgen/admg.hpp"
#include "cgen/dataset.hpp"
#include "cgen/dist_table.hpp"
#include "cgen/query.hpp"

namespace cgen {

/// Binary latent confounder shared by the two endpoints of a bidirected edge.
struct Latent {
  std::string a;
  std::string b;
  std::vector<double> probs;
};

/// f_v(parents, noise, latents) as a dense table indexed row-major by
/// (parent values in graph parent order, noise value, incident latent values
/// in latent-list order).
struct Mechanism {
  std::vector<double> noise;
  std::vector<int> latents;
  std::vector<int> table;
};

/// Discrete semi-Markovian SCM. One latent per bidirected edge of the graph.
class DiscreteScm {
 public:
  /// Validates every table and checks by enumeration that the observational
  /// joint is strictly positive.
  DiscreteScm(Admg graph, std::vector<Latent> latents, std::vector<Mechanism> mechanisms);

  const Admg& graph() const { return graph_; }
  const std::vector<Latent>& latents() const { return latents_; }
  const Mechanism& mechanism(const std::string& v) const { return mechanisms_[graph_.index_of(v)]; }
  const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }

  /// Exogenous configurations an exact enumeration visits.
  double configurations() const;
  /// Output of v's mechanism; `values` is indexed by declaration index,
  /// `latent_values` by latent index.
  int evaluate(int v, std::span<const int> values, int noise, std::span<const int> latent_values) const;

 private:
  void validate_tables() const;

  Admg graph_;
  std::vector<Latent> latents_;
  std::vector<Mechanism> mechanisms_;
  std::vector<std::vector<int>> parent_index_;
};

inline constexpr double kEnumerationBudget = 1e7;

/// Observed rows only. OpenMP over row blocks, one stream per block.
Dataset sample_observational(const DiscreteScm& m, std::size_t n, std::uint64_t seed, int workers = 0);
/// Single-threaded reference; identical rows.
Dataset sample_observational_reference(const DiscreteScm& m, std::size_t n, std::uint64_t seed);

/// Exact P(V) by enumerating every noise and latent configuration.
DistTable exact_joint(const DiscreteScm& m);
/// Exact P_do(V): mechanisms of the do-variables replaced by constants.
DistTable exact_interventional(const DiscreteScm& m, const Assignment& intervention);

/// Ground truth of a query: P_do(targets | given) over the targets in
/// declaration order.
DistTable exact_query(const DiscreteScm& m, const QuerySpec& q);

/// Noisy-copy mechanisms: with probability `follow` the output is
/// (sum of parents and incident latents + offset) mod cardinality, otherwise
/// uniform over the states. Seeded offsets and latent biases.
DiscreteScm noisy_copy_scm(const Admg& g, std::uint64_t seed, double follow = 0.8);
/// Random signal tables and random (floored) noise weights.
DiscreteScm random_scm(const Admg& g, std::uint64_t seed);

/// Graph lines followed by `noise`, `latent` and `row` lines; see README.
void write_scm(std::ostream& out, const DiscreteScm& m);
DiscreteScm parse_scm(std::istream& in);
DiscreteScm load_scm(const std::string& path);
void save_scm(const std::string& path, const DiscreteScm& m);

struct CatalogQuery {
  QuerySpec query;
  bool identifiable;
};

struct CatalogEntry {
  std::string name;
  DiscreteScm scm;
  std::vector<CatalogQuery> queries;
};

/// Binary noisy-copy SCMs for the reference graphs with their queries.
std::vector<CatalogEntry> catalog();
const CatalogEntry& catalog_entry(const std::vector<CatalogEntry>& entries, const std::string& name);

}  // namespace cgen
