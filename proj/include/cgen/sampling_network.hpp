#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cgen/dataset.hpp"
#include "cgen/models.hpp"

namespace cgen {

/// A DAG of conditional samplers. Each node holds one variable and either a
/// model or nothing (an input placeholder). Edges are implied by the model
/// contexts. Nodes execute in `order`, the root graph's topological order.
class SamplingNetwork {
 public:
  struct Node {
    Variable var;
    ModelPtr model;  // null for a placeholder

    bool placeholder() const { return model == nullptr; }
  };

  SamplingNetwork() = default;
  explicit SamplingNetwork(std::vector<std::string> order) : order_(std::move(order)) {}

  const std::vector<std::string>& order() const { return order_; }

  /// Adding a placeholder over an existing node is a no-op.
  void add_placeholder(const Variable& v);
  /// Fills a placeholder or creates the node. Throws when the variable
  /// already has a model.
  void add_model(ModelPtr m);
  /// Replaces whatever the node holds.
  void set_model(ModelPtr m);

  bool contains(const std::string& v) const { return nodes_.count(v) > 0; }
  const Node& node(const std::string& v) const;
  const std::map<std::string, Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  /// Node names in execution order.
  std::vector<std::string> variables() const;
  std::vector<Variable> variable_list() const;
  VarSet placeholders() const;
  VarSet modelled() const;
  /// (context variable, consumer) pairs in execution order.
  std::vector<std::pair<std::string, std::string>> edges() const;

  /// Every context variable is a node and the node graph has no cycle.
  bool is_acyclic() const;
  /// Every edge points forward in `order` and every node appears in it.
  bool respects_order() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, Node> nodes_;
};

/// Unifies the parts into one network: a placeholder in one part is replaced
/// by another part's model for the same variable. Two models for the same
/// variable throw std::logic_error.
SamplingNetwork merge_network(const std::vector<SamplingNetwork>& parts);

/// Gives every placeholder outside `keep` a uniform model.
void fill_placeholders_uniform(SamplingNetwork& h, const VarSet& keep);

/// Rows are generated in blocks of this size, each from its own stream.
inline constexpr std::size_t kSampleBlock = 4096;

/// Placeholders take the value in `fixed` if present, otherwise the value of
/// the same column in `source` (row i uses source row i mod rows). Output
/// columns follow execution order; placeholder columns are marked intervened.
Dataset ancestral_sample(const SamplingNetwork& h, const Assignment& fixed, std::size_t n, std::uint64_t seed,
                         int workers = 0, const Dataset* source = nullptr);
/// Single-threaded reference; produces the same rows as ancestral_sample.
Dataset ancestral_sample_reference(const SamplingNetwork& h, const Assignment& fixed, std::size_t n,
                                   std::uint64_t seed, const Dataset* source = nullptr);

/// Exact joint law of the modelled nodes with every placeholder set from
/// `fixed`.
DistTable network_law(const SamplingNetwork& h, const Assignment& fixed);

/// Keeps only the columns in `y`.
Dataset project_targets(const Dataset& d, const VarSet& y);

/// Text manifest: order, then one `node` line per node in execution order
/// followed by one `row` line per CPT context configuration.
void write_manifest(std::ostream& out, const SamplingNetwork& h);
SamplingNetwork read_manifest(std::istream& in);

}  // namespace cgen
