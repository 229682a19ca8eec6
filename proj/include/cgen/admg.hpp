#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgen/varset.hpp"

namespace cgen {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Variable {
  std::string name;
  int cardinality = 2;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Acyclic directed mixed graph. Directed edges encode causation, bidirected
/// edges encode a latent confounder shared by exactly two variables.
///
/// Variables keep their declaration order; every ordering the engine emits
/// (topological order, c-components, printed sets) breaks ties by it.
class Admg {
 public:
  Admg() = default;

  void add_variable(const std::string& name, int cardinality = 2);
  /// Throws GraphError on unknown endpoints, self-loops and directed cycles.
  void add_edge(const std::string& from, const std::string& to);
  void add_bidirected(const std::string& a, const std::string& b);

  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  bool contains(const std::string& name) const { return find(name) >= 0; }
  int index_of(const std::string& name) const;
  const Variable& variable(const std::string& name) const { return vars_[index_of(name)]; }
  int cardinality(const std::string& name) const { return variable(name).cardinality; }
  VarSet variable_set() const;

  std::vector<std::string> parents(const std::string& name) const;
  std::vector<std::string> children(const std::string& name) const;
  /// Bidirected neighbours, declaration order.
  std::vector<std::string> spouses(const std::string& name) const;

  bool has_edge(const std::string& from, const std::string& to) const;
  bool has_bidirected(const std::string& a, const std::string& b) const;

  /// Directed edges as (from, to) name pairs, sorted by declaration index.
  std::vector<std::pair<std::string, std::string>> directed_edges() const;
  /// Bidirected edges with the earlier-declared endpoint first.
  std::vector<std::pair<std::string, std::string>> bidirected_edges() const;

  /// Members of `s` in declaration order. Throws on unknown names.
  std::vector<std::string> ordered(const VarSet& s) const;
  std::vector<Variable> variables_of(const VarSet& s) const;
  void require_known(const VarSet& s) const;

 private:
  int find(const std::string& name) const;
  bool reaches(int from, int to) const;

  std::vector<Variable> vars_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> spouses_;
};

/// An(targets), reflexive.
VarSet ancestors(const Admg& g, const VarSet& targets);

/// Maximal bidirected-connected sets, ordered by their earliest declared member.
std::vector<VarSet> c_components(const Admg& g);

/// G with incoming directed edges and all bidirected edges of `x` removed.
Admg remove_incoming(const Admg& g, const VarSet& x);

/// G with outgoing directed edges of `x` removed; bidirected edges untouched.
Admg remove_outgoing(const Admg& g, const VarSet& x);

Admg induced_subgraph(const Admg& g, const VarSet& keep);

/// Kahn's algorithm; among ready nodes the earliest declared goes first.
std::vector<std::string> topological_order(const Admg& g);

/// d-separation of `a` and `b` given `given`, computed on the DAG where each
/// bidirected edge becomes an explicit latent parent of its two endpoints.
bool d_separated(const Admg& g, const VarSet& a, const VarSet& b, const VarSet& given);

/// Line format: `var X 2`, `edge X -> Y`, `confound X <-> Y`, `#` comments.
/// Errors carry the offending line number.
Admg parse_graph(std::istream& in);
/// Applies one declaration line to `g`. Returns false when the line's keyword
/// is not a graph keyword so that composite formats can reuse the grammar.
bool parse_graph_line(Admg& g, const std::string& line, int line_number);
Admg parse_graph_string(const std::string& text);
Admg load_graph(const std::string& path);
void write_graph(std::ostream& out, const Admg& g);

}  // namespace cgen
