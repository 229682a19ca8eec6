#include "cgen/admg.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>

namespace cgen {

std::string format_set(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ", ";
    out += v;
    first = false;
  }
  return out + "}";
}

int Admg::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<int>(i);
  return -1;
}

int Admg::index_of(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw GraphError("unknown variable '" + name + "'");
  return i;
}

void Admg::add_variable(const std::string& name, int cardinality) {
  if (name.empty()) throw GraphError("empty variable name");
  if (find(name) >= 0) throw GraphError("duplicate variable '" + name + "'");
  if (cardinality < 2) throw GraphError("variable '" + name + "' needs cardinality >= 2");
  vars_.push_back({name, cardinality});
  children_.emplace_back();
  parents_.emplace_back();
  spouses_.emplace_back();
}

bool Admg::reaches(int from, int to) const {
  std::vector<char> seen(vars_.size(), 0);
  std::vector<int> stack{from};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = 1;
    for (int c : children_[v]) stack.push_back(c);
  }
  return false;
}

static void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void Admg::add_edge(const std::string& from, const std::string& to) {
  int a = index_of(from);
  int b = index_of(to);
  if (a == b) throw GraphError("self-loop on '" + from + "'");
  if (reaches(b, a)) throw GraphError("edge " + from + " -> " + to + " creates a directed cycle");
  insert_sorted(children_[a], b);
  insert_sorted(parents_[b], a);
}

void Admg::add_bidirected(const std::string& a, const std::string& b) {
  int i = index_of(a);
  int j = index_of(b);
  if (i == j) throw GraphError("bidirected self-loop on '" + a + "'");
  insert_sorted(spouses_[i], j);
  insert_sorted(spouses_[j], i);
}

VarSet Admg::variable_set() const {
  VarSet out;
  for (const auto& v : vars_) out.insert(v.name);
  return out;
}

std::vector<std::string> Admg::parents(const std::string& name) const {
  std::vector<std::string> out;
  for (int p : parents_[index_of(name)]) out.push_back(vars_[p].name);
  return out;
}

std::vector<std::string> Admg::children(const std::string& name) const {
  std::vector<std::string> out;
  for (int c : children_[index_of(name)]) out.push_back(vars_[c].name);
  return out;
}

std::vector<std::string> Admg::spouses(const std::string& name) const {
  std::vector<std::string> out;
  for (int s : spouses_[index_of(name)]) out.push_back(vars_[s].name);
  return out;
}

bool Admg::has_edge(const std::string& from, const std::string& to) const {
  const auto& c = children_[index_of(from)];
  return std::binary_search(c.begin(), c.end(), index_of(to));
}

bool Admg::has_bidirected(const std::string& a, const std::string& b) const {
  const auto& s = spouses_[index_of(a)];
  return std::binary_search(s.begin(), s.end(), index_of(b));
}

std::vector<std::pair<std::string, std::string>> Admg::directed_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (int c : children_[i]) out.emplace_back(vars_[i].name, vars_[c].name);
  return out;
}

std::vector<std::pair<std::string, std::string>> Admg::bidirected_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (int s : spouses_[i])
      if (s > static_cast<int>(i)) out.emplace_back(vars_[i].name, vars_[s].name);
  return out;
}

std::vector<std::string> Admg::ordered(const VarSet& s) const {
  require_known(s);
  std::vector<std::string> out;
  for (const auto& v : vars_)
    if (s.count(v.name)) out.push_back(v.name);
  return out;
}

std::vector<Variable> Admg::variables_of(const VarSet& s) const {
  std::vector<Variable> out;
  for (const auto& name : ordered(s)) out.push_back(variable(name));
  return out;
}

void Admg::require_known(const VarSet& s) const {
  for (const auto& v : s)
    if (find(v) < 0) throw GraphError("unknown variable '" + v + "'");
}

VarSet ancestors(const Admg& g, const VarSet& targets) {
  g.require_known(targets);
  VarSet out;
  std::vector<std::string> stack(targets.begin(), targets.end());
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    if (!out.insert(v).second) continue;
    for (auto& p : g.parents(v)) stack.push_back(p);
  }
  return out;
}

std::vector<VarSet> c_components(const Admg& g) {
  std::vector<VarSet> out;
  VarSet assigned;
  for (const auto& v : g.variables()) {
    if (assigned.count(v.name)) continue;
    VarSet comp;
    std::vector<std::string> stack{v.name};
    while (!stack.empty()) {
      std::string u = stack.back();
      stack.pop_back();
      if (!comp.insert(u).second) continue;
      for (auto& s : g.spouses(u)) stack.push_back(s);
    }
    assigned.insert(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

// Rebuilds a graph over `keep` (declaration order preserved), admitting only
// the edges accepted by the two predicates.
Admg rebuild(const Admg& g, const VarSet& keep,
             const std::function<bool(const std::string&, const std::string&)>& keep_directed,
             const std::function<bool(const std::string&, const std::string&)>& keep_bidirected) {
  Admg out;
  for (const auto& v : g.variables())
    if (keep.count(v.name)) out.add_variable(v.name, v.cardinality);
  for (const auto& [a, b] : g.directed_edges())
    if (keep.count(a) && keep.count(b) && keep_directed(a, b)) out.add_edge(a, b);
  for (const auto& [a, b] : g.bidirected_edges())
    if (keep.count(a) && keep.count(b) && keep_bidirected(a, b)) out.add_bidirected(a, b);
  return out;
}

}  // namespace

Admg remove_incoming(const Admg& g, const VarSet& x) {
  g.require_known(x);
  return rebuild(
      g, g.variable_set(), [&](const std::string&, const std::string& to) { return !x.count(to); },
      [&](const std::string& a, const std::string& b) { return !x.count(a) && !x.count(b); });
}

Admg remove_outgoing(const Admg& g, const VarSet& x) {
  g.require_known(x);
  return rebuild(
      g, g.variable_set(), [&](const std::string& from, const std::string&) { return !x.count(from); },
      [](const std::string&, const std::string&) { return true; });
}

Admg induced_subgraph(const Admg& g, const VarSet& keep) {
  g.require_known(keep);
  auto all = [](const std::string&, const std::string&) { return true; };
  return rebuild(g, keep, all, all);
}

std::vector<std::string> topological_order(const Admg& g) {
  const auto& vars = g.variables();
  std::vector<int> indegree(vars.size(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i)
    indegree[i] = static_cast<int>(g.parents(vars[i].name).size());
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (indegree[i] == 0) ready.push(static_cast<int>(i));
  std::vector<std::string> out;
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    out.push_back(vars[v].name);
    for (const auto& c : g.children(vars[v].name))
      if (--indegree[g.index_of(c)] == 0) ready.push(g.index_of(c));
  }
  return out;
}

bool d_separated(const Admg& g, const VarSet& a, const VarSet& b, const VarSet& given) {
  g.require_known(a);
  g.require_known(b);
  g.require_known(given);
  if (!disjoint(a, b) || !disjoint(a, given) || !disjoint(b, given))
    throw std::invalid_argument("d_separated: argument sets must be pairwise disjoint");

  // Latent expansion: observed nodes keep their index, each bidirected edge
  // adds one parentless node pointing at both endpoints.
  const std::size_t n_obs = g.size();
  const auto bidirected = g.bidirected_edges();
  const std::size_t n = n_obs + bidirected.size();
  std::vector<std::vector<int>> parents(n), children(n);
  for (const auto& [from, to] : g.directed_edges()) {
    children[g.index_of(from)].push_back(g.index_of(to));
    parents[g.index_of(to)].push_back(g.index_of(from));
  }
  for (std::size_t k = 0; k < bidirected.size(); ++k) {
    int u = static_cast<int>(n_obs + k);
    for (int end : {g.index_of(bidirected[k].first), g.index_of(bidirected[k].second)}) {
      children[u].push_back(end);
      parents[end].push_back(u);
    }
  }

  std::vector<char> observed(n, 0);
  for (const auto& z : given) observed[g.index_of(z)] = 1;

  // Nodes that are in `given` or have a descendant in it: colliders there are open.
  std::vector<char> has_observed_descendant(n, 0);
  {
    std::vector<int> stack;
    for (const auto& z : given) stack.push_back(g.index_of(z));
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (has_observed_descendant[v]) continue;
      has_observed_descendant[v] = 1;
      for (int p : parents[v]) stack.push_back(p);
    }
  }

  // Reachability over (node, direction) states; `up` means arrived from a child.
  std::vector<char> visited_up(n, 0), visited_down(n, 0);
  std::vector<std::pair<int, bool>> frontier;
  for (const auto& s : a) frontier.emplace_back(g.index_of(s), true);
  std::vector<char> target(n, 0);
  for (const auto& t : b) target[g.index_of(t)] = 1;

  while (!frontier.empty()) {
    auto [v, up] = frontier.back();
    frontier.pop_back();
    auto& visited = up ? visited_up : visited_down;
    if (visited[v]) continue;
    visited[v] = 1;
    if (!observed[v] && target[v]) return false;
    if (up) {
      if (observed[v]) continue;
      for (int p : parents[v]) frontier.emplace_back(p, true);
      for (int c : children[v]) frontier.emplace_back(c, false);
    } else {
      if (!observed[v])
        for (int c : children[v]) frontier.emplace_back(c, false);
      if (has_observed_descendant[v])
        for (int p : parents[v]) frontier.emplace_back(p, true);
    }
  }
  return true;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

bool parse_graph_line(Admg& g, const std::string& line, int line_number) {
  auto fail = [&](const std::string& what) -> bool {
    throw GraphError("line " + std::to_string(line_number) + ": " + what);
  };
  auto tok = tokenize(strip_comment(line));
  if (tok.empty()) return true;
  try {
    if (tok[0] == "var") {
      if (tok.size() != 3) return fail("expected 'var NAME CARDINALITY'");
      std::size_t used = 0;
      int card = std::stoi(tok[2], &used);
      if (used != tok[2].size()) return fail("bad cardinality '" + tok[2] + "'");
      g.add_variable(tok[1], card);
      return true;
    }
    if (tok[0] == "edge") {
      if (tok.size() != 4 || tok[2] != "->") return fail("expected 'edge A -> B'");
      g.add_edge(tok[1], tok[3]);
      return true;
    }
    if (tok[0] == "confound") {
      if (tok.size() != 4 || tok[2] != "<->") return fail("expected 'confound A <-> B'");
      g.add_bidirected(tok[1], tok[3]);
      return true;
    }
  } catch (const GraphError& e) {
    std::string msg = e.what();
    if (msg.rfind("line ", 0) == 0) throw;
    fail(msg);
  } catch (const std::logic_error&) {
    fail("bad number '" + tok[2] + "'");
  }
  return false;
}

Admg parse_graph(std::istream& in) {
  Admg g;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!parse_graph_line(g, line, line_number))
      throw GraphError("line " + std::to_string(line_number) + ": unknown keyword '" +
                       tokenize(line).front() + "'");
  }
  return g;
}

Admg parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

Admg load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

void write_graph(std::ostream& out, const Admg& g) {
  for (const auto& v : g.variables()) out << "var " << v.name << ' ' << v.cardinality << '\n';
  for (const auto& [a, b] : g.directed_edges()) out << "edge " << a << " -> " << b << '\n';
  for (const auto& [a, b] : g.bidirected_edges()) out << "confound " << a << " <-> " << b << '\n';
}

}  // namespace cgen
