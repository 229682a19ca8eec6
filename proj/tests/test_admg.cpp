#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cgen/admg.hpp"
#include "support.hpp"

using namespace cgen;

namespace {

Admg frontdoor() {
  return parse_graph_string("var X 2\nvar S 2\nvar R 2\nedge X -> S\nedge S -> R\nconfound X <-> R\n");
}

Admg napkin() {
  return parse_graph_string(
      "var W1 2\nvar W2 2\nvar X 2\nvar Y 2\n"
      "edge W1 -> W2\nedge W2 -> X\nedge X -> Y\nconfound W1 <-> X\nconfound W1 <-> Y\n");
}

Admg crossed_chain() {
  return parse_graph_string(
      "var X 2\nvar W1 2\nvar W2 2\nvar Y 2\n"
      "edge X -> W1\nedge W1 -> W2\nedge W2 -> Y\nconfound X <-> W2\nconfound W1 <-> Y\n");
}

Admg backdoor() {
  return parse_graph_string(
      "var A 2\nvar B 2\nvar V 2\nvar I 2\n"
      "edge A -> B\nedge A -> V\nedge B -> V\nedge V -> I\nconfound B <-> I\n");
}

Admg chain() { return parse_graph_string("var A 2\nvar B 2\nvar C 2\nedge A -> B\nedge B -> C\n"); }

}  // namespace

TEST_CASE("parser builds variables and edges") {
  Admg g = parse_graph_string("# comment\nvar X 2\nvar Y 3\n\nedge X -> Y  # trailing\nconfound X <-> Y\n");
  CHECK(g.size() == 2);
  CHECK(g.cardinality("Y") == 3);
  CHECK(g.has_edge("X", "Y"));
  CHECK(g.has_bidirected("Y", "X"));
}

TEST_CASE("parser rejects malformed input with a line number") {
  auto message = [](const std::string& text) {
    try {
      parse_graph_string(text);
    } catch (const GraphError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("var X 2\nvar X 2\n").find("line 2") != std::string::npos);
  CHECK(message("var X 2\nedge X -> Y\n").find("line 2") != std::string::npos);
  CHECK(message("var A 2\nvar B 2\nedge A -> B\nedge B -> A\n").find("line 4") != std::string::npos);
  CHECK(message("var A 1\n").find("line 1") != std::string::npos);
  CHECK(message("var A 2\nedge A -> A\n").find("line 2") != std::string::npos);
  CHECK(message("var A 2\nfoo A\n").find("line 2") != std::string::npos);
  CHECK(message("var A 2\nconfound A <-> A\n").find("line 2") != std::string::npos);
}

TEST_CASE("graph text round trips") {
  Admg g = napkin();
  std::ostringstream out;
  write_graph(out, g);
  Admg back = parse_graph_string(out.str());
  std::ostringstream again;
  write_graph(again, back);
  CHECK(out.str() == again.str());
  CHECK(back.directed_edges() == g.directed_edges());
  CHECK(back.bidirected_edges() == g.bidirected_edges());
}

TEST_CASE("ancestors") {
  CHECK(ancestors(frontdoor(), {"R"}) == VarSet{"X", "S", "R"});
  Admg g = napkin();
  CHECK(ancestors(g, g.variable_set()) == g.variable_set());
  Admg cut = induced_subgraph(g, {"W2", "X", "Y"});
  CHECK(ancestors(cut, {"Y"}) == VarSet{"W2", "X", "Y"});
  CHECK_THROWS_AS(ancestors(g, {"Q"}), std::invalid_argument);
}

TEST_CASE("c-components") {
  Admg g = crossed_chain();
  auto parts = c_components(induced_subgraph(g, {"W1", "W2", "Y"}));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == VarSet{"W1", "Y"});
  CHECK(parts[1] == VarSet{"W2"});

  auto singles = c_components(chain());
  CHECK(singles == std::vector<VarSet>{{"A"}, {"B"}, {"C"}});

  auto napkin_parts = c_components(induced_subgraph(napkin(), {"W2", "X", "Y"}));
  CHECK(napkin_parts == std::vector<VarSet>{{"W2"}, {"X"}, {"Y"}});
}

TEST_CASE("remove_incoming severs parents and confounders") {
  Admg g = remove_incoming(backdoor(), {"V"});
  CHECK(g.parents("V").empty());
  CHECK(g.spouses("V").empty());
  CHECK(g.has_edge("V", "I"));
  CHECK(g.has_bidirected("B", "I"));

  Admg same = remove_incoming(backdoor(), {});
  CHECK(same.directed_edges() == backdoor().directed_edges());

  Admg c = remove_incoming(chain(), {"B"});
  CHECK(c.directed_edges() == std::vector<std::pair<std::string, std::string>>{{"B", "C"}});

  Admg f = remove_incoming(frontdoor(), {"X"});
  CHECK(f.bidirected_edges().empty());
}

TEST_CASE("remove_outgoing") {
  Admg c = remove_outgoing(chain(), {"B"});
  CHECK(c.directed_edges() == std::vector<std::pair<std::string, std::string>>{{"A", "B"}});
  CHECK(remove_outgoing(chain(), {}).directed_edges() == chain().directed_edges());
  Admg f = remove_outgoing(frontdoor(), {"S"});
  CHECK(f.directed_edges() == std::vector<std::pair<std::string, std::string>>{{"X", "S"}});
  CHECK(f.has_bidirected("X", "R"));
}

TEST_CASE("induced_subgraph") {
  Admg g = induced_subgraph(napkin(), {"X", "Y"});
  CHECK(g.size() == 2);
  CHECK(g.has_edge("X", "Y"));
  CHECK(g.bidirected_edges().empty());
  CHECK(induced_subgraph(napkin(), napkin().variable_set()).directed_edges() == napkin().directed_edges());
  CHECK(induced_subgraph(napkin(), {}).empty());
  CHECK_THROWS(induced_subgraph(napkin(), {"nope"}));
}

TEST_CASE("topological order") {
  CHECK(topological_order(frontdoor()) == std::vector<std::string>{"X", "S", "R"});
  CHECK(topological_order(napkin()) == std::vector<std::string>{"W1", "W2", "X", "Y"});
  Admg g = parse_graph_string("var B 2\nvar A 2\n");
  CHECK(topological_order(g) == std::vector<std::string>{"B", "A"});
}

TEST_CASE("d-separation examples") {
  CHECK_FALSE(d_separated(frontdoor(), {"R"}, {"X"}, {"S"}));
  CHECK(d_separated(chain(), {"A"}, {"C"}, {"B"}));
  Admg collider = parse_graph_string("var A 2\nvar B 2\nvar C 2\nedge A -> B\nedge C -> B\n");
  CHECK(d_separated(collider, {"A"}, {"C"}, {}));
  CHECK_FALSE(d_separated(collider, {"A"}, {"C"}, {"B"}));
  CHECK_THROWS_AS(d_separated(chain(), {"A"}, {"A"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(d_separated(chain(), {"A"}, {"C"}, {"A"}), std::invalid_argument);
}

TEST_CASE("the path oracle agrees on the fixed examples") {
  CHECK_FALSE(testing::d_separated_by_paths(frontdoor(), {"R"}, {"X"}, {"S"}));
  CHECK(testing::d_separated_by_paths(chain(), {"A"}, {"C"}, {"B"}));
}

TEST_CASE("graph properties on random graphs") {
  Rng rng = make_stream(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    Admg g = testing::random_admg(rng);
    const VarSet all = g.variable_set();

    auto parts = c_components(g);
    VarSet covered;
    std::size_t total = 0;
    for (const auto& p : parts) {
      total += p.size();
      covered = set_union(covered, p);
    }
    CHECK(total == all.size());
    CHECK(covered == all);

    VarSet x;
    for (const auto& v : all)
      if (uniform01(rng) < 0.4) x.insert(v);
    Admg cut = remove_incoming(g, x);
    for (const auto& v : x) {
      CHECK(cut.parents(v).empty());
      CHECK(cut.spouses(v).empty());
    }

    auto order = topological_order(g);
    CHECK(to_set(order) == all);
    CHECK(order.size() == all.size());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& [from, to] : g.directed_edges()) CHECK(pos[from] < pos[to]);

    // Random disjoint (a, b, z) triples against the brute-force oracle.
    for (int k = 0; k < 5; ++k) {
      VarSet a, b, z;
      for (const auto& v : all) {
        const double u = uniform01(rng);
        if (u < 0.25)
          a.insert(v);
        else if (u < 0.5)
          b.insert(v);
        else if (u < 0.75)
          z.insert(v);
      }
      if (a.empty() || b.empty()) continue;
      const bool fast = d_separated(g, a, b, z);
      CHECK(fast == d_separated(g, b, a, z));
      CHECK(fast == testing::d_separated_by_paths(g, a, b, z));
    }
  }
}
