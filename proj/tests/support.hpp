#pragma once

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cgen/admg.hpp"
#include "cgen/dist_table.hpp"
#include "cgen/rng.hpp"

namespace cgen::testing {

struct RandomQuery {
  Admg g;
  VarSet y;
  VarSet x;
};

/// 3 to 6 binary variables declared in a shuffled order, directed edges along
/// a hidden order with probability in [0.3, 0.6], then 0 to 3 bidirected edges.
inline Admg random_admg(Rng& rng) {
  std::uniform_int_distribution<int> size(3, 6);
  const int n = size(rng);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
  std::vector<std::string> declared = names;
  std::shuffle(declared.begin(), declared.end(), rng);
  Admg g;
  for (const auto& v : declared) g.add_variable(v, 2);
  const double density = 0.3 + 0.3 * uniform01(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(rng) < density) g.add_edge(names[i], names[j]);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const int bidirected = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int k = 0; k < bidirected && k < static_cast<int>(pairs.size()); ++k)
    g.add_bidirected(names[pairs[k].first], names[pairs[k].second]);
  return g;
}

/// Non-empty y and possibly empty x, disjoint.
inline RandomQuery random_query(Rng& rng) {
  RandomQuery q{random_admg(rng), {}, {}};
  const auto& vars = q.g.variables();
  while (q.y.empty()) {
    q.y.clear();
    q.x.clear();
    for (const auto& v : vars) {
      const double u = uniform01(rng);
      if (u < 0.3)
        q.y.insert(v.name);
      else if (u < 0.6)
        q.x.insert(v.name);
    }
  }
  return q;
}

/// d-separation by enumerating every simple path of the skeleton of the
/// DAG in which each bidirected edge becomes a latent parent of both
/// endpoints.
inline bool d_separated_by_paths(const Admg& g, const VarSet& a, const VarSet& b, const VarSet& z) {
  std::map<std::string, std::set<std::string>> parents;
  for (const auto& v : g.variables()) parents[v.name];
  for (const auto& [from, to] : g.directed_edges()) parents[to].insert(from);
  int k = 0;
  for (const auto& [u, v] : g.bidirected_edges()) {
    const std::string latent = "#L" + std::to_string(k++);
    parents[latent];
    parents[u].insert(latent);
    parents[v].insert(latent);
  }
  std::map<std::string, std::set<std::string>> neighbours;
  for (const auto& [child, ps] : parents)
    for (const auto& p : ps) {
      neighbours[child].insert(p);
      neighbours[p].insert(child);
    }
  auto descendants_hit_z = [&](const std::string& v) {
    std::vector<std::string> stack{v};
    std::set<std::string> seen{v};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (z.count(cur)) return true;
      for (const auto& [child, ps] : parents)
        if (ps.count(cur) && seen.insert(child).second) stack.push_back(child);
    }
    return false;
  };
  auto active = [&](const std::vector<std::string>& path) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const bool collider = parents[path[i]].count(path[i - 1]) && parents[path[i]].count(path[i + 1]);
      if (collider && !descendants_hit_z(path[i])) return false;
      if (!collider && z.count(path[i])) return false;
    }
    return true;
  };
  std::vector<std::string> path;
  std::set<std::string> on_path;
  std::function<bool(const std::string&)> search = [&](const std::string& v) {
    if (b.count(v)) return active(path);
    for (const auto& w : neighbours[v]) {
      if (on_path.count(w)) continue;
      path.push_back(w);
      on_path.insert(w);
      bool found = search(w);
      path.pop_back();
      on_path.erase(w);
      if (found) return true;
    }
    return false;
  };
  for (const auto& s : a) {
    path = {s};
    on_path = {s};
    if (search(s)) return false;
  }
  return true;
}

/// Worst |p - q| over every assignment of the variables p has beyond q.
inline double worst_over_extras(const DistTable& p, const DistTable& q) {
  std::vector<Variable> extra;
  for (const auto& v : p.vars())
    if (!q.has(v.name)) extra.push_back(v);
  double worst = 0;
  for_each_state(extra, [&](std::span<const int> s) {
    Assignment a;
    for (std::size_t i = 0; i < extra.size(); ++i) a[extra[i].name] = s[i];
    worst = std::max(worst, max_abs_diff(p.slice(a), q));
  });
  return worst;
}

}  // namespace cgen::testing
