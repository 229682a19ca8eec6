#include "cgen/scm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <omp.h>

#include "cgen/identify.hpp"
#include "cgen/rng.hpp"

namespace cgen {

namespace {

std::size_t card_product(const Admg& g, const std::vector<std::string>& names) {
  std::size_t n = 1;
  for (const auto& v : names) n *= static_cast<std::size_t>(g.cardinality(v));
  return n;
}

}  // namespace

DiscreteScm::DiscreteScm(Admg graph, std::vector<Latent> latents, std::vector<Mechanism> mechanisms)
    : graph_(std::move(graph)), latents_(std::move(latents)), mechanisms_(std::move(mechanisms)) {
  const auto bidirected = graph_.bidirected_edges();
  if (latents_.size() != bidirected.size())
    throw std::invalid_argument("scm needs exactly one latent per bidirected edge");
  for (auto& l : latents_) {
    if (!graph_.has_bidirected(l.a, l.b))
      throw std::invalid_argument("latent " + l.a + " <-> " + l.b + " has no bidirected edge");
    if (l.probs.size() < 2) throw std::invalid_argument("latent needs at least two states");
  }
  for (std::size_t i = 0; i < latents_.size(); ++i)
    for (std::size_t j = i + 1; j < latents_.size(); ++j)
      if (VarSet{latents_[i].a, latents_[i].b} == VarSet{latents_[j].a, latents_[j].b})
        throw std::invalid_argument("two latents on " + latents_[i].a + " <-> " + latents_[i].b);
  if (mechanisms_.size() != graph_.size()) throw std::invalid_argument("scm needs one mechanism per variable");
  for (std::size_t v = 0; v < graph_.size(); ++v) {
    const std::string& name = graph_.variables()[v].name;
    mechanisms_[v].latents.clear();
    for (std::size_t l = 0; l < latents_.size(); ++l)
      if (latents_[l].a == name || latents_[l].b == name) mechanisms_[v].latents.push_back(static_cast<int>(l));
    std::vector<int> pidx;
    for (const auto& p : graph_.parents(name)) pidx.push_back(graph_.index_of(p));
    parent_index_.push_back(std::move(pidx));
  }
  validate_tables();
}

void DiscreteScm::validate_tables() const {
  auto check_probs = [](const std::vector<double>& p, const std::string& what) {
    double total = 0;
    for (double x : p) {
      if (!(x >= 0) || !std::isfinite(x)) throw std::invalid_argument(what + ": negative or non-finite probability");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument(what + ": probabilities do not sum to 1");
  };
  for (const auto& l : latents_) check_probs(l.probs, "latent " + l.a + " <-> " + l.b);

  bool locally_positive = true;
  for (std::size_t v = 0; v < graph_.size(); ++v) {
    const auto& var = graph_.variables()[v];
    const auto& m = mechanisms_[v];
    check_probs(m.noise, "noise of " + var.name);
    std::size_t size = card_product(graph_, graph_.parents(var.name)) * m.noise.size();
    for (int l : m.latents) size *= latents_[l].probs.size();
    if (m.table.size() != size)
      throw std::invalid_argument("mechanism of " + var.name + " has " + std::to_string(m.table.size()) +
                                  " rows, expected " + std::to_string(size));
    for (int out : m.table)
      if (out < 0 || out >= var.cardinality)
        throw std::invalid_argument("mechanism of " + var.name + " emits out-of-range value " + std::to_string(out));
    // Every (parents, latents) slice must reach each state through some
    // positive-probability noise value; that suffices for a positive joint.
    const std::size_t nk = m.noise.size();
    const std::size_t inner = size / card_product(graph_, graph_.parents(var.name)) / nk;
    for (std::size_t outer = 0; outer < size / (nk * inner) && locally_positive; ++outer)
      for (std::size_t li = 0; li < inner && locally_positive; ++li) {
        std::vector<bool> hit(static_cast<std::size_t>(var.cardinality), false);
        for (std::size_t k = 0; k < nk; ++k)
          if (m.noise[k] > 0) hit[m.table[(outer * nk + k) * inner + li]] = true;
        for (bool h : hit) locally_positive = locally_positive && h;
      }
  }
  if (locally_positive) return;
  if (configurations() > kEnumerationBudget)
    throw std::invalid_argument("scm positivity cannot be verified within the enumeration budget");
  const DistTable joint = exact_joint(*this);
  for (double p : joint.values())
    if (!(p > 0)) throw std::invalid_argument("scm observational distribution is not strictly positive");
}

double DiscreteScm::configurations() const {
  double n = 1;
  for (const auto& l : latents_) n *= static_cast<double>(l.probs.size());
  for (const auto& m : mechanisms_) n *= static_cast<double>(m.noise.size());
  return n;
}

int DiscreteScm::evaluate(int v, std::span<const int> values, int noise, std::span<const int> latent_values) const {
  const Mechanism& m = mechanisms_[v];
  std::size_t idx = 0;
  for (int p : parent_index_[v])
    idx = idx * static_cast<std::size_t>(graph_.variables()[p].cardinality) + static_cast<std::size_t>(values[p]);
  idx = idx * m.noise.size() + static_cast<std::size_t>(noise);
  for (int l : m.latents) idx = idx * latents_[l].probs.size() + static_cast<std::size_t>(latent_values[l]);
  return m.table[idx];
}

namespace {

int draw(const std::vector<double>& p, Rng& rng) {
  double u = uniform01(rng);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (u < p[k]) return static_cast<int>(k);
    u -= p[k];
  }
  return static_cast<int>(p.size()) - 1;
}

void sample_block(const DiscreteScm& m, const std::vector<int>& topo, Dataset& out, std::size_t block, std::size_t n,
                  std::uint64_t seed) {
  Rng rng = make_stream(seed, block);
  std::vector<int> latent_values(m.latents().size());
  const std::size_t first = block * 4096;
  const std::size_t last = std::min(n, first + 4096);
  for (std::size_t r = first; r < last; ++r) {
    for (std::size_t l = 0; l < latent_values.size(); ++l) latent_values[l] = draw(m.latents()[l].probs, rng);
    auto row = out.row(r);
    for (int v : topo) row[v] = m.evaluate(v, row, draw(m.mechanisms()[v].noise, rng), latent_values);
  }
}

std::vector<int> topo_indices(const Admg& g) {
  std::vector<int> out;
  for (const auto& v : topological_order(g)) out.push_back(g.index_of(v));
  return out;
}

DistTable enumerate(const DiscreteScm& m, const Assignment& intervention) {
  const Admg& g = m.graph();
  g.require_known([&] {
    VarSet s;
    for (const auto& [k, v] : intervention) s.insert(k);
    return s;
  }());
  std::vector<int> fixed(g.size(), -1);
  double configs = 1;
  for (const auto& l : m.latents()) configs *= static_cast<double>(l.probs.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto it = intervention.find(g.variables()[v].name);
    if (it != intervention.end()) {
      if (it->second < 0 || it->second >= g.variables()[v].cardinality)
        throw std::invalid_argument("intervention value out of range for '" + it->first + "'");
      fixed[v] = it->second;
    } else {
      configs *= static_cast<double>(m.mechanisms()[v].noise.size());
    }
  }
  if (configs > kEnumerationBudget)
    throw std::invalid_argument("exogenous state space of " + std::to_string(configs) +
                                " configurations exceeds the enumeration budget");

  DistTable joint = DistTable::constant(g.variables(), 0.0);
  const auto topo = topo_indices(g);
  std::vector<int> values(g.size(), 0);
  std::vector<int> latent_values(m.latents().size(), 0);

  std::function<void(std::size_t, double)> walk = [&](std::size_t k, double p) {
    if (k == topo.size()) {
      joint.at(values) += p;
      return;
    }
    const int v = topo[k];
    if (fixed[v] >= 0) {
      values[v] = fixed[v];
      walk(k + 1, p);
      return;
    }
    const auto& noise = m.mechanisms()[v].noise;
    for (std::size_t e = 0; e < noise.size(); ++e) {
      if (noise[e] == 0) continue;
      values[v] = m.evaluate(v, values, static_cast<int>(e), latent_values);
      walk(k + 1, p * noise[e]);
    }
  };
  std::function<void(std::size_t, double)> latents = [&](std::size_t l, double p) {
    if (l == latent_values.size()) {
      walk(0, p);
      return;
    }
    const auto& probs = m.latents()[l].probs;
    for (std::size_t s = 0; s < probs.size(); ++s) {
      if (probs[s] == 0) continue;
      latent_values[l] = static_cast<int>(s);
      latents(l + 1, p * probs[s]);
    }
  };
  latents(0, 1.0);
  return joint;
}

}  // namespace

Dataset sample_observational(const DiscreteScm& m, std::size_t n, std::uint64_t seed, int workers) {
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  Dataset out(m.graph().variables());
  out.resize(n);
  const auto topo = topo_indices(m.graph());
  const auto blocks = static_cast<std::int64_t>((n + 4095) / 4096);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t b = 0; b < blocks; ++b) sample_block(m, topo, out, static_cast<std::size_t>(b), n, seed);
  return out;
}

Dataset sample_observational_reference(const DiscreteScm& m, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  Dataset out(m.graph().variables());
  out.resize(n);
  const auto topo = topo_indices(m.graph());
  for (std::size_t b = 0; b * 4096 < n; ++b) sample_block(m, topo, out, b, n, seed);
  return out;
}

DistTable exact_joint(const DiscreteScm& m) { return enumerate(m, {}); }

DistTable exact_interventional(const DiscreteScm& m, const Assignment& intervention) {
  return enumerate(m, intervention);
}

DistTable exact_query(const DiscreteScm& m, const QuerySpec& q) {
  q.validate(m.graph());
  DistTable law = exact_interventional(m, q.intervention);
  if (q.conditional())
    law = law.marginal(set_union(q.targets, q.given_vars())).slice(q.given).normalized();
  return law.marginal(q.targets).reordered(m.graph().ordered(q.targets));
}

namespace {

std::vector<Latent> seeded_latents(const Admg& g, Rng& rng) {
  std::vector<Latent> out;
  for (const auto& [a, b] : g.bidirected_edges()) {
    const double p = 0.2 + 0.6 * uniform01(rng);
    out.push_back({a, b, {1.0 - p, p}});
  }
  return out;
}

// Fills a table with out = noise == card ? signal(parents, latents) : noise.
Mechanism follow_or_noise(const Admg& g, const std::string& v, std::vector<double> noise, int n_latents,
                          const std::function<int(std::span<const int>, std::span<const int>)>& signal) {
  const int card = g.cardinality(v);
  const auto parents = g.parents(v);
  std::vector<Variable> pvars;
  for (const auto& p : parents) pvars.push_back(g.variable(p));
  std::vector<Variable> lvars(static_cast<std::size_t>(n_latents), Variable{"u", 2});
  Mechanism m;
  m.noise = std::move(noise);
  for_each_state(pvars, [&](std::span<const int> pv) {
    for (int e = 0; e <= card; ++e)
      for_each_state(lvars, [&](std::span<const int> lv) { m.table.push_back(e == card ? signal(pv, lv) : e); });
  });
  return m;
}

int incident_latents(const Admg& g, const std::string& v) { return static_cast<int>(g.spouses(v).size()); }

}  // namespace

DiscreteScm noisy_copy_scm(const Admg& g, std::uint64_t seed, double follow) {
  if (!(follow >= 0 && follow < 1)) throw std::invalid_argument("follow probability must be in [0, 1)");
  Rng rng = make_stream(seed, 0);
  auto latents = seeded_latents(g, rng);
  std::vector<Mechanism> mechanisms;
  for (const auto& var : g.variables()) {
    const int card = var.cardinality;
    const int offset = static_cast<int>(rng() % static_cast<std::uint64_t>(card));
    std::vector<double> noise(static_cast<std::size_t>(card), (1.0 - follow) / card);
    noise.push_back(follow);
    mechanisms.push_back(follow_or_noise(g, var.name, noise, incident_latents(g, var.name),
                                         [&](std::span<const int> pv, std::span<const int> lv) {
                                           int s = offset;
                                           for (int x : pv) s += x;
                                           for (int x : lv) s += x;
                                           return s % card;
                                         }));
  }
  return DiscreteScm(g, std::move(latents), std::move(mechanisms));
}

DiscreteScm random_scm(const Admg& g, std::uint64_t seed) {
  Rng rng = make_stream(seed, 1);
  auto latents = seeded_latents(g, rng);
  std::vector<Mechanism> mechanisms;
  for (const auto& var : g.variables()) {
    const int card = var.cardinality;
    const double follow = 0.5 + 0.4 * uniform01(rng);
    std::vector<double> weights(static_cast<std::size_t>(card));
    double total = 0;
    for (auto& w : weights) total += (w = 0.2 + uniform01(rng));
    std::vector<double> noise;
    for (double w : weights) noise.push_back((1.0 - follow) * w / total);
    noise.push_back(follow);
    std::vector<int> signal_table;
    std::size_t signal_size = card_product(g, g.parents(var.name)) << incident_latents(g, var.name);
    for (std::size_t i = 0; i < signal_size; ++i)
      signal_table.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(card)));
    std::size_t next = 0;
    mechanisms.push_back(follow_or_noise(g, var.name, noise, incident_latents(g, var.name),
                                         [&](std::span<const int>, std::span<const int>) {
                                           // Called once per (parents, latents) configuration, row-major.
                                           return signal_table[next++ % signal_size];
                                         }));
  }
  return DiscreteScm(g, std::move(latents), std::move(mechanisms));
}

void write_scm(std::ostream& out, const DiscreteScm& m) {
  const Admg& g = m.graph();
  write_graph(out, g);
  char buf[32];
  auto num = [&](double p) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return std::string(buf);
  };
  for (const auto& l : m.latents()) {
    out << "latent " << l.a << ' ' << l.b;
    for (double p : l.probs) out << ' ' << num(p);
    out << '\n';
  }
  for (const auto& var : g.variables()) {
    const auto& mech = m.mechanism(var.name);
    out << "noise " << var.name;
    for (double p : mech.noise) out << ' ' << num(p);
    out << '\n';
  }
  auto csv = [](std::span<const int> values) {
    if (values.empty()) return std::string("-");
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
    return s;
  };
  for (const auto& var : g.variables()) {
    const auto& mech = m.mechanism(var.name);
    std::vector<Variable> pvars, lvars;
    for (const auto& p : g.parents(var.name)) pvars.push_back(g.variable(p));
    for (int l : mech.latents) lvars.push_back({"u", static_cast<int>(m.latents()[l].probs.size())});
    std::size_t idx = 0;
    for_each_state(pvars, [&](std::span<const int> pv) {
      for (std::size_t e = 0; e < mech.noise.size(); ++e)
        for_each_state(lvars, [&](std::span<const int> lv) {
          out << "row " << var.name << ' ' << csv(pv) << ' ' << e << ' ' << csv(lv) << ' ' << mech.table[idx++]
              << '\n';
        });
    });
  }
}

namespace {

std::vector<int> parse_csv_ints(const std::string& s, int line_number) {
  std::vector<int> out;
  if (s == "-") return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_number) + ": bad integer list '" + s + "'");
    }
  }
  return out;
}

}  // namespace

DiscreteScm parse_scm(std::istream& in) {
  Admg g;
  struct RowLine {
    int line_number;
    std::string var;
    std::vector<int> parents;
    int noise;
    std::vector<int> latents;
    int out;
  };
  std::vector<Latent> latents;
  std::map<std::string, std::vector<double>> noise;
  std::vector<RowLine> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (parse_graph_line(g, line, line_number)) continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    auto fail = [&](const std::string& what) {
      return std::invalid_argument("line " + std::to_string(line_number) + ": " + what);
    };
    if (key == "latent") {
      Latent l;
      double p;
      if (!(ss >> l.a >> l.b)) throw fail("expected 'latent A B p0 p1 ...'");
      while (ss >> p) l.probs.push_back(p);
      if (!ss.eof()) throw fail("bad probability");
      latents.push_back(std::move(l));
    } else if (key == "noise") {
      std::string v;
      double p;
      if (!(ss >> v)) throw fail("expected 'noise V p0 p1 ...'");
      if (!g.contains(v)) throw fail("unknown variable '" + v + "'");
      if (noise.count(v)) throw fail("noise for '" + v + "' given twice");
      auto& probs = noise[v];
      while (ss >> p) probs.push_back(p);
      if (!ss.eof() || probs.empty()) throw fail("bad probability");
    } else if (key == "row") {
      RowLine r;
      r.line_number = line_number;
      std::string pv, lv;
      if (!(ss >> r.var >> pv >> r.noise >> lv >> r.out)) throw fail("expected 'row V parents noise latents out'");
      r.parents = parse_csv_ints(pv, line_number);
      r.latents = parse_csv_ints(lv, line_number);
      rows.push_back(std::move(r));
    } else {
      throw fail("unknown keyword '" + key + "'");
    }
  }

  for (const auto& l : latents)
    if (!g.contains(l.a) || !g.contains(l.b)) throw std::invalid_argument("latent on an undeclared variable");
  std::vector<Mechanism> mechanisms(g.size());
  std::vector<std::vector<bool>> seen(g.size());
  std::vector<std::vector<int>> incident(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::string& name = g.variables()[v].name;
    if (!noise.count(name)) throw std::invalid_argument("no noise distribution for '" + name + "'");
    mechanisms[v].noise = noise[name];
    for (std::size_t l = 0; l < latents.size(); ++l)
      if (latents[l].a == name || latents[l].b == name) incident[v].push_back(static_cast<int>(l));
    std::size_t size = card_product(g, g.parents(name)) * mechanisms[v].noise.size();
    for (int l : incident[v]) size *= latents[l].probs.size();
    mechanisms[v].table.assign(size, 0);
    seen[v].assign(size, false);
  }
  for (const auto& r : rows) {
    auto fail = [&](const std::string& what) {
      return std::invalid_argument("line " + std::to_string(r.line_number) + ": " + what);
    };
    if (!g.contains(r.var)) throw fail("unknown variable '" + r.var + "'");
    const int v = g.index_of(r.var);
    const auto parents = g.parents(r.var);
    if (r.parents.size() != parents.size()) throw fail("wrong number of parent values");
    if (r.latents.size() != incident[v].size()) throw fail("wrong number of latent values");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const int card = g.cardinality(parents[i]);
      if (r.parents[i] < 0 || r.parents[i] >= card) throw fail("parent value out of range");
      idx = idx * static_cast<std::size_t>(card) + static_cast<std::size_t>(r.parents[i]);
    }
    const auto& mech = mechanisms[v];
    if (r.noise < 0 || static_cast<std::size_t>(r.noise) >= mech.noise.size()) throw fail("noise value out of range");
    idx = idx * mech.noise.size() + static_cast<std::size_t>(r.noise);
    for (std::size_t i = 0; i < r.latents.size(); ++i) {
      const std::size_t card = latents[incident[v][i]].probs.size();
      if (r.latents[i] < 0 || static_cast<std::size_t>(r.latents[i]) >= card) throw fail("latent value out of range");
      idx = idx * card + static_cast<std::size_t>(r.latents[i]);
    }
    if (seen[v][idx]) throw fail("duplicate mechanism row");
    seen[v][idx] = true;
    mechanisms[v].table[idx] = r.out;
  }
  for (std::size_t v = 0; v < g.size(); ++v)
    for (bool s : seen[v])
      if (!s) throw std::invalid_argument("mechanism of '" + g.variables()[v].name + "' is missing rows");
  return DiscreteScm(std::move(g), std::move(latents), std::move(mechanisms));
}

DiscreteScm load_scm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scm '" + path + "'");
  return parse_scm(in);
}

void save_scm(const std::string& path, const DiscreteScm& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_scm(out, m);
}

namespace {

Admg build(const std::vector<std::string>& vars, const std::vector<std::pair<std::string, std::string>>& edges,
           const std::vector<std::pair<std::string, std::string>>& confounded) {
  Admg g;
  for (const auto& v : vars) g.add_variable(v, 2);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  for (const auto& [a, b] : confounded) g.add_bidirected(a, b);
  return g;
}

QuerySpec make_query(VarSet targets, Assignment intervention, Assignment given = {}) {
  return QuerySpec{std::move(targets), std::move(intervention), std::move(given)};
}

}  // namespace

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string name, const Admg& g, std::uint64_t seed, std::vector<CatalogQuery> queries) {
    out.push_back({std::move(name), noisy_copy_scm(g, seed), std::move(queries)});
  };

  add("frontdoor", build({"X", "S", "R"}, {{"X", "S"}, {"S", "R"}}, {{"X", "R"}}), 11,
      {{make_query({"R"}, {{"X", 1}}), true}});
  add("backdoor", build({"A", "B", "V", "I"}, {{"A", "B"}, {"A", "V"}, {"B", "V"}, {"V", "I"}}, {{"B", "I"}}), 12,
      {{make_query({"I"}, {{"V", 1}}), true}, {make_query({"I"}, {{"V", 1}}, {{"A", 1}}), true}});
  add("crossed_chain", build({"X", "W1", "W2", "Y"}, {{"X", "W1"}, {"W1", "W2"}, {"W2", "Y"}}, {{"X", "W2"}, {"W1", "Y"}}), 13,
      {{make_query({"Y"}, {{"X", 1}}), true}, {make_query({"Y"}, {{"W1", 1}}), true}});
  add("napkin", build({"W1", "W2", "X", "Y"}, {{"W1", "W2"}, {"W2", "X"}, {"X", "Y"}}, {{"W1", "X"}, {"W1", "Y"}}), 14,
      {{make_query({"Y"}, {{"X", 1}}), true}, {make_query({"Y"}, {{"W1", 1}}), true}});
  add("double_napkin",
      build({"W3", "W4", "R", "W2", "W1", "X"},
            {{"W3", "W4"}, {"R", "W2"}, {"W2", "W1"}, {"W2", "X"}, {"W4", "W1"}, {"W1", "X"}},
            {{"W3", "W2"}, {"R", "W1"}, {"R", "X"}}),
      15, {{make_query({"W3", "W4", "W2", "W1", "X"}, {{"R", 1}}), true}});
  add("bow", build({"X", "Y"}, {{"X", "Y"}}, {{"X", "Y"}}), 16, {{make_query({"Y"}, {{"X", 1}}), false}});
  add("chain", build({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}, {}), 17,
      {{make_query({"C"}, {{"A", 1}}, {{"B", 1}}), true}});

  for (const auto& e : out)
    for (const auto& q : e.queries) {
      const Admg& g = e.scm.graph();
      q.query.validate(g);
      const bool identified = q.query.conditional()
                                  ? idc(q.query.targets, q.query.do_vars(), q.query.given_vars(), g).identified()
                                  : id(q.query.targets, q.query.do_vars(), g).identified();
      if (identified != q.identifiable)
        throw std::logic_error("catalog flag for " + e.name + " " + q.query.to_string() + " disagrees with id");
    }
  return out;
}

const CatalogEntry& catalog_entry(const std::vector<CatalogEntry>& entries, const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw std::invalid_argument("no catalog entry '" + name + "'");
}

}  // namespace cgen
