#include "cgen/sampling_network.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <omp.h>

namespace cgen {

void SamplingNetwork::add_placeholder(const Variable& v) {
  if (!nodes_.count(v.name)) nodes_.emplace(v.name, Node{v, nullptr});
}

void SamplingNetwork::add_model(ModelPtr m) {
  auto it = nodes_.find(m->target().name);
  if (it != nodes_.end() && !it->second.placeholder())
    throw std::logic_error("two models for variable '" + m->target().name + "'");
  set_model(std::move(m));
}

void SamplingNetwork::set_model(ModelPtr m) {
  const Variable v = m->target();
  nodes_[v.name] = Node{v, std::move(m)};
}

const SamplingNetwork::Node& SamplingNetwork::node(const std::string& v) const {
  auto it = nodes_.find(v);
  if (it == nodes_.end()) throw std::invalid_argument("network has no node '" + v + "'");
  return it->second;
}

std::vector<std::string> SamplingNetwork::variables() const {
  std::vector<std::string> out;
  for (const auto& v : order_)
    if (nodes_.count(v)) out.push_back(v);
  // Nodes missing from the order go last so that respects_order can report them.
  for (const auto& [name, n] : nodes_)
    if (std::find(order_.begin(), order_.end(), name) == order_.end()) out.push_back(name);
  return out;
}

std::vector<Variable> SamplingNetwork::variable_list() const {
  std::vector<Variable> out;
  for (const auto& v : variables()) out.push_back(nodes_.at(v).var);
  return out;
}

VarSet SamplingNetwork::placeholders() const {
  VarSet out;
  for (const auto& [name, n] : nodes_)
    if (n.placeholder()) out.insert(name);
  return out;
}

VarSet SamplingNetwork::modelled() const {
  VarSet out;
  for (const auto& [name, n] : nodes_)
    if (!n.placeholder()) out.insert(name);
  return out;
}

std::vector<std::pair<std::string, std::string>> SamplingNetwork::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& v : variables()) {
    const Node& n = nodes_.at(v);
    if (n.placeholder()) continue;
    for (const auto& c : n.model->context()) out.emplace_back(c.name, v);
  }
  return out;
}

bool SamplingNetwork::is_acyclic() const {
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [name, n] : nodes_) indegree[name] = 0;
  for (const auto& [from, to] : edges()) {
    if (!nodes_.count(from)) return false;
    succ[from].push_back(to);
    ++indegree[to];
  }
  std::vector<std::string> ready;
  for (const auto& [name, d] : indegree)
    if (d == 0) ready.push_back(name);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::string v = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& w : succ[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  return seen == nodes_.size();
}

bool SamplingNetwork::respects_order() const {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
  for (const auto& [name, n] : nodes_)
    if (!pos.count(name)) return false;
  for (const auto& [from, to] : edges())
    if (!pos.count(from) || pos[from] >= pos[to]) return false;
  return true;
}

SamplingNetwork merge_network(const std::vector<SamplingNetwork>& parts) {
  if (parts.empty()) return {};
  SamplingNetwork out(parts.front().order());
  for (const auto& part : parts) {
    if (part.order() != out.order()) throw std::logic_error("merging networks built over different orders");
    for (const auto& [name, n] : part.nodes())
      if (!n.placeholder()) out.add_model(n.model);
  }
  for (const auto& part : parts)
    for (const auto& [name, n] : part.nodes())
      if (n.placeholder()) out.add_placeholder(n.var);
  return out;
}

void fill_placeholders_uniform(SamplingNetwork& h, const VarSet& keep) {
  for (const auto& v : h.placeholders())
    if (!keep.count(v)) h.set_model(uniform_model(h.node(v).var));
}

namespace {

// Per-node execution plan over the output row.
struct Step {
  const ConditionalModel* model = nullptr;
  std::vector<int> context_cols;
  int fixed = -1;
  int source_col = -1;
};

struct Plan {
  std::vector<Variable> columns;
  VarSet placeholders;
  std::vector<Step> steps;
  std::size_t max_context = 0;
};

Plan compile(const SamplingNetwork& h, const Assignment& fixed, const Dataset* source) {
  Plan plan;
  const auto names = h.variables();
  std::map<std::string, int> col;
  for (const auto& v : names) {
    col[v] = static_cast<int>(plan.columns.size());
    plan.columns.push_back(h.node(v).var);
  }
  for (const auto& v : names) {
    const auto& n = h.node(v);
    Step s;
    if (n.placeholder()) {
      plan.placeholders.insert(v);
      if (auto it = fixed.find(v); it != fixed.end()) {
        if (it->second < 0 || it->second >= n.var.cardinality)
          throw std::invalid_argument("value " + std::to_string(it->second) + " out of range for '" + v + "'");
        s.fixed = it->second;
      } else if (source && source->has(v) && !source->empty()) {
        s.source_col = source->require_column(v);
      } else {
        throw std::invalid_argument("placeholder '" + v + "' has no value and no fallback sampler");
      }
    } else {
      s.model = n.model.get();
      for (const auto& c : n.model->context()) {
        auto it = col.find(c.name);
        if (it == col.end()) throw std::invalid_argument("context variable '" + c.name + "' is not a network node");
        if (it->second >= col[v]) throw std::invalid_argument("context of '" + v + "' is not earlier in the order");
        s.context_cols.push_back(it->second);
      }
      plan.max_context = std::max(plan.max_context, s.context_cols.size());
    }
    plan.steps.push_back(std::move(s));
  }
  return plan;
}

void fill_block(const Plan& plan, Dataset& out, const Dataset* source, std::size_t block, std::size_t n,
                std::uint64_t seed) {
  Rng rng = make_stream(seed, block);
  std::vector<int> ctx(plan.max_context);
  const std::size_t first = block * kSampleBlock;
  const std::size_t last = std::min(n, first + kSampleBlock);
  for (std::size_t r = first; r < last; ++r) {
    auto row = out.row(r);
    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
      const Step& s = plan.steps[k];
      if (s.fixed >= 0) {
        row[k] = s.fixed;
      } else if (s.source_col >= 0) {
        row[k] = source->value(r % source->rows(), s.source_col);
      } else {
        for (std::size_t j = 0; j < s.context_cols.size(); ++j) ctx[j] = row[s.context_cols[j]];
        row[k] = s.model->sample(std::span<const int>(ctx.data(), s.context_cols.size()), rng);
      }
    }
  }
}

}  // namespace

Dataset ancestral_sample(const SamplingNetwork& h, const Assignment& fixed, std::size_t n, std::uint64_t seed,
                         int workers, const Dataset* source) {
  Plan plan = compile(h, fixed, source);
  Dataset out(plan.columns, plan.placeholders);
  out.resize(n);
  const auto blocks = static_cast<std::int64_t>((n + kSampleBlock - 1) / kSampleBlock);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t b = 0; b < blocks; ++b) fill_block(plan, out, source, static_cast<std::size_t>(b), n, seed);
  return out;
}

Dataset ancestral_sample_reference(const SamplingNetwork& h, const Assignment& fixed, std::size_t n,
                                   std::uint64_t seed, const Dataset* source) {
  Plan plan = compile(h, fixed, source);
  Dataset out(plan.columns, plan.placeholders);
  out.resize(n);
  for (std::size_t b = 0; b * kSampleBlock < n; ++b) fill_block(plan, out, source, b, n, seed);
  return out;
}

DistTable network_law(const SamplingNetwork& h, const Assignment& fixed) {
  Assignment at;
  for (const auto& v : h.placeholders()) {
    auto it = fixed.find(v);
    if (it == fixed.end()) throw std::invalid_argument("placeholder '" + v + "' has no value");
    at[v] = it->second;
  }
  DistTable law;
  std::vector<std::string> kept;
  for (const auto& v : h.variables()) {
    const auto& n = h.node(v);
    if (n.placeholder()) continue;
    Assignment local;
    for (const auto& c : n.model->context())
      if (at.count(c.name)) local[c.name] = at[c.name];
    law = law * model_factor(*n.model).slice(local);
    kept.push_back(v);
  }
  return law.reordered(kept);
}

Dataset project_targets(const Dataset& d, const VarSet& y) { return d.select(y); }

void write_manifest(std::ostream& out, const SamplingNetwork& h) {
  out << "order";
  for (const auto& v : h.order()) out << ' ' << v;
  out << '\n';
  char buf[32];
  for (const auto& v : h.variables()) {
    const auto& n = h.node(v);
    out << "node " << v << ' ' << n.var.cardinality << ' ' << (n.placeholder() ? "placeholder" : n.model->kind());
    if (n.placeholder()) {
      out << '\n';
      continue;
    }
    out << " context";
    for (const auto& c : n.model->context()) out << ' ' << c.name << ':' << c.cardinality;
    out << '\n';
    if (n.model->kind() == "uniform") continue;
    for_each_state(n.model->context(), [&](std::span<const int> ctx) {
      out << "row";
      for (double p : n.model->distribution(ctx)) {
        std::snprintf(buf, sizeof buf, "%.17g", p);
        out << ' ' << buf;
      }
      out << '\n';
    });
  }
}

SamplingNetwork read_manifest(std::istream& in) {
  std::string line;
  int line_number = 0;
  auto fail = [&](const std::string& what) {
    return std::invalid_argument("manifest line " + std::to_string(line_number) + ": " + what);
  };
  std::vector<std::string> order;
  SamplingNetwork h;
  bool have_order = false;

  struct Pending {
    Variable target;
    std::vector<Variable> context;
    std::string kind;
    std::vector<double> table;
    std::size_t rows_expected = 0;
    std::size_t rows_seen = 0;
  };
  std::optional<Pending> pending;
  auto flush = [&]() {
    if (!pending) return;
    if (pending->rows_seen != pending->rows_expected) throw fail("node '" + pending->target.name + "' is missing rows");
    h.add_model(std::make_shared<CptModel>(pending->target, pending->context, std::move(pending->table),
                                           pending->kind));
    pending.reset();
  };

  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "order") {
      std::string v;
      while (ss >> v) order.push_back(v);
      h = SamplingNetwork(order);
      have_order = true;
    } else if (key == "node") {
      if (!have_order) throw fail("node before order");
      flush();
      Variable v;
      std::string kind;
      if (!(ss >> v.name >> v.cardinality >> kind) || v.cardinality < 2) throw fail("bad node declaration");
      if (kind == "placeholder") {
        h.add_placeholder(v);
        continue;
      }
      std::string word;
      if (!(ss >> word) || word != "context") throw fail("expected 'context'");
      std::vector<Variable> ctx;
      while (ss >> word) {
        auto colon = word.find(':');
        if (colon == std::string::npos) throw fail("context entry '" + word + "' needs name:cardinality");
        ctx.push_back({word.substr(0, colon), std::stoi(word.substr(colon + 1))});
      }
      if (kind == "uniform") {
        if (!ctx.empty()) throw fail("uniform node with a context");
        h.add_model(uniform_model(v));
      } else if (kind == "cpt" || kind == "exact") {
        pending = Pending{v, ctx, kind, {}, state_count(ctx), 0};
      } else {
        throw fail("unknown model kind '" + kind + "'");
      }
    } else if (key == "row") {
      if (!pending) throw fail("row outside a table node");
      double p;
      std::size_t count = 0;
      while (ss >> p) {
        pending->table.push_back(p);
        ++count;
      }
      if (count != static_cast<std::size_t>(pending->target.cardinality)) throw fail("row has the wrong width");
      ++pending->rows_seen;
    } else {
      throw fail("unknown keyword '" + key + "'");
    }
  }
  flush();
  return h;
}

}  // namespace cgen
