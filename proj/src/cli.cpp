#include "cgen/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "cgen/idgen.hpp"
#include "cgen/scm.hpp"

namespace cgen {

namespace {

struct Options {
  std::string graph;
  std::string data;
  std::string scm;
  std::string query;
  std::vector<std::string> queries;
  std::string out;
  std::string network;
  std::size_t n = 200000;
  std::size_t data_n = 500000;
  std::uint64_t seed = 0;
  std::string proposal = "uniform";
  double dprime_mult = 1.0;
  int workers = 0;
  bool use_catalog = false;
};

IdGenOptions engine_options(const Options& o) {
  IdGenOptions opt;
  opt.seed = o.seed;
  opt.proposal = parse_proposal(o.proposal);
  opt.dprime_multiplier = o.dprime_mult;
  opt.workers = o.workers;
  return opt;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  body(f);
}

void report_hedge(std::ostream& out, const Hedge& h) { out << "not identifiable: " << h.to_string() << '\n'; }

int cmd_identify(const Options& o, std::ostream& out) {
  const Admg g = load_graph(o.graph);
  const QuerySpec q = load_query(o.query);
  q.validate(g);
  out << "query: " << q.to_string() << '\n';
  IdResult r;
  if (q.conditional()) {
    auto c = idc(q.targets, q.do_vars(), q.given_vars(), g);
    if (!c.reduction.moved.empty()) {
      out << "rule 2 moved:";
      for (const auto& v : c.reduction.moved) out << ' ' << v;
      out << '\n';
    }
    r = std::move(c.inner);
  } else {
    r = id(q.targets, q.do_vars(), g);
  }
  out << "trace: " << r.trace.compact() << '\n' << r.trace.detailed();
  if (!r.identified()) {
    report_hedge(out, r.hedge());
    return kExitHedge;
  }
  out << "estimand: " << to_string(*r.estimand()) << '\n';
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  if (o.data.empty() == o.scm.empty()) throw std::invalid_argument("give exactly one of --data and --scm");
  if (o.n == 0) throw std::invalid_argument("--n must be positive");
  const QuerySpec q = load_query(o.query);
  std::optional<Admg> g;
  std::optional<TrainingData> d;
  if (!o.scm.empty()) {
    DiscreteScm m = load_scm(o.scm);
    g = m.graph();
    d.emplace(exact_joint(m));
  } else {
    if (o.graph.empty()) throw std::invalid_argument("--data needs --graph");
    g = load_graph(o.graph);
    d.emplace(load_dataset(o.data, g->variables()));
  }
  QueryRun run = run_query(q, *g, *d, o.n, engine_options(o));
  out << "query: " << q.to_string() << '\n' << "trace: " << run.trace.compact() << '\n';
  if (!run.identified()) {
    report_hedge(out, run.hedge());
    return kExitHedge;
  }
  std::string network_path = o.network;
  if (o.out.empty() || o.out == "-") {
    write_csv(out, run.samples);
  } else {
    save_dataset(o.out, run.samples);
    if (network_path.empty()) network_path = o.out + ".network";
    out << "wrote " << run.samples.rows() << " rows to " << o.out << '\n';
  }
  if (!network_path.empty()) {
    write_file(network_path, [&](std::ostream& f) { write_manifest(f, run.network()); });
    out << "wrote network to " << network_path << '\n';
  }
  return kExitOk;
}

struct EvalItem {
  std::string name;
  DiscreteScm scm;
  QuerySpec query;
};

std::string table_cell(std::string s) {
  for (std::size_t at = s.find('|'); at != std::string::npos; at = s.find('|', at + 2)) s.insert(at, "\\");
  return s;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int cmd_eval(const Options& o, std::ostream& out) {
  std::vector<EvalItem> items;
  if (o.use_catalog) {
    for (const auto& e : catalog())
      for (const auto& cq : e.queries) items.push_back({e.name, e.scm, cq.query});
  } else {
    if (o.scm.empty() || o.queries.empty()) throw std::invalid_argument("eval needs --scm and --query, or --catalog");
    DiscreteScm m = load_scm(o.scm);
    for (const auto& path : o.queries) items.push_back({std::filesystem::path(o.scm).stem().string(), m, load_query(path)});
  }
  const IdGenOptions opt = engine_options(o);
  IdGenOptions exact_opt = opt;
  exact_opt.seed = mix_seed(o.seed, 1);

  out << "| graph | query | K | tvd fitted | tvd exact | bound exact | status |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& item : items) {
    const Admg& g = item.scm.graph();
    item.query.validate(g);
    out << "| " << item.name << " | " << table_cell(item.query.to_string()) << " | ";
    const bool identified = item.query.conditional()
                                ? idc(item.query.targets, item.query.do_vars(), item.query.given_vars(), g).identified()
                                : id(item.query.targets, item.query.do_vars(), g).identified();
    if (!identified) {
      out << "- | - | - | - | HEDGE |\n";
      continue;
    }
    const DistTable truth = exact_query(item.scm, item.query);
    const auto targets = g.ordered(item.query.targets);
    const Dataset data = sample_observational(item.scm, o.data_n, o.seed, o.workers);
    const QueryRun fitted = run_query(item.query, g, TrainingData(data), o.n, opt);
    const QueryRun exact = run_query(item.query, g, TrainingData(exact_joint(item.scm)), o.n, exact_opt);
    const double t_fit = tvd(empirical_distribution(fitted.samples, targets), truth);
    const double t_exact = tvd(empirical_distribution(exact.samples, targets), truth);
    const double k = static_cast<double>(truth.size());
    const double bound = 0.01 + 3.0 * std::sqrt(k / static_cast<double>(o.n));
    const bool ok = t_fit <= 0.03 && t_exact <= bound;
    out << truth.size() << " | " << fixed4(t_fit) << " | " << fixed4(t_exact) << " | " << fixed4(bound) << " | "
        << (ok ? "ok" : "FAIL") << " |\n";
  }
  return kExitOk;
}

int cmd_gen_data(const Options& o, std::ostream& out) {
  if (o.n == 0) throw std::invalid_argument("--n must be positive");
  const DiscreteScm m = load_scm(o.scm);
  const Dataset d = sample_observational(m, o.n, o.seed, o.workers);
  if (o.out.empty() || o.out == "-") {
    write_csv(out, d);
  } else {
    save_dataset(o.out, d);
    out << "wrote " << d.rows() << " rows to " << o.out << '\n';
  }
  return kExitOk;
}

int cmd_catalog(const Options& o, std::ostream& out) {
  std::filesystem::create_directories(o.out);
  for (const auto& e : catalog()) {
    const auto base = std::filesystem::path(o.out) / e.name;
    write_file(base.string() + ".graph", [&](std::ostream& f) { write_graph(f, e.scm.graph()); });
    save_scm(base.string() + ".scm", e.scm);
    for (std::size_t i = 0; i < e.queries.size(); ++i)
      write_file(base.string() + ".q" + std::to_string(i + 1) + ".query",
                 [&](std::ostream& f) { write_query(f, e.queries[i].query); });
    out << e.name << ": " << e.queries.size() << (e.queries.size() == 1 ? " query\n" : " queries\n");
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal identification and interventional sampling over discrete ADMGs", "cgen"};
  app.require_subcommand(1);
  Options o;

  auto* identify = app.add_subcommand("identify", "Print the estimand and recursion trace of a query");
  identify->add_option("--graph", o.graph, "Graph file")->required();
  identify->add_option("--query", o.query, "Query file")->required();

  auto add_engine = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    c->add_option("--proposal", o.proposal, "Step-7 proposal: uniform or marginal")->capture_default_str();
    c->add_option("--dprime-mult", o.dprime_mult, "Regenerated dataset size relative to the input")
        ->capture_default_str();
    c->add_option("--workers", o.workers, "Sampling threads (0: runtime default)")->capture_default_str();
  };

  auto* sample = app.add_subcommand("sample", "Build the sampling network for a query and draw samples");
  sample->add_option("--graph", o.graph, "Graph file (with --data)");
  sample->add_option("--data", o.data, "Observational CSV");
  sample->add_option("--scm", o.scm, "SCM file; models become exact conditionals");
  sample->add_option("--query", o.query, "Query file")->required();
  sample->add_option("--n", o.n, "Number of samples")->capture_default_str();
  sample->add_option("--out", o.out, "Samples CSV (default: stdout)");
  sample->add_option("--network", o.network, "Network manifest (default: <out>.network)");
  add_engine(sample);

  auto* eval = app.add_subcommand("eval", "Score fitted and exact-model pipelines against the SCM oracle");
  eval->add_option("--scm", o.scm, "SCM file");
  eval->add_option("--query", o.queries, "Query file (repeatable)");
  eval->add_flag("--catalog", o.use_catalog, "Evaluate every catalog query");
  eval->add_option("--n", o.n, "Samples per query")->capture_default_str();
  eval->add_option("--data-n", o.data_n, "Observational rows per SCM")->capture_default_str();
  add_engine(eval);

  auto* gen = app.add_subcommand("gen-data", "Draw observational data from an SCM");
  gen->add_option("--scm", o.scm, "SCM file")->required();
  gen->add_option("--n", o.n, "Number of rows")->required();
  gen->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  gen->add_option("--workers", o.workers, "Sampling threads (0: runtime default)")->capture_default_str();
  gen->add_option("--out", o.out, "Output CSV (default: stdout)");

  auto* cat = app.add_subcommand("catalog", "Write the catalog graphs, SCMs and queries");
  cat->add_option("--out", o.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (identify->parsed()) return cmd_identify(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (gen->parsed()) return cmd_gen_data(o, out);
    if (cat->parsed()) return cmd_catalog(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace cgen
