// partzdd-cli: every pipeline stage as a subcommand; stages talk through files.
// Exit codes: 0 ok, 1 usage, 2 data error, 3 resource exhaustion.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "partzdd/partzdd.hpp"

using namespace partzdd;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "partzdd 1.0.0";

struct Args {
  std::string graph, attrs, order, zdd, plans, truth, out, diag_out, resampled_out, rpi_ref;
  std::string attrs_out, map_out;
  std::vector<std::string> inputs;
  std::size_t p = 2;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  double beta_p = 0, beta_c = 0;
  double parity = std::numeric_limits<double>::infinity();
  std::optional<double> compactness_q, rpi_denom;
  std::size_t thin = 1, chains = 1, iters = 1000, burn_in = 0;
  unsigned workers = 1;
  std::optional<double> mem_cap_mib;
  std::vector<std::size_t> lags{1, 5};
  // study
  std::size_t submap_size = 25, maps = 200;
  std::vector<std::string> levels{"inf", "0.2", "0.1"};
  std::vector<std::string> samplers{"zdd-uniform", "mcmc", "rsg"};
  std::vector<double> level_betas;
};

// Writes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DataError("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

double parse_level(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v >= 0)) throw DataError("bad parity level '" + s + "'");
  return v;
}

Graph need_graph(const Args& a) {
  if (a.graph.empty()) throw CLI::RequiredError("--graph");
  return load_graph(a.graph);
}

VertexAttributes need_attrs(const Args& a, std::size_t n) {
  if (a.attrs.empty()) throw CLI::RequiredError("--attrs");
  return load_attributes(a.attrs, n);
}

BuildOptions build_options(const Args& a) {
  BuildOptions o;
  if (a.mem_cap_mib) {
    if (!(*a.mem_cap_mib > 0)) throw DataError("--mem-cap must be positive");
    o.memory_cap_bytes = static_cast<std::size_t>(*a.mem_cap_mib * 1024.0 * 1024.0);
  }
  return o;
}

EdgeOrder resolve_order(const Graph& g, const Args& a) {
  if (a.order.empty()) return order_edges(g);
  std::ifstream in(a.order);
  if (!in) throw DataError("cannot open '" + a.order + "'");
  return make_edge_order(g, read_order(in, g.edge_count()));
}

// Diagram from --zdd, or built from --graph [--order] --p.
Zdd resolve_zdd(const Args& a) {
  if (!a.zdd.empty()) {
    std::ifstream in(a.zdd);
    if (!in) throw DataError("cannot open '" + a.zdd + "'");
    return read_zdd(in);
  }
  Graph g = need_graph(a);
  return build_zdd(g, resolve_order(g, a), a.p, build_options(a));
}

std::optional<double> rpi_denominator_of(const Args& a, const VertexAttributes& attrs) {
  if (a.rpi_denom) {
    if (!(*a.rpi_denom > 0)) throw DataError("--rpi-denom must be positive");
    return a.rpi_denom;
  }
  if (!a.rpi_ref.empty()) {
    auto ref = load_plans(a.rpi_ref, attrs.size());
    return rpi_denominator(ref, attrs);
  }
  return std::nullopt;
}

GibbsParams gibbs_of(const Args& a, const VertexAttributes& attrs) {
  GibbsParams gp;
  gp.beta_parity = a.beta_p;
  gp.beta_compact = a.beta_c;
  gp.rpi_denominator = rpi_denominator_of(a, attrs);
  return gp;
}

int cmd_order(const Args& a) {
  Graph g = need_graph(a);
  auto ord = resolve_order(g, a);
  Sink out(a.out);
  write_order(out.os(), ord.perm);
  std::cerr << "max_frontier " << ord.max_frontier_size << '\n';
  return 0;
}

int cmd_build(const Args& a) {
  Graph g = need_graph(a);
  Zdd z = build_zdd(g, resolve_order(g, a), a.p, build_options(a));
  Sink out(a.out);
  write_zdd(out.os(), z);
  write_stats(std::cerr, build_stats(z));
  return 0;
}

int cmd_count(const Args& a) {
  Zdd z = resolve_zdd(a);
  Sink out(a.out);
  out.os() << count_partitions(z) << '\n';
  return 0;
}

int cmd_sample(const Args& a) {
  Zdd z = resolve_zdd(a);
  PathCountTable counts(z);
  auto plans = sample_uniform(z, counts, a.seed, a.n, a.workers);
  Sink out(a.out);
  write_plans(out.os(), plans);
  return 0;
}

int cmd_enum(const Args& a) {
  Zdd z = resolve_zdd(a);
  PathCountTable counts(z);
  Sink out(a.out);
  enumerate(z, counts, [&](const Partition& pt) { write_plan(out.os(), pt); });
  return 0;
}

int cmd_metrics(const Args& a) {
  if (a.plans.empty()) throw CLI::RequiredError("--plans");
  if (a.attrs.empty()) throw CLI::RequiredError("--attrs");
  auto attrs = load_attributes(a.attrs);
  auto plans = load_plans(a.plans, attrs.size());
  std::optional<Graph> g;
  if (!a.graph.empty()) g = load_graph(a.graph);
  const auto gp = gibbs_of(a, attrs);
  Sink out(a.out);
  out.os() << "plan_index,parity_deviation,dissimilarity,rpi,energy\n";
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (g && !is_valid_partition(*g, plans[i], plans[i].district_count())) {
      throw DataError("plan " + std::to_string(i + 1) + " is not a connected partition of the graph");
    }
    auto s = score_plan(plans[i], attrs, gp.rpi_denominator, gp);
    out.os() << i + 1 << ',' << fmt(s.parity_deviation) << ',' << (s.dissimilarity ? fmt(*s.dissimilarity) : "")
             << ',' << (s.rpi ? fmt(*s.rpi) : "") << ',' << (s.energy ? fmt(*s.energy) : "") << '\n';
  }
  return 0;
}

int cmd_rsg(const Args& a) {
  Graph g = need_graph(a);
  auto s = rsg_draws(g, a.p, a.seed, a.n);
  Sink out(a.out);
  write_plans(out.os(), s.plans);
  if (!a.diag_out.empty()) {
    auto attrs = need_attrs(a, g.vertex_count());
    const auto gp = gibbs_of(a, attrs);
    Sink diag(a.diag_out);
    for (std::size_t i = 0; i < s.plans.size(); ++i) {
      json rec{{"draw", i + 1},
               {"energy", gibbs_energy(s.plans[i], attrs, gp)},
               {"parity", parity_deviation(s.plans[i], attrs)}};
      diag.os() << rec.dump() << '\n';
    }
  }
  return 0;
}

int cmd_mcmc(const Args& a) {
  Graph g = need_graph(a);
  auto attrs = need_attrs(a, g.vertex_count());
  ChainConfig cfg;
  cfg.iterations = a.iters;
  cfg.chain_count = a.chains;
  cfg.seed = a.seed;
  cfg.gibbs = gibbs_of(a, attrs);
  cfg.thinning = a.thin;
  cfg.burn_in = a.burn_in;
  cfg.parity_threshold = a.parity;
  cfg.rpi_threshold = a.compactness_q;
  auto traces = mcmc_chains(g, attrs, a.p, cfg, a.workers);
  {
    Sink out(a.out);
    for (const auto& t : traces) write_plans(out.os(), t.plans);
  }
  if (!a.diag_out.empty()) {
    Sink diag(a.diag_out);
    for (std::size_t c = 0; c < traces.size(); ++c) {
      for (const auto& r : traces[c].records) {
        json rec{{"chain", c + 1},
                 {"iteration", r.iteration},
                 {"energy", r.energy},
                 {"parity", r.parity},
                 {"accepted", r.accepted}};
        diag.os() << rec.dump() << '\n';
      }
    }
  }
  if (!a.resampled_out.empty()) {
    PlanSample all;
    all.provenance = Provenance::mcmc;
    for (auto& t : traces) all.plans.insert(all.plans.end(), t.plans.begin(), t.plans.end());
    ResampleConfig rc;
    rc.parity_threshold = a.parity;
    rc.rpi_threshold = a.compactness_q;
    rc.gibbs = cfg.gibbs;
    rc.seed = a.seed;
    auto res = filter_reweight_resample(all, attrs, rc);
    Sink out(a.resampled_out);
    write_plans(out.os(), res.plans);
  }
  for (std::size_t c = 0; c < traces.size(); ++c) {
    std::cerr << "chain " << c + 1 << " accepted " << traces[c].accepted << " of " << cfg.iterations << '\n';
  }
  return 0;
}

// Reads JSON-lines diagnostics (mcmc or rsg) and reports per-chain
// autocorrelations plus R-hat across chains.
int cmd_diag(const Args& a) {
  if (a.inputs.empty()) throw CLI::RequiredError("--in");
  std::map<std::size_t, std::vector<double>> parity, energy;
  std::map<std::size_t, std::size_t> accepted;
  for (const auto& path : a.inputs) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception&) {
        throw DataError(path + ":" + std::to_string(lineno) + ": not valid JSON");
      }
      if (!rec.is_object() || !rec.contains("parity") || !rec["parity"].is_number()) {
        throw DataError(path + ":" + std::to_string(lineno) + ": record lacks a numeric 'parity'");
      }
      const std::size_t c = rec.value("chain", std::size_t{1});
      parity[c].push_back(rec["parity"].get<double>());
      if (rec.contains("energy") && rec["energy"].is_number()) energy[c].push_back(rec["energy"].get<double>());
      if (rec.value("accepted", false)) ++accepted[c];
    }
  }
  if (parity.empty()) throw DataError("no diagnostic records");
  const std::size_t k = std::max<std::size_t>(1, a.thin);
  auto acf = [&](const std::vector<double>& x, std::size_t lag) -> json {
    try {
      return autocorrelation(x, lag);
    } catch (const DataError&) {
      return nullptr;  // constant or too short
    }
  };
  auto rhat = [&](const std::map<std::size_t, std::vector<double>>& series) -> json {
    if (series.size() < 2) return nullptr;
    std::vector<std::vector<double>> chains;
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& [c, x] : series) {
      chains.push_back(thin(x, k));
      len = std::min(len, chains.back().size());
    }
    for (auto& ch : chains) ch.resize(len);
    try {
      return gelman_rubin(chains);
    } catch (const DataError&) {
      return nullptr;
    }
  };
  json report;
  report["thinning"] = k;
  report["chains"] = json::array();
  for (const auto& [c, x] : parity) {
    auto t = thin(x, k);
    json ch{{"chain", c}, {"records", x.size()}, {"accepted", accepted[c]}};
    json pa = json::object(), en = json::object();
    for (auto lag : a.lags) {
      pa[std::to_string(lag)] = acf(t, lag);
      if (energy.count(c)) en[std::to_string(lag)] = acf(thin(energy[c], k), lag);
    }
    ch["parity_autocorrelation"] = pa;
    if (energy.count(c)) ch["energy_autocorrelation"] = en;
    report["chains"].push_back(ch);
  }
  report["rhat_parity"] = rhat(parity);
  report["rhat_energy"] = energy.size() == parity.size() ? rhat(energy) : json(nullptr);
  Sink out(a.out);
  out.os() << report.dump(2) << '\n';
  return 0;
}

int validate_plans(const Args& a) {
  if (a.attrs.empty()) throw CLI::RequiredError("--attrs");
  auto attrs = load_attributes(a.attrs);
  auto plans = load_plans(a.plans, attrs.size());
  auto h = parity_histogram(plans, attrs);
  Sink out(a.out);
  out.os() << "bin_lower,bin_upper,count,cumulative\n";
  std::size_t cum = 0;
  for (std::size_t b = 0; b < ParityHistogram::kBins; ++b) {
    cum += h.counts[b];
    out.os() << fmt(b * ParityHistogram::kWidth) << ',' << fmt((b + 1) * ParityHistogram::kWidth) << ','
             << h.counts[b] << ',' << cum << '\n';
  }
  out.os() << fmt(ParityHistogram::kBins * ParityHistogram::kWidth) << ",inf," << h.overflow << ',' << h.total()
           << '\n';
  if (!a.truth.empty()) {
    auto truth = load_plans(a.truth, attrs.size());
    std::vector<double> x, y;
    for (const auto& pt : plans) {
      if (parity_deviation(pt, attrs) <= a.parity) x.push_back(dissimilarity(pt, attrs));
    }
    for (const auto& pt : truth) {
      if (parity_deviation(pt, attrs) <= a.parity) y.push_back(dissimilarity(pt, attrs));
    }
    auto ks = ks_two_sample(x, y);
    std::cerr << "ks_statistic " << fmt(ks.statistic) << " ks_p " << fmt(ks.p_value) << " n " << ks.n << " m "
              << ks.m << '\n';
  }
  return 0;
}

SamplerKind sampler_kind(const std::string& s) {
  if (s == "zdd-uniform") return SamplerKind::zdd_uniform;
  if (s == "mcmc") return SamplerKind::mcmc;
  if (s == "rsg") return SamplerKind::rsg;
  if (s == "fixed") return SamplerKind::fixed;
  throw CLI::ValidationError("--samplers", "unknown sampler '" + s + "'");
}

int cmd_validate(const Args& a) {
  if (!a.plans.empty()) return validate_plans(a);
  Graph g = need_graph(a);
  auto attrs = need_attrs(a, g.vertex_count());
  StudyConfig cfg;
  cfg.submap_size = a.submap_size;
  cfg.map_count = a.maps;
  cfg.districts = a.p;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  cfg.parity_levels.clear();
  for (const auto& l : a.levels) cfg.parity_levels.push_back(parse_level(l));
  for (const auto& s : a.samplers) {
    SamplerSpec spec;
    spec.kind = sampler_kind(s);
    spec.draws = a.n;
    spec.thinning = a.thin;
    spec.beta_parity = a.level_betas;
    cfg.samplers.push_back(spec);
  }
  auto res = run_submap_study(g, attrs, cfg);
  const std::string prefix = a.out.empty() ? "study_" : a.out;
  {
    Sink ks(prefix + "ks.csv");
    ks.os() << "map_id,parity_level,sampler,status,truth_size,sample_size,ks_statistic,ks_p\n";
    for (const auto& r : res.rows) {
      ks.os() << r.map_id << ',' << fmt(r.parity_level) << ',' << r.sampler << ',' << to_string(r.status) << ','
              << r.truth_size << ',' << r.sample_size << ',' << fmt(r.ks_statistic) << ',' << fmt(r.ks_p) << '\n';
    }
  }
  Sink qq(prefix + "qq.csv");
  qq.os() << "sampler,parity_level,expected,observed\n";
  std::cout << "sampler,parity_level,maps,median_p,qq_max_deviation\n";
  for (const auto& spec : cfg.samplers) {
    for (double level : cfg.parity_levels) {
      auto pv = res.p_values(spec.label(), level);
      if (pv.empty()) {
        std::cout << spec.label() << ',' << fmt(level) << ",0,,\n";
        continue;
      }
      auto pts = qq_uniform(pv);
      for (const auto& q : pts) {
        qq.os() << spec.label() << ',' << fmt(level) << ',' << fmt(q.expected) << ',' << fmt(q.observed) << '\n';
      }
      std::sort(pv.begin(), pv.end());
      const double median = pv.size() % 2 ? pv[pv.size() / 2] : 0.5 * (pv[pv.size() / 2 - 1] + pv[pv.size() / 2]);
      std::cout << spec.label() << ',' << fmt(level) << ',' << pv.size() << ',' << fmt(median) << ','
                << fmt(qq_max_deviation(pts)) << '\n';
    }
  }
  return 0;
}

int cmd_submap(const Args& a) {
  Graph g = need_graph(a);
  auto sub = induced_subgraph(g, sample_contiguous_submap(g, a.n, a.seed));
  {
    Sink out(a.out);
    write_graph(out.os(), sub.graph);
  }
  if (!a.map_out.empty()) {
    Sink m(a.map_out);
    m.os() << "local,original\n";
    for (std::size_t i = 0; i < sub.original.size(); ++i) m.os() << i + 1 << ',' << sub.original[i] + 1 << '\n';
  }
  if (!a.attrs_out.empty()) {
    auto attrs = need_attrs(a, g.vertex_count());
    Sink at(a.attrs_out);
    write_attributes(at.os(), attrs.subset(sub.original));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connected-partition enumeration, counting, sampling and sampler validation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Args a;

  auto graph_opt = [&](CLI::App* c) { c->add_option("--graph", a.graph, "graph file (n m, then 1-based edges)"); };
  auto source_opts = [&](CLI::App* c) {
    graph_opt(c);
    c->add_option("--order", a.order, "edge order file (default: computed)");
    c->add_option("--zdd", a.zdd, "diagram dump from 'build' (replaces --graph/--order/--p)");
    c->add_option("--p", a.p, "number of districts");
    c->add_option("--mem-cap", a.mem_cap_mib, "memory cap for the node table, MiB");
  };
  auto gibbs_opts = [&](CLI::App* c) {
    c->add_option("--beta-p", a.beta_p, "parity temperature");
    c->add_option("--beta-c", a.beta_c, "compactness temperature");
    c->add_option("--rpi-denom", a.rpi_denom, "RPI denominator value");
    c->add_option("--rpi-ref", a.rpi_ref, "plan file whose minimum proximity sum is the RPI denominator");
  };

  auto* order = app.add_subcommand("order", "compute a low-frontier edge order");
  graph_opt(order);
  order->add_option("--order", a.order, "check and re-emit an existing order");
  order->add_option("--out", a.out, "output order file (default stdout)");

  auto* build = app.add_subcommand("build", "build the diagram and write a dump");
  source_opts(build);
  build->add_option("--out", a.out, "output dump (default stdout)");

  auto* count = app.add_subcommand("count", "print the number of connected p-partitions");
  source_opts(count);
  count->add_option("--out", a.out);

  auto* sample = app.add_subcommand("sample", "draw plans uniformly at random");
  source_opts(sample);
  sample->add_option("--n", a.n, "number of plans");
  sample->add_option("--seed", a.seed);
  sample->add_option("--workers", a.workers);
  sample->add_option("--out", a.out, "plan file (default stdout)");

  auto* enumerate_cmd = app.add_subcommand("enum", "list every plan");
  source_opts(enumerate_cmd);
  enumerate_cmd->add_option("--out", a.out, "plan file (default stdout)");

  auto* metrics = app.add_subcommand("metrics", "score plans: parity, dissimilarity, RPI, energy");
  graph_opt(metrics);
  metrics->add_option("--attrs", a.attrs, "attribute CSV")->required();
  metrics->add_option("--plans", a.plans, "plan file")->required();
  gibbs_opts(metrics);
  metrics->add_option("--out", a.out, "CSV (default stdout)");

  auto* rsg = app.add_subcommand("rsg", "random seed-and-grow plans");
  graph_opt(rsg);
  rsg->add_option("--attrs", a.attrs, "attribute CSV (needed for --diag)");
  rsg->add_option("--p", a.p);
  rsg->add_option("--n", a.n);
  rsg->add_option("--seed", a.seed);
  gibbs_opts(rsg);
  rsg->add_option("--out", a.out, "plan file (default stdout)");
  rsg->add_option("--diag", a.diag_out, "JSON-lines diagnostics");

  auto* mcmc = app.add_subcommand("mcmc", "boundary-flip Metropolis chains");
  graph_opt(mcmc);
  mcmc->add_option("--attrs", a.attrs, "attribute CSV");
  mcmc->add_option("--p", a.p);
  mcmc->add_option("--seed", a.seed);
  gibbs_opts(mcmc);
  mcmc->add_option("--parity", a.parity, "hard parity bound for the chain and for --resampled");
  mcmc->add_option("--compactness-q", a.compactness_q, "hard RPI bound (needs an RPI denominator)");
  mcmc->add_option("--iters", a.iters, "iterations per chain");
  mcmc->add_option("--thin", a.thin, "record every k-th iteration");
  mcmc->add_option("--burn-in", a.burn_in);
  mcmc->add_option("--chains", a.chains);
  mcmc->add_option("--workers", a.workers);
  mcmc->add_option("--out", a.out, "recorded plans, chains concatenated (default stdout)");
  mcmc->add_option("--diag", a.diag_out, "JSON-lines diagnostics");
  mcmc->add_option("--resampled", a.resampled_out, "filtered, reweighted and resampled plans");

  auto* diag = app.add_subcommand("diag", "R-hat and autocorrelation from diagnostic files");
  diag->add_option("--in", a.inputs, "JSON-lines files")->required();
  diag->add_option("--thin", a.thin, "thin records before analysis");
  diag->add_option("--lags", a.lags, "autocorrelation lags");
  diag->add_option("--out", a.out, "JSON report (default stdout)");

  auto* validate = app.add_subcommand("validate", "submap study, or parity histogram of a plan file");
  graph_opt(validate);
  validate->add_option("--attrs", a.attrs, "attribute CSV");
  validate->add_option("--plans", a.plans, "histogram mode: plan file");
  validate->add_option("--truth", a.truth, "histogram mode: reference plans for a KS test");
  validate->add_option("--parity", a.parity, "histogram mode: parity bound for the KS test");
  validate->add_option("--p", a.p);
  validate->add_option("--seed", a.seed);
  validate->add_option("--n", a.n, "draws per sampler and map");
  validate->add_option("--thin", a.thin, "MCMC thinning");
  validate->add_option("--beta-p", a.level_betas, "MCMC parity temperature per level");
  validate->add_option("--levels", a.levels, "parity levels (inf allowed)");
  validate->add_option("--samplers", a.samplers, "zdd-uniform, mcmc, rsg, fixed");
  validate->add_option("--submap-size", a.submap_size);
  validate->add_option("--maps", a.maps);
  validate->add_option("--workers", a.workers);
  validate->add_option("--out", a.out, "study: output prefix; histogram: CSV path");

  auto* submap = app.add_subcommand("submap", "random contiguous submap");
  graph_opt(submap);
  submap->add_option("--attrs", a.attrs, "attribute CSV (for --attrs-out)");
  submap->add_option("--n", a.n, "submap size");
  submap->add_option("--seed", a.seed);
  submap->add_option("--out", a.out, "graph file (default stdout)");
  submap->add_option("--attrs-out", a.attrs_out);
  submap->add_option("--map-out", a.map_out, "local,original vertex table");

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    std::cerr << "unknown subcommand '" << argv[1] << "'\n" << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*order) return cmd_order(a);
    if (*build) return cmd_build(a);
    if (*count) return cmd_count(a);
    if (*sample) return cmd_sample(a);
    if (*enumerate_cmd) return cmd_enum(a);
    if (*metrics) return cmd_metrics(a);
    if (*rsg) return cmd_rsg(a);
    if (*mcmc) return cmd_mcmc(a);
    if (*diag) return cmd_diag(a);
    if (*validate) return cmd_validate(a);
    if (*submap) return cmd_submap(a);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "resource: " << e.what() << '\n';
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource: out of memory\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "data: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
