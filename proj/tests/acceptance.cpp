// Acceptance run: one PASS/FAIL/SKIP line per criterion.
// usage: acceptance [cli-binary data-dir work-dir]
// Criterion 8 reads PARTZDD_DATASETS (a directory with map70.* and map25.*).

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "oracle.hpp"
#include "partzdd/partzdd.hpp"

using namespace partzdd;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  enum { pass, fail, skip } state;
  std::string detail;
};

Verdict ok(bool good, std::string detail) { return {good ? Verdict::pass : Verdict::fail, std::move(detail)}; }

std::string str(const BigCount& c) {
  std::ostringstream s;
  s << c;
  return s.str();
}

// 1: counts and plan sets against exhaustive search.
Verdict oracle_equivalence() {
  auto t0 = Clock::now();
  std::size_t cases = 0, bad = 0;
  auto check = [&](std::size_t n, const std::vector<std::pair<int, int>>& edges, std::size_t p) {
    ++cases;
    auto want = oracle::connected_partitions(n, edges, p);
    Zdd z = build_zdd(testing_util::to_graph(n, edges), p);
    auto got = testing_util::labels_of(enumerate_all(z));
    std::sort(got.begin(), got.end());
    if (count_partitions(z) != want.size() || got != want) {
      ++bad;
      std::cout << "  mismatch n=" << n << " p=" << p << " count " << count_partitions(z) << " vs " << want.size()
                << '\n';
    }
  };
  for (int r = 1; r <= 4; ++r) {
    for (int c = 1; c <= 4; ++c) {
      if (r * c > 12) continue;
      for (std::size_t p = 1; p <= 4; ++p) check(static_cast<std::size_t>(r * c), oracle::grid_edges(r, c), p);
    }
  }
  check(6, oracle::example_edges(), 2);
  const double secs = seconds_since(t0);
  return ok(bad == 0 && secs < 60, std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches, " +
                                       std::to_string(secs) + " s");
}

// 2: 8x8 grid, p = 2.
Verdict checkerboard(std::optional<Zdd>& keep) {
  auto t0 = Clock::now();
  Zdd z = build_zdd(grid_graph(8, 8), 2);
  const BigCount c = count_partitions(z);
  const double secs = seconds_since(t0);
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  const double peak_mb = static_cast<double>(ru.ru_maxrss) / 1024.0;
  keep = std::move(z);
  const bool good = c > BigCount(120000000000ULL) && secs < 60 && peak_mb < 2048;
  return ok(good, "count " + str(c) + ", " + std::to_string(secs) + " s, peak RSS " + std::to_string(peak_mb) + " MB");
}

// 3: frontiers of the running example and empty ends on random orders.
Verdict frontier_fidelity() {
  Graph g = example_graph();
  auto f = frontiers(g, identity_order(g).perm);
  const bool example = f.size() == 8 && f[4] == std::vector<Vertex>{2, 3} && f[5] == std::vector<Vertex>{3, 4};
  std::mt19937_64 gen(17);
  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + gen() % 15;
    auto edges = testing_util::random_connected_edges(n, gen() % 10, gen);
    Graph h = testing_util::to_graph(n, edges);
    std::vector<EdgeIndex> perm(h.edge_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    auto fs = frontiers(h, perm);
    if (!fs.front().empty() || !fs.back().empty() || fs.size() != h.edge_count() + 1) ++bad;
  }
  return ok(example && bad == 0, std::string("F4={v3,v4} F5={v4,v5} ") + (example ? "reproduced" : "differ") +
                                     ", empty ends failed on " + std::to_string(bad) + "/100");
}

// 4: chi-square uniformity of the exact sampler on small fixtures.
Verdict sampling_exactness() {
  struct Fixture {
    std::string name;
    Graph g;
    std::size_t p;
  };
  std::vector<Fixture> fx;
  for (std::size_t r = 1; r <= 3; ++r) {
    for (std::size_t c = 1; c <= 4; ++c) {
      for (std::size_t p = 1; p <= 4; ++p) {
        fx.push_back({"grid" + std::to_string(r) + "x" + std::to_string(c) + "/p" + std::to_string(p),
                      grid_graph(r, c), p});
      }
    }
  }
  for (std::size_t p = 1; p <= 6; ++p) fx.push_back({"example/p" + std::to_string(p), example_graph(), p});
  for (std::size_t p = 2; p <= 4; ++p) {
    fx.push_back({"tri3x3/p" + std::to_string(p), triangulated_grid_graph(3, 3), p});
    fx.push_back({"queen3x3/p" + std::to_string(p), queen_grid_graph(3, 3), p});
  }
  std::size_t used = 0, trials = 0, failures = 0, worst = 0;
  std::string worst_name;
  for (const auto& f : fx) {
    if (f.p > f.g.vertex_count()) continue;
    Zdd z = build_zdd(f.g, f.p);
    PathCountTable counts(z);
    if (counts.root() > 10000 || counts.root() < 2) continue;
    ++used;
    const auto k = counts.root().convert_to<std::size_t>();
    std::map<Partition, std::size_t> index;
    for (const auto& pt : enumerate_all(z)) index.emplace(pt, index.size());
    std::size_t fixture_fail = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      std::vector<std::uint64_t> tally(k, 0);
      for (const auto& pt : sample_uniform(z, counts, seed * 7919 + used, 100 * k)) ++tally[index.at(pt)];
      ++trials;
      if (chi_square_uniformity(tally).p_value <= 0.001) ++fixture_fail;
    }
    failures += fixture_fail;
    if (fixture_fail > worst) {
      worst = fixture_fail;
      worst_name = f.name;
    }
  }
  return ok(worst <= 1, std::to_string(used) + " fixtures x 20 seeds, " + std::to_string(failures) + " of " +
                            std::to_string(trials) + " tests below 0.001 (expected " +
                            std::to_string(0.001 * static_cast<double>(trials)) + "), worst fixture " +
                            std::to_string(worst) + "/20" + (worst_name.empty() ? "" : " " + worst_name));
}

// 5: metric values.
Verdict unit_values() {
  const double parity = parity_deviation(std::vector<double>{60, 40});
  VertexAttributes a;
  a.population = {10, 10, 10, 10};
  a.rep_share = std::vector<double>{1, 1, 0, 0};
  const double dis = dissimilarity(Partition::from_canonical({1, 1, 2, 2}), a);
  GibbsParams gp;
  gp.beta_parity = 10;
  const double energy = gibbs_energy(parity_terms(std::vector<double>{60, 40}), {}, gp);
  const bool good = std::abs(parity - 0.2) <= 1e-12 && std::abs(dis - 1) <= 1e-12 && std::abs(energy - 4) <= 1e-12;
  std::ostringstream s;
  s << std::setprecision(17) << "parity " << parity << ", dissimilarity " << dis << ", energy " << energy;
  return ok(good, s.str());
}

// 6: KS p-values between independent exact samples are uniform.
Verdict ks_calibration(const Zdd& z) {
  PathCountTable counts(z);
  auto attrs = grid_attributes(8, 8, 3);
  std::vector<double> pv;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    std::vector<double> x, y;
    for (const auto& pt : sample_uniform(z, counts, 2 * rep + 1, 500)) x.push_back(dissimilarity(pt, attrs));
    for (const auto& pt : sample_uniform(z, counts, 2 * rep + 2, 500)) y.push_back(dissimilarity(pt, attrs));
    pv.push_back(ks_two_sample(x, y).p_value);
  }
  const double d = ks_uniform_distance(pv);
  return ok(d < 0.1, "KS distance of 200 p-values from uniform " + std::to_string(d));
}

// 7: desk-scale rerun of the many-submaps study.
Verdict submap_study() {
  auto t0 = Clock::now();
  Graph g = queen_grid_graph(10, 10);
  auto attrs = grid_attributes(10, 10, 11);
  StudyConfig cfg;
  cfg.submap_size = 25;
  cfg.map_count = 200;
  cfg.districts = 2;
  cfg.parity_levels = {std::numeric_limits<double>::infinity(), 0.2, 0.1};
  cfg.seed = 5;
  SamplerSpec chain;
  chain.kind = SamplerKind::mcmc;
  chain.draws = 300;
  chain.thinning = 200;
  SamplerSpec grow;
  grow.kind = SamplerKind::rsg;
  grow.draws = 300;
  cfg.samplers = {chain, grow};
  auto res = run_submap_study(g, attrs, cfg);
  bool good = true;
  std::ostringstream s;
  s << std::setprecision(3);
  for (double level : cfg.parity_levels) {
    auto mc = res.p_values("mcmc", level);
    auto rs = res.p_values("rsg", level);
    if (mc.size() < 50 || rs.size() < 50) {
      good = false;
      s << "level " << level << ": too few maps; ";
      continue;
    }
    const double dev = qq_max_deviation(qq_uniform(mc));
    std::sort(rs.begin(), rs.end());
    const double med = rs[rs.size() / 2];
    good = good && dev <= 0.15 && med < 0.05;
    s << "level " << level << ": mcmc qq " << dev << " (" << mc.size() << " maps), rsg median p " << med << "; ";
  }
  s << seconds_since(t0) << " s";
  return ok(good, s.str());
}

// 8: exact counts on public maps, when supplied.
Verdict dataset_reproductions() {
  const char* dir = std::getenv("PARTZDD_DATASETS");
  if (!dir) return {Verdict::skip, "PARTZDD_DATASETS not set"};
  struct Target {
    std::string stem;
    std::size_t p;
    std::string count;
    std::vector<std::pair<double, std::size_t>> within;
  };
  std::vector<Target> targets{{"map70", 2, "44082156", {{0.01, 717060}, {0.05, 3678453}}},
                              {"map25", 3, "117688", {{0.01, 8}}}};
  std::ostringstream s;
  bool good = true;
  std::size_t ran = 0;
  for (const auto& t : targets) {
    const fs::path gp = fs::path(dir) / (t.stem + ".graph");
    const fs::path ap = fs::path(dir) / (t.stem + ".attrs.csv");
    if (!fs::exists(gp) || !fs::exists(ap)) {
      s << t.stem << " absent; ";
      continue;
    }
    ++ran;
    Graph g = load_graph(gp.string());
    auto attrs = load_attributes(ap.string(), g.vertex_count());
    Zdd z = build_zdd(g, t.p);
    PathCountTable counts(z);
    std::vector<std::size_t> hits(t.within.size(), 0);
    PlanDecoder dec(z);
    std::vector<std::uint32_t> labels;
    std::vector<double> pop;
    for_each_path(z, counts, [&](const std::vector<char>& taken) {
      const auto k = dec.decode_labels(taken, labels);
      pop.assign(k, 0.0);
      for (std::size_t v = 0; v < labels.size(); ++v) pop[labels[v] - 1] += static_cast<double>(attrs.population[v]);
      const double dev = parity_deviation(pop);
      for (std::size_t i = 0; i < t.within.size(); ++i) hits[i] += dev <= t.within[i].first;
    });
    const bool count_ok = str(counts.root()) == t.count;
    good = good && count_ok;
    s << t.stem << " count " << counts.root() << (count_ok ? "" : " (want " + t.count + ")");
    for (std::size_t i = 0; i < t.within.size(); ++i) {
      good = good && hits[i] == t.within[i].second;
      s << ", <=" << t.within[i].first << ": " << hits[i] << " (want " << t.within[i].second << ")";
    }
    s << "; ";
  }
  if (ran == 0) return {Verdict::skip, s.str()};
  return ok(good, s.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9: each subcommand twice with a fixed seed and one worker; outputs compared byte for byte.
Verdict determinism(const std::string& cli, const std::string& data, const fs::path& work) {
  const std::string G = data + "/grid3x4.graph", A = data + "/grid3x4.attrs.csv";
  const std::string Q = data + "/queen10x10.graph", QA = data + "/queen10x10.attrs.csv";
  // {name, arguments}; "@" expands to the run directory.
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"order", "order --graph " + G + " --out @/o.txt"},
      {"build", "build --graph " + G + " --order @/o.txt --p 3 --out @/z.txt"},
      {"count", "count --zdd @/z.txt --out @/count.txt"},
      {"sample", "sample --zdd @/z.txt --n 500 --seed 7 --workers 1 --out @/sample.txt"},
      {"enum", "enum --zdd @/z.txt --out @/enum.txt"},
      {"metrics", "metrics --graph " + G + " --attrs " + A + " --plans @/sample.txt --rpi-ref @/enum.txt --beta-p 3 "
                  "--beta-c 1 --out @/metrics.csv"},
      {"rsg", "rsg --graph " + G + " --attrs " + A + " --p 3 --n 200 --seed 7 --out @/rsg.txt --diag @/rsg.jsonl"},
      {"mcmc", "mcmc --graph " + G + " --attrs " + A + " --p 3 --iters 5000 --thin 10 --chains 3 --seed 7 "
               "--beta-p 2 --parity 0.5 --workers 1 --out @/mcmc.txt --diag @/mcmc.jsonl --resampled @/res.txt"},
      {"diag", "diag --in @/mcmc.jsonl --lags 1 5 10 --out @/diag.json"},
      {"validate", "validate --graph " + Q + " --attrs " + QA + " --p 2 --submap-size 12 --maps 6 --n 100 --thin 20 "
                   "--seed 7 --workers 1 --out @/study_"},
      {"submap", "submap --graph " + Q + " --attrs " + QA + " --n 20 --seed 7 --out @/sub.graph --attrs-out "
                 "@/sub.csv --map-out @/sub.map"},
  };
  std::vector<std::string> failed;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = work / run;
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto& [name, args] : cmds) {
      std::string line = args;
      for (std::size_t pos; (pos = line.find('@')) != std::string::npos;) line.replace(pos, 1, dir.string());
      const std::string full = "\"" + cli + "\" " + line + " > \"" + (dir / (name + ".stdout")).string() + "\" 2> \"" +
                               (dir / (name + ".stderr")).string() + "\"";
      if (std::system(full.c_str()) != 0) failed.push_back(name + " (exit status)");
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(work / "a")) {
    ++files;
    const auto other = work / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) failed.push_back(entry.path().filename().string());
  }
  std::string detail = std::to_string(cmds.size()) + " subcommands, " + std::to_string(files) + " files compared";
  for (const auto& f : failed) detail += "; differs: " + f;
  return ok(failed.empty() && files > 2 * cmds.size(), detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<Zdd> grid8;
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 brute-force oracle equivalence", oracle_equivalence},
      {"2 checkerboard scale", [&] { return checkerboard(grid8); }},
      {"3 frontier fidelity", frontier_fidelity},
      {"4 uniform-sampling exactness", sampling_exactness},
      {"5 metric unit values", unit_values},
      {"6 KS calibration", [&] { return ks_calibration(grid8 ? *grid8 : build_zdd(grid_graph(8, 8), 2)); }},
      {"7 submap study pattern", submap_study},
      {"8 dataset-gated reproductions", dataset_reproductions},
      {"9 determinism",
       [&]() -> Verdict {
         if (argc < 4) return {Verdict::skip, "no CLI path given"};
         return determinism(argv[1], argv[2], argv[3]);
       }},
  };
  int failures = 0;
  for (auto& [name, run] : criteria) {
    Verdict v{Verdict::fail, ""};
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.state == Verdict::pass ? "PASS" : v.state == Verdict::skip ? "SKIP" : "FAIL";
    failures += v.state == Verdict::fail;
    std::cout << tag << "  criterion " << name << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
