// chainsim: generate closed chains, run the gathering simulation with the
// verification harness attached, and benchmark the round bound.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <chainsim/generator.hpp>
#include <chainsim/invariants.hpp>
#include <chainsim/pairs.hpp>
#include <chainsim/render.hpp>
#include <chainsim/trace.hpp>
#include <chainsim/verify.hpp>

using namespace chainsim;

namespace {

constexpr int kExitUsage = 2;      // bad flags or generator spec
constexpr int kExitInvariant = 3;  // a named check or the ledger failed
constexpr int kExitBound = 4;      // did not gather within the round limit

constexpr std::uint64_t kRoundBound = 27;  // bench ratio column limit

const std::vector<std::string> kCheckNames = {
    "run_advance", "runner_quasiline_window", "no_sequent_ahead",
    "run_op_classified", "chain_valid", "length_monotone", "pairs"};

// Generator specs: rectangle:WxH | random:n=N,seed=S | quasiline:len=L,side=S[,zigs=Z,seed=R]
ClosedChain make_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto fields = [&args] {
    std::map<std::string, long long> out;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("expected key=value: " + item);
      out[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    }
    return out;
  };
  if (kind == "rectangle") {
    int w = 0, h = 0;
    char x = 0;
    std::stringstream ss(args);
    if (!(ss >> w >> x >> h) || x != 'x') throw std::invalid_argument("expected rectangle:WxH");
    return gen_rectangle(w, h);
  }
  if (kind == "random") {
    auto f = fields();
    if (!f.count("n")) throw std::invalid_argument("random spec needs n=");
    return gen_random_cycle(static_cast<std::size_t>(f["n"]),
                            static_cast<std::uint64_t>(f.count("seed") ? f["seed"] : 0));
  }
  if (kind == "quasiline") {
    auto f = fields();
    if (!f.count("len") || !f.count("side"))
      throw std::invalid_argument("quasiline spec needs len= and side=");
    return gen_quasiline_cycle(static_cast<int>(f["len"]), static_cast<int>(f["side"]),
                               static_cast<int>(f.count("zigs") ? f["zigs"] : 0),
                               static_cast<std::uint64_t>(f.count("seed") ? f["seed"] : 0),
                               static_cast<int>(f.count("cham") ? f["cham"] : 1));
  }
  throw std::invalid_argument("unknown generator kind: " + kind);
}

std::set<std::string> parse_checks(const std::string& setting) {
  if (setting == "all") return {kCheckNames.begin(), kCheckNames.end()};
  if (setting == "none" || setting == "off") return {};
  std::set<std::string> out;
  std::stringstream ss(setting);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kCheckNames.begin(), kCheckNames.end(), item) == kCheckNames.end())
      throw std::invalid_argument("unknown check name: " + item);
    out.insert(item);
  }
  return out;
}

struct RunConfig {
  std::string gen = "rectangle:10x10";
  std::uint64_t max_rounds = 0;  // 0: 30 * n
  std::string checks = "all";
  std::string trace_path;
  std::string render_dir;
  std::vector<std::size_t> frames;  // empty: all recorded rounds
};

int cmd_run(const RunConfig& cfg) {
  ClosedChain chain;
  std::set<std::string> enabled;
  try {
    chain = make_from_spec(cfg.gen);
    enabled = parse_checks(cfg.checks);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto n = chain.size();
  const std::uint64_t limit = cfg.max_rounds ? cfg.max_rounds : 30 * static_cast<std::uint64_t>(n);
  const bool capture = !cfg.trace_path.empty() || !cfg.render_dir.empty();
  const bool named_checks = std::any_of(enabled.begin(), enabled.end(),
                                        [](const std::string& s) { return s != "pairs"; });
  const bool pairs = enabled.count("pairs") > 0;

  PairLedger ledger;
  Trace trace;
  trace.initial_robots = n;
  std::vector<std::string> failures;
  std::uint64_t rounds = 0, fused = 0;
  const auto add_failure = [&](std::uint64_t round, const std::string& what) {
    if (failures.size() < 128)
      failures.push_back("round " + std::to_string(round) + ": " + what);
  };

  while (!is_gathered(chain) && rounds < limit) {
    const ClosedChain before = chain;
    const RoundPlan plan = compute_round(chain);
    const RoundEvents ev = apply_round(chain, plan);
    ++rounds;
    fused += ev.fused;
    for (const auto& p : ev.problems) add_failure(ev.round, p);
    if (named_checks) {
      const auto rep = check_invariants(before, plan, ev, chain);
      for (const auto& c : rep.checks)
        if (!c.pass && enabled.count(c.name)) add_failure(ev.round, c.name + " failed: " + c.detail);
    }
    if (pairs) {
      const auto seen = ledger.problems().size();
      ledger.observe(before, plan, ev, chain);
      for (auto i = seen; i < ledger.problems().size(); ++i) add_failure(ev.round, ledger.problems()[i]);
    }
    if (capture) trace.records.push_back(make_trace_record(chain, ev));
  }
  if (pairs) {
    const auto seen = ledger.problems().size();
    ledger.finalize(n, chain.round);
    for (auto i = seen; i < ledger.problems().size(); ++i) add_failure(chain.round, ledger.problems()[i]);
  }

  if (!cfg.trace_path.empty()) {
    std::ofstream out(cfg.trace_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write trace to " << cfg.trace_path << "\n";
      return kExitUsage;
    }
    write_trace(trace, out);
  }
  if (!cfg.render_dir.empty()) {
    std::filesystem::create_directories(cfg.render_dir);
    const auto files = render_frames(trace, cfg.render_dir, cfg.frames);
    std::cout << "frames written: " << files.size() << "\n";
  }

  const bool gathered = is_gathered(chain);
  const auto [w, h] = bounding_box(chain);
  std::cout << "gen: " << cfg.gen << "\n";
  std::cout << "n: " << n << "\n";
  std::cout << "rounds: " << rounds << "\n";
  std::cout << "gathered: " << (gathered ? "yes" : "no") << "\n";
  std::cout << "final box: " << w << "x" << h << "\n";
  std::cout << "robots fused: " << fused << "\n";
  if (pairs)
    std::cout << "progress pairs: " << ledger.progress_count() << " (ambiguous credits: "
              << ledger.ambiguous_count() << ")\n";
  for (const auto& f : failures) std::cout << "failure: " << f << "\n";

  if (!failures.empty()) return kExitInvariant;
  if (!gathered) return kExitBound;
  return 0;
}

struct BenchConfig {
  std::string family = "rectangle";
  std::vector<std::size_t> sizes = {4, 8, 16, 32};
  std::uint64_t seeds = 10;
  std::uint64_t max_rounds = 0;
};

int cmd_bench(const BenchConfig& cfg) {
  const auto make = [&](std::size_t size, std::uint64_t seed) -> ClosedChain {
    if (cfg.family == "rectangle") return gen_rectangle(static_cast<int>(size), static_cast<int>(size));
    if (cfg.family == "random") return gen_random_cycle(size, seed);
    if (cfg.family == "quasiline")
      return gen_quasiline_cycle(static_cast<int>(size), 11, 0, seed);
    throw std::invalid_argument("unknown family: " + cfg.family);
  };
  const std::uint64_t seeds = cfg.family == "rectangle" ? 1 : cfg.seeds;

  bool ok = true;
  std::printf("%-10s %6s %6s %12s %11s %8s\n", "family", "n", "runs", "mean_rounds", "max_rounds",
              "max/n");
  for (const auto size : cfg.sizes) {
    struct Row {
      std::size_t n;
      std::uint64_t rounds;
      bool gathered;
    };
    std::vector<std::future<Row>> futures;
    try {
      make(size, 0);  // validate the spec before launching
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    for (std::uint64_t seed = 0; seed < seeds; ++seed)
      futures.push_back(std::async(std::launch::async, [&, size, seed] {
        ClosedChain chain = make(size, seed);
        const auto n = chain.size();
        SimOptions opts;
        opts.max_rounds = cfg.max_rounds;
        const auto rep = simulate(chain, opts);
        return Row{n, rep.rounds, rep.gathered};
      }));
    std::uint64_t total = 0, worst = 0;
    std::size_t n = 0;
    bool gathered = true;
    for (auto& f : futures) {
      const Row row = f.get();
      n = row.n;
      total += row.rounds;
      worst = std::max(worst, row.rounds);
      gathered = gathered && row.gathered;
    }
    const double mean = static_cast<double>(total) / static_cast<double>(seeds);
    const double ratio = static_cast<double>(worst) / static_cast<double>(n);
    std::printf("%-10s %6zu %6llu %12.1f %11llu %8.3f\n", cfg.family.c_str(), n,
                static_cast<unsigned long long>(seeds), mean,
                static_cast<unsigned long long>(worst), ratio);
    if (!gathered || ratio > static_cast<double>(kRoundBound)) ok = false;
  }
  return ok ? 0 : kExitBound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic gathering simulator for closed grid chains"};
  app.require_subcommand(1);
  app.set_config("--config");

  RunConfig run_cfg;
  auto* run = app.add_subcommand("run", "simulate one chain with checks");
  run->add_option("--gen", run_cfg.gen,
                  "generator spec: rectangle:WxH | random:n=N,seed=S | "
                  "quasiline:len=L,side=S,zigs=Z,seed=R");
  run->add_option("--max-rounds", run_cfg.max_rounds, "round limit (default 30*n)");
  run->add_option("--checks", run_cfg.checks, "all | none | comma list of check names");
  run->add_option("--trace", run_cfg.trace_path, "write the round trace to this file");
  run->add_option("--render", run_cfg.render_dir, "write SVG frames into this directory");
  run->add_option("--frames", run_cfg.frames, "record indices to render (default: all)")
      ->delimiter(',');

  BenchConfig bench_cfg;
  auto* bench = app.add_subcommand("bench", "round-bound table over a family");
  bench->add_option("--family", bench_cfg.family, "rectangle | random | quasiline");
  bench->add_option("--sizes", bench_cfg.sizes, "sizes (rectangle: side; random: n; quasiline: len)")
      ->delimiter(',');
  bench->add_option("--seeds", bench_cfg.seeds, "seeds per size (seeded families)");
  bench->add_option("--max-rounds", bench_cfg.max_rounds, "round limit (default 30*n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (run->parsed()) return cmd_run(run_cfg);
  return cmd_bench(bench_cfg);
}
