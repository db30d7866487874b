#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/invariants.hpp"
#include "chainsim/pairs.hpp"
#include "chainsim/scheduler.hpp"
#include "chainsim/trace.hpp"

namespace chainsim {

struct VerifyOptions {
  std::uint64_t max_rounds{0};  // 0: default of 30 * initial chain length
  bool invariants{true};
  bool pairs{true};
  bool trace{false};
};

struct VerifyResult {
  SimReport report;
  ClosedChain final_chain;
  PairLedger ledger;
  Trace trace;
  std::uint64_t rounds_checked{0};
  // Invariant-check failures, scheduler problems, and ledger problems, each
  // prefixed with the round; empty on a fully healthy run.
  std::vector<std::string> failures;
};

// Runs the simulation with the full verification harness attached: per-round
// named invariant checks against a pre-round snapshot, the progress-pair ledger, and
// optional trace capture.
inline VerifyResult run_verified(ClosedChain chain, const VerifyOptions& opts = {}) {
  VerifyResult res;
  res.report.initial_robots = chain.size();
  res.trace.initial_robots = chain.size();
  const std::uint64_t limit =
      opts.max_rounds ? opts.max_rounds : 30 * static_cast<std::uint64_t>(chain.size());
  constexpr std::size_t kMaxFailures = 128;
  const auto add_failure = [&](std::uint64_t round, const std::string& what) {
    if (res.failures.size() < kMaxFailures)
      res.failures.push_back("round " + std::to_string(round) + ": " + what);
  };

  while (!is_gathered(chain) && res.report.rounds < limit) {
    const ClosedChain before = chain;
    const RoundPlan plan = compute_round(chain);
    const RoundEvents ev = apply_round(chain, plan);
    res.report.rounds += 1;
    res.report.total_fused += ev.fused;
    res.report.runs_started += ev.started.size();
    res.report.runs_ended += ev.ended.size();
    for (const auto& p : ev.problems) add_failure(ev.round, p);
    if (opts.invariants) {
      const auto rep = check_invariants(before, plan, ev, chain);
      res.rounds_checked += 1;
      for (const auto& c : rep.checks)
        if (!c.pass) add_failure(ev.round, c.name + " failed: " + c.detail);
    }
    if (opts.pairs) {
      const auto seen = res.ledger.problems().size();
      res.ledger.observe(before, plan, ev, chain);
      for (auto i = seen; i < res.ledger.problems().size(); ++i)
        add_failure(ev.round, res.ledger.problems()[i]);
    }
    if (opts.trace) res.trace.records.push_back(make_trace_record(chain, ev));
  }
  if (opts.pairs) {
    const auto seen = res.ledger.problems().size();
    res.ledger.finalize(res.report.initial_robots, chain.round);
    for (auto i = seen; i < res.ledger.problems().size(); ++i)
      add_failure(chain.round, res.ledger.problems()[i]);
  }
  res.report.gathered = is_gathered(chain);
  res.report.final_robots = chain.size();
  res.report.problems = res.failures;
  res.final_chain = std::move(chain);
  return res;
}

}  // namespace chainsim
