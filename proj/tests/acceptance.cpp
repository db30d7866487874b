// Acceptance gate: seven end-to-end criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <cstdint>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <chainsim/generator.hpp>
#include <chainsim/invariants.hpp>
#include <chainsim/render.hpp>
#include <chainsim/trace.hpp>
#include <chainsim/verify.hpp>

using namespace chainsim;

namespace {

struct Outcome {
  bool pass{true};
  std::string detail;

  void fail(const std::string& what) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

constexpr std::uint64_t kRoundBound = 27;  // gathering within 27 * n rounds

// Shared by criteria 1-3: run with the full harness, check gathering, the
// linear bound, and that the invariant suite was clean on every round.
void check_verified_run(Outcome& out, ClosedChain chain, const std::string& label) {
  const auto n = chain.size();
  auto res = run_verified(std::move(chain));
  if (!res.report.gathered) out.fail(label + ": did not gather");
  if (res.report.rounds > kRoundBound * n)
    out.fail(label + ": " + std::to_string(res.report.rounds) + " rounds > 27n");
  if (res.rounds_checked != res.report.rounds) out.fail(label + ": rounds missing checks");
  if (!res.failures.empty()) out.fail(label + ": " + res.failures.front());
}

Outcome criterion1_linear_bound() {
  Outcome out;
  for (const int s : {4, 8, 16, 32, 64})
    check_verified_run(out, gen_rectangle(s, s), "rectangle " + std::to_string(s));
  for (const std::size_t n : {64u, 128u, 256u, 512u, 1024u})
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      check_verified_run(out, gen_random_cycle(n, seed),
                         "random n=" + std::to_string(n) + " seed=" + std::to_string(seed));
  return out;
}

Outcome criterion2_quasiline_family() {
  Outcome out;
  const std::vector<std::tuple<int, int, int, std::uint64_t>> family = {
      {11, 11, 0, 0}, {11, 11, 0, 1}, {11, 11, 0, 2}, {20, 12, 2, 5},
      {26, 12, 1, 3}, {30, 13, 2, 1}, {24, 13, 2, 7}, {40, 15, 2, 4},
  };
  for (const auto [len, side, zigs, seed] : family) {
    const std::string label = "quasiline " + std::to_string(len) + "/" + std::to_string(side) +
                              "/" + std::to_string(zigs) + "/" + std::to_string(seed);
    const auto n = gen_quasiline_cycle(len, side, zigs, seed).size();
    auto res = run_verified(gen_quasiline_cycle(len, side, zigs, seed));
    if (!res.report.gathered) out.fail(label + ": did not gather");
    if (res.report.rounds > kRoundBound * n)
      out.fail(label + ": " + std::to_string(res.report.rounds) + " rounds > 27n");
    if (!res.failures.empty()) out.fail(label + ": " + res.failures.front());
    const auto good_at_zero =
        std::count_if(res.ledger.pairs().begin(), res.ledger.pairs().end(),
                      [](const TrackedPair& p) { return p.good && p.start_round == 0; });
    if (good_at_zero < 1) out.fail(label + ": no good pair at round 0");
    // Every period boundary before gathering shows a merge in its window or
    // a freshly started progress pair.
    for (std::uint64_t r = 0; r < res.report.rounds; r += kStartPeriod)
      if (!res.ledger.merged_in_window(r, kStartPeriod - 1) &&
          !res.ledger.progress_started_at(r))
        out.fail(label + ": boundary round " + std::to_string(r) + " shows no progress");
  }
  return out;
}

// Criterion 3 (the per-round invariant suite) is exercised inside the runs of
// criteria 1 and 2; this criterion re-runs a sample and requires that the
// suite actually produced named results every round.
Outcome criterion3_invariant_suite() {
  Outcome out;
  const std::vector<std::string> names = {
      "run_advance",     "runner_quasiline_window", "no_sequent_ahead",
      "run_op_classified", "chain_valid",           "length_monotone"};
  for (ClosedChain chain : {gen_rectangle(16, 16), gen_quasiline_cycle(26, 12, 1, 3)}) {
    std::uint64_t rounds = 0;
    while (!is_gathered(chain) && rounds < 30 * 120) {
      const ClosedChain before = chain;
      const RoundPlan plan = compute_round(chain);
      const RoundEvents ev = apply_round(chain, plan);
      ++rounds;
      const auto rep = check_invariants(before, plan, ev, chain);
      for (const auto& name : names) {
        const auto* c = rep.find(name);
        if (!c) {
          out.fail("round " + std::to_string(ev.round) + ": check " + name + " missing");
        } else if (!c->pass) {
          out.fail("round " + std::to_string(ev.round) + ": " + name + ": " + c->detail);
        }
      }
      if (!out.pass) return out;
    }
    if (!is_gathered(chain)) out.fail("sample run did not gather");
  }
  return out;
}

Outcome criterion4_progress_accounting() {
  Outcome out;
  const std::vector<std::tuple<int, int, int, std::uint64_t>> family = {
      {11, 11, 0, 0}, {11, 11, 0, 1}, {11, 11, 0, 2}, {20, 12, 2, 5},
      {26, 12, 1, 3}, {30, 13, 2, 1}, {24, 13, 2, 7}, {40, 15, 2, 4},
  };
  std::size_t progress_total = 0;
  std::size_t ambiguous_total = 0;
  for (const auto [len, side, zigs, seed] : family) {
    const std::string label = "quasiline " + std::to_string(len) + "/" + std::to_string(side) +
                              "/" + std::to_string(zigs) + "/" + std::to_string(seed);
    auto res = run_verified(gen_quasiline_cycle(len, side, zigs, seed));
    std::set<std::string> keys;
    for (const auto& p : res.ledger.pairs()) {
      if (!p.progress) continue;
      ++progress_total;
      if (!p.credit_round) {
        out.fail(label + ": progress pair never credited");
        continue;
      }
      if (*p.credit_round - p.start_round > res.report.initial_robots)
        out.fail(label + ": credit later than n rounds after start");
      if (!keys.insert(p.credit_key).second)
        out.fail(label + ": two pairs share credited merge " + p.credit_key);
    }
    ambiguous_total += res.ledger.ambiguous_count();
  }
  if (progress_total == 0) out.fail("no progress pairs identified");
  // Strictly below 1% ambiguous credits across the family.
  if (100 * ambiguous_total >= progress_total)
    out.fail(std::to_string(ambiguous_total) + "/" + std::to_string(progress_total) +
             " ambiguous credits");
  return out;
}

// A w x h rectangle whose bottom edge carries a one-deep dent of k robots:
// the dent floor is the only merge pattern on the chain (every other straight
// section is either longer than a pattern may be or bounded by turns to
// opposite sides). round is set to 1 so no runs start.
ClosedChain dent_rectangle(int k) {
  const int w = 30, h = 14, a = 10;
  std::vector<GridPoint> pts;
  for (int x = 0; x < a; ++x) pts.push_back({x, 0});
  pts.push_back({a, 0});  // white at the near end of the dent
  for (int x = a; x < a + k; ++x) pts.push_back({x, -1});
  pts.push_back({a + k - 1, 0});  // white at the far end (== near white if k is 1)
  for (int x = a + k; x < w; ++x) pts.push_back({x, 0});
  for (int y = 1; y < h - 1; ++y) pts.push_back({w - 1, y});
  for (int x = w - 1; x > 0; --x) pts.push_back({x, h - 1});
  for (int y = h - 1; y > 0; --y) pts.push_back({0, y});
  auto chain = make_chain(pts);
  chain.round = 1;
  return chain;
}

RoundEvents one_round(ClosedChain& chain) {
  const RoundPlan plan = compute_round(chain);
  return apply_round(chain, plan);
}

Outcome criterion5_merge_scenarios() {
  Outcome out;
  for (const int k : {1, 2, 5, 11}) {
    auto chain = dent_rectangle(k);
    const auto n = chain.size();
    const std::uint64_t white_near = chain.robots[10].id;
    const std::uint64_t white_far = chain.robots[static_cast<std::size_t>(10 + k + 1)].id;
    const auto ev = one_round(chain);
    const std::string label = "k=" + std::to_string(k);
    if (chain.size() != n - 2)
      out.fail(label + ": shortened by " + std::to_string(n - chain.size()) + ", not 2");
    const std::set<std::uint64_t> removed(ev.removed_robots.begin(), ev.removed_robots.end());
    if (removed != std::set<std::uint64_t>{white_near, white_far})
      out.fail(label + ": removed robots are not the two whites");
    if (!validate_chain(chain).empty()) out.fail(label + ": chain invalid after merge");
  }

  // k = 12 exceeds the largest recognizable pattern: nothing happens.
  {
    auto chain = dent_rectangle(12);
    const auto before = chain;
    one_round(chain);
    if (chain.size() != before.size()) out.fail("k=12: chain changed size");
    for (std::size_t i = 0; i < chain.size(); ++i)
      if (!(chain.robots[i].pos == before.robots[i].pos)) {
        out.fail("k=12: a robot moved");
        break;
      }
  }

  // Overlap by two: a battlement step where two length-2 patterns share two
  // robots. The shared robots swap positions (no shortening there); each
  // pattern still fuses its outermost white, so the chain shortens by 2.
  {
    std::vector<GridPoint> pts;
    for (int x = 0; x <= 10; ++x) pts.push_back({x, 0});   // long approach, y = 0
    pts.push_back({10, -1});                               // pattern A blacks
    pts.push_back({11, -1});
    pts.push_back({11, 0});                                // pattern B blacks
    pts.push_back({12, 0});
    for (int x = 12; x <= 28; ++x) pts.push_back({x, -1});  // long exit, y = -1
    for (int y = -1; y < 13; ++y) pts.push_back({29, y});
    for (int x = 29; x > 0; --x) pts.push_back({x, 13});
    for (int y = 13; y > 0; --y) pts.push_back({0, y});
    auto chain = make_chain(pts);
    chain.round = 1;
    const auto n = chain.size();
    const std::uint64_t outer_a = chain.robots[10].id;  // white (10, 0)
    const std::uint64_t outer_b = chain.robots[15].id;  // white (12, -1)
    const std::uint64_t seam_a = chain.robots[12].id;   // black of A at (11, -1)
    const std::uint64_t seam_b = chain.robots[13].id;   // black of B at (11, 0)
    const auto ev = one_round(chain);
    if (chain.size() != n - 2) out.fail("overlap-2: did not shorten by 2");
    const std::set<std::uint64_t> removed(ev.removed_robots.begin(), ev.removed_robots.end());
    if (removed != std::set<std::uint64_t>{outer_a, outer_b})
      out.fail("overlap-2: removed robots are not the two outermost whites");
    const auto ia = chain.index_of(seam_a);
    const auto ib = chain.index_of(seam_b);
    if (!ia || !ib || !(chain.robots[*ia].pos == GridPoint{11, 0}) ||
        !(chain.robots[*ib].pos == GridPoint{11, -1}))
      out.fail("overlap-2: shared robots did not swap in place");
  }

  // Overlap by three: two patterns meet at a concave corner and share the
  // corner robot r plus one white-of-one/black-of-the-other on each side.
  // r hops diagonally; r, a, b land on one point and a, b are removed
  // (together with the two far whites, one per pattern).
  {
    std::vector<GridPoint> pts;
    pts.push_back({2, 4});                                  // far white of the vertical pattern
    for (int y = 4; y > 1; --y) pts.push_back({1, y});      // vertical blacks
    pts.push_back({1, 1});                                  // r: black of both patterns
    for (int x = 2; x < 5; ++x) pts.push_back({x, 1});      // horizontal blacks
    pts.push_back({4, 2});                                  // far white of the horizontal pattern
    for (int x = 5; x <= 16; ++x) pts.push_back({x, 2});
    for (int y = 3; y < 16; ++y) pts.push_back({16, y});
    for (int x = 16; x > 2; --x) pts.push_back({x, 16});
    for (int y = 16; y > 4; --y) pts.push_back({2, y});
    auto chain = make_chain(pts);
    chain.round = 1;
    const auto n = chain.size();
    const std::uint64_t r = chain.robots[4].id;        // (1, 1)
    const std::uint64_t a = chain.robots[3].id;        // (1, 2): white beside r, black above
    const std::uint64_t b = chain.robots[5].id;        // (2, 1): white beside r, black right
    const std::uint64_t far_v = chain.robots[0].id;    // (2, 4)
    const std::uint64_t far_h = chain.robots[8].id;    // (4, 2)
    const auto ev = one_round(chain);
    if (chain.size() != n - 4) out.fail("overlap-3: did not shorten by 4");
    const std::set<std::uint64_t> removed(ev.removed_robots.begin(), ev.removed_robots.end());
    if (removed != std::set<std::uint64_t>{a, b, far_v, far_h})
      out.fail("overlap-3: removed robots are not a, b and the two far whites");
    const auto ri = chain.index_of(r);
    if (!ri || !(chain.robots[*ri].pos == GridPoint{2, 2}))
      out.fail("overlap-3: r did not hop diagonally onto the fused point");
    if (!validate_chain(chain).empty()) out.fail("overlap-3: chain invalid after merge");
  }
  return out;
}

// Longest passing scenario: S2 triggers at distance 3 against an opposing
// run S1 that is two steps into a corner-bound operation, so S2's settled
// corner sits one robot past S1's anchor -- six token steps away. A sequent
// run trails S1 at the minimum pipelined distance 12.
Outcome criterion6_passing_timing() {
  Outcome out;
  auto chain = gen_rectangle(40, 13);
  chain.round = 1;  // keep the period-boundary starters quiet
  chain.next_run_id = 100;

  RunState s2;
  s2.id = 1;
  s2.dir = +1;
  s2.age = 4;
  s2.anchor_id = chain.robots[12].id;
  chain.robots[12].runs.push_back(s2);

  RunState s1;  // coasting: entered at robot 17, two steps toward S2 done
  s1.id = 2;
  s1.dir = -1;
  s1.phase = RunPhase::kCoast;
  s1.age = 6;
  s1.anchor_id = chain.robots[17].id;
  s1.target_id = chain.robots[8].id;
  chain.robots[15].runs.push_back(s1);

  RunState succ;  // sequent run behind S1 at distance 12
  succ.id = 3;
  succ.dir = -1;
  succ.phase = RunPhase::kCoast;
  succ.age = 2;
  succ.anchor_id = chain.robots[27].id;
  succ.target_id = chain.robots[5].id;
  chain.robots[27].runs.push_back(succ);

  const std::uint64_t expected_target = chain.robots[18].id;  // one past S1's anchor
  int passing_rounds = 0;
  for (int round = 0; round < 10; ++round) {
    const RoundPlan plan = compute_round(chain);
    const RunAction* act = nullptr;
    for (const auto& a : plan.actions)
      if (a.run_id == s2.id) act = &a;
    if (!act) {
      out.fail("S2 disappeared in round " + std::to_string(round + 1));
      return out;
    }
    if (act->terminate) {
      out.fail("S2 retired mid-passing, cause " + std::to_string(static_cast<int>(act->cause)));
      return out;
    }
    if (act->op != RunOpKind::kPassEnter && act->op != RunOpKind::kPassStep) {
      out.fail("S2 left the passing protocol after " + std::to_string(passing_rounds) +
               " rounds");
      return out;
    }
    if (act->next_target != expected_target) out.fail("S2 settled the wrong corner");
    apply_round(chain, plan);
    ++passing_rounds;
    // Arrival at the settled corner completes the operation.
    std::size_t at = 0;
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (const auto& run : chain.robots[i].runs)
        if (run.id == s2.id) at = i;
    if (chain.robots[at].id == expected_target) break;
  }
  if (passing_rounds != 6)
    out.fail("passing took " + std::to_string(passing_rounds) + " rounds, expected 6");

  // Post-passing separation between S2 and the trailing sequent run.
  std::int64_t i2 = -1, isucc = -1;
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (const auto& run : chain.robots[i].runs) {
      if (run.id == s2.id) i2 = static_cast<std::int64_t>(i);
      if (run.id == succ.id) isucc = static_cast<std::int64_t>(i);
    }
  if (i2 < 0 || isucc < 0) {
    out.fail("a run vanished before the separation check");
    return out;
  }
  const auto nn = static_cast<std::int64_t>(chain.size());
  const std::int64_t gap = std::min(((isucc - i2) % nn + nn) % nn, ((i2 - isucc) % nn + nn) % nn);
  if (gap < 3) out.fail("post-passing separation " + std::to_string(gap) + " < 3");
  return out;
}

Outcome criterion7_determinism_and_faults() {
  Outcome out;
  const auto capture = [] {
    VerifyOptions opts;
    opts.trace = true;
    auto res = run_verified(gen_random_cycle(64, 9), opts);
    std::ostringstream os;
    write_trace(res.trace, os);
    return os.str();
  };
  const std::string t1 = capture();
  const std::string t2 = capture();
  if (t1 != t2) out.fail("identical configs produced different traces");

  {
    std::istringstream is(t1);
    std::string error;
    const auto back = read_trace(is, &error);
    if (!back) {
      out.fail("trace did not read back: " + error);
    } else {
      std::ostringstream os;
      write_trace(*back, os);
      if (os.str() != t1) out.fail("trace round-trip is not the identity");
    }
  }

  // Injected fault: a token reported two robots from where it really is.
  {
    ClosedChain chain = gen_quasiline_cycle(20, 12);
    ClosedChain before, after;
    RoundPlan plan;
    RoundEvents ev;
    for (int i = 0; i < 2; ++i) {
      before = chain;
      plan = compute_round(chain);
      ev = apply_round(chain, plan);
    }
    after = chain;
    bool moved = false;
    for (std::size_t i = 0; i < after.size() && !moved; ++i) {
      auto& runs = after.robots[i].runs;
      if (runs.empty()) continue;
      const auto run = runs.front();
      runs.erase(runs.begin());
      after.robots[after.wrap(static_cast<std::int64_t>(i) + 2 * run.dir)].runs.push_back(run);
      moved = true;
    }
    if (!moved) {
      out.fail("no token available to teleport");
    } else {
      const auto rep = check_invariants(before, plan, ev, after);
      const auto* c = rep.find("run_advance");
      if (!c || c->pass) out.fail("teleported token not caught by run_advance");
    }
  }

  // Injected fault: the line ahead of a seasoned runner folded onto itself.
  {
    auto chain = gen_quasiline_cycle(20, 12);
    RunState run;
    run.id = 99;
    run.dir = +1;
    run.age = 5;
    chain.robots[5].runs.push_back(run);
    chain.robots[9].pos = chain.robots[7].pos;
    if (check_runner_window(chain).pass)
      out.fail("folded window not caught by runner_quasiline_window");
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const std::vector<Criterion> criteria = {
      {"1 linear bound (rectangles, random cycles)", criterion1_linear_bound},
      {"2 quasiline family progress", criterion2_quasiline_family},
      {"3 per-round invariant suite", criterion3_invariant_suite},
      {"4 progress-pair accounting", criterion4_progress_accounting},
      {"5 merge micro-scenarios", criterion5_merge_scenarios},
      {"6 run-passing timing", criterion6_passing_timing},
      {"7 determinism, trace, fault injection", criterion7_determinism_and_faults},
  };
  std::vector<std::future<Outcome>> futures;
  futures.reserve(criteria.size());
  for (const auto& c : criteria) futures.push_back(std::async(std::launch::async, c.fn));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Outcome out = futures[i].get();
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << criteria[i].name;
    if (!out.detail.empty()) std::cout << " [" << out.detail << "]";
    std::cout << "\n";
    if (!out.pass) ++failed;
  }
  return failed;
}
