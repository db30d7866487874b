#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/run_engine.hpp"
#include "chainsim/scheduler.hpp"

namespace chainsim {

struct CheckResult {
  std::string name;
  bool pass{true};
  std::string detail;
};

struct InvariantReport {
  std::uint64_t round{0};
  std::vector<CheckResult> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

struct RunOwner {
  std::size_t index;
  const RunState* run;
};

inline std::optional<RunOwner> find_run(const ClosedChain& chain, std::uint64_t run_id) {
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (const auto& r : chain.robots[i].runs)
      if (r.id == run_id) return RunOwner{i, &r};
  return std::nullopt;
}

// Maximal straight segments of a positions polyline; each entry is the robot
// count of one segment plus its axis (true = x-aligned).
struct Segment {
  int robots{1};
  bool x_axis{true};
  bool degenerate{false};  // contains a coincident or diagonal step
};

inline std::vector<Segment> straight_segments(const std::vector<GridPoint>& pts) {
  std::vector<Segment> segs;
  std::optional<GridPoint> prev;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const GridPoint s = pts[i] - pts[i - 1];
    const bool unit = is_unit_axis(s);
    const bool x_axis = unit && s.y == 0;
    if (prev && unit && *prev == s) {
      segs.back().robots += 1;
    } else if (!unit) {
      segs.push_back({2, x_axis, true});
    } else if (prev && is_unit_axis(*prev) && (prev->y == 0) == x_axis) {
      // Direction reversal along the same axis: a doubled-back line.
      segs.push_back({2, x_axis, true});
    } else {
      // Corner robots belong to both adjoining segments.
      segs.push_back({2, x_axis, false});
    }
    prev = s;
  }
  return segs;
}

}  // namespace detail

// Run advancement: every run alive across the round advanced exactly one robot in
// its direction (fused robots in between are skipped; the token lands on the
// next survivor).
inline CheckResult check_run_advance(const ClosedChain& before, const RoundEvents& ev,
                                     const ClosedChain& after) {
  CheckResult res{"run_advance", true, {}};
  const std::unordered_set<std::uint64_t> removed(ev.removed_robots.begin(),
                                                  ev.removed_robots.end());
  for (std::size_t i = 0; i < after.size(); ++i) {
    for (const auto& run : after.robots[i].runs) {
      if (run.age == 0) continue;  // started this round, first action pending
      const auto old_owner = detail::find_run(before, run.id);
      if (!old_owner) continue;  // predates the observation window
      std::size_t j = old_owner->index;
      std::uint64_t expected = 0;
      for (std::size_t hops = 0; hops < before.size(); ++hops) {
        j = before.wrap(static_cast<std::int64_t>(j) + run.dir);
        if (!removed.count(before.robots[j].id)) {
          expected = before.robots[j].id;
          break;
        }
      }
      if (after.robots[i].id != expected) {
        res.pass = false;
        res.detail = "run " + std::to_string(run.id) + " on robot " +
                     std::to_string(after.robots[i].id) + ", expected robot " +
                     std::to_string(expected);
        return res;
      }
    }
  }
  return res;
}

// Runner window: from age >= 3 the runner sits on a quasi line. The 23-robot
// window is clipped at the first robot, in each direction, where the
// run-start template fires (the endpoint of the runner's own line); beyond it
// lies a different line. Within the clipped window every interior segment on
// the main axis has >= 3 robots and every orthogonal segment has <= 2.
// Only normal-phase runs are checked: a run inside a corner-bound operation
// or a passing slide follows a settled target and may legitimately cross
// chain sections its own sweeps have not reshaped yet.
inline CheckResult check_runner_window(const ClosedChain& after) {
  CheckResult res{"runner_quasiline_window", true, {}};
  const auto n = static_cast<std::int64_t>(after.size());
  for (std::size_t i = 0; i < after.size(); ++i) {
    for (const auto& run : after.robots[i].runs) {
      if (run.age < 3 || run.phase != RunPhase::kNormal) continue;
      const auto is_endpoint = [&](std::int64_t rel) {
        const auto idx = after.wrap(static_cast<std::int64_t>(i) + rel);
        const auto m = match_run_start(local_view(after, idx));
        return m.fwd || m.bwd;
      };
      std::int64_t lo = 0, hi = 0;
      while (lo > -kViewingPathLength && -lo < n / 2 && !is_endpoint(lo)) --lo;
      while (hi < kViewingPathLength && hi < n / 2 && !is_endpoint(hi)) ++hi;
      std::vector<GridPoint> pts;
      for (std::int64_t r = lo; r <= hi; ++r)
        pts.push_back(after.at(static_cast<std::int64_t>(i) + r).pos);
      const auto segs = detail::straight_segments(pts);
      if (segs.size() < 2) continue;
      int best = 0;
      bool main_x = true;
      for (const auto& s : segs)
        if (!s.degenerate && s.robots > best) best = s.robots, main_x = s.x_axis;
      for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& s = segs[k];
        const bool interior = k > 0 && k + 1 < segs.size();
        bool bad = s.degenerate;
        if (!bad && s.x_axis == main_x && interior && s.robots < 3) bad = true;
        if (!bad && s.x_axis != main_x && s.robots > 2) bad = true;
        if (bad) {
          res.pass = false;
          res.detail = "run " + std::to_string(run.id) + " at robot " +
                       std::to_string(after.robots[i].id) + ": window segment of " +
                       std::to_string(s.robots) + " robots breaks the quasi-line shape";
          return res;
        }
      }
    }
  }
  return res;
}

// Sequent spacing: a run with a same-direction run within its termination reach
// ahead must be retired by this round's plan (a run exactly at the view
// horizon is tolerated, matching the retirement rule). Fresh starts may land
// inside each other's reach; the invariant is that such a state never
// survives the round that observes it.
inline CheckResult check_no_sequent_ahead(const ClosedChain& before, const RoundPlan& plan) {
  CheckResult res{"no_sequent_ahead", true, {}};
  const auto retired = [&](std::uint64_t run_id) {
    for (const auto& act : plan.actions)
      if (act.run_id == run_id) return act.terminate;
    return false;
  };
  for (std::size_t i = 0; i < before.size(); ++i) {
    for (const auto& run : before.robots[i].runs) {
      for (int j = 1; j <= kSequentRetireDistance && j < static_cast<int>(before.size()); ++j) {
        const auto& other = before.at(static_cast<std::int64_t>(i) + j * run.dir);
        if (other.has_run_dir(run.dir) && !retired(run.id)) {
          res.pass = false;
          res.detail = "run " + std::to_string(run.id) + " at robot " +
                       std::to_string(before.robots[i].id) + " sees a sequent run " +
                       std::to_string(j) + " ahead on robot " + std::to_string(other.id) +
                       " and is not retired";
          return res;
        }
      }
    }
  }
  return res;
}

// Convenience form for inspecting a standalone state: no retirements planned.
inline CheckResult check_no_sequent_ahead(const ClosedChain& chain) {
  return check_no_sequent_ahead(chain, RoundPlan{});
}

// Operation coverage: every surviving planned run action is classified as passing or
// as one of the runner operations; geometry violations count as failures.
inline CheckResult check_run_op_classified(const RoundPlan& plan) {
  CheckResult res{"run_op_classified", true, {}};
  for (const auto& act : plan.actions) {
    if (act.terminate) continue;
    if (act.op == RunOpKind::kNone || act.violation) {
      res.pass = false;
      res.detail = "run " + std::to_string(act.run_id) + " on robot " +
                   std::to_string(act.robot_id) + " has no classified operation" +
                   (act.note.empty() ? "" : (": " + act.note));
      return res;
    }
  }
  return res;
}

inline CheckResult check_chain_valid(const ClosedChain& after) {
  CheckResult res{"chain_valid", true, {}};
  const auto violations = validate_chain(after);
  if (!violations.empty()) {
    res.pass = false;
    res.detail = "index " + std::to_string(violations.front().index) + ": " +
                 violations.front().rule;
  }
  return res;
}

inline CheckResult check_length_monotone(const ClosedChain& before, const ClosedChain& after) {
  CheckResult res{"length_monotone", true, {}};
  if (after.size() > before.size()) {
    res.pass = false;
    res.detail = "chain grew from " + std::to_string(before.size()) + " to " +
                 std::to_string(after.size());
  }
  return res;
}

// The full named-check suite over one completed round transition.
inline InvariantReport check_invariants(const ClosedChain& before, const RoundPlan& plan,
                                        const RoundEvents& ev, const ClosedChain& after) {
  InvariantReport rep;
  rep.round = plan.round;
  rep.checks.push_back(check_run_advance(before, ev, after));
  rep.checks.push_back(check_runner_window(after));
  rep.checks.push_back(check_no_sequent_ahead(before, plan));
  rep.checks.push_back(check_run_op_classified(plan));
  rep.checks.push_back(check_chain_valid(after));
  rep.checks.push_back(check_length_monotone(before, after));
  return rep;
}

}  // namespace chainsim
