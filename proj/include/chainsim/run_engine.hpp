#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "chainsim/chain.hpp"
#include "chainsim/pattern.hpp"

namespace chainsim {

// How far ahead a run scans for an endpoint of its line (the full endpoint
// template needs three more robots behind the candidate, so 8 + 3 = 11).
inline constexpr int kEndpointScanAhead = 8;

// Opposing runs begin the passing procedure at this chain distance.
inline constexpr int kPassingTriggerDistance = 3;

// A same-direction run this close (or closer) ahead retires the run. Pipelined
// runs keep a spacing of at least 12, so a sequent run this near means merges
// have compressed the chain between the two. A run sitting exactly at the view
// horizon (distance 11) is left alone: simultaneous starts at the two ends of
// abutting minimum-length lines sit exactly 11 apart and advance in lockstep,
// so retiring at the horizon would cancel every fresh run on such a chain.
inline constexpr int kSequentRetireDistance = 10;

// Termination causes, reported with every retired run.
enum class RunEnd : int {
  kNone = 0,
  kSequentAhead = 1,   // same-direction run visible ahead
  kEndpointAhead = 2,  // endpoint template fires at a robot ahead
  kMergeRole = 3,      // the runner participates in a merge this round
  kPassTargetGone = 4,
  kCoastTargetGone = 5,
  kGeometryBroken = 6,  // straight run ahead shorter than 2: invariant breach
};

enum class RunOpKind : std::uint8_t {
  kNone,
  kStraight,    // corner hop, token advances
  kCoastEnter,  // short line ahead: bind to the corner three steps out
  kCoastStep,
  kPassEnter,
  kPassStep,
};

struct RunAction {
  std::uint64_t run_id{0};
  std::uint64_t robot_id{0};
  int dir{0};
  bool terminate{false};
  RunEnd cause{RunEnd::kNone};
  bool violation{false};
  std::string note;
  bool advance{false};
  std::optional<GridPoint> hop;
  RunOpKind op{RunOpKind::kNone};
  RunPhase next_phase{RunPhase::kNormal};
  CoastKind next_kind{CoastKind::kShortLine};
  std::uint64_t next_target{0};
  std::uint64_t next_anchor{0};
  // Orthogonal offset of the robot behind during a corner hop; the progress
  // pair bookkeeping compares these between paired runs.
  GridPoint side{};
};

// Does the endpoint template fire at the robot `j` chain steps ahead of the
// runner (in run direction d)? The candidate endpoint faces the runner, so
// its line direction is -d; the double-endpoint form counts too.
inline bool endpoint_template_fires_ahead(const LocalView& v, int d, int j) {
  const auto base = v.pos(j * d);
  if (!base) return false;
  const auto pos_at = [&](int r) -> std::optional<GridPoint> {
    const auto p = v.pos(j * d + r);
    if (!p) return std::nullopt;
    return *p - *base;
  };
  return endpoint_case_two_lines(pos_at) || endpoint_case_one_line(pos_at, -d);
}

// Plans one run's action for this round from the snapshot. Merge roles are
// resolved by the scheduler before this is called: a runner with any merge
// role retires with cause 3 and never reaches here.
inline RunAction plan_run_action(const ClosedChain& snap, std::size_t idx, const LocalView& view,
                                 const RunState& run) {
  RunAction act;
  act.run_id = run.id;
  act.robot_id = snap.robots[idx].id;
  act.dir = run.dir;
  const int d = run.dir;

  const auto retire = [&](RunEnd cause, std::string note = {}) {
    act.terminate = true;
    act.cause = cause;
    act.note = std::move(note);
    return act;
  };

  // Termination scans happen before any action is chosen.
  for (int j = 1; j <= kSequentRetireDistance && j <= view.ahead_n; ++j)
    if (view.run_flag(j * d, d)) return retire(RunEnd::kSequentAhead);
  for (int j = 1; j <= kEndpointScanAhead; ++j)
    if (endpoint_template_fires_ahead(view, d, j)) return retire(RunEnd::kEndpointAhead);

  const auto normal_dispatch = [&]() {
    const int s = straight_run_ahead(view, d);
    if (s >= 3) {
      const GridPoint u = *view.pos(d);
      const auto behind = view.pos(-d);
      if (!behind || !is_unit_axis(*behind) || !orthogonal(*behind, u)) {
        act = RunAction{};
        act.run_id = run.id;
        act.robot_id = snap.robots[idx].id;
        act.dir = d;
        retire(RunEnd::kGeometryBroken, "runner not at a corner");
        act.violation = true;
        return act;
      }
      act.op = RunOpKind::kStraight;
      act.hop = u + *behind;
      act.side = *behind;
      act.advance = true;
      act.next_phase = RunPhase::kNormal;
      act.next_anchor = snap.at(static_cast<std::int64_t>(idx) + d).id;
      return act;
    }
    if (s == 2) {
      act.op = RunOpKind::kCoastEnter;
      act.advance = true;
      act.next_phase = RunPhase::kCoast;
      act.next_kind = CoastKind::kShortLine;
      act.next_target = snap.at(static_cast<std::int64_t>(idx) + 3 * d).id;
      act.next_anchor = snap.robots[idx].id;
      return act;
    }
    retire(RunEnd::kGeometryBroken, "straight run ahead shorter than 2");
    act.violation = true;
    return act;
  };

  // A passing run slides to its settled corner; no geometry is touched.
  if (run.phase == RunPhase::kPassing) {
    if (snap.robots[idx].id == run.target_id) return normal_dispatch();
    if (!snap.index_of(run.target_id)) return retire(RunEnd::kPassTargetGone);
    act.op = RunOpKind::kPassStep;
    act.advance = true;
    act.next_phase = RunPhase::kPassing;
    act.next_target = run.target_id;
    act.next_anchor = run.anchor_id;
    return act;
  }

  // Passing entry: an opposing run within trigger distance ahead. Both sides
  // settle their corners from the snapshot; a run interrupted mid-coast keeps
  // its coast corner, otherwise the corner is one step past the opponent's
  // anchor in our own direction.
  for (int j = 1; j <= kPassingTriggerDistance && j <= view.ahead_n; ++j) {
    if (!view.run_flag(j * d, -d)) continue;
    const Robot& opp_robot = snap.at(static_cast<std::int64_t>(idx) + j * d);
    const RunState* opp = nullptr;
    for (const auto& r : opp_robot.runs)
      if (r.dir == -d) opp = &r;
    if (!opp) break;
    std::uint64_t target = 0;
    if (run.phase == RunPhase::kCoast) {
      target = run.target_id;
    } else {
      std::uint64_t anchor = opp_robot.id;
      if (opp->phase == RunPhase::kCoast && snap.index_of(opp->anchor_id))
        anchor = opp->anchor_id;
      const auto ai = snap.index_of(anchor);
      target = snap.at(static_cast<std::int64_t>(*ai) + d).id;
    }
    act.op = RunOpKind::kPassEnter;
    act.advance = true;
    act.next_phase = RunPhase::kPassing;
    act.next_target = target;
    act.next_anchor = run.anchor_id ? run.anchor_id : snap.robots[idx].id;
    return act;
  }

  if (run.phase == RunPhase::kCoast) {
    if (snap.robots[idx].id == run.target_id) return normal_dispatch();
    if (!snap.index_of(run.target_id)) return retire(RunEnd::kCoastTargetGone);
    act.op = RunOpKind::kCoastStep;
    act.advance = true;
    act.next_phase = RunPhase::kCoast;
    act.next_kind = run.coast_kind;
    act.next_target = run.target_id;
    act.next_anchor = run.anchor_id;
    return act;
  }

  return normal_dispatch();
}

}  // namespace chainsim
