#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/pattern.hpp"
#include "chainsim/run_engine.hpp"

namespace chainsim {

// Everything the robots decided this round, computed from one frozen
// snapshot. Applying a plan is the only way the chain changes.
struct RoundPlan {
  std::uint64_t round{0};
  bool gathered{false};
  std::vector<std::pair<std::uint64_t, MergeRole>> merge_roles;  // robot id -> role
  std::vector<FusePair> marks;
  std::vector<RunAction> actions;
  std::vector<std::pair<std::uint64_t, RunStartMatch>> starts;  // robot id -> match
  std::vector<std::string> problems;
};

struct RoundEvents {
  std::uint64_t round{0};
  bool gathered{false};
  std::size_t fused{0};
  std::vector<std::uint64_t> removed_robots;
  struct Ended {
    std::uint64_t run_id{0};
    std::uint64_t robot_id{0};
    RunEnd cause{RunEnd::kNone};
    bool violation{false};
    std::string note;
  };
  std::vector<Ended> ended;
  struct Started {
    std::uint64_t run_id{0};
    std::uint64_t robot_id{0};
    int dir{0};
    bool dual{false};
  };
  std::vector<Started> started;
  std::vector<std::string> problems;
};

inline RoundPlan compute_round(const ClosedChain& snap) {
  RoundPlan plan;
  plan.round = snap.round;
  if (is_gathered(snap)) {
    plan.gathered = true;
    return plan;
  }
  const auto n = snap.size();
  std::vector<LocalView> views(n);
  std::vector<bool> has_role(n, false);
  for (std::size_t i = 0; i < n; ++i) views[i] = local_view(snap, i);
  for (std::size_t i = 0; i < n; ++i) {
    const auto role = match_merge(views[i]);
    if (!role) continue;
    has_role[i] = true;
    plan.merge_roles.emplace_back(snap.robots[i].id, *role);
    if (role->conflict)
      plan.problems.push_back("conflicting merge hops at robot " +
                              std::to_string(snap.robots[i].id));
    if (role->mark_prev)
      plan.marks.push_back({snap.robots[i].id, snap.at(static_cast<std::int64_t>(i) - 1).id});
    if (role->mark_next)
      plan.marks.push_back({snap.robots[i].id, snap.at(static_cast<std::int64_t>(i) + 1).id});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& run : snap.robots[i].runs) {
      if (has_role[i]) {
        RunAction act;
        act.run_id = run.id;
        act.robot_id = snap.robots[i].id;
        act.dir = run.dir;
        act.terminate = true;
        act.cause = RunEnd::kMergeRole;
        plan.actions.push_back(std::move(act));
      } else {
        plan.actions.push_back(plan_run_action(snap, i, views[i], run));
      }
    }
  }
  if (snap.round % kStartPeriod == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (has_role[i]) continue;
      const auto m = match_run_start(views[i]);
      if (m.fwd || m.bwd) plan.starts.emplace_back(snap.robots[i].id, m);
    }
  }
  return plan;
}

inline RoundEvents apply_round(ClosedChain& chain, const RoundPlan& plan) {
  RoundEvents ev;
  ev.round = plan.round;
  ev.problems = plan.problems;
  if (plan.gathered) {
    ev.gathered = true;
    return ev;
  }

  // Retirements decided at plan time happen before anything moves.
  for (const auto& act : plan.actions) {
    if (!act.terminate) continue;
    ev.ended.push_back({act.run_id, act.robot_id, act.cause, act.violation, act.note});
    if (const auto ri = chain.index_of(act.robot_id)) {
      auto& runs = chain.robots[*ri].runs;
      std::erase_if(runs, [&](const RunState& r) { return r.id == act.run_id; });
    }
  }

  // All hops commit simultaneously. A robot black in two patterns already
  // carries the combined hop in its role; a robot may not receive two
  // different displacements.
  std::unordered_map<std::uint64_t, GridPoint> hops;
  for (const auto& [id, role] : plan.merge_roles)
    if (role.black && !role.conflict) hops.emplace(id, role.hop);
  for (const auto& act : plan.actions) {
    if (act.terminate || !act.hop) continue;
    const auto [it, inserted] = hops.emplace(act.robot_id, *act.hop);
    if (!inserted && !(it->second == *act.hop))
      ev.problems.push_back("conflicting hops at robot " + std::to_string(act.robot_id));
  }
  for (auto& r : chain.robots) {
    const auto it = hops.find(r.id);
    if (it != hops.end()) r.pos += it->second;
  }

  // Coincident chain neighbors fuse: marked whites onto their black partner,
  // and seam robots that overlapping patterns threw onto the same point.
  ev.removed_robots = contract_coincident_neighbors(chain, plan.marks);
  ev.fused = ev.removed_robots.size();
  for (const auto id : ev.removed_robots) {
    // A fused robot may still carry runs (e.g. the far white of a maximal
    // pattern cannot detect its own role); they retire with the robot.
    for (const auto& act : plan.actions)
      if (!act.terminate && act.robot_id == id)
        ev.ended.push_back({act.run_id, id, RunEnd::kMergeRole, false, "runner fused away"});
  }

  // Tokens advance on the contracted chain: state updates first, then every
  // advancing run moves one robot along its direction.
  struct Move {
    RunState run;
    std::size_t dest;
  };
  std::vector<Move> moves;
  for (const auto& act : plan.actions) {
    if (act.terminate) continue;
    const auto ri = chain.index_of(act.robot_id);
    if (!ri) continue;  // robot fused away this round; retirement logged above
    auto& runs = chain.robots[*ri].runs;
    const auto it = std::find_if(runs.begin(), runs.end(),
                                 [&](const RunState& r) { return r.id == act.run_id; });
    if (it == runs.end()) continue;
    RunState next = *it;
    next.phase = act.next_phase;
    next.coast_kind = act.next_kind;
    next.target_id = act.next_target;
    next.anchor_id = act.next_anchor;
    next.age += 1;
    runs.erase(it);
    if (act.advance) {
      moves.push_back({std::move(next), chain.wrap(static_cast<std::int64_t>(*ri) + act.dir)});
    } else {
      runs.push_back(std::move(next));
    }
  }
  for (auto& m : moves) chain.robots[m.dest].runs.push_back(std::move(m.run));

  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& runs = chain.robots[i].runs;
    if (runs.size() > 2)
      ev.problems.push_back("robot " + std::to_string(chain.robots[i].id) + " holds " +
                            std::to_string(runs.size()) + " runs");
    if (runs.size() == 2 && runs[0].dir == runs[1].dir)
      ev.problems.push_back("robot " + std::to_string(chain.robots[i].id) +
                            " holds two same-direction runs");
  }

  for (const auto& [robot_id, m] : plan.starts) {
    const auto ri = chain.index_of(robot_id);
    if (!ri) continue;
    auto& robot = chain.robots[*ri];
    for (const int dir : {+1, -1}) {
      if (dir > 0 ? !m.fwd : !m.bwd) continue;
      if (robot.has_run_dir(dir)) continue;
      if (robot.runs.size() >= 2) continue;
      RunState run;
      run.id = chain.next_run_id++;
      run.dir = dir;
      run.anchor_id = robot.id;
      run.dual_start = m.dual;
      robot.runs.push_back(run);
      ev.started.push_back({run.id, robot.id, dir, m.dual});
    }
  }

  chain.round += 1;
  for (const auto& v : validate_chain(chain))
    if (v.rule.find("coincident chain neighbors") == std::string::npos)
      ev.problems.push_back("chain invalid at index " + std::to_string(v.index) + ": " + v.rule);
  ev.gathered = is_gathered(chain);
  return ev;
}

struct SimOptions {
  std::uint64_t max_rounds{0};  // 0: default of 30 * initial chain length
  // Called after every applied round; return false to stop early.
  std::function<bool(const ClosedChain&, const RoundPlan&, const RoundEvents&)> on_round;
};

struct SimReport {
  bool gathered{false};
  std::uint64_t rounds{0};
  std::size_t initial_robots{0};
  std::size_t final_robots{0};
  std::uint64_t total_fused{0};
  std::uint64_t runs_started{0};
  std::uint64_t runs_ended{0};
  std::vector<std::string> problems;  // capped, with round prefixes
};

inline SimReport simulate(ClosedChain& chain, const SimOptions& opts = {}) {
  SimReport rep;
  rep.initial_robots = chain.size();
  const std::uint64_t limit =
      opts.max_rounds ? opts.max_rounds : 30 * static_cast<std::uint64_t>(chain.size());
  constexpr std::size_t kMaxProblems = 64;
  while (!is_gathered(chain) && rep.rounds < limit) {
    const RoundPlan plan = compute_round(chain);
    const RoundEvents ev = apply_round(chain, plan);
    rep.rounds += 1;
    rep.total_fused += ev.fused;
    rep.runs_started += ev.started.size();
    rep.runs_ended += ev.ended.size();
    for (const auto& p : ev.problems)
      if (rep.problems.size() < kMaxProblems)
        rep.problems.push_back("round " + std::to_string(ev.round) + ": " + p);
    if (opts.on_round && !opts.on_round(chain, plan, ev)) break;
  }
  rep.gathered = is_gathered(chain);
  rep.final_robots = chain.size();
  return rep;
}

}  // namespace chainsim
