#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <set>
#include <unordered_map>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/scheduler.hpp"

namespace chainsim {

// A pair of runs started in the same round at the two endpoints of one line,
// moving toward each other. Good pairs have both outer neighbors on the same
// side; progress pairs are good pairs started after a merge-free window.
struct TrackedPair {
  std::uint64_t run_a{0};
  std::uint64_t run_b{0};
  std::uint64_t robot_a{0};
  std::uint64_t robot_b{0};
  std::uint64_t start_round{0};
  GridPoint side_a{};
  GridPoint side_b{};
  bool good{false};
  bool progress{false};
  // Inflated bounding box of the chain segment between the start robots; the
  // merge the pair enables is credited by position inside this region.
  GridPoint box_min{};
  GridPoint box_max{};
  bool alive_a{true};
  bool alive_b{true};
  // A run stays pristine while it sweeps its original straight section; the
  // side-consistency claim is only assertable in that phase (crossing a zig
  // legitimately flips the behind-neighbor side).
  bool pristine_a{true};
  bool pristine_b{true};
  std::optional<std::uint64_t> credit_round;
  // Identity of the credited merge: the canonical (first) black robot of the
  // pattern when the credit came from a run stopped by that merge, else a
  // synthetic key from the box fallback.
  std::string credit_key;
  bool ambiguous{false};
};

// Books run pairs, checks good-pair side consistency, and credits merges to
// progress pairs (first-responsible discipline, disambiguated by position).
class PairLedger {
 public:
  static constexpr std::int64_t kBoxInflate = 3;
  static constexpr std::uint64_t kProgressWindow = kStartPeriod - 1;  // L-1 rounds

  void observe(const ClosedChain& before, const RoundPlan& plan, const RoundEvents& ev,
               const ClosedChain& after) {
    check_sides(plan);
    for (const auto& e : ev.ended) {
      for (auto& p : pairs_) {
        if (p.run_a == e.run_id) p.alive_a = false;
        if (p.run_b == e.run_id) p.alive_b = false;
      }
      // First-responsible credit: the merge that stopped one of the pair's
      // runs is the merge that pair enabled.
      if (e.cause == RunEnd::kMergeRole) credit_by_death(before, plan, e);
    }
    if (ev.fused > 0) {
      credit_merges(before, ev);
      merge_rounds_.push_back(ev.round);
    }
    if (!ev.started.empty()) adopt_starts(ev, after);
  }

  // Flags progress pairs never credited within `horizon` rounds of starting.
  void finalize(std::uint64_t horizon, std::uint64_t final_round) {
    for (const auto& p : pairs_) {
      if (!p.progress || p.credit_round) continue;
      if (final_round > p.start_round + horizon)
        problems_.push_back("progress pair (" + std::to_string(p.run_a) + "," +
                            std::to_string(p.run_b) + ") started round " +
                            std::to_string(p.start_round) + " never credited a merge");
    }
  }

  const std::vector<TrackedPair>& pairs() const { return pairs_; }
  const std::vector<std::string>& problems() const { return problems_; }
  const std::vector<std::uint64_t>& merge_rounds() const { return merge_rounds_; }

  std::size_t progress_count() const {
    return static_cast<std::size_t>(
        std::count_if(pairs_.begin(), pairs_.end(), [](const TrackedPair& p) { return p.progress; }));
  }
  std::size_t ambiguous_count() const {
    return static_cast<std::size_t>(std::count_if(pairs_.begin(), pairs_.end(),
                                                  [](const TrackedPair& p) { return p.ambiguous; }));
  }
  bool merged_in_window(std::uint64_t round, std::uint64_t window) const {
    for (const auto r : merge_rounds_)
      if (r <= round && round <= r + window) return true;
    return false;
  }
  bool progress_started_at(std::uint64_t round) const {
    return std::any_of(pairs_.begin(), pairs_.end(), [&](const TrackedPair& p) {
      return p.progress && p.start_round == round;
    });
  }

 private:
  void check_sides(const RoundPlan& plan) {
    for (const auto& act : plan.actions) {
      if (act.terminate) continue;
      for (auto& p : pairs_) {
        const bool is_a = p.run_a == act.run_id;
        const bool is_b = p.run_b == act.run_id;
        if (!is_a && !is_b) continue;
        bool& pristine = is_a ? p.pristine_a : p.pristine_b;
        const GridPoint expected = is_a ? p.side_a : p.side_b;
        if (act.op == RunOpKind::kStraight) {
          if (p.good && pristine && !(act.side == expected))
            problems_.push_back("round " + std::to_string(plan.round) + ": good pair (" +
                                std::to_string(p.run_a) + "," + std::to_string(p.run_b) +
                                ") lost side consistency at run " + std::to_string(act.run_id));
        } else {
          pristine = false;
        }
      }
    }
  }

  // The merge identity for a run stopped with a merge role: the id of the
  // pattern's first black robot when derivable, else the dead run's robot.
  std::string merge_key(const ClosedChain& before, const RoundPlan& plan,
                        std::uint64_t robot_id) const {
    const auto ri = before.index_of(robot_id);
    if (ri) {
      for (const auto& [id, role] : plan.merge_roles) {
        if (id != robot_id || role.patterns.empty()) continue;
        const auto anchor = before.at(static_cast<std::int64_t>(*ri) + role.patterns.front().lo);
        return "b" + std::to_string(anchor.id);
      }
    }
    return "r" + std::to_string(robot_id);
  }

  void credit_by_death(const ClosedChain& before, const RoundPlan& plan,
                       const RoundEvents::Ended& e) {
    for (auto& p : pairs_) {
      if (!p.progress || p.credit_round) continue;
      if (p.run_a != e.run_id && p.run_b != e.run_id) continue;
      const auto key = merge_key(before, plan, e.robot_id);
      if (used_keys_.count(key)) continue;  // another pair owns this merge
      p.credit_round = plan.round;
      p.credit_key = key;
      used_keys_.insert(key);
    }
  }

  void credit_merges(const ClosedChain& before, const RoundEvents& ev) {
    for (const auto id : ev.removed_robots) {
      const auto ri = before.index_of(id);
      if (!ri) continue;
      const GridPoint pos = before.robots[*ri].pos;
      std::vector<TrackedPair*> eligible;
      for (auto& p : pairs_) {
        if (!p.progress || p.credit_round || p.start_round >= ev.round) continue;
        if (pos.x < p.box_min.x || pos.x > p.box_max.x || pos.y < p.box_min.y ||
            pos.y > p.box_max.y)
          continue;
        eligible.push_back(&p);
      }
      if (eligible.empty()) continue;
      std::sort(eligible.begin(), eligible.end(), [](const TrackedPair* a, const TrackedPair* b) {
        return a->start_round != b->start_round ? a->start_round < b->start_round
                                                : a->run_a < b->run_a;
      });
      const std::string key = "f" + std::to_string(id);
      if (used_keys_.count(key)) continue;
      eligible.front()->credit_round = ev.round;
      eligible.front()->credit_key = key;
      used_keys_.insert(key);
      if (eligible.size() > 1) eligible.front()->ambiguous = true;
    }
  }

  void adopt_starts(const RoundEvents& ev, const ClosedChain& after) {
    std::unordered_map<std::uint64_t, std::size_t> owner;  // run id -> chain index
    std::unordered_map<std::uint64_t, int> dir_of;
    for (const auto& s : ev.started) {
      if (const auto ri = after.index_of(s.robot_id)) {
        owner.emplace(s.run_id, *ri);
        dir_of.emplace(s.run_id, s.dir);
      }
    }
    std::vector<std::uint64_t> unpaired;
    for (const auto& s : ev.started)
      if (owner.count(s.run_id)) unpaired.push_back(s.run_id);
    std::vector<bool> used(unpaired.size(), false);

    const auto n = static_cast<std::int64_t>(after.size());
    for (std::size_t a = 0; a < unpaired.size(); ++a) {
      if (used[a]) continue;
      const auto ra = unpaired[a];
      const int da = dir_of[ra];
      const auto ia = static_cast<std::int64_t>(owner[ra]);
      // The partner is the nearest fresh opposing run ahead along the line.
      std::optional<std::size_t> partner;
      std::int64_t dist = 0;
      for (std::int64_t k = 1; k < n && !partner; ++k) {
        const auto idx = after.wrap(ia + k * da);
        for (std::size_t b = 0; b < unpaired.size(); ++b) {
          if (used[b] || b == a) continue;
          const auto rb = unpaired[b];
          if (dir_of[rb] != -da) continue;
          if (owner[rb] == static_cast<std::size_t>(idx)) {
            partner = b;
            dist = k;
            break;
          }
        }
      }
      if (!partner) continue;
      const auto rb = unpaired[*partner];
      TrackedPair p;
      p.run_a = ra;
      p.run_b = rb;
      p.robot_a = after.robots[static_cast<std::size_t>(ia)].id;
      p.robot_b = after.robots[owner[rb]].id;
      p.start_round = ev.round;
      p.side_a = after.at(ia - da).pos - after.robots[static_cast<std::size_t>(ia)].pos;
      const auto ib = static_cast<std::int64_t>(owner[rb]);
      p.side_b = after.at(ib + da).pos - after.robots[owner[rb]].pos;
      p.good = p.side_a == p.side_b;
      p.progress = p.good && !merged_in_recent_window(ev.round);
      p.box_min = p.box_max = after.robots[static_cast<std::size_t>(ia)].pos;
      for (std::int64_t k = 0; k <= dist; ++k) {
        const auto q = after.at(ia + k * da).pos;
        p.box_min.x = std::min(p.box_min.x, q.x);
        p.box_min.y = std::min(p.box_min.y, q.y);
        p.box_max.x = std::max(p.box_max.x, q.x);
        p.box_max.y = std::max(p.box_max.y, q.y);
      }
      p.box_min += GridPoint{-kBoxInflate, -kBoxInflate};
      p.box_max += GridPoint{kBoxInflate, kBoxInflate};
      pairs_.push_back(p);
      used[a] = true;
      used[*partner] = true;
    }
  }

  bool merged_in_recent_window(std::uint64_t round) const {
    for (const auto r : merge_rounds_)
      if (r <= round && round - r <= kProgressWindow) return true;
    return false;
  }

  std::vector<TrackedPair> pairs_;
  std::vector<std::string> problems_;
  std::vector<std::uint64_t> merge_rounds_;
  std::set<std::string> used_keys_;
};

}  // namespace chainsim
