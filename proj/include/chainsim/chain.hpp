#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainsim/grid.hpp"

namespace chainsim {

// The number of chain neighbors a robot can see in each direction.
inline constexpr int kViewingPathLength = 11;

// New runs may start every kStartPeriod rounds.
inline constexpr int kStartPeriod = 13;

enum class RunPhase : std::uint8_t {
  kNormal,
  kCoast,    // multi-round corner-bound operation: token moves, no hops
  kPassing,  // sliding past an opposing run toward a settled corner
};

enum class CoastKind : std::uint8_t {
  kShortLine,  // straight run of exactly 2 ahead: coast to the corner behind it
  kDualStart,  // first round of a double-endpoint start
};

// A moving token on the chain. Its direction in index space never changes.
struct RunState {
  std::uint64_t id{0};
  int dir{+1};  // +1 or -1 along chain indices
  RunPhase phase{RunPhase::kNormal};
  CoastKind coast_kind{CoastKind::kShortLine};
  // Robot id of the corner this run is bound for (kCoast / kPassing only).
  std::uint64_t target_id{0};
  // Robot id where the current long operation started; for a normal run this
  // is its own robot. Opposing runs settle their passing targets against it.
  std::uint64_t anchor_id{0};
  // Completed action rounds since the run was installed.
  int age{0};
  bool dual_start{false};

  friend bool operator==(const RunState&, const RunState&) = default;
};

struct Robot {
  std::uint64_t id{0};  // bookkeeping only; no rule may branch on it
  GridPoint pos{};
  std::vector<RunState> runs;  // at most 2, directions must differ

  bool has_run_dir(int dir) const {
    for (const auto& r : runs)
      if (r.dir == dir) return true;
    return false;
  }
};

struct Violation {
  std::size_t index{0};
  std::string rule;
};

// Cyclic ordered sequence of robots; the single global state object.
struct ClosedChain {
  std::vector<Robot> robots;
  std::uint64_t round{0};
  std::uint64_t next_robot_id{0};
  std::uint64_t next_run_id{0};

  std::size_t size() const { return robots.size(); }

  std::size_t wrap(std::int64_t i) const {
    const auto n = static_cast<std::int64_t>(robots.size());
    return static_cast<std::size_t>(((i % n) + n) % n);
  }

  const Robot& at(std::int64_t i) const { return robots[wrap(i)]; }
  Robot& at(std::int64_t i) { return robots[wrap(i)]; }

  std::optional<std::size_t> index_of(std::uint64_t robot_id) const {
    for (std::size_t i = 0; i < robots.size(); ++i)
      if (robots[i].id == robot_id) return i;
    return std::nullopt;
  }

  Robot& append(GridPoint p) {
    robots.push_back(Robot{next_robot_id++, p, {}});
    return robots.back();
  }
};

// One entry of a robot's local snapshot: chain-relative neighbor offset plus
// the run flags of that robot. Run directions are recorded in global chain
// orientation; rules interpret them symmetrically.
struct ViewEntry {
  GridPoint offset{};
  bool run_fwd{false};  // holds a run with dir +1
  bool run_bwd{false};  // holds a run with dir -1
};

// A robot's full snapshot: up to 11 neighbors in each chain direction.
// Entry k of `ahead` is the robot k+1 steps along increasing indices.
struct LocalView {
  std::array<ViewEntry, kViewingPathLength> ahead{};
  std::array<ViewEntry, kViewingPathLength> behind{};
  int ahead_n{0};
  int behind_n{0};
  int n{0};  // total chain length, for wrap-around guards
  bool self_run_fwd{false};
  bool self_run_bwd{false};

  // Relative position of the robot `rel` chain steps away; nullopt outside
  // the viewing range. rel == 0 is self at the origin.
  std::optional<GridPoint> pos(int rel) const {
    if (rel == 0) return GridPoint{0, 0};
    if (rel > 0) return rel <= ahead_n ? std::optional(ahead[rel - 1].offset) : std::nullopt;
    return -rel <= behind_n ? std::optional(behind[-rel - 1].offset) : std::nullopt;
  }

  // Does the robot `rel` steps away hold a run moving in chain direction d?
  bool run_flag(int rel, int d) const {
    if (rel == 0) return d > 0 ? self_run_fwd : self_run_bwd;
    const ViewEntry* e = nullptr;
    if (rel > 0 && rel <= ahead_n) e = &ahead[rel - 1];
    if (rel < 0 && -rel <= behind_n) e = &behind[-rel - 1];
    if (!e) return false;
    return d > 0 ? e->run_fwd : e->run_bwd;
  }
};

inline std::vector<Violation> validate_chain(const ClosedChain& chain) {
  std::vector<Violation> out;
  const auto n = chain.size();
  if (n == 0) {
    out.push_back({0, "chain empty"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = chain.robots[i];
    const auto& b = chain.robots[(i + 1) % n];
    const GridPoint step = b.pos - a.pos;
    if (!is_chain_step(step))
      out.push_back({i, "consecutive robots not 4-adjacent or coincident: step " + to_string(step)});
    if (chain.round == 0 && is_zero(step) && n > 1)
      out.push_back({i, "coincident chain neighbors at round 0"});
    if (a.runs.size() > 2) out.push_back({i, "more than two run slots"});
    if (a.runs.size() == 2 && a.runs[0].dir == a.runs[1].dir)
      out.push_back({i, "two runs with equal direction"});
  }
  return out;
}

inline LocalView local_view(const ClosedChain& chain, std::size_t index) {
  LocalView v;
  const auto n = static_cast<std::int64_t>(chain.size());
  const int reach = static_cast<int>(std::min<std::int64_t>(kViewingPathLength, n - 1));
  const GridPoint origin = chain.robots[index].pos;
  const auto fill = [&](std::array<ViewEntry, kViewingPathLength>& side, int sign) {
    for (int k = 1; k <= reach; ++k) {
      const Robot& r = chain.at(static_cast<std::int64_t>(index) + sign * k);
      ViewEntry e;
      e.offset = r.pos - origin;
      e.run_fwd = r.has_run_dir(+1);
      e.run_bwd = r.has_run_dir(-1);
      side[k - 1] = e;
    }
  };
  fill(v.ahead, +1);
  fill(v.behind, -1);
  v.ahead_n = v.behind_n = reach;
  v.n = static_cast<int>(n);
  v.self_run_fwd = chain.robots[index].has_run_dir(+1);
  v.self_run_bwd = chain.robots[index].has_run_dir(-1);
  return v;
}

inline std::pair<std::int64_t, std::int64_t> bounding_box(const ClosedChain& chain) {
  std::int64_t min_x = chain.robots[0].pos.x, max_x = min_x;
  std::int64_t min_y = chain.robots[0].pos.y, max_y = min_y;
  for (const auto& r : chain.robots) {
    min_x = std::min(min_x, r.pos.x);
    max_x = std::max(max_x, r.pos.x);
    min_y = std::min(min_y, r.pos.y);
    max_y = std::max(max_y, r.pos.y);
  }
  return {max_x - min_x, max_y - min_y};
}

// All robots inside a 2x2 block of grid points.
inline bool is_gathered(const ClosedChain& chain) {
  const auto [w, h] = bounding_box(chain);
  return w <= 1 && h <= 1;
}

// A chain-neighbor pair that a merge plan marked as fusing: if they coincide
// after the round's hops, the white robot is removed.
struct FusePair {
  std::uint64_t black_id{0};
  std::uint64_t white_id{0};
};

// Fuses coincident chain neighbors. Marked pairs drop the white robot;
// any remaining coincident neighbors (e.g. seam robots of two overlapping
// patterns thrown onto the same point) fuse too, keeping the earlier robot.
// Returns ids of removed robots.
inline std::vector<std::uint64_t> contract_coincident_neighbors(
    ClosedChain& chain, std::span<const FusePair> marks) {
  std::vector<std::uint64_t> removed;
  std::vector<bool> drop(chain.size(), false);
  for (const auto& m : marks) {
    const auto bi = chain.index_of(m.black_id);
    const auto wi = chain.index_of(m.white_id);
    if (!bi || !wi) continue;
    const auto n = chain.size();
    const bool neighbors = (*wi == (*bi + 1) % n) || (*bi == (*wi + 1) % n);
    if (!neighbors) continue;
    if (chain.robots[*bi].pos == chain.robots[*wi].pos && !drop[*wi]) {
      drop[*wi] = true;
      removed.push_back(m.white_id);
    }
  }
  if (!removed.empty()) {
    std::vector<Robot> kept;
    kept.reserve(chain.size() - removed.size());
    for (std::size_t i = 0; i < chain.size(); ++i)
      if (!drop[i]) kept.push_back(std::move(chain.robots[i]));
    chain.robots = std::move(kept);
  }
  for (bool again = true; again && chain.size() > 2;) {
    again = false;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const std::size_t j = (i + 1) % chain.size();
      if (!(chain.robots[i].pos == chain.robots[j].pos)) continue;
      removed.push_back(chain.robots[j].id);
      chain.robots.erase(chain.robots.begin() + static_cast<std::ptrdiff_t>(j));
      again = true;
      break;
    }
  }
  return removed;
}

}  // namespace chainsim
