#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/grid.hpp"

namespace chainsim {

// Maximum number of black robots in one merge pattern. The outermost black
// must see the far white, which sits exactly k chain steps away.
inline constexpr int kMaxMergeBlacks = 11;

// One matched merge pattern, in view-relative chain indices: blacks occupy
// rel positions lo..hi, whites sit at lo-1 and hi+1.
struct MergePatternRef {
  int lo{0};
  int hi{0};
  GridPoint hop{};
};

struct MergeRole {
  bool black{false};
  bool white{false};
  // Two orthogonal patterns may claim the same black; then it hops
  // diagonally. Opposite prescriptions are geometrically impossible and are
  // flagged instead of summed away.
  bool conflict{false};
  GridPoint hop{};
  bool mark_prev{false};  // self is the first black: its white behind fuses
  bool mark_next{false};  // self is the last black: its white ahead fuses
  std::vector<MergePatternRef> patterns;
};

// Checks whether blacks at rel lo..hi plus whites at lo-1 / hi+1 form a merge
// pattern, and returns the black hop vector if so. The blacks must step along
// one unit axis; both whites sit at the same orthogonal unit offset v from
// their adjacent outermost black. A single black takes any unit v, with both
// whites coincident.
inline std::optional<GridPoint> merge_pattern_at(const LocalView& v, int lo, int hi) {
  const int k = hi - lo + 1;
  if (k < 1 || k > kMaxMergeBlacks) return std::nullopt;
  if (k + 2 > v.n) return std::nullopt;  // pattern would wrap onto itself
  const auto pl = v.pos(lo), ph = v.pos(hi);
  const auto wl = v.pos(lo - 1), wr = v.pos(hi + 1);
  if (!pl || !ph || !wl || !wr) return std::nullopt;
  GridPoint u{};
  if (k >= 2) {
    u = *v.pos(lo + 1) - *pl;
    if (!is_unit_axis(u)) return std::nullopt;
    for (int i = lo; i < hi; ++i) {
      const auto a = v.pos(i), b = v.pos(i + 1);
      if (!a || !b || !(*b - *a == u)) return std::nullopt;
    }
  }
  const GridPoint off_l = *wl - *pl;
  const GridPoint off_r = *wr - *ph;
  if (!is_unit_axis(off_l) || !(off_l == off_r)) return std::nullopt;
  if (k >= 2 && !orthogonal(off_l, u)) return std::nullopt;
  return off_l;
}

// Determines the robot's role in this round's merges from its snapshot alone.
// Black: member of some fully visible pattern's black segment. White: end
// robot of some fully visible pattern (detectable only for k <= 10; the far
// white of a k = 11 pattern is out of range, which is fine because whites
// never act). Returns nullopt when the robot participates in no pattern.
inline std::optional<MergeRole> match_merge(const LocalView& v) {
  MergeRole role;
  std::vector<GridPoint> hops;
  for (int lo = -(kMaxMergeBlacks - 1); lo <= 0; ++lo) {
    for (int hi = 0; hi - lo + 1 <= kMaxMergeBlacks; ++hi) {
      const auto hop = merge_pattern_at(v, lo, hi);
      if (!hop) continue;
      role.black = true;
      role.patterns.push_back({lo, hi, *hop});
      if (std::find(hops.begin(), hops.end(), *hop) == hops.end()) hops.push_back(*hop);
      if (lo == 0) role.mark_prev = true;
      if (hi == 0) role.mark_next = true;
    }
  }
  if (hops.size() == 1) {
    role.hop = hops[0];
  } else if (hops.size() == 2 && !is_zero(hops[0] + hops[1])) {
    role.hop = hops[0] + hops[1];
  } else if (!hops.empty()) {
    role.conflict = true;
    role.hop = hops[0];
  }
  for (int k = 1; k <= kMaxMergeBlacks; ++k) {
    if (merge_pattern_at(v, 1, k) || merge_pattern_at(v, -k, -1)) {
      role.white = true;
      break;
    }
  }
  if (!role.black && !role.white) return std::nullopt;
  return role;
}

struct RunStartMatch {
  bool fwd{false};
  bool bwd{false};
  bool dual{false};
};

// Double endpoint: two quasi lines meet here at a right angle, each showing
// two collinear unit steps away from the corner.
template <typename PosFn>
bool endpoint_case_two_lines(PosFn&& pos) {
  const auto p1 = pos(1), p2 = pos(2), m1 = pos(-1), m2 = pos(-2);
  if (!p1 || !p2 || !m1 || !m2) return false;
  return is_unit_axis(*p1) && *p2 == *p1 * 2 && is_unit_axis(*m1) && *m2 == *m1 * 2 &&
         orthogonal(*p1, *m1);
}

// Single endpoint facing chain direction d: the line extends two collinear
// unit steps toward d, the robot behind sits at an orthogonal unit offset,
// and the robot is not an interior corner of its own line. Interior corners
// continue behind with a proper zig (w, w - u, w - 2u); distinguishing that
// from a stairway attached behind needs a third step. Anything out of view is
// treated as a possible zig, so no run starts.
template <typename PosFn>
bool endpoint_case_one_line(PosFn&& pos, int d) {
  const auto p1 = pos(d), p2 = pos(2 * d), m1 = pos(-d);
  if (!p1 || !p2 || !m1) return false;
  const GridPoint u = *p1;
  if (!is_unit_axis(u) || !(*p2 == u * 2)) return false;
  const GridPoint w = *m1;
  if (!is_unit_axis(w) || !orthogonal(w, u)) return false;
  const auto q2 = pos(-2 * d);
  if (!q2) return false;
  if (!(*q2 == w - u)) return true;
  const auto q3 = pos(-3 * d);
  if (!q3) return false;
  return !(*q3 == *q2 - u);
}

// Which runs (if any) this robot starts on a start round.
inline RunStartMatch match_run_start(const LocalView& v) {
  const auto pos = [&](int r) { return v.pos(r); };
  RunStartMatch m;
  if (endpoint_case_two_lines(pos)) {
    m.fwd = m.bwd = m.dual = true;
    return m;
  }
  m.fwd = endpoint_case_one_line(pos, +1);
  m.bwd = endpoint_case_one_line(pos, -1);
  return m;
}

// Number of robots ahead in chain direction d that continue the straight
// line through self: pos(j*d) == j*u for j = 1..s. Zero if the immediate
// neighbor is coincident or not on a unit axis.
inline int straight_run_ahead(const LocalView& v, int d) {
  const auto p1 = v.pos(d);
  if (!p1 || !is_unit_axis(*p1)) return 0;
  const GridPoint u = *p1;
  int s = 1;
  for (;;) {
    const auto p = v.pos((s + 1) * d);
    if (!p || !(*p == u * (s + 1))) break;
    ++s;
  }
  return s;
}

}  // namespace chainsim
