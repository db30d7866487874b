#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/grid.hpp"

namespace chainsim {

inline ClosedChain make_chain(const std::vector<GridPoint>& positions) {
  ClosedChain c;
  c.robots.reserve(positions.size());
  for (const auto p : positions) c.append(p);
  return c;
}

// Draws a value in [0, bound) from the raw engine stream. std::shuffle and
// the std distributions are implementation-defined, which would make traces
// differ across standard libraries.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

template <typename T>
void shuffle_deterministic(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[static_cast<std::size_t>(draw_below(rng, i))]);
}

// Perimeter of a w x h block of grid points, counter-clockwise from the
// origin. n = 2(w - 1) + 2(h - 1).
inline ClosedChain gen_rectangle(int w, int h) {
  if (w < 2 || h < 2) throw std::invalid_argument("rectangle needs w, h >= 2");
  std::vector<GridPoint> pts;
  for (int x = 0; x < w - 1; ++x) pts.push_back({x, 0});
  for (int y = 0; y < h - 1; ++y) pts.push_back({w - 1, y});
  for (int x = w - 1; x > 0; --x) pts.push_back({x, h - 1});
  for (int y = h - 1; y > 0; --y) pts.push_back({0, y});
  return make_chain(pts);
}

// Closed lattice walk of n unit steps: a shuffled multiset of a +x, a -x,
// b +y, b -y steps with a + b = n/2. Consecutive robots never coincide
// (every step is a unit vector); self-intersections and non-neighbor
// coincidences are allowed, as in arbitrary valid start configurations.
inline ClosedChain gen_random_cycle(std::size_t n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("random cycle needs even n >= 4");
  std::mt19937_64 rng(seed);
  const std::uint64_t half = n / 2;
  const std::uint64_t a = 1 + draw_below(rng, half - 1);
  const std::uint64_t b = half - a;
  std::vector<GridPoint> steps;
  steps.reserve(n);
  for (std::uint64_t i = 0; i < a; ++i) {
    steps.push_back({1, 0});
    steps.push_back({-1, 0});
  }
  for (std::uint64_t i = 0; i < b; ++i) {
    steps.push_back({0, 1});
    steps.push_back({0, -1});
  }
  shuffle_deterministic(steps, rng);
  std::vector<GridPoint> pts;
  pts.reserve(n);
  GridPoint p{0, 0};
  for (const auto s : steps) {
    pts.push_back(p);
    p += s;
  }
  return make_chain(pts);
}

// Chamfered rectangle: four straight lines (two of x extent `len`, two of
// y extent `side`) joined by four diagonal stairways of `cham` single
// steps each. Every line endpoint is a stairway junction, and the loop is
// free of merge patterns at round 0 as long as every maximal straight run
// spans at least 12 robots: the junction turns face opposite sides by
// construction. Optional zigs bend the two horizontal lines identically so
// they stay parallel. n = 2 * (len + zigs) + 2 * side + 8 * cham.
inline ClosedChain gen_quasiline_cycle(int len, int side, int zigs = 0, std::uint64_t seed = 0,
                                       int cham = 1) {
  if (len < 11 || side < 1 || cham < 1)
    throw std::invalid_argument("quasiline cycle needs len >= 11, side >= 1, cham >= 1");
  std::mt19937_64 rng(seed);
  // x positions where the horizontal lines step up. Runs between bends stay
  // >= 3 robots; the runs touching the stairways stay >= 12 robots, because
  // a shorter run bounded by same-side turns is itself a merge pattern.
  std::vector<int> bends;
  {
    int x = 11;
    for (int z = 0; z < zigs; ++z) {
      x += static_cast<int>(draw_below(rng, 3));
      if (x > len - 12) break;
      bends.push_back(x);
      x += 3;
    }
  }
  const GridPoint kR{1, 0}, kL{-1, 0}, kU{0, 1}, kD{0, -1};
  std::vector<GridPoint> bottom;  // steps of the bottom line, +x with zigs
  {
    std::size_t next_bend = 0;
    for (int x = 1; x <= len; ++x) {
      if (next_bend < bends.size() && x == bends[next_bend] + 1) {
        bottom.push_back(kU);
        ++next_bend;
      }
      bottom.push_back(kR);
    }
  }
  std::vector<GridPoint> steps = bottom;
  for (int i = 0; i < cham; ++i) {
    steps.push_back(kU);
    steps.push_back(kR);
  }
  for (int i = 0; i < side; ++i) steps.push_back(kU);
  for (int i = 0; i < cham; ++i) {
    steps.push_back(kL);
    steps.push_back(kU);
  }
  // Top line: the bottom walked backwards, each step reversed.
  for (auto it = bottom.rbegin(); it != bottom.rend(); ++it) steps.push_back(-*it);
  for (int i = 0; i < cham; ++i) {
    steps.push_back(kD);
    steps.push_back(kL);
  }
  for (int i = 0; i < side; ++i) steps.push_back(kD);
  for (int i = 0; i < cham; ++i) {
    steps.push_back(kR);
    steps.push_back(kD);
  }
  std::vector<GridPoint> pts;
  pts.reserve(steps.size());
  GridPoint p{0, 0};
  for (const auto s : steps) {
    pts.push_back(p);
    p += s;
  }
  if (!is_zero(p)) throw std::logic_error("quasiline cycle failed to close");
  return make_chain(pts);
}

}  // namespace chainsim
