#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>

namespace chainsim {

// Integer lattice coordinates. The whole core model is exact integer
// arithmetic; 64 bits is ample for the chain sizes we simulate (n <= 1e6).
struct GridPoint {
  std::int64_t x{0};
  std::int64_t y{0};

  friend constexpr bool operator==(const GridPoint&, const GridPoint&) = default;

  constexpr GridPoint operator+(GridPoint o) const { return {x + o.x, y + o.y}; }
  constexpr GridPoint operator-(GridPoint o) const { return {x - o.x, y - o.y}; }
  constexpr GridPoint operator-() const { return {-x, -y}; }
  constexpr GridPoint operator*(std::int64_t k) const { return {x * k, y * k}; }
  constexpr GridPoint& operator+=(GridPoint o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

constexpr bool is_zero(GridPoint p) { return p.x == 0 && p.y == 0; }

constexpr std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

// Unit step along one axis.
constexpr bool is_unit_axis(GridPoint p) { return (abs64(p.x) + abs64(p.y)) == 1; }

// Unit diagonal step.
constexpr bool is_unit_diagonal(GridPoint p) { return abs64(p.x) == 1 && abs64(p.y) == 1; }

// Chain neighbors must sit on the same or a 4-adjacent grid point.
constexpr bool is_chain_step(GridPoint p) { return is_zero(p) || is_unit_axis(p); }

constexpr bool orthogonal(GridPoint a, GridPoint b) { return a.x * b.x + a.y * b.y == 0; }

// One of the 8 lattice symmetries (4 rotations x optional reflection).
// Robots have no compass, so every classifier must commute with these.
struct GridSymmetry {
  // Row-major 2x2 integer matrix.
  std::int64_t m00, m01, m10, m11;

  constexpr GridPoint apply(GridPoint p) const {
    return {m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y};
  }
};

constexpr std::array<GridSymmetry, 8> all_grid_symmetries() {
  return {{
      {1, 0, 0, 1},    // identity
      {0, -1, 1, 0},   // rot 90
      {-1, 0, 0, -1},  // rot 180
      {0, 1, -1, 0},   // rot 270
      {1, 0, 0, -1},   // mirror x
      {-1, 0, 0, 1},   // mirror y
      {0, 1, 1, 0},    // mirror diag
      {0, -1, -1, 0},  // mirror anti-diag
  }};
}

inline std::string to_string(GridPoint p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

}  // namespace chainsim
