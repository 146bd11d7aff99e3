#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace sgp {

/// One published result cell: chemical potential and min/max iteration
/// counts and CPU seconds over ten random starts.
struct ReferenceCell {
  std::size_t count;  // grid points per axis
  double g;
  double mu;
  std::size_t descent_min, descent_max;
  std::size_t newton_min, newton_max;
  double time_min, time_max;
};

struct ReferenceTable {
  int id;
  std::size_t dim;
  double particles;
  double half_length;
  std::size_t desk_max_count;  // largest grid run by default
  std::span<const ReferenceCell> cells;
};

inline constexpr std::array<ReferenceCell, 9> kTable1Cells{{
    {128, 0.1, 4.8938, 130, 241, 17, 18, 0.52, 0.86},
    {128, 1.0, 19.831, 98, 123, 21, 23, 0.44, 0.59},
    {128, 10.0, 92.607, 54, 86, 19, 23, 0.42, 0.57},
    {256, 0.1, 4.8952, 156, 278, 18, 19, 0.66, 1.1},
    {256, 1.0, 19.831, 109, 179, 20, 23, 0.50, 0.74},
    {256, 10.0, 92.607, 80, 121, 20, 20, 0.41, 0.55},
    {512, 0.1, 4.8956, 153, 309, 18, 20, 0.76, 1.4},
    {512, 1.0, 19.832, 124, 208, 20, 23, 0.65, 1.0},
    {512, 10.0, 92.608, 93, 147, 21, 21, 0.53, 0.76},
}};

inline constexpr std::array<ReferenceCell, 9> kTable2Cells{{
    {64, 0.1, 5.6656, 350, 374, 21, 23, 5.7, 9.9},
    {64, 1.0, 23.557, 179, 190, 23, 26, 5.1, 5.4},
    {64, 10.0, 124.44, 87, 103, 25, 27, 4.4, 5.3},
    {128, 0.1, 5.6836, 427, 451, 20, 21, 1.1e2, 1.5e2},
    {128, 1.0, 23.564, 152, 243, 23, 23, 4.6e1, 6.1e1},
    {128, 10.0, 124.44, 93, 176, 25, 30, 3.5e1, 6.3e1},
    {256, 0.1, 5.6883, 615, 990, 24, 24, 9.2e2, 2.3e3},
    {256, 1.0, 23.566, 324, 626, 22, 24, 6.0e2, 1.1e3},
    {256, 10.0, 124.44, 142, 236, 26, 28, 4.6e2, 6.7e2},
}};

inline constexpr std::array<ReferenceCell, 9> kTable3Cells{{
    {32, 0.1, 9.8716, 767, 955, 24, 28, 1.2e3, 2.5e3},
    {32, 1.0, 45.302, 297, 341, 23, 28, 5.1e2, 8.2e2},
    {32, 10.0, 218.23, 133, 152, 25, 29, 2.5e2, 4.8e2},
    {64, 0.1, 9.9784, 755, 987, 24, 29, 1.7e4, 2.4e4},
    {64, 1.0, 45.414, 354, 421, 22, 23, 7.8e3, 1.1e4},
    {64, 10.0, 218.18, 199, 215, 25, 29, 2.9e3, 5.7e3},
    {128, 0.1, 10.011, 1078, 1485, 23, 25, 1.5e5, 2.3e5},
    {128, 1.0, 45.443, 640, 769, 23, 23, 7.8e4, 1.4e5},
    {128, 10.0, 218.21, 371, 466, 26, 33, 5.0e4, 6.9e4},
}};

/// Mexican hat runs (A = 0.1, B = 16, C = (1, 1.5, 2)) on [-10, 10)^d.
inline ReferenceTable reference_table(int id) {
  switch (id) {
    case 1: return {1, 1, 1e2, 10.0, 512, kTable1Cells};
    case 2: return {2, 2, 1e3, 10.0, 64, kTable2Cells};
    case 3: return {3, 3, 1e4, 10.0, 32, kTable3Cells};
    default: return {0, 0, 0.0, 0.0, 0, {}};
  }
}

}  // namespace sgp
