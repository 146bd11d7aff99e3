#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <variant>

#include "sgp/error.hpp"
#include "sgp/grid.hpp"

namespace sgp {

/// A (sum_i (C_i x_i)^2 - B)^2, a ring (1D: double well) trap.
struct MexicanHat {
  double A = 0.1;
  double B = 16.0;
  std::array<double, kMaxDim> C{1.0, 1.5, 2.0};

  friend bool operator==(const MexicanHat&, const MexicanHat&) = default;
};

/// Isotropic |x|^2 / 2.
struct Harmonic {
  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Node values supplied externally.
struct Tabulated {
  Field values;

  friend bool operator==(const Tabulated&, const Tabulated&) = default;
};

struct PotentialSpec {
  std::variant<MexicanHat, Harmonic, Tabulated> shape = MexicanHat{};
  // Constant added everywhere. A positive shift leaves minimizers unchanged
  // under the norm constraint and makes the energy uniformly convex.
  double shift = 0.0;

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

inline double eval_mexican_hat(const MexicanHat& p, std::span<const double> x) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cx = p.C[i] * x[i];
    r += cx * cx;
  }
  const double q = r - p.B;
  return p.A * q * q;
}

/// Checked variant: the point must have exactly `dim` components.
inline double eval_mexican_hat(const MexicanHat& p, std::size_t dim, std::span<const double> x) {
  if (x.size() != dim) throw InvalidArgument("point dimension does not match potential dimension");
  return eval_mexican_hat(p, x);
}

inline double eval_harmonic(std::span<const double> x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  return 0.5 * r;
}

inline void validate(const PotentialSpec& spec, std::size_t dim) {
  if (!std::isfinite(spec.shift)) throw InvalidArgument("potential shift must be finite");
  if (const auto* m = std::get_if<MexicanHat>(&spec.shape)) {
    if (!(m->A > 0.0) || !std::isfinite(m->A)) throw InvalidArgument("mexican hat A must be positive");
    if (!std::isfinite(m->B)) throw InvalidArgument("mexican hat B must be finite");
    for (std::size_t i = 0; i < dim; ++i)
      if (m->C[i] == 0.0 || !std::isfinite(m->C[i]))
        throw InvalidArgument("mexican hat C_i must be nonzero and finite");
  }
}

inline Field sample_potential(const Grid& grid, const PotentialSpec& spec) {
  validate(spec, grid.dim());
  Field v(grid);
  if (const auto* t = std::get_if<Tabulated>(&spec.shape)) {
    if (!(t->values.grid() == grid))
      throw GridMismatch("tabulated potential does not match the simulation grid");
    v = t->values;
  } else {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto p = grid.point(k);
      const std::span<const double> x(p.data(), grid.dim());
      v[k] = std::holds_alternative<MexicanHat>(spec.shape)
                 ? eval_mexican_hat(std::get<MexicanHat>(spec.shape), x)
                 : eval_harmonic(x);
    }
  }
  if (spec.shift != 0.0)
    for (double& x : v.values()) x += spec.shift;
  if (!all_finite(v)) throw InvalidArgument("sampled potential contains non-finite values");
  return v;
}

inline std::string potential_name(const PotentialSpec& spec) {
  switch (spec.shape.index()) {
    case 0: return "mexican_hat";
    case 1: return "harmonic";
    default: return "tabulated";
  }
}

}  // namespace sgp
