#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "sgp/error.hpp"
#include "sgp/grid.hpp"
#include "sgp/potentials.hpp"

namespace sgp {

/// Discretized Gross-Pitaevskii problem: grid, sampled trap, coupling g and
/// particle number N (the constraint value of the squared L2 norm).
class Problem {
public:
  Problem(Grid grid, Field potential, double g, double particles)
      : grid_(std::move(grid)), potential_(std::move(potential)), g_(g), particles_(particles) {
    require_grid(grid_, potential_);
    if (!(g_ >= 0.0) || !std::isfinite(g_)) throw InvalidArgument("coupling g must be >= 0");
    if (!(particles_ > 0.0) || !std::isfinite(particles_))
      throw InvalidArgument("particle number N must be > 0");
    if (!all_finite(potential_)) throw InvalidArgument("potential must be finite");
  }

  Problem(const Grid& grid, const PotentialSpec& spec, double g, double particles)
      : Problem(grid, sample_potential(grid, spec), g, particles) {}

  const Grid& grid() const noexcept { return grid_; }
  const Field& potential() const noexcept { return potential_; }
  double g() const noexcept { return g_; }
  double particles() const noexcept { return particles_; }

private:
  Grid grid_;
  Field potential_;
  double g_;
  double particles_;
};

namespace detail {

struct EnergyParts {
  double kinetic;      // sum_i <W_i u, W_i u>, unweighted
  double potential;    // <V u, u>, unweighted
  double interaction;  // sum u^4, unweighted
};

inline EnergyParts energy_parts(const Problem& p, const Field& u) {
  require_grid(p.grid(), u);
  const auto v = p.potential().values();
  const auto x = u.values();
  EnergyParts e{detail::gradient_dot(p.grid(), x, x), 0.0, 0.0};
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u2 = x[k] * x[k];
    e.potential += v[k] * u2;
    e.interaction += u2 * u2;
  }
  return e;
}

}  // namespace detail

inline double energy(const Problem& p, const Field& u) {
  const auto e = detail::energy_parts(p, u);
  return p.grid().quad_weight() * (0.5 * e.kinetic + e.potential + 0.5 * p.g() * e.interaction);
}

inline double beta(const Problem& p, const Field& u) { return inner_l2(p.grid(), u, u); }

/// Scales u so that beta(u) = N. Throws on the zero field.
inline Field normalize(const Problem& p, Field u) {
  const double b = beta(p, u);
  if (!(b > 0.0)) throw InvalidArgument("cannot normalize the zero field");
  u *= std::sqrt(p.particles() / b);
  return u;
}

/// Callback for the non-fatal constraint mismatch diagnostic.
using Warning = std::function<void(const std::string&)>;

/// mu = (1/N) * integral of |grad u|^2/2 + V u^2 + g u^4.
inline double chemical_potential(const Problem& p, const Field& u, const Warning& warn = {}) {
  const auto e = detail::energy_parts(p, u);
  const double w = p.grid().quad_weight();
  if (warn) {
    const double mismatch = std::abs(w * detail::dot(u.values(), u.values()) - p.particles()) / p.particles();
    if (mismatch > 1e-6)
      warn("chemical potential evaluated off the constraint manifold (relative beta mismatch " +
           std::to_string(mismatch) + ")");
  }
  return w * (0.5 * e.kinetic + e.potential + p.g() * e.interaction) / p.particles();
}

/// L2 Euler-Lagrange residual of the discrete energy:
/// 1/2 W^T W u + V u + g u^3 - mu u.
inline Field el_residual(const Problem& p, const Field& u, double mu) {
  require_grid(p.grid(), u);
  Field r(p.grid());
  detail::wtw(p.grid(), u.values(), r.values());
  const auto v = p.potential().values();
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double x = u[k];
    r[k] = 0.5 * r[k] + (v[k] + p.g() * x * x - mu) * x;
  }
  return r;
}

/// E'(u) h, the first variation of the discrete energy.
inline double first_variation(const Problem& p, const Field& u, const Field& h) {
  require_grid(p.grid(), u);
  require_grid(p.grid(), h);
  const auto v = p.potential().values();
  double s = detail::gradient_dot(p.grid(), u.values(), h.values());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k];
    s += 2.0 * (v[k] + p.g() * x * x) * x * h[k];
  }
  return p.grid().quad_weight() * s;
}

/// E''(u)(h, h) for real fields.
inline double second_variation(const Problem& p, const Field& u, const Field& h) {
  require_grid(p.grid(), u);
  require_grid(p.grid(), h);
  const auto v = p.potential().values();
  double s = detail::gradient_dot(p.grid(), h.values(), h.values());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double uh = u[k] * h[k];
    s += 2.0 * v[k] * h[k] * h[k] + 6.0 * p.g() * uh * uh;
  }
  return p.grid().quad_weight() * s;
}

}  // namespace sgp
