#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgp/descent.hpp"
#include "sgp/energy.hpp"
#include "sgp/newton.hpp"

namespace sgp {

/// Descent followed by Newton refinement.
struct PipelineConfig {
  DescentConfig descent{};
  NewtonConfig newton{};
  // When Newton fails, the descent resumes with its tolerance multiplied by
  // escalation_factor, at most max_escalations times.
  std::size_t max_escalations = 4;
  double escalation_factor = 0.1;
};

struct GroundState {
  Field u;
  double mu = 0.0;
  double energy = 0.0;
  double beta_residual = 0.0;  // |beta(u) - N| / N
  std::size_t descent_iterations = 0;
  std::size_t newton_iterations = 0;  // of the successful attempt
  std::size_t newton_attempts = 0;
  double descent_tolerance = 0.0;  // tolerance in force at the last switch
  Termination descent_terminated_by = Termination::max_iterations;
  bool newton_converged = false;
  double newton_residual = 0.0;
  std::vector<double> energy_trace;
  std::vector<double> newton_trace;
  std::vector<std::string> notes;
};

inline GroundState solve_ground_state(const Problem& p, Field u0, const PipelineConfig& cfg) {
  auto state = make_state(p, normalize(p, std::move(u0)));
  DescentConfig dc = cfg.descent;
  GroundState gs;
  for (std::size_t attempt = 0;; ++attempt) {
    gs.descent_terminated_by = descend(p, state, dc);
    gs.descent_tolerance = dc.rel_energy_tol;
    ++gs.newton_attempts;
    try {
      auto nr = newton_solve(p, state.u, cfg.newton);
      gs.u = std::move(nr.u);
      gs.mu = nr.mu;
      gs.newton_iterations = nr.iterations;
      gs.newton_residual = nr.residual;
      gs.newton_trace = std::move(nr.residual_trace);
      gs.newton_converged = true;
      break;
    } catch (const SolverError& e) {
      gs.notes.push_back(std::string("newton attempt ") + std::to_string(attempt + 1) + " after " +
                         std::to_string(state.iteration) + " descent steps: " + e.what());
      if (attempt == cfg.max_escalations || gs.descent_terminated_by == Termination::max_iterations) {
        gs.u = state.u;
        canonical_sign(gs.u);
        gs.mu = chemical_potential(p, gs.u);
        gs.newton_residual = e.achieved();
        break;
      }
      dc.rel_energy_tol *= cfg.escalation_factor;
    }
  }
  gs.descent_iterations = state.iteration;
  gs.energy = energy(p, gs.u);
  gs.beta_residual = std::abs(beta(p, gs.u) - p.particles()) / p.particles();
  gs.energy_trace = std::move(state.energy_trace);
  return gs;
}

inline GroundState solve_ground_state(const Problem& p, const PipelineConfig& cfg) {
  return solve_ground_state(
      p, init_random(p.grid(), p.particles(), cfg.descent.seed, cfg.descent.init), cfg);
}

}  // namespace sgp
