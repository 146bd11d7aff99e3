// Acceptance run: one PASS/FAIL line per criterion, plus an informational
// comparison of iteration counts. Exit status is nonzero if any criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace sgp;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CellRun {
  double mu = 0.0;
  double seconds = 0.0;
  std::size_t descent = 0, newton = 0;
  bool ok = false;
};

CellRun run_cell(int table, const ReferenceCell& cell, std::uint64_t seed) {
  const auto t = reference_table(table);
  RunConfig c = table_config(t, cell, 1);
  c.seeds = {seed};
  const auto res = run_experiment(c);
  const auto& r = res.runs.at(0).report;
  return {r.mu, r.wall_time_s, r.descent_iterations, r.newton_iterations, r.status == "ok"};
}

struct Informational {
  int table;
  ReferenceCell cell;
  std::vector<CellRun> runs;
};
std::vector<Informational> g_info;

Verdict table_criterion(int table, std::size_t max_count, std::size_t seeds, double time_limit) {
  Verdict v;
  const auto t = reference_table(table);
  for (const auto& cell : t.cells) {
    if (cell.count > max_count) continue;
    Informational info{table, cell, {}};
    for (std::uint64_t s = 1; s <= seeds; ++s) {
      const auto r = run_cell(table, cell, s);
      info.runs.push_back(r);
      const double dev = std::abs(r.mu - cell.mu) / cell.mu;
      std::printf("    table %d  n=%-4zu g=%-4g seed %llu: mu %.6f vs %.5g (%.3f%%)  %.2fs\n", table, cell.count,
                  cell.g, static_cast<unsigned long long>(s), r.mu, cell.mu, 100.0 * dev, r.seconds);
      std::fflush(stdout);
      v.require(r.ok, fmt("n=%zu g=%g seed %llu did not converge", cell.count, cell.g,
                          static_cast<unsigned long long>(s)));
      v.require(dev <= 5e-3, fmt("n=%zu g=%g: mu %.6f deviates %.3f%% from %.5g", cell.count, cell.g, r.mu,
                                 100.0 * dev, cell.mu));
      v.require(r.seconds <= time_limit,
                fmt("n=%zu g=%g: %.1fs exceeds %.0fs", cell.count, cell.g, r.seconds, time_limit));
    }
    g_info.push_back(info);
  }
  return v;
}

Verdict refinement_drift() {
  Verdict v;
  std::vector<double> mus;
  for (const auto& cell : reference_table(1).cells)
    if (cell.g == 0.1) mus.push_back(run_cell(1, cell, 1).mu);
  std::printf("    g=0.1: mu(2^7) %.6f  mu(2^8) %.6f  mu(2^9) %.6f\n", mus[0], mus[1], mus[2]);
  for (std::size_t i = 0; i + 1 < mus.size(); ++i) {
    v.require(mus[i] < mus[i + 1], fmt("mu not increasing between rows %zu and %zu", i, i + 1));
    v.require(mus[i + 1] - mus[i] < 2e-3, fmt("difference %.2e between rows %zu and %zu", mus[i + 1] - mus[i], i, i + 1));
  }
  return v;
}

Verdict seed_robustness() {
  Verdict v;
  RunConfig c = default_config(1);
  c.seeds = {11, 22, 33, 44, 55};
  const auto res = run_experiment(c);
  v.require(res.all_ok(), "a seed failed");
  const double span = (res.summary.mu_max - res.summary.mu_min) / res.summary.mu_min;
  std::printf("    5 seeds: mu in [%.10f, %.10f], relative span %.2e\n", res.summary.mu_min, res.summary.mu_max, span);
  v.require(span < 1e-3, fmt("relative span %.2e", span));
  return v;
}

Verdict operator_suite() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::vector<std::size_t>> shapes{{8}, {16}, {8, 8}, {16, 16}, {4, 5, 6}};
  for (const auto& n : shapes) {
    std::vector<double> L(n.size(), 2.0);
    const auto g = build_grid(n.size(), L, n);
    const auto u = oracle::random_field(g, 1);
    const auto f = oracle::random_field(g, 2);
    const auto h = oracle::random_field(g, 3);

    const Eigen::VectorXd wtw_ref = oracle::wtw(g) * oracle::vec(u);
    v.require((oracle::vec(apply_WtW(g, u)) - wtw_ref).norm() <= 1e-13 * wtw_ref.norm(), "W^T W vs dense");
    const Eigen::MatrixXd Md = oracle::m_dense(g);
    const Eigen::VectorXd m_ref = Md * oracle::vec(f);
    const auto Mf = apply_M(g, f);
    v.require((oracle::vec(Mf) - m_ref).norm() <= 1e-9 * m_ref.norm(), "M vs dense");
    EllipticSolveConfig krylov;
    krylov.method = EllipticMethod::krylov;
    v.require((oracle::vec(apply_M(g, f, krylov)) - m_ref).norm() <= 1e-9 * m_ref.norm(), "Krylov M vs dense");

    const double l2 = inner_l2(g, h, f);
    v.require(std::abs(inner_h1(g, h, Mf) - l2) <= 10.0 * 1e-10 * norm_l2(g, h) * norm_l2(g, f), "Riesz identity");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Md);
    v.require(es.eigenvalues().minCoeff() > 0.0 && es.eigenvalues().maxCoeff() <= 1.0 + 1e-12, "spectrum of M");
    v.require(norm_l2(g, Mf) <= norm_l2(g, f) * (1.0 + 1e-10), "||M|| <= 1");

    const ProjectionCache cache(g, u);
    const auto ph = project(cache, h);
    const auto pf = project(cache, f);
    Field twice = project(cache, ph) - ph;
    v.require(norm_l2(g, twice) <= 1e-12 * norm_l2(g, ph), "projection idempotence");
    v.require(std::abs(inner_l2(g, u, ph)) <= 1e-11 * norm_l2(g, u) * norm_l2(g, h), "projection annihilation");
    const double a = inner_h1(g, ph, f), b = inner_h1(g, h, pf);
    v.require(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), 1e-3 * norm_h1(g, h) * norm_h1(g, f)),
              "projection self-adjointness");
    v.require(norm_h1(g, ph) <= norm_h1(g, h) * (1.0 + 1e-10), "projection contraction");
    v.require(norm_l2(g, project(cache, cache.Mu())) <= 1e-12 * norm_l2(g, cache.Mu()), "P_u Mu = 0");
  }
  const double secs = seconds_since(t0);
  std::printf("    operator suite: %.2fs\n", secs);
  v.require(secs < 30.0, fmt("suite took %.1fs", secs));
  return v;
}

Verdict variational_suite() {
  Verdict v;
  for (std::size_t dim : {1, 2, 3}) {
    const auto g = build_grid(dim, 4.0, dim == 3 ? 6 : 12);
    const Problem p(g, PotentialSpec{MexicanHat{}, 0.0}, 1.7, 10.0);
    const Problem shifted(g, PotentialSpec{MexicanHat{}, 0.5}, 1.7, 10.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto u = oracle::random_field(g, 10 + s);
      auto h = oracle::random_field(g, 20 + s);
      u *= 1.0 / norm_h1(g, u);
      h *= 1.0 / norm_h1(g, h);
      double eps = 1e-5;
      Field up = u, um = u;
      up.axpy(eps, h);
      um.axpy(-eps, h);
      const double fd1 = (energy(p, up) - energy(p, um)) / (2.0 * eps);
      const double an1 = first_variation(p, u, h);
      v.require(std::abs(an1 - fd1) <= 1e-6 * std::abs(an1), fmt("first variation %zuD", dim));

      const auto ru = oracle::random_field(g, 30 + s);
      const auto rh = oracle::random_field(g, 40 + s);
      eps = 1e-3;
      up = ru;
      um = ru;
      up.axpy(eps, rh);
      um.axpy(-eps, rh);
      const double fd2 = (energy(p, up) - 2.0 * energy(p, ru) + energy(p, um)) / (eps * eps);
      const double an2 = second_variation(p, ru, rh);
      v.require(std::abs(an2 - fd2) <= 1e-4 * std::abs(an2), fmt("second variation %zuD", dim));

      v.require(second_variation(shifted, ru, rh) + 1e-12 >= inner_h1(g, rh, rh), fmt("convexity bound %zuD", dim));
    }
  }
  return v;
}

Verdict flow_suite() {
  Verdict v;
  const Problem p(build_grid(1, 10.0, 128), PotentialSpec{MexicanHat{}, 0.0}, 1.0, 100.0);
  DescentConfig dc;
  auto state = make_state(p, init_random(p.grid(), 100.0, 1));
  for (int k = 0; k < 200; ++k) {
    const double before = state.energy;
    state = descent_step(p, std::move(state), dc);
    v.require(state.energy <= before * (1.0 + 1e-12), fmt("energy rose at step %d", k));
    v.require(std::abs(beta(p, state.u) - 100.0) / 100.0 <= 1e-12, fmt("beta drift at step %d", k));
    if (!v.ok) break;
  }
  const auto gs = solve_ground_state(p, PipelineConfig{});
  v.require(gs.newton_converged, "newton did not converge");
  const double res = max_abs(el_residual(p, gs.u, gs.mu).values());
  v.require(res <= 1e-8, fmt("newton residual %.2e", res));
  const ProjectionCache cache(p.grid(), gs.u);
  const double fixed = norm_h1(p.grid(), project(cache, sobolev_gradient(p, cache)));
  const double scale = norm_h1(p.grid(), gs.u);
  std::printf("    newton residual %.2e, ||P grad|| / ||u|| = %.2e\n", res, fixed / scale);
  v.require(fixed <= 1e-6 * scale, fmt("fixed point %.2e", fixed / scale));
  return v;
}

void report(int id, const char* name, const std::function<Verdict()>& run, int& failures) {
  std::printf("criterion %d (%s):\n", id, name);
  std::fflush(stdout);
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = run();
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail = std::string("exception: ") + e.what();
  }
  std::printf("%s criterion %d: %s (%.1fs)%s%s\n", v.ok ? "PASS" : "FAIL", id, name, seconds_since(t0),
              v.ok ? "" : " -- ", v.detail.c_str());
  std::fflush(stdout);
  if (!v.ok) ++failures;
}

}  // namespace

int main() {
  int failures = 0;
  report(1, "Table 1 reproduction, 1D", [] { return table_criterion(1, 512, 3, 10.0); }, failures);
  report(2, "Table 2 reproduction, 2D n=2^6", [] { return table_criterion(2, 64, 1, 120.0); }, failures);
  report(3, "Table 3 reproduction, 3D n=2^5", [] { return table_criterion(3, 32, 1, 900.0); }, failures);
  report(4, "grid-refinement drift, 1D g=0.1", refinement_drift, failures);
  report(5, "seed robustness, 5 seeds", seed_robustness, failures);
  report(6, "operator suite", operator_suite, failures);
  report(7, "variational suite", variational_suite, failures);
  report(8, "flow suite", flow_suite, failures);

  std::printf("INFO criterion 9: iteration counts vs published bands (not asserted)\n");
  for (const auto& info : g_info) {
    std::size_t smin = SIZE_MAX, smax = 0, nmin = SIZE_MAX, nmax = 0;
    for (const auto& r : info.runs) {
      smin = std::min(smin, r.descent);
      smax = std::max(smax, r.descent);
      nmin = std::min(nmin, r.newton);
      nmax = std::max(nmax, r.newton);
    }
    std::printf("    table %d n=%-4zu g=%-4g  descent %zu..%zu (paper %zu..%zu)  newton %zu..%zu (paper %zu..%zu)\n",
                info.table, info.cell.count, info.cell.g, smin, smax, info.cell.descent_min, info.cell.descent_max,
                nmin, nmax, info.cell.newton_min, info.cell.newton_max);
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
