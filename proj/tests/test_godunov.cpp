#include <gtest/gtest.h>

#include <cmath>

#include <bvgodunov/godunov.hpp>

#include "support/generators.hpp"
#include "support/problems.hpp"

using namespace bvgodunov;
using bvg_test::Rng;
using bvg_test::uniform;

namespace {

FluxModel unit_quadratic() { return FluxModel::quadratic_scaled(PiecewiseCoefficient::constant(1.0), 1.0); }

// min of f over [u, v] when u <= v, max over [v, u] otherwise, for a convex f with minimiser c
double textbook_godunov(const Parabola& f, double u, double v) {
  if (u <= v) {
    double best = std::min(f(u), f(v));
    if (u < f.center && f.center < v) best = std::min(best, f(f.center));
    return best;
  }
  return std::max(f(u), f(v));
}

// u_j - lambda (F_{j+1/2} - F_{j-1/2}) written out from the model, without the cached scheme
std::vector<double> step_by_definition(const FluxModel& m, const std::vector<double>& u, const GridSpec& g) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const auto state = [&](std::ptrdiff_t j) { return u[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, n - 1))]; };
  const auto F = [&](std::ptrdiff_t j) { return interface_flux(m, state(j), state(j + 1), g.center(j), g.center(j + 1)); };
  std::vector<double> out(u.size());
  for (std::ptrdiff_t j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = state(j) - g.lambda * (F(j) - F(j - 1));
  return out;
}

}  // namespace

TEST(InterfaceFlux, Examples) {
  const auto q = unit_quadratic();
  EXPECT_EQ(interface_flux(q, 0.0, 0.0, 0.3, 0.3), 0.0);
  EXPECT_EQ(interface_flux(q, 1.0, -1.0, 0.3, 0.3), 1.0);
  const auto jump = FluxModel::quadratic_scaled(PiecewiseCoefficient::step(0.0, 1.0, 4.0), 1.0);
  const double dx = 0.1;
  EXPECT_EQ(interface_flux(jump, 1.0, 0.5, -dx / 2, dx / 2), 1.0);
}

TEST(InterfaceFlux, ConsistentWithTheFlux) {
  Rng rng(1);
  for (auto family : bvg_test::all_families) {
    const FluxModel m = bvg_test::random_model(rng, family);
    for (int s = 0; s < 1000; ++s) {
      const double u = uniform(rng, -5.0, 5.0), x = uniform(rng, -2.0, 2.0);
      EXPECT_EQ(interface_flux(m, u, u, x, x), m.flux(u, x));
    }
  }
}

TEST(InterfaceFlux, MatchesTextbookGodunovForHomogeneousFlux) {
  Rng rng(2);
  for (int s = 0; s < 10000; ++s) {
    const Parabola f{uniform(rng, 0.1, 5.0), uniform(rng, -2.0, 2.0)};
    const double u = uniform(rng, -5.0, 5.0), v = uniform(rng, -5.0, 5.0);
    ASSERT_EQ(godunov_interface_flux(f, f, u, v), textbook_godunov(f, u, v)) << u << " " << v;
    // ties with the critical point
    ASSERT_EQ(godunov_interface_flux(f, f, f.center, v), textbook_godunov(f, f.center, v));
  }
}

TEST(InterfaceFlux, MonotoneInEachState) {
  Rng rng(3);
  for (auto family : bvg_test::all_families) {
    const FluxModel m = bvg_test::random_model(rng, family);
    for (int s = 0; s < 2000; ++s) {
      const double xl = uniform(rng, -1.5, 1.5), xr = xl + uniform(rng, 0.0, 0.5);
      const double u = uniform(rng, -4, 4), v = uniform(rng, -4, 4), d = uniform(rng, 0, 2);
      EXPECT_LE(interface_flux(m, u, v, xl, xr), interface_flux(m, u + d, v, xl, xr));
      EXPECT_GE(interface_flux(m, u, v, xl, xr), interface_flux(m, u, v + d, xl, xr));
    }
  }
}

// the four continuity estimates for states in [-M, M] with M >= max |u_M|
TEST(InterfaceFlux, ContinuityEstimates) {
  Rng rng(4);
  for (auto family : bvg_test::all_families) {
    for (int trial = 0; trial < 20; ++trial) {
      const FluxModel m = bvg_test::random_model(rng, family);
      const double M = m.critical_coefficient().max_abs() + uniform(rng, 0.0, 2.0);
      const double L = m.lipschitz_bound(M);
      const auto& a = m.spatial_coefficient();
      const auto& uM = m.critical_coefficient();
      const auto slack = [](double r) { return r * (1 + 1e-14) + 1e-14; };
      for (int s = 0; s < 100; ++s) {
        const double u = uniform(rng, -M, M), uh = uniform(rng, -M, M);
        const double v = uniform(rng, -M, M), vh = uniform(rng, -M, M);
        const double x = uniform(rng, -2, 2), xh = uniform(rng, -2, 2), y = uniform(rng, -2, 2),
                     yh = uniform(rng, -2, 2);
        const double base = interface_flux(m, u, v, x, y);
        EXPECT_LE(std::abs(interface_flux(m, uh, v, x, y) - base), slack(L * std::abs(uh - u)));
        EXPECT_LE(std::abs(interface_flux(m, u, vh, x, y) - base), slack(L * std::abs(vh - v)));
        EXPECT_LE(std::abs(interface_flux(m, u, v, xh, y) - base),
                  slack(m.modulus(std::max(u, uM(xh))) * std::abs(a(xh) - a(x)) + L * std::abs(uM(xh) - uM(x))));
        EXPECT_LE(std::abs(interface_flux(m, u, v, x, yh) - base),
                  slack(m.modulus(std::min(v, uM(yh))) * std::abs(a(yh) - a(y)) + L * std::abs(uM(yh) - uM(y))));
      }
    }
  }
}

TEST(Cfl, Examples) {
  EXPECT_DOUBLE_EQ(cfl_lambda(unit_quadratic(), 1.0), 0.45);
  EXPECT_EQ(cfl_lambda(unit_quadratic(), 0.0), 1.0);
  EXPECT_EQ(cfl_lambda(FluxModel::shifted_parabola(PiecewiseCoefficient::constant(0.0)), 0.0), 1.0);
  const auto S4 = FluxModel::quadratic_scaled(PiecewiseCoefficient::step(0.0, 1.0, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(cfl_lambda(S4, 1.0), 0.1125);
  EXPECT_EQ(cfl_lambda(unit_quadratic(), 0.0, {0.9, 0.3}), 0.3);
}

TEST(AlphaBar, Examples) {
  const GridSpec g{0.0, 1.0, 2, 0.1, 0.0};
  EXPECT_EQ(alpha_bar(FluxModel::shifted_parabola(PiecewiseCoefficient::constant(0.0)), {0.0, {0.0, 0.0}}, g), 0.0);
  EXPECT_EQ(alpha_bar(unit_quadratic(), {0.0, {-1.0, 2.0}}, g), 4.0);
  EXPECT_EQ(alpha_bar(FluxModel::shifted_parabola(PiecewiseCoefficient::constant(0.0)), {0.0, {3.0, 3.0}}, g), 9.0);
  EXPECT_THROW(alpha_bar(unit_quadratic(), {0.0, {1.0}}, g), GridMismatchError);
}

TEST(Projection, Examples) {
  const auto q = unit_quadratic();
  const auto zero = project_initial_data(PiecewiseDatum{PiecewiseCoefficient::constant(0.0)}, {-1, 1, 7, 0.1, 0}, q);
  EXPECT_EQ(zero.values, std::vector<double>(7, 0.0));

  const InitialDatum unit{PiecewiseDatum{PiecewiseCoefficient({0.0, 1.0}, {0.0, 1.0, 0.0})}};
  const auto aligned = project_initial_data(unit, {-1.0, 2.0, 6, 0.1, 0}, q);
  EXPECT_EQ(aligned.values, (std::vector<double>{0, 0, 1, 1, 0, 0}));

  const InitialDatum centered{PiecewiseDatum{PiecewiseCoefficient({0.25, 0.75}, {0.0, 1.0, 0.0})}};
  EXPECT_EQ(project_initial_data(centered, {0.0, 1.0, 2, 0.1, 0}, q).values, (std::vector<double>{0.5, 0.5}));
}

TEST(Projection, SmoothDatumIsSecondOrderAccurate) {
  const auto q = unit_quadratic();
  const double pi = std::acos(-1.0);
  // cell average of cos^2(pi x / 2) on |x| < 1 is 1/2 + sin(pi x) / (2 pi dx) differenced
  const auto antiderivative = [&](double x) {
    x = std::clamp(x, -1.0, 1.0);
    return 0.5 * x + std::sin(pi * x) / (2 * pi);
  };
  const InitialDatum bump = cosine_bump(0.0, 1.0, 1.0);
  double prev = 0.0;
  for (std::size_t n : {20u, 40u, 80u}) {
    const GridSpec g{-2.0, 2.0, n, 0.1, 0.0};
    const auto s = project_initial_data(bump, g, q);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = g.x_left + j * g.dx();
      err = std::max(err, std::abs(s[j] - (antiderivative(lo + g.dx()) - antiderivative(lo)) / g.dx()));
    }
    if (prev > 0.0) {
      EXPECT_LT(err, prev / 3.5);
    }
    prev = err;
  }
}

TEST(Projection, StationaryDatumSamplesCellCenters) {
  const auto m = bvg_test::shifted_parabola_flux();
  const GridSpec g{-1.0, 1.0, 4, 0.1, 0.0};
  const auto s = project_initial_data(StationaryDatum{0.25, Branch::minus}, g, m);
  EXPECT_EQ(s.values, (std::vector<double>{-1.0, -1.0, 0.0, 0.0}));
}

TEST(Step, HandComputedThreeCells) {
  const GridSpec g{0.0, 3.0, 3, 0.25, 1.0};
  const auto next = step(unit_quadratic(), {0.0, {0.0, 1.0, 0.0}}, g);
  EXPECT_EQ(next[1], 0.75);
  EXPECT_EQ(next.time, 0.25);
}

TEST(Step, ConstantStateIsUnchanged) {
  const GridSpec g{-1.0, 1.0, 50, 0.2, 1.0};
  const std::vector<double> c(50, 1.3);
  EXPECT_EQ(step(unit_quadratic(), {0.0, c}, g).values, c);
}

TEST(Step, StationaryProfilesOfStandardFluxes) {
  for (const auto& m : bvg_test::standard_fluxes()) {
    const GridSpec g{-1.0, 1.0, 101, 0.05, 1.0};
    for (double alpha : {0.0, 0.3, 1.0, 4.0}) {
      for (Branch b : {Branch::plus, Branch::minus}) {
        const StateSnapshot k{0.0, stationary_profile(m, g, alpha, b)};
        const auto next = step(m, k, g);
        for (std::size_t j = 0; j < k.size(); ++j) EXPECT_NEAR(next[j], k[j], 1e-12);
      }
    }
  }
}

TEST(Step, CachedSchemeMatchesDefinition) {
  Rng rng(5);
  for (auto family : bvg_test::all_families) {
    const FluxModel m = bvg_test::random_model(rng, family);
    const GridSpec g{-1.5, 1.5, 37, 0.07, 1.0};
    const GodunovScheme scheme(m, g);
    for (int trial = 0; trial < 20; ++trial) {
      StateSnapshot u{0.0, std::vector<double>(37)};
      for (double& v : u.values) v = uniform(rng, -2, 2);
      EXPECT_EQ(scheme.step(u).values, step_by_definition(m, u.values, g));
      std::vector<double> F(38);
      scheme.fluxes(u.values, F);
      const auto next = scheme.step(u);
      for (std::size_t j = 0; j < 37; ++j) EXPECT_NEAR(next[j], u[j] - g.lambda * (F[j + 1] - F[j]), 1e-15);
    }
  }
}

class SchemeProperties : public ::testing::TestWithParam<FluxFamily> {};

TEST_P(SchemeProperties, MonotoneUnderCfl) {
  Rng rng(10 + static_cast<int>(GetParam()));
  std::size_t violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const FluxModel m = bvg_test::random_model(rng, GetParam());
    GridSpec g{-2.0, 2.0, 40, 1.0, 1.0};
    const double alpha = uniform(rng, 0.0, 4.0);
    const auto lo = stationary_profile(m, g, alpha, Branch::minus);
    const auto hi = stationary_profile(m, g, alpha, Branch::plus);
    double M = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) M = std::max({M, std::abs(lo[j]), std::abs(hi[j])});
    g.lambda = cfl_lambda(m, M);
    const auto [v, w] = bvg_test::random_ordered_pair(rng, lo, hi);
    const GodunovScheme s(m, g);
    const auto sv = s.step({0.0, v}), sw = s.step({0.0, w});
    for (std::size_t j = 0; j < v.size(); ++j) violations += sv[j] > sw[j] + 1e-14;
  }
  EXPECT_EQ(violations, 0u);
}

TEST_P(SchemeProperties, OneStepL1Contraction) {
  Rng rng(20 + static_cast<int>(GetParam()));
  for (int trial = 0; trial < 200; ++trial) {
    const FluxModel m = bvg_test::random_model(rng, GetParam());
    GridSpec g{-2.0, 2.0, 40, 1.0, 1.0};
    const double alpha = uniform(rng, 0.0, 4.0);
    const auto lo = stationary_profile(m, g, alpha, Branch::minus);
    const auto hi = stationary_profile(m, g, alpha, Branch::plus);
    double M = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) M = std::max({M, std::abs(lo[j]), std::abs(hi[j])});
    g.lambda = cfl_lambda(m, M);
    auto v = bvg_test::random_state_between(rng, lo, hi);
    auto w = bvg_test::random_state_between(rng, lo, hi);
    w.front() = v.front();
    w.back() = v.back();
    const GodunovScheme s(m, g);
    const auto sv = s.step({0.0, v}), sw = s.step({0.0, w});
    double before = 0.0, after = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      before += std::abs(v[j] - w[j]);
      after += std::abs(sv[j] - sw[j]);
    }
    EXPECT_LE(after, before + 1e-13);
  }
}

TEST_P(SchemeProperties, InvariantRegionHoldsOnRandomData) {
  Rng rng(30 + static_cast<int>(GetParam()));
  for (int trial = 0; trial < 10; ++trial) {
    const FluxModel m = bvg_test::random_model(rng, GetParam());
    const InitialDatum d = bvg_test::random_compact_datum(rng, -0.5, 0.5, 2.0);
    GridSpec g{-4.0, 4.0, 160, 1.0, 0.0};
    g.lambda = auto_lambda(m, d, g);
    g.t_final = 60 * g.dt();
    std::size_t bad = 0;
    InvariantRegion region;
    RunOptions opt;
    opt.hooks.push_back([&](const StateSnapshot&, const StateSnapshot& post, std::size_t) {
      bad += !region.contains(post, 1e-12);
    });
    region = invariant_region(m, project_initial_data(d, g, m), g);
    const auto r = run(m, d, g, opt);
    EXPECT_EQ(bad, 0u);
    EXPECT_EQ(r.steps, 60u);
  }
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, SchemeProperties, ::testing::ValuesIn(bvg_test::all_families),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Run, ShortHorizonKeepsOnlyTheInitialLevel) {
  const auto p = bvg_test::shock_problems().front();
  GridSpec g = p.grid(100);
  g.t_final = 0.5 * g.dt();
  const auto r = run(p.model, p.datum, g);
  EXPECT_EQ(r.steps, 0u);
  ASSERT_EQ(r.snapshots.size(), 1u);
  EXPECT_EQ(r.snapshots[0].time, 0.0);
}

TEST(Run, StationaryDatumStaysPut) {
  for (const auto& m : bvg_test::standard_fluxes()) {
    GridSpec g{-1.0, 1.0, 200, 1.0, 0.0};
    const InitialDatum d = StationaryDatum{2.0, Branch::plus};
    g.lambda = auto_lambda(m, d, g);
    g.t_final = 100 * g.dt();
    const auto r = run(m, d, g);
    EXPECT_EQ(r.steps, 100u);
    for (std::size_t j = 0; j < g.n_cells; ++j) EXPECT_NEAR(r.snapshots.back()[j], r.initial[j], 1e-12);
  }
}

TEST(Run, OutputLevels) {
  const auto p = bvg_test::shock_problems().front();
  GridSpec g = p.grid(100);
  g.t_final = 10.5 * g.dt();
  RunOptions opt;
  opt.output_times = {3 * g.dt(), 3.5 * g.dt()};
  auto r = run(p.model, p.datum, g, opt);
  ASSERT_EQ(r.snapshots.size(), 3u);
  EXPECT_DOUBLE_EQ(r.snapshots[1].time, 3 * g.dt());
  EXPECT_DOUBLE_EQ(r.snapshots[2].time, 10 * g.dt());

  opt.paired_levels = true;
  opt.output_every = 4;
  r = run(p.model, p.datum, g, opt);
  std::vector<double> levels;
  for (const auto& s : r.snapshots) levels.push_back(std::round(s.time / g.dt()));
  EXPECT_EQ(levels, (std::vector<double>{0, 2, 3, 4, 7, 8, 9, 10}));

  opt.output_times = {g.t_final + 1.0};
  EXPECT_THROW(run(p.model, p.datum, g, opt), ConfigError);
}

TEST(Run, HooksSeeEveryStep) {
  const auto p = bvg_test::shock_problems()[2];
  GridSpec g = p.grid(80);
  RunOptions opt;
  std::size_t calls = 0, last = 0;
  opt.hooks.push_back([&](const StateSnapshot& pre, const StateSnapshot& post, std::size_t level) {
    ++calls;
    EXPECT_EQ(level, last + 1);
    EXPECT_NEAR(post.time - pre.time, g.dt(), 1e-14);
    last = level;
  });
  const auto r = run(p.model, p.datum, g, opt);
  EXPECT_EQ(calls, r.steps);
  EXPECT_EQ(r.steps, g.level_count());
}

TEST(Run, RejectsCflViolation) {
  const auto p = bvg_test::shock_problems()[1];
  GridSpec g = p.grid(100);
  const double L = p.model.lipschitz_bound(invariant_region(p.model, project_initial_data(p.datum, g, p.model), g).bound);
  g.lambda = 10.0 / L;
  EXPECT_THROW(run(p.model, p.datum, g), CflError);
  g.lambda = 1.0 / L;
  EXPECT_NO_THROW(run(p.model, p.datum, g));
}

TEST(Run, RejectsSupportLeavingTheDomain) {
  const auto p = bvg_test::shock_problems()[0];
  GridSpec g = p.grid(100);
  g.t_final = 10.0;
  EXPECT_THROW(run(p.model, p.datum, g), SupportError);
  g.t_final = 0.1;
  g.x_left = -0.2;
  EXPECT_THROW(run(p.model, p.datum, g), SupportError);
  // stationary data never move, so any horizon is fine
  g = p.grid(100);
  g.t_final = 10.0;
  EXPECT_NO_THROW(run(p.model, StationaryDatum{0.5, Branch::plus}, g));
}
