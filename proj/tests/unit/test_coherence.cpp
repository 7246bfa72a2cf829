#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "softphoton/coherence.hpp"
#include "softphoton/fit.hpp"

using namespace softphoton;

namespace {

const Dispersion kDisp(0.1);
const FormFactor kFF(1.0);

Kinematics kin_with(Vec3 v) {
  Kinematics k;
  k.v = v;
  return k;
}

QuadratureGrid default_grid() { return QuadratureGrid(GridSpec::defaults_for(kDisp, kFF)); }

QuadratureGrid medium_grid(double max_width = INFINITY) {
  GridSpec spec = GridSpec::defaults_for(kDisp, kFF);
  spec.radial_panels = 16;
  spec.n_cos = 32;
  spec.n_phi = 16;
  spec.max_panel_width = max_width;
  return QuadratureGrid(spec);
}

std::vector<Complex> eval(const CoherenceFunction& c, Vec3 k) {
  std::vector<Complex> out(c.components());
  c.eval(k, out);
  return out;
}

constexpr Family kFamilies[] = {Family::PFB, Family::PFBR, Family::BN_C, Family::BN_F};

}  // namespace

TEST(CoherenceFunction, FamilyMetadata) {
  EXPECT_EQ(components_of(Family::PFB), 2);
  EXPECT_EQ(components_of(Family::BN_F), 4);
  EXPECT_EQ(metric_of(Family::BN_C), Metric::hilbert);
  EXPECT_EQ(metric_of(Family::PFBR), Metric::indefinite);
  for (Family f : kFamilies) EXPECT_EQ(family_from_string(to_string(f)), f);
  EXPECT_FALSE(family_from_string("QED").has_value());
}

TEST(CoherenceFunction, VanishesAtTimeZero) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (Family f : kFamilies) {
    const CoherenceFunction c(f, FiniteTime{0.0, 0.1}, kin_with({0.2, -0.1, 0.3}), kDisp, kFF);
    for (int i = 0; i < 20; ++i) {
      for (Complex z : eval(c, {g(rng), g(rng), g(rng)})) EXPECT_EQ(z, Complex(0.0));
    }
  }
}

TEST(CoherenceFunction, DipoleTransverseVanishesAlongMomentum) {
  const Vec3 v{0.1, 0.2, -0.3};
  for (double t : {1.0, -3.0}) {
    const CoherenceFunction c(Family::PFB, FiniteTime{t, 0.05}, kin_with(v), kDisp, kFF);
    for (double s : {0.01, 0.7, -2.0}) {
      for (Complex z : eval(c, s * v)) EXPECT_LT(std::abs(z), 1e-14);
    }
  }
}

TEST(CoherenceFunction, FeynmanBlochNordsieckMatchesReference) {
  for (const auto& s : oracle::kBnSamples) {
    const Vec3 k{s.k[0], s.k[1], s.k[2]};
    const CoherenceFunction c(Family::BN_F, Asymptotic{Branch::plus, 0.0}, kin_with({s.v[0], s.v[1], s.v[2]}),
                              kDisp, kFF);
    const auto got = eval(c, k);
    for (int mu = 0; mu < 4; ++mu) {
      EXPECT_EQ(got[mu].real(), 0.0);
      EXPECT_NEAR(got[mu].imag(), s.im[mu], 1e-14 * std::max(1.0, std::abs(s.im[mu])));
    }
  }
}

TEST(CoherenceFunction, PositionPhase) {
  Kinematics kin = kin_with({0.3, 0.0, 0.1});
  const CoherenceFunction at0(Family::BN_F, Asymptotic{Branch::minus, 0.0}, kin, kDisp, kFF);
  kin.x = {1.0, -2.0, 0.5};
  const CoherenceFunction atx(Family::BN_F, Asymptotic{Branch::minus, 0.0}, kin, kDisp, kFF);
  const Vec3 k{0.4, 0.1, -0.3};
  const auto a = eval(at0, k), b = eval(atx, k);
  for (int mu = 0; mu < 4; ++mu) EXPECT_NEAR(std::abs(b[mu] - a[mu] * std::polar(1.0, -dot(k, kin.x))), 0.0, 1e-15);
  // Dipole families ignore x.
  const CoherenceFunction pfb(Family::PFB, Asymptotic{Branch::plus, 0.0}, kin, kDisp, kFF);
  EXPECT_EQ(pfb.position_phase(k), Complex(1.0));
}

TEST(CoherenceFunction, RejectsSuperluminalVelocity) {
  try {
    CoherenceFunction c(Family::BN_C, Asymptotic{}, kin_with({0.0, 1.2, 0.0}), kDisp, kFF);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPhysicalVelocity);
  }
  EXPECT_THROW(CoherenceFunction(Family::BN_F, FiniteTime{1.0, -0.1}, kin_with({}), kDisp, kFF), NumericalError);
}

TEST(CoherenceFunction, SmallTimeSeriesMatchesClosedForm) {
  for (double t : {1e-4, -3e-4, 2e-3}) {
    const double eps = 0.3, omega = 1.7;
    const double et = t > 0 ? eps : -eps;
    const CoherenceFunction ct(Family::PFB, FiniteTime{t, eps}, kin_with({0.1, 0, 0}), kDisp, kFF);
    // Long double reference for the cancellation-prone closed form.
    const std::complex<long double> zl(-et, omega);
    const std::complex<long double> ref = (std::exp(zl * (long double)t) - 1.0L) / zl;
    const Complex got = ct.time_factor(omega);
    EXPECT_NEAR(std::abs(got - Complex((double)ref.real(), (double)ref.imag())), 0.0, 1e-15 * std::abs(t));
  }
}

TEST(CoherenceFunction, BranchFlipIsEpsTimeSubstitution) {
  // Data at (t < 0, eps) equals the t > 0 closed form with eps -> -eps, t -> -|t|.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const Vec3 v{0.2, 0.1, -0.3};
  for (Family f : kFamilies) {
    for (double t : {0.5, 7.0, 40.0}) {
      const double eps = 0.07;
      const CoherenceFunction neg(f, FiniteTime{-t, eps}, kin_with(v), kDisp, kFF);
      const CoherenceFunction asym_minus(f, Asymptotic{Branch::minus, eps}, kin_with(v), kDisp, kFF);
      for (int i = 0; i < 5; ++i) {
        const Vec3 k{g(rng), g(rng), g(rng)};
        const double om = neg.frequency(k);
        const Complex z(eps, om);  // i Omega - (-eps)
        const Complex finite_ref = (std::exp(z * (-t)) - 1.0) / z;
        EXPECT_NEAR(std::abs(neg.time_factor(om) - finite_ref), 0.0, 1e-14 * std::abs(finite_ref));
        EXPECT_NEAR(std::abs(asym_minus.time_factor(om) - (-1.0 / z)), 0.0, 1e-15 / std::abs(z));
      }
    }
  }
}

TEST(CoherenceFunction, FiniteTimeApproachesAsymptoticPerBranch) {
  const Vec3 v{0.2, 0.0, 0.1};
  const Vec3 k{0.3, -0.4, 0.2};
  const double eps = 0.2;
  for (Family f : kFamilies) {
    const CoherenceFunction plus(f, Asymptotic{Branch::plus, eps}, kin_with(v), kDisp, kFF);
    const CoherenceFunction minus(f, Asymptotic{Branch::minus, eps}, kin_with(v), kDisp, kFF);
    const CoherenceFunction late(f, FiniteTime{400.0, eps}, kin_with(v), kDisp, kFF);
    const CoherenceFunction early(f, FiniteTime{-400.0, eps}, kin_with(v), kDisp, kFF);
    const auto a = eval(plus, k), b = eval(late, k), c = eval(minus, k), d = eval(early, k);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(c[i] - d[i]), 0.0, 1e-14);
    }
  }
}

TEST(L2Norm, AsymptoticDipoleMatchesRadialOracle) {
  // sum_s (v.e_s)^2 integrates over angles to 8 pi |v|^2 / 3, so the norm is |v|^2 I3 / 3.
  const Vec3 v{0.3, -0.2, 0.1};
  const auto grid = default_grid();
  const CoherenceFunction c(Family::PFB, Asymptotic{Branch::plus, 0.0}, kin_with(v), kDisp, kFF);
  EXPECT_NEAR(l2_norm_sq(c, grid) / (norm_sq(v) * oracle::kI3 / 3.0), 1.0, 1e-9);
  const CoherenceFunction cx(Family::PFB, Asymptotic{Branch::plus, 0.0}, kin_with(v), kDisp, kFF,
                             ReferenceAxis::x);
  EXPECT_NEAR(l2_norm_sq(cx, grid) / l2_norm_sq(c, grid), 1.0, 1e-12);
}

TEST(L2Norm, ZeroAtTimeZero) {
  const auto grid = medium_grid();
  for (Family f : kFamilies) {
    const CoherenceFunction c(f, FiniteTime{0.0, 0.1}, kin_with({0.1, 0.1, 0}), kDisp, kFF);
    EXPECT_EQ(l2_norm_sq(c, grid), 0.0);
  }
}

TEST(L2Norm, FiniteTimeLadderApproachesAsymptotic) {
  const auto grid = medium_grid(0.25);
  const double eps = 0.1;
  const Vec3 v{0.3, 0.0, 0.0};
  for (Family f : {Family::PFB, Family::BN_F}) {
    const CoherenceFunction lim(f, Asymptotic{Branch::plus, eps}, kin_with(v), kDisp, kFF);
    const double target = l2_norm_sq(lim, grid);
    double prev = INFINITY;
    for (double t : {10.0, 20.0, 40.0, 80.0, 160.0}) {
      const CoherenceFunction c(f, FiniteTime{t, eps}, kin_with(v), kDisp, kFF);
      const double gap = std::abs(l2_norm_sq(c, grid) - target);
      EXPECT_LT(gap, prev) << to_string(f) << " t=" << t;
      prev = gap;
    }
    EXPECT_LT(prev, 1e-5 * target);
  }
}

TEST(L2Norm, AsymptoticNormGrowsLogarithmicallyAsCutoffFalls) {
  const Vec3 v{0.3, 0.0, 0.0};
  std::vector<double> x, y;
  for (double lambda : {1e-2, 1e-3, 1e-4}) {
    const Dispersion d(lambda);
    const QuadratureGrid grid(GridSpec::defaults_for(d, kFF));
    const CoherenceFunction c(Family::BN_C, Asymptotic{Branch::plus, 0.0}, kin_with(v), d, kFF);
    x.push_back(std::log(1.0 / lambda));
    y.push_back(l2_norm_sq(c, grid));
  }
  EXPECT_GT(y[1] - y[0], 0.0);
  // Equal increments per decade.
  EXPECT_NEAR((y[2] - y[1]) / (y[1] - y[0]), 1.0, 0.02);
}

TEST(ConvergenceProfile, StrongFailsWeakSucceedsWithoutSwitching) {
  const auto grid = medium_grid(0.05);
  const Kinematics kin = kin_with({0.2, 0.0, 0.0});
  const std::vector<double> times = geometric_ladder(10.0, 160.0, 5);
  for (Family f : {Family::PFB, Family::BN_F}) {
    const auto prof = convergence_profile(f, kin, kDisp, kFF, 0.0, times, grid);
    std::vector<double> weak;
    for (const auto& p : prof.points) {
      EXPECT_GE(p.strong_residual / prof.limit_norm, 0.98);
      EXPECT_LE(p.strong_residual / prof.limit_norm, 1.02);
      weak.push_back(p.weak_residual);
    }
    EXPECT_LE(fit_power_law(times, weak).slope, -0.9) << to_string(f);
  }
}

TEST(ConvergenceProfile, StrongConvergenceWithSwitching) {
  const auto grid = medium_grid(0.05);
  const Kinematics kin = kin_with({0.2, 0.0, 0.0});
  const std::vector<double> times{25.0, 50.0, 100.0, 200.0};
  for (Family f : {Family::PFB, Family::BN_F}) {
    const auto prof = convergence_profile(f, kin, kDisp, kFF, 0.1, times, grid);
    for (std::size_t i = 1; i < prof.points.size(); ++i) {
      EXPECT_LT(prof.points[i].strong_residual, prof.points[i - 1].strong_residual);
    }
    EXPECT_LT(prof.points.back().strong_residual, 1e-6 * prof.limit_norm);
    EXPECT_LT(prof.points.back().weak_residual, 1e-6 * prof.limit_norm);
  }
}

TEST(ConvergenceProfile, RejectsBadLadder) {
  const auto grid = medium_grid();
  const std::vector<double> bad{10.0, 5.0};
  EXPECT_THROW(convergence_profile(Family::PFB, kin_with({0.1, 0, 0}), kDisp, kFF, 0.0, bad, grid), NumericalError);
}

TEST(Currents, BlochNordsieckTwoLegCurrentIsConserved) {
  const auto grid = medium_grid();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 3; ++trial) {
    const Vec3 v{u(rng), u(rng), u(rng)}, vp{u(rng), u(rng), u(rng)};
    const CoherenceFunction a(Family::BN_F, Asymptotic{}, kin_with(v), kDisp, kFF);
    const CoherenceFunction b(Family::BN_F, Asymptotic{}, kin_with(vp), kDisp, kFF);
    double worst = 0.0;
    for_each_node(grid, [&](const Vec3& k, double) {
      std::array<double, 4> ca{}, cb{};
      a.coupling(k, ca);
      b.coupling(k, cb);
      const double oa = a.frequency(k), ob = b.frequency(k);
      const double w = kDisp.omega(k);
      const double j0 = ca[0] / oa - cb[0] / ob;
      const Vec3 j{ca[1] / oa - cb[1] / ob, ca[2] / oa - cb[2] / ob, ca[3] / oa - cb[3] / ob};
      worst = std::max(worst, std::abs(w * j0 - dot(k, j)));
    });
    EXPECT_LT(worst, 1e-13);
  }
}

TEST(Currents, DipoleCovariantCurrentIsNotConserved) {
  const Vec3 v{0.3, 0.0, 0.0}, vp{-0.1, 0.2, 0.0};
  const CoherenceFunction a(Family::PFBR, Asymptotic{}, kin_with(v), kDisp, kFF);
  const CoherenceFunction b(Family::PFBR, Asymptotic{}, kin_with(vp), kDisp, kFF);
  const Vec3 k{0.2, -0.5, 0.3};
  std::array<double, 4> ca{}, cb{};
  a.coupling(k, ca);
  b.coupling(k, cb);
  const double w = kDisp.omega(k);
  const double kj = w * (ca[0] - cb[0]) / w - (k.x * (ca[1] - cb[1]) + k.y * (ca[2] - cb[2]) + k.z * (ca[3] - cb[3])) / w;
  EXPECT_GT(std::abs(kj), 0.1);
}
