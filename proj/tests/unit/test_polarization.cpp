#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "softphoton/polarization.hpp"

using namespace softphoton;

namespace {

Vec3 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng)};
}

double comp(Vec3 a, int i) { return i == 0 ? a.x : (i == 1 ? a.y : a.z); }

QuadratureGrid medium_grid() {
  GridSpec spec;
  spec.k_min = 1e-4;
  spec.k_max = 10.0;
  spec.radial_panels = 12;
  spec.nodes_per_panel = 16;
  spec.n_cos = 32;
  spec.n_phi = 32;
  return QuadratureGrid(spec);
}

AnalyticField gaussian_field(int n, std::vector<Complex> coeffs, double width) {
  return AnalyticField(n, [coeffs, width, n](Vec3 k, std::span<Complex> out) {
    const double g = std::exp(-norm_sq(k) / (2.0 * width * width));
    for (int c = 0; c < n; ++c) out[c] = coeffs[c] * g;
  });
}

// Smooth fields with some angular structure and complex coefficients.
AnalyticField random_field(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(n), b(n);
  for (int c = 0; c < n; ++c) {
    a[c] = {g(rng), g(rng)};
    b[c] = {g(rng), g(rng)};
  }
  const Vec3 dir = random_vec(rng);
  return AnalyticField(n, [a, b, dir, n](Vec3 k, std::span<Complex> out) {
    const double r2 = norm_sq(k);
    for (int c = 0; c < n; ++c) out[c] = (a[c] + b[c] * dot(dir, k)) * std::exp(-r2);
  });
}

}  // namespace

TEST(TransverseBasis, CompletenessAndTransversality) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 k = random_vec(rng);
    for (auto axis : {ReferenceAxis::z, ReferenceAxis::x}) {
      const auto b = transverse_basis(k, axis);
      const Vec3 kh = (1.0 / norm(k)) * k;
      EXPECT_NEAR(dot(k, b.e1), 0.0, 1e-14 * norm(k));
      EXPECT_NEAR(dot(k, b.e2), 0.0, 1e-14 * norm(k));
      EXPECT_NEAR(dot(b.e1, b.e1), 1.0, 1e-14);
      EXPECT_NEAR(dot(b.e2, b.e2), 1.0, 1e-14);
      EXPECT_NEAR(dot(b.e1, b.e2), 0.0, 1e-14);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double s = comp(b.e1, i) * comp(b.e1, j) + comp(b.e2, i) * comp(b.e2, j) + comp(kh, i) * comp(kh, j);
          EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
        }
    }
  }
}

TEST(TransverseBasis, FollowsConventionAndFallback) {
  const auto b = transverse_basis({0.0, 1.0, 0.0});
  // z x y = -x
  EXPECT_NEAR(b.e1.x, -1.0, 1e-15);
  EXPECT_NEAR(b.e2.z, 1.0, 1e-15);  // y x (-x) = z

  const auto p = transverse_basis({0.0, 0.0, 2.0});
  // fallback axis x: x x z = -y
  EXPECT_NEAR(p.e1.y, -1.0, 1e-15);
  const Vec3 e2 = cross(Vec3{0, 0, 1}, p.e1);
  EXPECT_NEAR(norm(p.e2 - e2), 0.0, 1e-15);

  const auto q = transverse_basis({1e-10, 0.0, -3.0});
  EXPECT_NEAR(norm(q.e1), 1.0, 1e-14);
  EXPECT_NEAR(dot(q.e1, q.e2), 0.0, 1e-14);
}

TEST(TransverseBasis, ZeroMomentumRejected) {
  try {
    transverse_basis(Vec3{});
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMomentum);
  }
}

TEST(TransverseBasis, PolarizationSumReduction) {
  const auto grid = medium_grid();
  std::mt19937_64 rng(5);
  const Vec3 u = random_vec(rng);
  double worst = 0.0;
  for_each_node(grid, [&](const Vec3& k, double) {
    const auto b = transverse_basis(k);
    const double lhs = std::pow(dot(u, b.e1), 2) + std::pow(dot(u, b.e2), 2);
    const double rhs = norm_sq(u) - std::pow(dot(u, k) / norm(k), 2);
    worst = std::max(worst, std::abs(lhs - rhs));
  });
  EXPECT_LT(worst, 1e-13);
}

TEST(HilbertInner, PositiveAndParityOrthogonal) {
  const auto grid = medium_grid();
  std::mt19937_64 rng(3);
  const auto f = random_field(2, rng);
  const Complex ff = hilbert_inner(f, f, grid);
  EXPECT_GT(ff.real(), 0.0);
  EXPECT_NEAR(ff.imag(), 0.0, 1e-14 * ff.real());

  const AnalyticField even(1, [](Vec3 k, std::span<Complex> o) { o[0] = std::exp(-norm_sq(k)) * k.z * k.z; });
  const AnalyticField odd(1, [](Vec3 k, std::span<Complex> o) { o[0] = Complex(0.3, 1.0) * std::exp(-norm_sq(k)) * k.z; });
  EXPECT_LT(std::abs(hilbert_inner(even, odd, grid)), 1e-10);
}

TEST(HilbertInner, GaussianPairMatchesRadialOracle) {
  const auto grid = QuadratureGrid(GridSpec::defaults_for(Dispersion(0.1), FormFactor(1.0)));
  const auto f = gaussian_field(1, {1.0}, 1.0);
  const auto g = gaussian_field(1, {1.0}, std::sqrt(0.5));
  const double ref = oracle::radial_riemann(
      [](double k) { return std::exp(-0.5 * k * k) * std::exp(-k * k); }, 10.0);
  EXPECT_NEAR(ref / oracle::kGaussianPair, 1.0, 1e-10);
  EXPECT_NEAR(hilbert_inner(f, g, grid).real() / oracle::kGaussianPair, 1.0, 1e-10);
}

TEST(IndefiniteInner, SignStructure) {
  const auto grid = medium_grid();
  const auto h = gaussian_field(1, {Complex(1.0, 0.5)}, 1.0);
  const double hh = hilbert_inner(h, h, grid).real();
  const auto t = gaussian_field(4, {Complex(1.0, 0.5), 0.0, 0.0, 0.0}, 1.0);
  const auto s = gaussian_field(4, {0.0, Complex(1.0, 0.5), 0.0, 0.0}, 1.0);
  const auto null = gaussian_field(4, {Complex(1.0, 0.5), Complex(1.0, 0.5), 0.0, 0.0}, 1.0);
  EXPECT_NEAR(indefinite_inner(t, t, grid).real(), hh, 1e-13 * hh);
  EXPECT_NEAR(indefinite_inner(s, s, grid).real(), -hh, 1e-13 * hh);
  EXPECT_NEAR(std::abs(indefinite_inner(null, null, grid)), 0.0, 1e-13 * hh);
}

TEST(IndefiniteInner, RequiresFourComponents) {
  const auto grid = medium_grid();
  const auto f = gaussian_field(2, {1.0, 1.0}, 1.0);
  try {
    indefinite_inner(f, f, grid);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexMismatch);
  }
  const auto g = gaussian_field(4, {1.0, 1.0, 0.0, 0.0}, 1.0);
  EXPECT_THROW(hilbert_inner(f, g, grid), NumericalError);
}

TEST(InnerProducts, HermitianSesquilinearAndBounded) {
  const auto grid = medium_grid();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = random_field(4, rng);
    const auto g = random_field(4, rng);
    for (Metric m : {Metric::hilbert, Metric::indefinite}) {
      const Complex fg = inner(m, f, g, grid);
      const Complex gf = inner(m, g, f, grid);
      EXPECT_NEAR(std::abs(fg - std::conj(gf)), 0.0, 1e-13 * std::abs(fg));
    }
    // Linear in the second argument, antilinear in the first.
    const Complex c(0.7, -1.3);
    const AnalyticField cg(4, [&](Vec3 k, std::span<Complex> o) {
      g.eval(k, o);
      for (auto& x : o) x *= c;
    });
    const Complex base = indefinite_inner(f, g, grid);
    EXPECT_NEAR(std::abs(indefinite_inner(f, cg, grid) - c * base), 0.0, 1e-13 * std::abs(base));
    EXPECT_NEAR(std::abs(indefinite_inner(cg, f, grid) - std::conj(c) * std::conj(base)), 0.0,
                1e-13 * std::abs(base));

    const double nf = std::sqrt(hilbert_inner(f, f, grid).real());
    const double ng = std::sqrt(hilbert_inner(g, g, grid).real());
    EXPECT_LE(std::abs(hilbert_inner(f, g, grid)), nf * ng * (1 + 1e-14));
    // The majorant bounds the indefinite pairing.
    EXPECT_LE(std::abs(indefinite_inner(f, g, grid)), nf * ng * (1 + 1e-14));
  }
}

TEST(PairingDensity, MetricSigns) {
  const std::array<Complex, 4> a{Complex(1, 1), 2.0, 0.0, Complex(0, 1)};
  const std::array<Complex, 4> b{3.0, Complex(0, 1), 5.0, 1.0};
  const std::span<const Complex> sa(a), sb(b);
  EXPECT_EQ(pairing_density(Metric::hilbert, sa, sb), hilbert_density(sa, sb));
  EXPECT_EQ(pairing_density(Metric::indefinite, sa, sb), -minkowski_density(sa, sb));
  // conj(1+i)*3 - (2*i + 0 + (-i)*1) = 3 - 3i - i
  EXPECT_EQ(minkowski_density(sa, sb), Complex(3.0, -4.0));
}
