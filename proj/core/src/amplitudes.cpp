#include "softphoton/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "softphoton/fit.hpp"

namespace softphoton {

namespace {

ModelSpec leg(const ModelSpec& base, Vec3 v, int leg_sign) {
  ModelSpec s = base.with_velocity(v);
  s.kin.leg_sign = leg_sign;
  return s;
}

ModelSpec incoming(const ModelSpec& base, Vec3 v) { return leg(base, v, -1); }
ModelSpec outgoing(const ModelSpec& base, Vec3 v) { return leg(base, v, +1); }

void require_family(const ModelSpec& base, Family f, const char* what) {
  if (base.family != f) {
    throw NumericalError(ErrorCode::InvalidArgument, std::string(what) + " needs family " + to_string(f));
  }
}

}  // namespace

IRExponent overlap_exponent(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid) {
  const auto in = moeller(incoming(base, v), Branch::plus);
  const auto out = moeller(outgoing(base, v_prime), Branch::minus);
  return {base.family, v, v_prime, base.disp.lambda(), log_coherent_overlap(out, in, grid)};
}

IRExponent dipole_overlap_exponent(Gauge gauge, const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                   const QuadratureGrid& grid) {
  const Family f = gauge == Gauge::coulomb ? Family::PFB : Family::PFBR;
  return overlap_exponent(base.with_family(f), v, v_prime, grid);
}

Complex bn_virtual_exponent(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid) {
  incoming(base, v).validate();
  outgoing(base, v_prime).validate();
  const double vv = 1.0 - dot(v, v_prime);
  const double e2 = base.kin.e * base.kin.e;
  const Complex i(0.0, 1.0);
  const Complex s = integrate(grid, [&](const Vec3& k) {
    const double w = base.disp.omega(k);
    const double r = base.ff(k);
    return r * r / (2.0 * w) * (i / (w - dot(v, k))) * (i / (w - dot(v_prime, k)));
  });
  return e2 * vv * s;
}

Complex bn_virtual_factor(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid) {
  return std::exp(bn_virtual_exponent(base, v, v_prime, grid));
}

double WavefunctionFactor::value() const { return std::exp(direct_exponent); }

WavefunctionFactor bn_wavefunction_factor(const ModelSpec& base, Vec3 v_leg, const QuadratureGrid& grid) {
  const ModelSpec spec = base.with_velocity(v_leg);
  spec.validate();
  const double e2 = spec.kin.e * spec.kin.e;
  const double vv = spec.kin.minkowski_v_sq();
  const auto& disp = spec.disp;
  const auto& ff = spec.ff;

  WavefunctionFactor out;
  const double direct = integrate(grid, [&](const Vec3& k) {
    const double w = disp.omega(k);
    const double r = ff(k);
    const double a = 1.0 - dot((1.0 / w) * k, v_leg);
    return r * r / (w * w * w * a * a);
  });
  out.direct_exponent = 0.25 * e2 * vv * direct;

  // Sigma(eps)/(i eps) on a halving eps ladder, extrapolated to eps = 0.
  // The first step sits well below the smallest v.k = lambda sqrt(1 - |v|^2).
  const double h0 = 0.1 * disp.lambda() * std::sqrt(1.0 - norm_sq(v_leg));
  constexpr int kLevels = 6;
  std::vector<std::vector<double>> table(kLevels);
  for (int j = 0; j < kLevels; ++j) {
    const double eps = h0 / std::ldexp(1.0, j);
    const Complex quotient = integrate(grid, [&](const Vec3& k) {
      const double w = disp.omega(k);
      const double r = ff(k);
      const double vk = w - dot(v_leg, k);
      return Complex(-vv * r * r / (2.0 * w)) / (vk * Complex(vk, eps));
    });
    table[j].push_back(quotient.real());
    for (int m = 1; m <= j; ++m) {
      const double f = std::ldexp(1.0, m) - 1.0;
      table[j].push_back(table[j][m - 1] + (table[j][m - 1] - table[j - 1][m - 1]) / f);
    }
  }
  const double dsigma = table[kLevels - 1][kLevels - 1];
  out.self_energy_exponent = -0.5 * e2 * dsigma;
  return out;
}

SoftFactor soft_factor_full(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid) {
  require_family(base, Family::BN_F, "soft_factor_full");
  const auto in = moeller(incoming(base, v), Branch::plus);
  const auto out = moeller(outgoing(base, v_prime), Branch::minus);
  const auto id = DisplacementOperator::identity(Metric::indefinite);

  SoftFactor s;
  // <Omega_- Psi, Psi>, <Psi, Omega_+ Psi> and e^2 P(f_v', f_v) = P(alpha_v', alpha_v).
  s.assembled_exponent = log_coherent_overlap(out, id, grid) + log_coherent_overlap(id, in, grid) +
                         pairing(out, in, grid);
  s.closed_form_exponent = bn_wavefunction_factor(base, v_prime, grid).direct_exponent +
                           bn_wavefunction_factor(base, v, grid).direct_exponent +
                           bn_virtual_exponent(base, v, v_prime, grid);
  return s;
}

DisplacementOperator scattering_displacement(const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                             const QuadratureGrid& grid) {
  const auto in = moeller(incoming(base, v), Branch::plus);
  const auto out = moeller(outgoing(base, v_prime), Branch::minus);
  return compose(out.adjoint(), in, grid);
}

Complex emission_amplitude(const ModelSpec& base, Vec3 v, Vec3 v_prime, const PhotonList& photons,
                           Complex hard, const QuadratureGrid& grid) {
  require_family(base, Family::BN_F, "emission_amplitude");
  return hard * n_photon_element(scattering_displacement(base, v, v_prime, grid), photons, grid);
}

QuadratureGrid default_grid(const Dispersion& disp, const FormFactor& ff) {
  return QuadratureGrid(GridSpec::defaults_for(disp, ff));
}

GaugeComparison gauge_compare_bn(const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                 const std::vector<double>& lambdas, const GridFactory& make_grid) {
  if (lambdas.size() < 2) throw NumericalError(ErrorCode::InvalidArgument, "lambda ladder needs >= 2 points");
  GaugeComparison out;
  std::vector<double> x, yf, yc, ydc, ydf;
  for (double lambda : lambdas) {
    ModelSpec spec = base;
    spec.disp = Dispersion(lambda);
    const QuadratureGrid grid = make_grid(spec.disp, spec.ff);

    GaugeComparisonRow row;
    row.lambda = lambda;
    row.re_feynman = overlap_exponent(spec.with_family(Family::BN_F), v, v_prime, grid).value.real();
    row.re_coulomb = overlap_exponent(spec.with_family(Family::BN_C), v, v_prime, grid).value.real();
    row.re_dipole_coulomb = dipole_overlap_exponent(Gauge::coulomb, spec, v, v_prime, grid).value.real();
    row.re_dipole_feynman = dipole_overlap_exponent(Gauge::feynman, spec, v, v_prime, grid).value.real();

    const Kinematics kin_in = incoming(spec, v).kin;
    const Kinematics kin_out = outgoing(spec, v_prime).kin;
    const auto tv = kin_in.tilde_velocity();
    const auto tvp = kin_out.tilde_velocity();
    for_each_node(grid, [&](const Vec3& k, double) {
      const double w = spec.disp.omega(k);
      const double a = kin_in.dot_k(k, w), b = kin_out.dot_k(k, w);
      // J = (1, v)/v.k - (1, v')/v'.k
      const double j0 = 1.0 / a - 1.0 / b;
      const Vec3 jv = (1.0 / a) * v - (1.0 / b) * v_prime;
      row.max_abs_kj = std::max(row.max_abs_kj, std::abs(w * j0 - dot(k, jv)));
      // dipole current (tilde_v - tilde_v')/omega
      const double d0 = (tv[0] - tvp[0]) / w;
      const Vec3 dv = (1.0 / w) * (v - v_prime);
      row.max_abs_kj_dipole = std::max(row.max_abs_kj_dipole, std::abs(w * d0 - dot(k, dv)));
    });

    out.max_abs_kj = std::max(out.max_abs_kj, row.max_abs_kj);
    x.push_back(std::log(1.0 / lambda));
    yf.push_back(row.re_feynman);
    yc.push_back(row.re_coulomb);
    ydc.push_back(row.re_dipole_coulomb);
    ydf.push_back(row.re_dipole_feynman);
    out.rows.push_back(row);
  }
  out.slope_feynman = fit_line(x, yf).slope;
  out.slope_coulomb = fit_line(x, yc).slope;
  out.slope_rel_diff = std::abs(out.slope_feynman - out.slope_coulomb) / std::abs(out.slope_coulomb);
  out.slope_dipole_coulomb = fit_line(x, ydc).slope;
  out.slope_dipole_feynman = fit_line(x, ydf).slope;
  out.dipole_slope_ratio = out.slope_dipole_feynman / out.slope_dipole_coulomb;
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (const auto& r : out.rows) {
    const double d = r.re_feynman - r.re_coulomb;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    sum += d;
  }
  out.offset_mean = sum / static_cast<double>(out.rows.size());
  out.offset_spread = hi - lo;
  return out;
}

namespace {

struct TimeIntegrals {
  Complex nested;  // int_0^T e^{a t} int_0^t e^{b s} ds dt
  Complex outer;   // int_0^T e^{a t} dt
  Complex inner;   // int_0^T e^{b t} dt
};

// Composite Gauss-Legendre in t with panels no wider than h.  The running
// inner integral over a partial panel is e^{b s_p} int_0^tau e^{b s} ds, so
// those partial integrals are computed once per node and reused.
TimeIntegrals time_integrals(Complex a, Complex b, double T, double h, const GaussLegendreRule& gl) {
  const int panels = std::max(1, static_cast<int>(std::ceil(T / h)));
  const double width = T / panels;
  const std::size_t n = gl.nodes.size();
  std::vector<double> tau(n), wt(n);
  std::vector<Complex> ea(n), partial(n);
  Complex full_b = 0.0, full_a = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    tau[q] = 0.5 * width * (1.0 + gl.nodes[q]);
    wt[q] = 0.5 * width * gl.weights[q];
    ea[q] = std::exp(a * tau[q]);
    full_a += wt[q] * ea[q];
    full_b += wt[q] * std::exp(b * tau[q]);
    Complex p = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double s = 0.5 * tau[q] * (1.0 + gl.nodes[r]);
      p += 0.5 * tau[q] * gl.weights[r] * std::exp(b * s);
    }
    partial[q] = p;
  }
  ComplexCompensatedSum nested, outer, inner;
  Complex before = 0.0;  // int_0^{s_p} e^{b s} ds
  for (int p = 0; p < panels; ++p) {
    const double sp = width * p;
    const Complex ea_p = std::exp(a * sp);
    const Complex eb_p = std::exp(b * sp);
    for (std::size_t q = 0; q < n; ++q) {
      nested.add(wt[q] * ea_p * ea[q] * (before + eb_p * partial[q]));
    }
    outer.add(ea_p * full_a);
    inner.add(eb_p * full_b);
    before += eb_p * full_b;
  }
  return {nested.value(), outer.value(), inner.value()};
}

}  // namespace

CrosscheckReport perturbative_crosscheck(const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                         const QuadratureGrid& grid, CrosscheckOptions opts) {
  const double eps = base.eps;
  if (!(eps > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "cross-check needs eps > 0");
  if (!(opts.horizon > 0.0) || opts.time_nodes < 2) {
    throw NumericalError(ErrorCode::InvalidArgument, "cross-check time quadrature settings invalid");
  }
  // The e^2 coefficient does not depend on e; evaluate at unit charge.
  ModelSpec unit = base;
  unit.kin.e = 1.0;
  const ModelSpec in = incoming(unit, v);
  const ModelSpec out = outgoing(unit, v_prime);

  CrosscheckReport rep;
  rep.coherent = log_coherent_overlap(regularized_moeller(out, Branch::minus, grid),
                                      regularized_moeller(in, Branch::plus, grid), grid);

  // Per-node Dyson terms.  g = rho/sqrt(2 omega) C phase_x is the current
  // profile; H(t) = -e exp(-eps|t|) Phi(g exp(i Omega t)) + kappa(t).
  const CoherenceFunction shape_in(in.family, FiniteTime{}, in.kin, in.disp, in.ff);
  const CoherenceFunction shape_out(out.family, FiniteTime{}, out.kin, out.disp, out.ff);
  const Metric metric = in.metric();
  const int nc = components_of(in.family);
  const double T = opts.horizon / eps;
  const GaussLegendreRule gl = gauss_legendre(opts.time_nodes);
  const Complex I(0.0, 1.0);

  auto profile = [&](const CoherenceFunction& c, const Vec3& k, ComponentBuffer& g) {
    std::array<double, kMaxComponents> cpl{};
    c.coupling(k, std::span(cpl.data(), nc));
    const double w = c.dispersion().omega(k);
    const Complex common = c.form_factor()(k) / std::sqrt(2.0 * w) * c.position_phase(k);
    for (int i = 0; i < nc; ++i) g[i] = cpl[i] * common;
  };
  auto panel = [&](double omega) { return std::min({std::numbers::pi / std::abs(omega), 1.0 / eps, T}); };

  const Complex field_part = integrate(grid, [&](const Vec3& k) {
    ComponentBuffer g{}, gp{};
    profile(shape_in, k, g);
    profile(shape_out, k, gp);
    const std::span<const Complex> sg(g.data(), nc), sgp(gp.data(), nc);
    const double om = shape_in.frequency(k);
    const double omp = shape_out.frequency(k);

    // t > 0 leg: int_0^T dt int_0^t dt' e^{-eps(t+t')} e^{-i om (t - t')}
    const TimeIntegrals tin = time_integrals(Complex(-eps, -om), Complex(-eps, om), T, panel(om), gl);
    // t < 0 leg after t -> -t: int_0^T du e^{(i om' - eps) u} int_u^T du' e^{(-i om' - eps) u'}
    const TimeIntegrals tout = time_integrals(Complex(-eps, omp), Complex(-eps, -omp), T, panel(omp), gl);
    const Complex later_leg = tout.outer * tout.inner - tout.nested;
    // int_0^T e^{(i om - eps) t} dt and int_{-T}^0 e^{(i om' + eps) t} dt
    const Complex j_in = tin.inner;
    const Complex j_out = tout.inner;

    return -(tin.nested * pairing_density(metric, sg, sg) + later_leg * pairing_density(metric, sgp, sgp) +
             std::conj(j_out) * j_in * pairing_density(metric, sgp, sg));
  });

  // Counterterm kappa(t) = K exp(-2 eps |t|) on each leg, integrated over its half line.
  const double K_in = PhaseHistory(in, grid).counterterm_coefficient();
  const double K_out = PhaseHistory(out, grid).counterterm_coefficient();
  const double switch_integral = -std::expm1(-2.0 * eps * T) / (2.0 * eps);
  rep.dyson = field_part - I * (K_in + K_out) * switch_integral;
  rep.rel_diff = std::abs(rep.dyson - rep.coherent) / std::abs(rep.coherent);
  return rep;
}

}  // namespace softphoton
