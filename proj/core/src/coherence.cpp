#include "softphoton/coherence.hpp"

#include <cmath>

namespace softphoton {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::PFB: return "PFB";
    case Family::PFBR: return "PFBR";
    case Family::BN_C: return "BN_C";
    case Family::BN_F: return "BN_F";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : {Family::PFB, Family::PFBR, Family::BN_C, Family::BN_F}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

Metric metric_of(Family f) noexcept {
  return (f == Family::PFB || f == Family::BN_C) ? Metric::hilbert : Metric::indefinite;
}

int components_of(Family f) noexcept { return metric_of(f) == Metric::hilbert ? 2 : 4; }

bool is_bloch_nordsieck(Family f) noexcept { return f == Family::BN_C || f == Family::BN_F; }

void Kinematics::validate() const {
  auto finite3 = [](Vec3 a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); };
  if (!finite3(v) || !(norm(v) < 1.0)) {
    throw NumericalError(ErrorCode::NonPhysicalVelocity, "|v| must be < 1");
  }
  if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError(ErrorCode::InvalidArgument, "mass must be > 0");
  if (!std::isfinite(e)) throw NumericalError(ErrorCode::InvalidArgument, "charge must be finite");
  if (!finite3(x)) throw NumericalError(ErrorCode::InvalidArgument, "position must be finite");
  if (leg_sign != 1 && leg_sign != -1) throw NumericalError(ErrorCode::InvalidArgument, "leg sign must be +1 or -1");
}

CoherenceFunction::CoherenceFunction(Family family, Regime regime, Kinematics kin, Dispersion disp,
                                     FormFactor ff, ReferenceAxis axis)
    : family_(family), regime_(regime), kin_(kin), disp_(disp), ff_(ff), axis_(axis) {
  kin_.validate();
  const double eps = std::visit([](const auto& r) { return r.eps; }, regime_);
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw NumericalError(ErrorCode::InvalidArgument, "adiabatic rate must be >= 0");
  }
  if (const auto* ft = std::get_if<FiniteTime>(&regime_); ft && !std::isfinite(ft->t)) {
    throw NumericalError(ErrorCode::InvalidArgument, "time must be finite");
  }
}

bool CoherenceFunction::same_as(const FieldFunction& other) const {
  if (this == &other) return true;
  const auto* o = dynamic_cast<const CoherenceFunction*>(&other);
  return o && family_ == o->family_ && regime_ == o->regime_ && kin_ == o->kin_ &&
         disp_ == o->disp_ && ff_ == o->ff_ && axis_ == o->axis_;
}

double CoherenceFunction::frequency(Vec3 k) const {
  const double w = disp_.omega(k);
  return is_bloch_nordsieck(family_) ? kin_.dot_k(k, w) : w;
}

void CoherenceFunction::coupling(Vec3 k, std::span<double> out) const {
  switch (family_) {
    case Family::PFB:
    case Family::BN_C: {
      const TransverseBasis b = transverse_basis(k, axis_);
      out[0] = dot(kin_.v, b.e1);
      out[1] = dot(kin_.v, b.e2);
      return;
    }
    case Family::PFBR: {
      const auto tv = kin_.tilde_velocity();
      for (int mu = 0; mu < 4; ++mu) out[mu] = tv[mu];
      return;
    }
    case Family::BN_F: {
      const auto fv = kin_.four_velocity();
      for (int mu = 0; mu < 4; ++mu) out[mu] = fv[mu];
      return;
    }
  }
}

Complex CoherenceFunction::time_factor(double omega) const {
  if (const auto* ft = std::get_if<FiniteTime>(&regime_)) {
    const double t = ft->t;
    if (t == 0.0) return 0.0;
    const double eps_t = t > 0.0 ? ft->eps : -ft->eps;
    const Complex z(-eps_t, omega);
    const Complex zt = z * t;
    if (std::abs(zt) < 1e-2) {
      // (exp(zt) - 1)/z = t (1 + zt/2 + (zt)^2/6 + ...)
      Complex term = t, sum = t;
      for (int n = 2; n <= 8; ++n) {
        term *= zt / static_cast<double>(n);
        sum += term;
      }
      return sum;
    }
    if (std::abs(z) < 1e-300) throw NumericalError(ErrorCode::DegenerateDenominator, "|i Omega - eps| vanishes");
    return (std::exp(zt) - 1.0) / z;
  }
  const auto& as = std::get<Asymptotic>(regime_);
  const Complex z(-branch_sign(as.branch) * as.eps, omega);
  if (std::abs(z) < 1e-300) throw NumericalError(ErrorCode::DegenerateDenominator, "|i Omega - eps| vanishes");
  return -1.0 / z;
}

Complex CoherenceFunction::position_phase(Vec3 k) const {
  if (!is_bloch_nordsieck(family_)) return 1.0;
  const double kx = dot(k, kin_.x);
  return kx == 0.0 ? Complex(1.0) : std::polar(1.0, -kx);
}

void CoherenceFunction::eval(Vec3 k, std::span<Complex> out) const {
  const int n = components();
  const double w = disp_.omega(k);
  const double omega = is_bloch_nordsieck(family_) ? kin_.dot_k(k, w) : w;
  const Complex common = ff_(k) / std::sqrt(2.0 * w) * time_factor(omega) * position_phase(k);
  std::array<double, kMaxComponents> c{};
  coupling(k, std::span(c.data(), n));
  for (int i = 0; i < n; ++i) out[i] = c[i] * common;
}

double l2_norm_sq(const CoherenceFunction& c, const QuadratureGrid& grid) {
  return hilbert_inner(c, c, grid).real();
}

AnalyticField weak_test_function(Family family, const Kinematics& kin, const FormFactor& ff,
                                 ReferenceAxis axis) {
  const double centre = 0.5 * ff.uv_scale();
  const double width = 0.125 * ff.uv_scale();
  // Only the coupling factors are needed; the regime is irrelevant.
  const CoherenceFunction shape(family, FiniteTime{}, kin, Dispersion(1.0), ff, axis);
  const int n = components_of(family);
  return AnalyticField(n, [shape, centre, width, n](Vec3 k, std::span<Complex> out) {
    const double s = (norm(k) - centre) / width;
    const double g = std::exp(-0.5 * s * s);
    std::array<double, kMaxComponents> c{};
    shape.coupling(k, std::span(c.data(), n));
    for (int i = 0; i < n; ++i) out[i] = g * c[i];
  });
}

ConvergenceProfile convergence_profile(Family family, const Kinematics& kin, const Dispersion& disp,
                                       const FormFactor& ff, double eps,
                                       std::span<const double> times, const QuadratureGrid& grid) {
  if (!(eps >= 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "adiabatic rate must be >= 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw NumericalError(ErrorCode::InvalidArgument, "time ladder must be positive and increasing");
    }
  }
  const CoherenceFunction limit(family, Asymptotic{Branch::plus, eps}, kin, disp, ff);
  const AnalyticField probe = weak_test_function(family, kin, ff);
  const int n = components_of(family);

  ConvergenceProfile out;
  out.limit_norm = std::sqrt(l2_norm_sq(limit, grid));
  for (double t : times) {
    const CoherenceFunction ft(family, FiniteTime{t, eps}, kin, disp, ff);
    ConvergencePoint p;
    p.t = t;
    p.strong_residual = std::sqrt(integrate(grid, [&](const Vec3& k) {
      ComponentBuffer a{}, b{};
      ft.eval(k, std::span(a.data(), n));
      limit.eval(k, std::span(b.data(), n));
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::norm(a[i] - b[i]);
      return s;
    }));
    p.weak_residual = std::abs(integrate(grid, [&](const Vec3& k) {
      ComponentBuffer a{}, b{}, g{};
      ft.eval(k, std::span(a.data(), n));
      limit.eval(k, std::span(b.data(), n));
      probe.eval(k, std::span(g.data(), n));
      Complex s = 0.0;
      for (int i = 0; i < n; ++i) s += std::conj(g[i]) * (a[i] - b[i]);
      return s;
    }));
    out.points.push_back(p);
  }
  return out;
}

}  // namespace softphoton
