#include "softphoton/models.hpp"

#include <cmath>
#include <memory>

#include "softphoton/fit.hpp"

namespace softphoton {

ModelSpec ModelSpec::with_velocity(Vec3 v) const {
  ModelSpec s = *this;
  s.kin.v = v;
  return s;
}

ModelSpec ModelSpec::with_family(Family f) const {
  ModelSpec s = *this;
  s.family = f;
  return s;
}

ModelSpec ModelSpec::with_eps(double e) const {
  ModelSpec s = *this;
  s.eps = e;
  return s;
}

void ModelSpec::validate() const {
  kin.validate();
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw NumericalError(ErrorCode::InvalidArgument, "adiabatic rate must be >= 0");
  }
}

const char* to_string(CountertermKind k) noexcept {
  switch (k) {
    case CountertermKind::z: return "z";
    case CountertermKind::z1: return "z1";
    case CountertermKind::z2: return "z2";
  }
  return "?";
}

std::optional<CountertermKind> counterterm_from_string(std::string_view s) {
  for (auto k : {CountertermKind::z, CountertermKind::z1, CountertermKind::z2}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

CountertermKind natural_counterterm(Family f) noexcept {
  switch (f) {
    case Family::BN_C: return CountertermKind::z1;
    case Family::BN_F: return CountertermKind::z2;
    default: return CountertermKind::z;
  }
}

double counterterm_value(CountertermKind kind, const ModelSpec& spec, const QuadratureGrid& grid) {
  spec.validate();
  const auto& disp = spec.disp;
  const auto& ff = spec.ff;
  if (kind == CountertermKind::z) {
    const double s = integrate(grid, [&](const Vec3& k) {
      const double w = disp.omega(k);
      const double r = ff(k);
      return r * r / (w * w);
    });
    return 2.0 / (3.0 * spec.kin.m) * s;
  }
  const Kinematics& kin = spec.kin;
  const double s = integrate(grid, [&](const Vec3& k) {
    const double w = disp.omega(k);
    const double r = ff(k);
    return r * r / (w * kin.dot_k(k, w));
  });
  return (kind == CountertermKind::z1 ? 1.0 / 3.0 : 0.5) * s;
}

Counterterm counterterm(const ModelSpec& spec, const QuadratureGrid& grid) {
  const auto kind = natural_counterterm(spec.family);
  return {kind, counterterm_value(kind, spec, grid)};
}

PhaseHistory::PhaseHistory(const ModelSpec& spec, const QuadratureGrid& grid, PhaseOptions opts)
    : spec_(spec), grid_(grid) {
  spec_.validate();
  const auto kind = opts.counterterm_override.value_or(natural_counterterm(spec.family));
  const double base = opts.counterterm_value ? *opts.counterterm_value : counterterm_value(kind, spec, grid);
  z_ = base * opts.counterterm_scale;

  const double e2 = spec.kin.e * spec.kin.e;
  const double v2 = norm_sq(spec.kin.v);
  const double m = spec.kin.m;
  switch (spec.family) {
    case Family::PFB:
      d_coeff_ = e2 * v2 / 3.0;
      ct_coeff_ = e2 * z_ * m * v2 / 2.0;
      break;
    case Family::PFBR:
      d_coeff_ = -e2 / 2.0;
      ct_coeff_ = -0.75 * e2 * m * z_;
      break;
    case Family::BN_C:
      d_coeff_ = e2 * v2 / 3.0;
      ct_coeff_ = e2 * z_ * v2;
      break;
    case Family::BN_F: {
      const double vv = spec.kin.minkowski_v_sq();
      d_coeff_ = -e2 * vv / 2.0;
      ct_coeff_ = -e2 * z_ * vv;
      break;
    }
  }
}

double PhaseHistory::switching_factor(double t) const {
  const double eps = spec_.eps;
  if (t == 0.0) return 0.0;
  if (eps == 0.0) return -t;
  const double sign = t > 0.0 ? 1.0 : -1.0;
  return std::expm1(-2.0 * eps * std::abs(t)) / (2.0 * eps * sign);
}

double PhaseHistory::d_integral(double t) const {
  if (t == 0.0) return 0.0;
  const double eps = spec_.eps;
  const double damp = std::exp(-eps * std::abs(t));
  const double sw = switching_factor(t);
  const bool bn = is_bloch_nordsieck(spec_.family);
  const Kinematics& kin = spec_.kin;
  return -integrate(grid_, [&](const Vec3& k) {
    const double w = spec_.disp.omega(k);
    const double om = bn ? kin.dot_k(k, w) : w;
    const double r = spec_.ff(k);
    return r * r / (w * (om * om + eps * eps)) * (damp * std::sin(om * t) + om * sw);
  });
}

double PhaseHistory::d_integral_limit(Branch branch) const {
  const double eps = spec_.eps;
  if (!(eps > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "asymptotic phase needs eps > 0");
  const bool bn = is_bloch_nordsieck(spec_.family);
  const Kinematics& kin = spec_.kin;
  const double s = integrate(grid_, [&](const Vec3& k) {
    const double w = spec_.disp.omega(k);
    const double om = bn ? kin.dot_k(k, w) : w;
    const double r = spec_.ff(k);
    return r * r * om / (w * (om * om + eps * eps));
  });
  return branch_sign(branch) / (2.0 * eps) * s;
}

double PhaseHistory::argument(double t) const {
  return d_coeff_ * d_integral(t) + ct_coeff_ * switching_factor(t);
}

double PhaseHistory::asymptotic_argument(Branch branch) const {
  const double eps = spec_.eps;
  if (!(eps > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "asymptotic phase needs eps > 0");
  const double sw = -branch_sign(branch) / (2.0 * eps);
  return d_coeff_ * d_integral_limit(branch) + ct_coeff_ * sw;
}

DisplacementOperator evolution_operator(const ModelSpec& spec, double t, const QuadratureGrid& grid,
                                        PhaseOptions opts) {
  spec.validate();
  if (t == 0.0) return DisplacementOperator::identity(spec.metric());
  const PhaseHistory ph(spec, grid, opts);
  auto f = std::make_shared<CoherenceFunction>(spec.family, FiniteTime{t, spec.eps}, spec.kin, spec.disp,
                                               spec.ff);
  return DisplacementOperator(spec.metric(), ph.argument(t), spec.kin.e, std::move(f));
}

DisplacementOperator regularized_moeller(const ModelSpec& spec, Branch branch,
                                         const QuadratureGrid& grid, PhaseOptions opts) {
  spec.validate();
  if (!(spec.eps > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "Moeller construction needs eps > 0");
  const PhaseHistory ph(spec, grid, opts);
  auto f = std::make_shared<CoherenceFunction>(spec.family, Asymptotic{branch, spec.eps}, spec.kin,
                                               spec.disp, spec.ff);
  return DisplacementOperator(spec.metric(), ph.asymptotic_argument(branch), spec.kin.e, std::move(f));
}

DisplacementOperator moeller(const ModelSpec& spec, Branch branch) {
  spec.validate();
  if (!(spec.eps > 0.0)) throw NumericalError(ErrorCode::InvalidArgument, "Moeller construction needs eps > 0");
  const bool transverse = spec.family == Family::PFB || spec.family == Family::BN_C;
  if (transverse && spec.kin.v == Vec3{}) return DisplacementOperator::identity(spec.metric());
  auto f = std::make_shared<CoherenceFunction>(spec.family, Asymptotic{branch, 0.0}, spec.kin, spec.disp,
                                               spec.ff);
  return DisplacementOperator(spec.metric(), 0.0, spec.kin.e, std::move(f));
}

std::vector<CancellationPoint> cancellation_scan(const ModelSpec& spec, std::span<const double> eps_ladder,
                                                 const QuadratureGrid& grid, PhaseOptions opts) {
  spec.validate();
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0) || (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))) {
      throw NumericalError(ErrorCode::InvalidArgument, "eps ladder must be positive and decreasing");
    }
  }
  if (!opts.counterterm_value) {
    const auto kind = opts.counterterm_override.value_or(natural_counterterm(spec.family));
    opts.counterterm_value = counterterm_value(kind, spec, grid);
  }
  std::vector<CancellationPoint> out;
  for (double eps : eps_ladder) {
    const PhaseHistory ph(spec.with_eps(eps), grid, opts);
    out.push_back({eps, ph.asymptotic_argument(Branch::plus)});
  }
  return out;
}

const char* to_string(CancellationVerdict v) noexcept {
  switch (v) {
    case CancellationVerdict::convergent: return "convergent";
    case CancellationVerdict::divergent: return "divergent";
    case CancellationVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

CancellationSummary summarize_cancellation(std::span<const CancellationPoint> points) {
  if (points.size() < 3) throw NumericalError(ErrorCode::InvalidArgument, "cancellation summary needs >= 3 points");
  std::vector<double> eps, mag, ceps, diff;
  for (std::size_t i = 0; i < points.size(); ++i) {
    eps.push_back(points[i].eps);
    mag.push_back(points[i].argument);
    if (i + 1 < points.size()) {
      ceps.push_back(points[i].eps);
      diff.push_back(points[i].argument - points[i + 1].argument);
    }
  }
  CancellationSummary s;
  s.magnitude_slope = fit_power_law(eps, mag).slope;
  s.cauchy_slope = fit_power_law(ceps, diff).slope;
  if (s.magnitude_slope < -0.5) {
    s.verdict = CancellationVerdict::divergent;
  } else if (s.cauchy_slope > 0.5) {
    s.verdict = CancellationVerdict::convergent;
  }
  return s;
}

}  // namespace softphoton
