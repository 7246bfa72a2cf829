#include "softphoton/weyl.hpp"

#include <cmath>
#include <utility>

namespace softphoton {

DisplacementOperator DisplacementOperator::identity(Metric metric) { return DisplacementOperator(metric); }

DisplacementOperator::DisplacementOperator(Metric metric, double phase_angle, double scale,
                                           std::shared_ptr<const FieldFunction> field)
    : metric_(metric), phase_angle_(phase_angle) {
  if (!field) throw NumericalError(ErrorCode::InvalidArgument, "displacement needs a field");
  if (metric == Metric::indefinite && field->components() != 4) {
    throw NumericalError(ErrorCode::MetricMismatch, "indefinite metric needs four-component fields");
  }
  add_term(scale, std::move(field));
}

void DisplacementOperator::add_term(double scale, std::shared_ptr<const FieldFunction> field) {
  if (!terms_.empty() && terms_.front().field->components() != field->components()) {
    throw NumericalError(ErrorCode::MetricMismatch, "displacement fields differ in component count");
  }
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->field->same_as(*field)) {
      it->scale += scale;
      if (it->scale == 0.0) terms_.erase(it);
      return;
    }
  }
  if (scale != 0.0) terms_.push_back({scale, std::move(field)});
}

void DisplacementOperator::displacement(Vec3 k, std::span<Complex> out) const {
  const int n = components();
  for (int c = 0; c < n; ++c) out[c] = 0.0;
  ComponentBuffer buf{};
  for (const auto& t : terms_) {
    t.field->eval(k, std::span(buf.data(), n));
    for (int c = 0; c < n; ++c) out[c] += t.scale * buf[c];
  }
  for (int c = 0; c < n; ++c) out[c] *= Complex(0.0, 1.0);
}

DisplacementOperator DisplacementOperator::adjoint() const {
  DisplacementOperator d(metric_);
  d.phase_angle_ = -phase_angle_;
  d.terms_ = terms_;
  for (auto& t : d.terms_) t.scale = -t.scale;
  return d;
}

DisplacementOperator DisplacementOperator::with_phase(double extra_angle) const {
  DisplacementOperator d = *this;
  d.phase_angle_ += extra_angle;
  return d;
}

Complex pairing(const DisplacementOperator& a, const DisplacementOperator& b,
                const QuadratureGrid& grid) {
  if (a.metric() != b.metric()) throw NumericalError(ErrorCode::MetricMismatch, "pairing across metrics");
  if (a.is_zero_displacement() || b.is_zero_displacement()) return 0.0;
  if (a.components() != b.components()) {
    throw NumericalError(ErrorCode::MetricMismatch, "pairing of fields with different component counts");
  }
  const int n = a.components();
  const Metric m = a.metric();
  return integrate(grid, [&](const Vec3& k) {
    ComponentBuffer x{}, y{};
    a.displacement(k, std::span(x.data(), n));
    b.displacement(k, std::span(y.data(), n));
    return pairing_density(m, std::span<const Complex>(x.data(), n), std::span<const Complex>(y.data(), n));
  });
}

DisplacementOperator compose(const DisplacementOperator& a, const DisplacementOperator& b,
                             const QuadratureGrid& grid) {
  if (a.metric() != b.metric()) throw NumericalError(ErrorCode::MetricMismatch, "compose across metrics");
  DisplacementOperator out = a;
  out.phase_angle_ = a.phase_angle_ + b.phase_angle_ - pairing(a, b, grid).imag();
  for (const auto& t : b.terms_) out.add_term(t.scale, t.field);
  return out;
}

Complex log_vacuum_expectation(const DisplacementOperator& d, const QuadratureGrid& grid) {
  const double self = d.is_zero_displacement() ? 0.0 : pairing(d, d, grid).real();
  return Complex(-0.5 * self, d.phase_angle());
}

Complex vacuum_expectation(const DisplacementOperator& d, const QuadratureGrid& grid) {
  return std::exp(log_vacuum_expectation(d, grid));
}

Complex log_coherent_overlap(const DisplacementOperator& left, const DisplacementOperator& right,
                             const QuadratureGrid& grid) {
  return log_vacuum_expectation(compose(left.adjoint(), right, grid), grid);
}

Complex coherent_overlap(const DisplacementOperator& left, const DisplacementOperator& right,
                         const QuadratureGrid& grid) {
  return std::exp(log_coherent_overlap(left, right, grid));
}

Complex photon_factor(const DisplacementOperator& d, const PhotonMode& photon) {
  if (d.is_zero_displacement()) return 0.0;
  const int n = d.components();
  ComponentBuffer a{};
  d.displacement(photon.k, std::span(a.data(), n));
  if (d.metric() == Metric::hilbert) {
    if (photon.index < 1 || photon.index > n) {
      throw NumericalError(ErrorCode::IndexMismatch, "polarization index must be 1.." + std::to_string(n));
    }
    return a[photon.index - 1];
  }
  if (photon.index < 0 || photon.index > 3) {
    throw NumericalError(ErrorCode::IndexMismatch, "Lorentz index must be 0..3");
  }
  // [a^mu(k), a^dagger(alpha)] = -alpha^mu(k) in the indefinite metric.
  return -a[photon.index];
}

Complex n_photon_element(const DisplacementOperator& d, const PhotonList& photons,
                         const QuadratureGrid& grid) {
  Complex factor = 1.0;
  for (const auto& p : photons) factor *= photon_factor(d, p);
  return vacuum_expectation(d, grid) * factor;
}

}  // namespace softphoton
