#pragma once

#include <memory>
#include <span>
#include <vector>

#include "softphoton/coherence.hpp"
#include "softphoton/momentum.hpp"
#include "softphoton/polarization.hpp"

namespace softphoton {

struct PhotonMode {
  Vec3 k;
  // Polarization s in {1, 2} for hilbert metric (1..components in general),
  // Lorentz index mu in {0..3} for the indefinite metric.
  int index = 1;
};
using PhotonList = std::vector<PhotonMode>;

// exp(i*phase_angle) * exp(a^dagger(alpha) - a(conj alpha)) with
// alpha(k) = i * sum_terms scale * field(k).
class DisplacementOperator {
 public:
  struct Term {
    double scale;
    std::shared_ptr<const FieldFunction> field;
  };

  static DisplacementOperator identity(Metric metric);
  DisplacementOperator(Metric metric, double phase_angle, double scale,
                       std::shared_ptr<const FieldFunction> field);

  Metric metric() const { return metric_; }
  double phase_angle() const { return phase_angle_; }
  Complex phase() const { return std::polar(1.0, phase_angle_); }
  std::span<const Term> terms() const { return terms_; }
  int components() const { return terms_.empty() ? 0 : terms_.front().field->components(); }
  bool is_zero_displacement() const { return terms_.empty(); }

  // alpha(k), written into out[0..components).
  void displacement(Vec3 k, std::span<Complex> out) const;

  // D^dagger = D^{-1}: negated displacement, conjugated phase.
  DisplacementOperator adjoint() const;
  DisplacementOperator with_phase(double extra_angle) const;

  friend DisplacementOperator compose(const DisplacementOperator& a, const DisplacementOperator& b,
                                      const QuadratureGrid& grid);

 private:
  explicit DisplacementOperator(Metric metric) : metric_(metric) {}
  void add_term(double scale, std::shared_ptr<const FieldFunction> field);

  Metric metric_;
  double phase_angle_ = 0.0;
  std::vector<Term> terms_;
};

// P(alpha_a, alpha_b) = [a(conj alpha_a), a^dagger(alpha_b)].
Complex pairing(const DisplacementOperator& a, const DisplacementOperator& b,
                const QuadratureGrid& grid);

// D(a) D(b) = D(a + b) exp(-i Im P(a, b)).  Terms with identical fields are
// merged, so D composed with its adjoint is structurally the identity.
DisplacementOperator compose(const DisplacementOperator& a, const DisplacementOperator& b,
                             const QuadratureGrid& grid);

// log <Psi, D Psi> = i phase - P(alpha, alpha)/2.
Complex log_vacuum_expectation(const DisplacementOperator& d, const QuadratureGrid& grid);
Complex vacuum_expectation(const DisplacementOperator& d, const QuadratureGrid& grid);

// <L Psi, R Psi> = <Psi, L^dagger R Psi>.
Complex log_coherent_overlap(const DisplacementOperator& left, const DisplacementOperator& right,
                             const QuadratureGrid& grid);
Complex coherent_overlap(const DisplacementOperator& left, const DisplacementOperator& right,
                         const QuadratureGrid& grid);

// Ratio <photon, D Psi> / <Psi, D Psi> for one photon: alpha_s(k) for the
// hilbert metric, -alpha^mu(k) for the indefinite one.
Complex photon_factor(const DisplacementOperator& d, const PhotonMode& photon);

// <Psi_{k1..kn}, D Psi> = vacuum_expectation(D) * prod_j photon_factor.
Complex n_photon_element(const DisplacementOperator& d, const PhotonList& photons,
                         const QuadratureGrid& grid);

}  // namespace softphoton
