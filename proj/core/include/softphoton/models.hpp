#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "softphoton/coherence.hpp"
#include "softphoton/momentum.hpp"
#include "softphoton/weyl.hpp"

namespace softphoton {

struct ModelSpec {
  Family family = Family::PFB;
  Kinematics kin;
  Dispersion disp{0.1};
  FormFactor ff{1.0};
  double eps = 0.1;

  Metric metric() const { return metric_of(family); }
  ModelSpec with_velocity(Vec3 v) const;
  ModelSpec with_family(Family f) const;
  ModelSpec with_eps(double e) const;
  void validate() const;
};

enum class CountertermKind { z, z1, z2 };
const char* to_string(CountertermKind k) noexcept;
std::optional<CountertermKind> counterterm_from_string(std::string_view s);

struct Counterterm {
  CountertermKind kind;
  double value;
};

// z for the dipole families, z1 for BN_C, z2 for BN_F.
CountertermKind natural_counterterm(Family f) noexcept;

//   z  = 2/(3m) int rho^2/omega^2
//   z1 = 1/3    int rho^2/(omega v.k)
//   z2 = 1/2    int rho^2/(omega v.k)
double counterterm_value(CountertermKind kind, const ModelSpec& spec, const QuadratureGrid& grid);
Counterterm counterterm(const ModelSpec& spec, const QuadratureGrid& grid);

struct PhaseOptions {
  // Multiplies the counterterm; 1.1 gives the uncancelled negative control.
  double counterterm_scale = 1.0;
  std::optional<CountertermKind> counterterm_override;
  // Skips the quadrature when the (unscaled) counterterm is already known.
  std::optional<double> counterterm_value;
};

// Argument of the scalar phase carried by the evolution operator,
//   arg(t) = A * d(t) + B * E(t),
// with E(t) = (exp(-2 eps |t|) - 1)/(2 eps sign t)  (-> -t at eps = 0) and
//   d(t) = -int rho^2/(omega (Omega^2 + eps^2)) (exp(-eps|t|) sin(Omega t) + Omega E(t)).
// Omega = omega (dipole) or v.k (BN).  Coefficients A, B per family:
//   PFB:  e^2|v|^2/3,  e^2 Z m|v|^2/2      PFBR: -e^2/2, -3 e^2 m Z/4
//   BN_C: e^2|v|^2/3,  e^2 Z |v|^2         BN_F: -e^2 v.v/2, -e^2 Z v.v
class PhaseHistory {
 public:
  PhaseHistory(const ModelSpec& spec, const QuadratureGrid& grid, PhaseOptions opts = {});

  double d_integral(double t) const;
  double d_integral_limit(Branch branch) const;
  double switching_factor(double t) const;  // E(t)
  double d_coefficient() const { return d_coeff_; }
  double counterterm_coefficient() const { return ct_coeff_; }
  double counterterm() const { return z_; }

  double argument(double t) const;
  // t -> +-infinity at fixed eps > 0.
  double asymptotic_argument(Branch branch) const;
  Complex phase(double t) const { return std::polar(1.0, argument(t)); }

 private:
  ModelSpec spec_;
  QuadratureGrid grid_;
  double z_ = 0.0;
  double d_coeff_ = 0.0;
  double ct_coeff_ = 0.0;
};

// Interaction-picture evolution operator U(t) = phase(t) exp(i e Phi(f(t))),
// f the finite-time coherence function.  t = 0 gives the identity.
DisplacementOperator evolution_operator(const ModelSpec& spec, double t, const QuadratureGrid& grid,
                                        PhaseOptions opts = {});

// U(+-infinity) at the spec's eps > 0.
DisplacementOperator regularized_moeller(const ModelSpec& spec, Branch branch,
                                         const QuadratureGrid& grid, PhaseOptions opts = {});

// eps -> 0 after t -> +-infinity.  The counterterm cancels the 1/eps part of
// the phase and the remainder is O(eps), so the limiting phase is exactly 1.
// Requires spec.eps > 0.
DisplacementOperator moeller(const ModelSpec& spec, Branch branch);

struct CancellationPoint {
  double eps = 0.0;
  double argument = 0.0;
};

// Limiting (t -> +infinity) phase argument along a decreasing eps ladder.
std::vector<CancellationPoint> cancellation_scan(const ModelSpec& spec,
                                                 std::span<const double> eps_ladder,
                                                 const QuadratureGrid& grid,
                                                 PhaseOptions opts = {});

enum class CancellationVerdict { convergent, divergent, inconclusive };
const char* to_string(CancellationVerdict v) noexcept;

struct CancellationSummary {
  double cauchy_slope = 0.0;     // log|arg(e_n) - arg(e_{n+1})| vs log e_n
  double magnitude_slope = 0.0;  // log|arg| vs log eps
  CancellationVerdict verdict = CancellationVerdict::inconclusive;
};

CancellationSummary summarize_cancellation(std::span<const CancellationPoint> points);

}  // namespace softphoton
