#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "softphoton/momentum.hpp"
#include "softphoton/polarization.hpp"

namespace softphoton {

// PFB: dipole, Coulomb gauge.  PFBR: dipole, Feynman gauge.
// BN_C / BN_F: Bloch-Nordsieck in Coulomb / Feynman gauge.
enum class Family { PFB, PFBR, BN_C, BN_F };

const char* to_string(Family f) noexcept;
std::optional<Family> family_from_string(std::string_view s);
Metric metric_of(Family f) noexcept;
int components_of(Family f) noexcept;
bool is_bloch_nordsieck(Family f) noexcept;

// plus: t -> +infinity, minus: t -> -infinity.
enum class Branch { plus, minus };
inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

struct Kinematics {
  double e = 0.30282;
  double m = 1.0;
  Vec3 v;
  Vec3 x;
  int leg_sign = 1;

  Vec3 momentum() const { return m * v; }
  std::array<double, 4> four_velocity() const { return {1.0, v.x, v.y, v.z}; }
  std::array<double, 4> tilde_velocity() const { return {1.0 + 0.5 * norm_sq(v), v.x, v.y, v.z}; }
  // Minkowski square of (1, v).
  double minkowski_v_sq() const { return 1.0 - norm_sq(v); }
  // v.k = omega - v . k, the BN denominator.
  double dot_k(Vec3 k, double omega) const { return omega - dot(v, k); }
  // Raises NonPhysicalVelocity for |v| >= 1 and InvalidArgument for m <= 0.
  void validate() const;
  friend bool operator==(const Kinematics&, const Kinematics&) = default;
};

struct FiniteTime {
  double t = 0.0;
  double eps = 0.0;
  friend bool operator==(const FiniteTime&, const FiniteTime&) = default;
};
struct Asymptotic {
  Branch branch = Branch::plus;
  double eps = 0.0;
  friend bool operator==(const Asymptotic&, const Asymptotic&) = default;
};
using Regime = std::variant<FiniteTime, Asymptotic>;

// Closed-form coherence function of one charged leg.
//
//   component_c(k) = rho(k)/sqrt(2 omega) * C_c(k) * T(Omega) * phase_x(k)
//
// C_c is v.e_s (PFB, BN_C), (1+v^2/2, v) (PFBR) or (1, v) (BN_F).  Omega is
// omega for the dipole families and v.k for BN.  phase_x = exp(-i k.x) for BN
// and 1 otherwise.  With eps_t = eps * sign(t):
//   finite time:  T = (exp((i Omega - eps_t) t) - 1) / (i Omega - eps_t)
//   asymptotic:   T = -1 / (i Omega - sigma eps), sigma = +1 (plus), -1 (minus)
class CoherenceFunction final : public FieldFunction {
 public:
  CoherenceFunction(Family family, Regime regime, Kinematics kin, Dispersion disp, FormFactor ff,
                    ReferenceAxis axis = ReferenceAxis::z);

  int components() const override { return components_of(family_); }
  void eval(Vec3 k, std::span<Complex> out) const override;
  bool same_as(const FieldFunction& other) const override;

  double frequency(Vec3 k) const;
  // Real coupling factors C_c(k) (2 or 4 entries).
  void coupling(Vec3 k, std::span<double> out) const;
  Complex time_factor(double frequency) const;
  Complex position_phase(Vec3 k) const;

  Family family() const { return family_; }
  const Regime& regime() const { return regime_; }
  const Kinematics& kinematics() const { return kin_; }
  const Dispersion& dispersion() const { return disp_; }
  const FormFactor& form_factor() const { return ff_; }
  ReferenceAxis axis() const { return axis_; }

 private:
  Family family_;
  Regime regime_;
  Kinematics kin_;
  Dispersion disp_;
  FormFactor ff_;
  ReferenceAxis axis_;
};

// Sum over components of |f|^2; the positive majorant norm for four-component
// families.
double l2_norm_sq(const CoherenceFunction& c, const QuadratureGrid& grid);

// Gaussian shell centred at |k| = uv_scale/2 with width uv_scale/8 times the
// family coupling factors; the fixed probe for weak residuals.
AnalyticField weak_test_function(Family family, const Kinematics& kin, const FormFactor& ff,
                                 ReferenceAxis axis = ReferenceAxis::z);

struct ConvergencePoint {
  double t = 0.0;
  double strong_residual = 0.0;  // ||f(t) - f||_2
  double weak_residual = 0.0;    // |(g_test, f(t) - f)|
};

struct ConvergenceProfile {
  double limit_norm = 0.0;  // ||f||_2 of the t -> +infinity function at the same eps
  std::vector<ConvergencePoint> points;
};

ConvergenceProfile convergence_profile(Family family, const Kinematics& kin, const Dispersion& disp,
                                       const FormFactor& ff, double eps,
                                       std::span<const double> times, const QuadratureGrid& grid);

}  // namespace softphoton
