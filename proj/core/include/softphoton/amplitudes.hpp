#pragma once

#include <functional>
#include <vector>

#include "softphoton/coherence.hpp"
#include "softphoton/models.hpp"
#include "softphoton/weyl.hpp"

namespace softphoton {

// Two-leg processes take a base spec (family, charge, mass, lambda, form
// factor, eps, position) and the incoming / outgoing velocities v, v'.
// Incoming legs use the plus branch, outgoing legs the minus branch.

enum class Gauge { coulomb, feynman };

struct IRExponent {
  Family family = Family::PFB;
  Vec3 v;
  Vec3 v_prime;
  double lambda = 0.0;
  Complex value;  // log <Omega_-(v') Psi, Omega_+(v) Psi>
};

// Exponent of the transition overlap of the two Moeller operators.
IRExponent overlap_exponent(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid);

// PFB (coulomb) or PFBR (feynman) overlap exponent through the Moeller/Weyl
// pipeline.  For |v| = |v'| these are -(e^2/6)|dv|^2 I3 and -(e^2/4)|dv|^2 I3;
// otherwise the feynman value carries an extra (e^2/4)(d tilde_v^0)^2 I3.
IRExponent dipole_overlap_exponent(Gauge gauge, const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                   const QuadratureGrid& grid);

// e^2 (v.v') int rho^2/(2 omega) (i/v.k)(i/v'.k), Minkowski v.v'.
Complex bn_virtual_exponent(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid);
Complex bn_virtual_factor(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid);

struct WavefunctionFactor {
  // (e^2 v.v/4) int rho^2 / (omega^3 (1 - khat.v)^2), khat = k/omega.
  double direct_exponent = 0.0;
  // -(e^2/2) dSigma/d(i eps) at eps = 0, from the on-shell subtracted
  // self-energy Sigma(eps) = -v.v int rho^2/(2 omega) i eps/(v.k (v.k + i eps))
  // by Richardson extrapolation of Sigma/(i eps).
  double self_energy_exponent = 0.0;
  double value() const;
};

// Single-leg wave-function factor.
WavefunctionFactor bn_wavefunction_factor(const ModelSpec& base, Vec3 v_leg, const QuadratureGrid& grid);

struct SoftFactor {
  // log of <Omega_-(v') Psi, Psi><Psi, Omega_+(v) Psi> exp(e^2 [a(conj f_v'), a^dagger(f_v)])
  // built from Moeller matrix elements.
  Complex assembled_exponent;
  // Sum of the two wave-function exponents and the virtual exponent.
  Complex closed_form_exponent;
  Complex value() const { return std::exp(assembled_exponent); }
};

SoftFactor soft_factor_full(const ModelSpec& base, Vec3 v, Vec3 v_prime, const QuadratureGrid& grid);

// hard * <Psi_{k1..kn}, Omega_-(v')^dagger Omega_+(v) Psi>, BN_F at eps -> 0.
Complex emission_amplitude(const ModelSpec& base, Vec3 v, Vec3 v_prime, const PhotonList& photons,
                           Complex hard, const QuadratureGrid& grid);

// Scattering displacement Omega_-(v')^dagger Omega_+(v).
DisplacementOperator scattering_displacement(const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                             const QuadratureGrid& grid);

using GridFactory = std::function<QuadratureGrid(const Dispersion&, const FormFactor&)>;
QuadratureGrid default_grid(const Dispersion& disp, const FormFactor& ff);

struct GaugeComparisonRow {
  double lambda = 0.0;
  double re_feynman = 0.0;         // BN_F
  double re_coulomb = 0.0;         // BN_C
  double re_dipole_coulomb = 0.0;  // PFB
  double re_dipole_feynman = 0.0;  // PFBR
  double max_abs_kj = 0.0;         // max |k_mu J^mu| over nodes, BN current
  double max_abs_kj_dipole = 0.0;  // same for the dipole current
};

struct GaugeComparison {
  std::vector<GaugeComparisonRow> rows;
  // Slopes of Re(exponent) against ln(1/lambda).
  double slope_feynman = 0.0;
  double slope_coulomb = 0.0;
  double slope_rel_diff = 0.0;  // |sF - sC| / |sC|
  double offset_mean = 0.0;     // mean of re_feynman - re_coulomb
  double offset_spread = 0.0;   // max - min of the same
  double slope_dipole_coulomb = 0.0;
  double slope_dipole_feynman = 0.0;
  double dipole_slope_ratio = 0.0;
  double max_abs_kj = 0.0;
};

GaugeComparison gauge_compare_bn(const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                 const std::vector<double>& lambdas, const GridFactory& make_grid);

struct CrosscheckOptions {
  double horizon = 30.0;  // time cutoff T = horizon / eps
  int time_nodes = 16;    // Gauss-Legendre nodes per time panel
};

struct CrosscheckReport {
  Complex coherent;     // e^2 coefficient of ln <U_{v'}(-inf) Psi, U_v(+inf) Psi>
  Complex dyson;        // same from the second-order time-ordered integrals
  double rel_diff = 0.0;
};

// Finite-eps comparison of the coherent-state overlap with second-order Dyson
// terms evaluated by nested time quadrature at every momentum node.
CrosscheckReport perturbative_crosscheck(const ModelSpec& base, Vec3 v, Vec3 v_prime,
                                         const QuadratureGrid& grid, CrosscheckOptions opts = {});

}  // namespace softphoton
