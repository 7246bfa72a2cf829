#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "softphoton/errors.hpp"

namespace softphoton {

using Complex = std::complex<double>;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm_sq(Vec3 a) { return dot(a, a); }
inline double norm(Vec3 a) { return std::sqrt(norm_sq(a)); }

// Massive photon dispersion omega(k) = sqrt(|k|^2 + lambda^2), lambda > 0.
class Dispersion {
 public:
  explicit Dispersion(double lambda);
  double lambda() const { return lambda_; }
  double omega(double k) const { return std::hypot(k, lambda_); }
  double omega(Vec3 k) const { return omega(norm(k)); }
  friend bool operator==(const Dispersion&, const Dispersion&) = default;

 private:
  double lambda_;
};

enum class FormFactorKind { gaussian };

// Radial UV form factor with rho(0) = 1.  Only the gaussian
// exp(-|k|^2 / (2 Lambda^2)) is provided.
class FormFactor {
 public:
  explicit FormFactor(double uv_scale, FormFactorKind kind = FormFactorKind::gaussian);
  double uv_scale() const { return uv_scale_; }
  FormFactorKind kind() const { return kind_; }
  double operator()(double k) const {
    const double s = k / uv_scale_;
    return std::exp(-0.5 * s * s);
  }
  double operator()(Vec3 k) const { return (*this)(norm(k)); }
  friend bool operator==(const FormFactor&, const FormFactor&) = default;

 private:
  double uv_scale_;
  FormFactorKind kind_;
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(Complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

struct GridSpec {
  double k_min = 1e-4;
  double k_max = 10.0;
  int radial_panels = 24;
  int nodes_per_panel = 16;
  int n_cos = 64;
  int n_phi = 32;
  // Panels wider than this are split uniformly; infinity disables splitting.
  double max_panel_width = std::numeric_limits<double>::infinity();
  // Extra panel edges inserted into the geometric sequence.
  std::vector<double> breakpoints;

  // 24 geometric panels from lambda*1e-3 to 10*Lambda, 16 nodes each,
  // 64 nodes in cos(theta), 32 in phi.
  static GridSpec defaults_for(const Dispersion& disp, const FormFactor& ff);
  void validate() const;
};

// Tensor-product quadrature in spherical coordinates.  Radial weights already
// include the |k|^2 measure factor, so sum_i sum_j sum_l w_i c_j p_l g(k_ijl)
// approximates the integral of g over R^3.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(const GridSpec& spec);

  // Arbitrary tensor grid; weights are taken as given (radial weights must
  // already contain the measure).  Used for small discrete-mode models.
  static QuadratureGrid from_tensor(std::vector<double> radial_nodes,
                                    std::vector<double> radial_weights,
                                    std::vector<double> cos_nodes,
                                    std::vector<double> cos_weights,
                                    std::vector<double> phi_nodes,
                                    std::vector<double> phi_weights);

  std::span<const double> radial_nodes() const { return r_; }
  std::span<const double> radial_weights() const { return wr_; }
  std::span<const double> cos_nodes() const { return c_; }
  std::span<const double> cos_weights() const { return wc_; }
  std::span<const double> phi_nodes() const { return p_; }
  std::span<const double> phi_weights() const { return wp_; }
  std::span<const double> panel_edges() const { return edges_; }

  std::size_t size() const { return r_.size() * c_.size() * p_.size(); }

  Vec3 node(std::size_t i, std::size_t j, std::size_t l) const {
    const double r = r_[i];
    return {r * s_[j] * cp_[l], r * s_[j] * sp_[l], r * c_[j]};
  }
  double angular_weight(std::size_t j, std::size_t l) const { return wc_[j] * wp_[l]; }

  // FNV-1a hash over all nodes and weights.
  std::uint64_t fingerprint() const;
  std::string fingerprint_hex() const;

  // Same panels with half the nodes per panel and per angular dimension.
  // Only available for grids built from a GridSpec.
  QuadratureGrid halved() const;
  const std::optional<GridSpec>& spec() const { return spec_; }

 private:
  QuadratureGrid() = default;
  void finish_angular();

  std::vector<double> r_, wr_, c_, wc_, p_, wp_;
  std::vector<double> s_, cp_, sp_;
  std::vector<double> edges_;
  std::optional<GridSpec> spec_;
};

struct IntegrationOptions {
  // When positive, the integral is repeated on the halved grid and
  // GridTooCoarse is raised if the relative difference exceeds this value.
  double halfgrid_rel_tol = 0.0;
  // Absolute floor used in the relative comparison.
  double halfgrid_abs_floor = 1e-300;
};

// Worker count for integrate(): SOFTPHOTON_THREADS if set and positive,
// otherwise std::thread::hardware_concurrency().
int worker_count();

namespace detail {

[[noreturn]] void throw_non_finite(Vec3 k);
[[noreturn]] void throw_too_coarse(double fine, double coarse, double tol);

template <class T>
using Accumulator = std::conditional_t<std::is_same_v<T, double>, CompensatedSum,
                                       ComplexCompensatedSum>;

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <class T, class F>
T integrate_once(const QuadratureGrid& grid, const F& g) {
  const auto radial = grid.radial_nodes();
  const std::size_t nr = radial.size();
  const std::size_t nc = grid.cos_nodes().size();
  const std::size_t np = grid.phi_nodes().size();
  std::vector<T> partial(nr);

  // Each radial shell is summed by exactly one worker and the shells are
  // reduced in index order, so the result does not depend on the thread count.
  auto shell = [&](std::size_t i) {
    Accumulator<T> acc;
    for (std::size_t j = 0; j < nc; ++j) {
      for (std::size_t l = 0; l < np; ++l) {
        const Vec3 k = grid.node(i, j, l);
        const T v = static_cast<T>(g(k));
        if (!finite(v)) throw_non_finite(k);
        acc.add(grid.angular_weight(j, l) * v);
      }
    }
    partial[i] = acc.value();
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), nr);
  if (workers <= 1) {
    for (std::size_t i = 0; i < nr; ++i) shell(i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < nr; i += workers) shell(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Accumulator<T> total;
  const auto wr = grid.radial_weights();
  for (std::size_t i = 0; i < nr; ++i) total.add(wr[i] * partial[i]);
  return total.value();
}

}  // namespace detail

// Integral of g over R^3 on the grid.  g may return double or Complex; the
// result has the same type.  Non-finite integrand values raise
// NonFiniteIntegrand.
template <class F>
auto integrate(const QuadratureGrid& grid, const F& g, const IntegrationOptions& opts = {}) {
  using Raw = std::decay_t<std::invoke_result_t<const F&, const Vec3&>>;
  using T = std::conditional_t<std::is_floating_point_v<Raw>, double, Complex>;
  const T fine = detail::integrate_once<T>(grid, g);
  if (opts.halfgrid_rel_tol > 0.0) {
    const T coarse = detail::integrate_once<T>(grid.halved(), g);
    const double scale = std::max(std::abs(fine), opts.halfgrid_abs_floor);
    if (std::abs(fine - coarse) > opts.halfgrid_rel_tol * scale) {
      detail::throw_too_coarse(std::abs(fine), std::abs(coarse), opts.halfgrid_rel_tol);
    }
  }
  return fine;
}

// Sequential visit of every node with its full weight.
template <class F>
void for_each_node(const QuadratureGrid& grid, const F& fn) {
  const auto wr = grid.radial_weights();
  for (std::size_t i = 0; i < grid.radial_nodes().size(); ++i)
    for (std::size_t j = 0; j < grid.cos_nodes().size(); ++j)
      for (std::size_t l = 0; l < grid.phi_nodes().size(); ++l)
        fn(grid.node(i, j, l), wr[i] * grid.angular_weight(j, l));
}

std::vector<double> geometric_ladder(double first, double last, int count);

}  // namespace softphoton
