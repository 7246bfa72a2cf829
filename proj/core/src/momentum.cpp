#include "softphoton/momentum.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <utility>

namespace softphoton {

Dispersion::Dispersion(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw NumericalError(ErrorCode::NonPositiveCutoff,
                         "photon mass lambda must be positive and finite");
  }
}

FormFactor::FormFactor(double uv_scale, FormFactorKind kind) : uv_scale_(uv_scale), kind_(kind) {
  if (!(uv_scale > 0.0) || !std::isfinite(uv_scale)) {
    throw NumericalError(ErrorCode::NonPositiveCutoff, "UV scale must be positive and finite");
  }
}

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw NumericalError(ErrorCode::InvalidArgument, "Gauss-Legendre order must be >= 1");
  if (n == 1) return {{0.0}, {2.0}};
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre_pair(n, x);
      const double dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre_pair(n, x);
    const double dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GridSpec GridSpec::defaults_for(const Dispersion& disp, const FormFactor& ff) {
  GridSpec spec;
  spec.k_min = disp.lambda() * 1e-3;
  spec.k_max = 10.0 * ff.uv_scale();
  return spec;
}

void GridSpec::validate() const {
  auto bad = [](const char* what) { throw NumericalError(ErrorCode::InvalidArgument, what); };
  if (!(k_min > 0.0) || !(k_max > k_min) || !std::isfinite(k_max)) bad("grid needs 0 < k_min < k_max");
  if (radial_panels < 1 || nodes_per_panel < 1 || n_cos < 1 || n_phi < 1) bad("grid node counts must be >= 1");
  if (!(max_panel_width > 0.0)) bad("max_panel_width must be positive");
}

QuadratureGrid::QuadratureGrid(const GridSpec& spec) : spec_(spec) {
  spec.validate();
  std::vector<double> edges;
  const double ratio = std::log(spec.k_max / spec.k_min);
  for (int p = 0; p <= spec.radial_panels; ++p) {
    edges.push_back(spec.k_min * std::exp(ratio * p / spec.radial_panels));
  }
  edges.front() = spec.k_min;
  edges.back() = spec.k_max;
  for (double b : spec.breakpoints) {
    if (b > spec.k_min && b < spec.k_max) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    const int pieces =
        std::isfinite(spec.max_panel_width)
            ? std::max(1, static_cast<int>(std::ceil((hi - lo) / spec.max_panel_width)))
            : 1;
    for (int q = 0; q < pieces; ++q) {
      edges_.push_back(lo + (hi - lo) * q / pieces);
    }
  }
  edges_.push_back(edges.back());

  const auto gl = gauss_legendre(spec.nodes_per_panel);
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    const double mid = 0.5 * (edges_[p] + edges_[p + 1]);
    const double half = 0.5 * (edges_[p + 1] - edges_[p]);
    for (int q = 0; q < spec.nodes_per_panel; ++q) {
      const double r = mid + half * gl.nodes[q];
      r_.push_back(r);
      wr_.push_back(half * gl.weights[q] * r * r);
    }
  }

  const auto glc = gauss_legendre(spec.n_cos);
  c_ = glc.nodes;
  wc_ = glc.weights;
  const double dphi = 2.0 * std::numbers::pi / spec.n_phi;
  for (int l = 0; l < spec.n_phi; ++l) {
    p_.push_back(dphi * l);
    wp_.push_back(dphi);
  }
  finish_angular();
}

QuadratureGrid QuadratureGrid::from_tensor(std::vector<double> radial_nodes,
                                           std::vector<double> radial_weights,
                                           std::vector<double> cos_nodes,
                                           std::vector<double> cos_weights,
                                           std::vector<double> phi_nodes,
                                           std::vector<double> phi_weights) {
  if (radial_nodes.size() != radial_weights.size() || cos_nodes.size() != cos_weights.size() ||
      phi_nodes.size() != phi_weights.size() || radial_nodes.empty() || cos_nodes.empty() ||
      phi_nodes.empty()) {
    throw NumericalError(ErrorCode::InvalidArgument, "tensor grid node/weight sizes differ or are empty");
  }
  for (double c : cos_nodes) {
    if (!(c >= -1.0 && c <= 1.0)) throw NumericalError(ErrorCode::InvalidArgument, "cos node outside [-1,1]");
  }
  QuadratureGrid g;
  g.r_ = std::move(radial_nodes);
  g.wr_ = std::move(radial_weights);
  g.c_ = std::move(cos_nodes);
  g.wc_ = std::move(cos_weights);
  g.p_ = std::move(phi_nodes);
  g.wp_ = std::move(phi_weights);
  g.finish_angular();
  return g;
}

void QuadratureGrid::finish_angular() {
  s_.resize(c_.size());
  for (std::size_t j = 0; j < c_.size(); ++j) s_[j] = std::sqrt(std::max(0.0, 1.0 - c_[j] * c_[j]));
  cp_.resize(p_.size());
  sp_.resize(p_.size());
  for (std::size_t l = 0; l < p_.size(); ++l) {
    cp_[l] = std::cos(p_[l]);
    sp_[l] = std::sin(p_[l]);
  }
}

std::uint64_t QuadratureGrid::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](const std::vector<double>& v) {
    const std::uint64_t n = v.size();
    const auto* nb = reinterpret_cast<const unsigned char*>(&n);
    for (std::size_t b = 0; b < sizeof n; ++b) h = (h ^ nb[b]) * 1099511628211ull;
    for (double x : v) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof x);
      for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
    }
  };
  feed(r_);
  feed(wr_);
  feed(c_);
  feed(wc_);
  feed(p_);
  feed(wp_);
  return h;
}

std::string QuadratureGrid::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint()));
  return buf;
}

QuadratureGrid QuadratureGrid::halved() const {
  if (!spec_) {
    throw NumericalError(ErrorCode::InvalidArgument, "halved() needs a grid built from a GridSpec");
  }
  GridSpec half = *spec_;
  half.nodes_per_panel = std::max(1, half.nodes_per_panel / 2);
  half.n_cos = std::max(1, half.n_cos / 2);
  half.n_phi = std::max(1, half.n_phi / 2);
  return QuadratureGrid(half);
}

int worker_count() {
  if (const char* env = std::getenv("SOFTPHOTON_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min<long>(n, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

void throw_non_finite(Vec3 k) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "integrand is not finite at k = (%.6g, %.6g, %.6g)", k.x, k.y, k.z);
  throw NumericalError(ErrorCode::NonFiniteIntegrand, buf);
}

void throw_too_coarse(double fine, double coarse, double tol) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "half-grid check failed: |I|=%.10g vs halved %.10g (tol %.3g)", fine,
                coarse, tol);
  throw NumericalError(ErrorCode::GridTooCoarse, buf);
}

}  // namespace detail

std::vector<double> geometric_ladder(double first, double last, int count) {
  if (count < 1 || !(first > 0.0) || !(last > 0.0)) {
    throw NumericalError(ErrorCode::InvalidArgument, "geometric ladder needs positive ends and count >= 1");
  }
  std::vector<double> out;
  if (count == 1) return {first};
  const double step = std::log(last / first) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(first * std::exp(step * i));
  out.back() = last;
  return out;
}

}  // namespace softphoton
