#include "softphoton/polarization.hpp"

#include <utility>

namespace softphoton {

TransverseBasis transverse_basis(Vec3 k, ReferenceAxis primary) {
  const double kn = norm(k);
  if (!(kn > 0.0)) throw NumericalError(ErrorCode::ZeroMomentum, "transverse basis undefined at k = 0");
  const Vec3 khat = (1.0 / kn) * k;
  const Vec3 zhat{0.0, 0.0, 1.0};
  const Vec3 xhat{1.0, 0.0, 0.0};
  Vec3 ref = primary == ReferenceAxis::z ? zhat : xhat;
  Vec3 c = cross(ref, khat);
  if (norm(c) < 1e-8) {
    ref = primary == ReferenceAxis::z ? xhat : zhat;
    c = cross(ref, khat);
  }
  const Vec3 e1 = (1.0 / norm(c)) * c;
  return {e1, cross(khat, e1)};
}

const char* to_string(Metric m) noexcept {
  return m == Metric::hilbert ? "hilbert" : "indefinite";
}

AnalyticField::AnalyticField(int components, Fn fn) : n_(components), fn_(std::move(fn)) {
  if (components < 1 || components > kMaxComponents) {
    throw NumericalError(ErrorCode::IndexMismatch, "field component count must be 1..4");
  }
}

Complex hilbert_density(std::span<const Complex> f, std::span<const Complex> g) {
  Complex s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) s += std::conj(f[c]) * g[c];
  return s;
}

Complex minkowski_density(std::span<const Complex> f, std::span<const Complex> g) {
  return std::conj(f[0]) * g[0] -
         (std::conj(f[1]) * g[1] + std::conj(f[2]) * g[2] + std::conj(f[3]) * g[3]);
}

Complex pairing_density(Metric m, std::span<const Complex> f, std::span<const Complex> g) {
  return m == Metric::hilbert ? hilbert_density(f, g) : -minkowski_density(f, g);
}

namespace {

template <class Density>
Complex integrate_pair(const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid,
                       Density density) {
  if (f.components() != g.components()) {
    throw NumericalError(ErrorCode::IndexMismatch, "inner product of functions with different component counts");
  }
  const int n = f.components();
  return integrate(grid, [&](const Vec3& k) {
    ComponentBuffer a{}, b{};
    f.eval(k, std::span(a.data(), n));
    g.eval(k, std::span(b.data(), n));
    return density(std::span<const Complex>(a.data(), n), std::span<const Complex>(b.data(), n));
  });
}

}  // namespace

Complex hilbert_inner(const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid) {
  return integrate_pair(f, g, grid, hilbert_density);
}

Complex indefinite_inner(const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid) {
  if (f.components() != 4 || g.components() != 4) {
    throw NumericalError(ErrorCode::IndexMismatch, "indefinite product needs four-component functions");
  }
  return integrate_pair(f, g, grid, minkowski_density);
}

Complex inner(Metric m, const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid) {
  return m == Metric::hilbert ? hilbert_inner(f, g, grid) : indefinite_inner(f, g, grid);
}

}  // namespace softphoton
