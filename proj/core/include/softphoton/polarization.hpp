#pragma once

#include <array>
#include <functional>
#include <span>

#include "softphoton/momentum.hpp"

namespace softphoton {

inline constexpr int kMaxComponents = 4;
using ComponentBuffer = std::array<Complex, kMaxComponents>;

struct TransverseBasis {
  Vec3 e1;
  Vec3 e2;
};

// Primary reference axis for the transverse basis; the other axis is the
// fallback when k is (nearly) parallel to the primary one.
enum class ReferenceAxis { z, x };

// e1 = normalize(ref x k_hat), e2 = k_hat x e1.  Raises ZeroMomentum at k = 0.
TransverseBasis transverse_basis(Vec3 k, ReferenceAxis primary = ReferenceAxis::z);

enum class Metric { hilbert, indefinite };
const char* to_string(Metric m) noexcept;

// A vector-valued test function on momentum space.  Four-component
// functions store upper Lorentz indices (f^0, f^1, f^2, f^3).
class FieldFunction {
 public:
  virtual ~FieldFunction() = default;
  virtual int components() const = 0;
  virtual void eval(Vec3 k, std::span<Complex> out) const = 0;
  // Structural identity, used to merge displacement terms.
  virtual bool same_as(const FieldFunction& other) const { return this == &other; }
};

class AnalyticField final : public FieldFunction {
 public:
  using Fn = std::function<void(Vec3, std::span<Complex>)>;
  AnalyticField(int components, Fn fn);
  int components() const override { return n_; }
  void eval(Vec3 k, std::span<Complex> out) const override { fn_(k, out); }

 private:
  int n_;
  Fn fn_;
};

// Pointwise densities.  hilbert: sum_c conj(f_c) g_c.
// indefinite: conj(f^0) g^0 - sum_i conj(f^i) g^i.
Complex hilbert_density(std::span<const Complex> f, std::span<const Complex> g);
Complex minkowski_density(std::span<const Complex> f, std::span<const Complex> g);

// Commutator pairing P(f, g) = [a(conj f), a^dagger(g)] per metric: the Hilbert
// density for the hilbert metric and minus the Minkowski density otherwise.
Complex pairing_density(Metric m, std::span<const Complex> f, std::span<const Complex> g);

// Integrated forms.  hilbert_inner also serves as the majorant (positive)
// product for four-component functions.
Complex hilbert_inner(const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid);
Complex indefinite_inner(const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid);
Complex inner(Metric m, const FieldFunction& f, const FieldFunction& g, const QuadratureGrid& grid);

}  // namespace softphoton
