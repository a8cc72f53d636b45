#pragma once

/**
 * @file monogenic.hpp
 * @brief Monogenic building blocks on R^{n+1}: the Cauchy kernel, the
 *        hypercomplex variables z_j, Fueter symmetric powers Z^alpha,
 *        finite-difference Dirac residuals, and growth-order estimation.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "multivector.hpp"

namespace cliffbvp {

class PoleAtOriginError : public std::domain_error {
 public:
  explicit PoleAtOriginError(const std::string& what) : std::domain_error(what) {}
};

class StencilCrossesOriginError : public std::domain_error {
 public:
  explicit StencilCrossesOriginError(const std::string& what)
      : std::domain_error(what) {}
};

class StencilOutsideDomainError : public std::domain_error {
 public:
  explicit StencilOutsideDomainError(const std::string& what)
      : std::domain_error(what) {}
};

inline constexpr double kPoleThreshold = 1e-14;
inline constexpr int kMaxFueterDegree = 8;

/// @brief Exponent vector alpha = [alpha_1..alpha_n] indexing Z^alpha.
class MultiIndex {
 public:
  MultiIndex(Signature sig, std::vector<int> alpha)
      : sig_(sig), alpha_(std::move(alpha)) {
    if (alpha_.size() != static_cast<std::size_t>(sig_.generators())) {
      throw std::invalid_argument("MultiIndex: expected n entries");
    }
    for (int a : alpha_) {
      if (a < 0) throw std::invalid_argument("MultiIndex: entries must be non-negative");
    }
  }

  [[nodiscard]] static MultiIndex zero(Signature sig) {
    return MultiIndex(sig, std::vector<int>(sig.generators(), 0));
  }

  [[nodiscard]] const Signature& signature() const { return sig_; }
  [[nodiscard]] const std::vector<int>& entries() const { return alpha_; }
  [[nodiscard]] int operator[](std::size_t j) const { return alpha_.at(j); }
  [[nodiscard]] int degree() const {
    return std::accumulate(alpha_.begin(), alpha_.end(), 0);
  }
  /// Exponent of the distinguished variable z_n.
  [[nodiscard]] int last_entry() const { return alpha_.back(); }

  /// Index word (l_1 <= ... <= l_k) with j repeated alpha_j times.
  [[nodiscard]] std::vector<int> index_word() const {
    std::vector<int> word;
    for (std::size_t j = 0; j < alpha_.size(); ++j) {
      word.insert(word.end(), alpha_[j], static_cast<int>(j) + 1);
    }
    return word;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s = "[";
    for (std::size_t j = 0; j < alpha_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(alpha_[j]);
    }
    return s + "]";
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.alpha_ == b.alpha_;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    return a.alpha_ < b.alpha_;
  }

 private:
  Signature sig_;
  std::vector<int> alpha_;
};

[[nodiscard]] inline unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
  }
  return r;
}

/// All alpha with |alpha| == degree, in lexicographic order.
[[nodiscard]] inline std::vector<MultiIndex> multi_indices_of_degree(Signature sig,
                                                                     int degree) {
  std::vector<MultiIndex> out;
  const int n = sig.generators();
  std::vector<int> alpha(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n - 1) {
      alpha[pos] = remaining;
      out.emplace_back(sig, alpha);
      return;
    }
    for (int a = 0; a <= remaining; ++a) {
      alpha[pos] = a;
      rec(pos + 1, remaining - a);
    }
  };
  if (degree >= 0) rec(0, degree);
  return out;
}

[[nodiscard]] inline std::vector<MultiIndex> multi_indices_up_to_degree(Signature sig,
                                                                        int max_degree) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto layer = multi_indices_of_degree(sig, d);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

/// Number of distinct arrangements of the index word of alpha,
/// |alpha|! / prod(alpha_j!).
[[nodiscard]] inline unsigned long long fueter_arrangement_count(const MultiIndex& alpha) {
  unsigned long long count = 1;
  int placed = 0;
  for (int a : alpha.entries()) {
    count *= binomial(placed + a, a);
    placed += a;
  }
  return count;
}

/// @brief A pointwise field w -> C(V_n) with an explicit domain predicate.
///
/// Both callables must be safe for concurrent evaluation; everything in this
/// library treats them as pure.
struct PointField {
  Signature sig;
  std::function<Multivector(const Paravector&)> value;
  std::function<bool(const Paravector&)> domain = [](const Paravector&) { return true; };

  [[nodiscard]] Multivector operator()(const Paravector& w) const { return value(w); }
};

/// Hypercomplex variable z_j(w) = w_j e_0 - w_0 e_j (biregular).
[[nodiscard]] inline Multivector hyper_variable_z(int j, const Paravector& w) {
  const Signature sig = w.signature();
  if (j < 1 || j > sig.generators()) {
    throw std::out_of_range("hyper_variable_z: variable index must be in 1..n");
  }
  Multivector m(sig);
  m.set(0, w[j]);
  m.set(1u << (j - 1), -w[0]);
  return m;
}

/// @brief Fueter symmetric power Z^alpha(w).
///
/// Sums the products z_{l_1}...z_{l_k} over the distinct arrangements of the
/// index word of alpha, each arrangement appearing once, so that
/// (z_1,z_2)^{[2,0]} = z_1^2 and (z_1,z_2)^{[1,1]} = z_1 z_2 + z_2 z_1.
[[nodiscard]] inline Multivector fueter_Z(const MultiIndex& alpha, const Paravector& w) {
  const Signature sig = w.signature();
  if (alpha.signature() != sig) {
    throw SignatureMismatchError("fueter_Z: alpha and w carry different signatures");
  }
  const int k = alpha.degree();
  if (k > kMaxFueterDegree) {
    throw std::length_error("fueter_Z: degree exceeds cap of " +
                            std::to_string(kMaxFueterDegree));
  }
  if (k == 0) return Multivector::scalar(sig, 1.0);

  std::vector<Multivector> z;
  z.reserve(sig.generators());
  for (int j = 1; j <= sig.generators(); ++j) z.push_back(hyper_variable_z(j, w));

  std::vector<int> word = alpha.index_word();  // ascending => first permutation
  Multivector sum(sig);
  do {
    Multivector prod = z[word[0] - 1];
    for (int i = 1; i < k; ++i) prod = prod * z[word[i] - 1];
    sum = sum + prod;
  } while (std::next_permutation(word.begin(), word.end()));
  return sum;
}

/// Cauchy kernel E(w) = bar(w)/|w|^{n+1}; biregular away from the origin,
/// |E(w)| = |w|^{-n}.
[[nodiscard]] inline Multivector cauchy_kernel_E(const Paravector& w) {
  const double r = w.norm();
  if (r < kPoleThreshold) {
    throw PoleAtOriginError("cauchy_kernel_E: evaluation at the origin pole");
  }
  const int n = w.signature().generators();
  return w.bar().embed() * (1.0 / std::pow(r, n + 1));
}

/// First negative power W_{l} = -dE/dw_l in closed form:
/// -bar(e_l)/|w|^{n+1} + (n+1) w_l bar(w)/|w|^{n+3}.
[[nodiscard]] inline Multivector dE_first(int ell, const Paravector& w) {
  const Signature sig = w.signature();
  const int n = sig.generators();
  if (ell < 0 || ell > n) throw std::out_of_range("dE_first: coordinate index in 0..n");
  const double r = w.norm();
  if (r < kPoleThreshold) throw PoleAtOriginError("dE_first: evaluation at the origin pole");

  const double inv_rn1 = 1.0 / std::pow(r, n + 1);
  const double inv_rn3 = 1.0 / std::pow(r, n + 3);
  Multivector ebar(sig);
  if (ell == 0) {
    ebar.set(0, 1.0);
  } else {
    ebar.set(1u << (ell - 1), -1.0);
  }
  return ebar * (-inv_rn1) + w.bar().embed() * ((n + 1) * w[ell] * inv_rn3);
}

namespace detail {

inline void check_stencil_point(const Paravector& p, const char* who) {
  if (p.norm() < kPoleThreshold * 10) {
    throw StencilCrossesOriginError(std::string(who) + ": stencil point at the origin pole");
  }
}

}  // namespace detail

/// @brief Negative power W over a derivative multiset (indices from 0..n).
///
/// k = 0 returns E, k = 1 routes to the analytic dE_first, k in {2,3} nests
/// central differences of step h around the analytic first derivative.
/// Orders above 3 are rejected; nested differences beyond that are
/// numerically unreliable.
[[nodiscard]] inline Multivector negative_power_W(const std::vector<int>& indices,
                                                  const Paravector& w, double h) {
  const int n = w.signature().generators();
  for (int idx : indices) {
    if (idx < 0 || idx > n) throw std::out_of_range("negative_power_W: index in 0..n");
  }
  const std::size_t k = indices.size();
  if (k > 3) {
    throw std::invalid_argument("negative_power_W: derivative order capped at 3");
  }
  if (w.norm() < kPoleThreshold) {
    throw PoleAtOriginError("negative_power_W: evaluation at the origin pole");
  }
  if (k >= 2 && w.norm() <= 1.5 * h * static_cast<double>(k)) {
    throw StencilCrossesOriginError(
        "negative_power_W: difference stencil of radius " + std::to_string(k * h) +
        " straddles the origin pole");
  }
  if (k == 0) return cauchy_kernel_E(w);
  if (k == 1) return dE_first(indices[0], w);

  // W_{a,b,...} = (-1)^k d^k E / dw_a dw_b ... ; peel the first derivative
  // analytically and difference the rest.  dE_first(c) = -dE/dw_c, so one
  // extra central difference flips the sign once per nesting level.
  const int c = indices.back();
  auto g = [&](const Paravector& p) {
    detail::check_stencil_point(p, "negative_power_W");
    return dE_first(c, p);
  };
  if (k == 2) {
    const int a = indices[0];
    const Multivector diff =
        (g(shifted(w, a, h)) - g(shifted(w, a, -h))) * (1.0 / (2.0 * h));
    return -diff;  // W_{a,c} = d^2 E/da dc = -d(dE_first(c))/da
  }
  // k == 3: W_{a,b,c} = -d^3 E/da db dc = +d^2(dE_first(c))/da db
  const int a = indices[0];
  const int b = indices[1];
  if (a == b) {
    const Multivector second =
        (g(shifted(w, a, h)) - g(w) * 2.0 + g(shifted(w, a, -h))) * (1.0 / (h * h));
    return second;
  }
  const Multivector pp = g(shifted(shifted(w, a, h), b, h));
  const Multivector pm = g(shifted(shifted(w, a, h), b, -h));
  const Multivector mp = g(shifted(shifted(w, a, -h), b, h));
  const Multivector mm = g(shifted(shifted(w, a, -h), b, -h));
  return (pp - pm - mp + mm) * (1.0 / (4.0 * h * h));
}

enum class DiracSide { kLeft, kRight };

/// @brief Central-difference Dirac residual D[f](w) (or [f]D).
///
/// The step is h scaled by max(1, |w|).  For a regular field the residual is
/// O(h^2); for a field with polynomial components of degree <= 2 the stencil
/// is exact and only roundoff remains.
[[nodiscard]] inline Multivector dirac_residual(const PointField& f, const Paravector& w,
                                                double h, DiracSide side) {
  const Signature sig = f.sig;
  const int n = sig.generators();
  const double step = h * std::max(1.0, w.norm());
  Multivector out(sig);
  for (int kaxis = 0; kaxis <= n; ++kaxis) {
    const Paravector wp = shifted(w, kaxis, step);
    const Paravector wm = shifted(w, kaxis, -step);
    if (!f.domain(wp) || !f.domain(wm)) {
      throw StencilOutsideDomainError("dirac_residual: stencil leaves the field domain");
    }
    const Multivector diff = (f.value(wp) - f.value(wm)) * (1.0 / (2.0 * step));
    const Multivector ek = Multivector::generator(sig, kaxis);
    out = out + ((side == DiracSide::kLeft) ? ek * diff : diff * ek);
  }
  return out;
}

/// @brief Cauchy-Riemann residuals of the split f = U + e_n V^l:
/// r1 = d[U]/dx - d[V^l]/dy and r2 = d[U]/dy + dbar[V^l]/dx, where
/// d/dx = sum_{j<n} e_j d/dw_j, d/dy = d/dw_n, and dbar/dx applies the
/// conjugated generators to the imaginary part.  Both residuals vanish
/// (O(h^2)) iff f is left regular, and r1 + e_n r2 equals the left Dirac
/// residual identically on the same stencil.
[[nodiscard]] inline std::pair<Multivector, Multivector> cauchy_riemann_residual(
    const PointField& f, const Paravector& w, double h) {
  const Signature sig = f.sig;
  const int n = sig.generators();
  const double step = h * std::max(1.0, w.norm());

  std::vector<Multivector> dU, dV;  // index = coordinate axis
  dU.reserve(n + 1);
  dV.reserve(n + 1);
  for (int kaxis = 0; kaxis <= n; ++kaxis) {
    const Paravector wp = shifted(w, kaxis, step);
    const Paravector wm = shifted(w, kaxis, -step);
    if (!f.domain(wp) || !f.domain(wm)) {
      throw StencilOutsideDomainError("cauchy_riemann_residual: stencil leaves the field domain");
    }
    const auto dp = f.value(wp).decompose();
    const auto dm = f.value(wm).decompose();
    dU.push_back((dp.re - dm.re) * (1.0 / (2.0 * step)));
    dV.push_back((dp.im_left - dm.im_left) * (1.0 / (2.0 * step)));
  }

  Multivector dU_dx(sig), dV_dx_bar(sig);
  for (int j = 0; j < n; ++j) {
    const Multivector ej = Multivector::generator(sig, j);
    dU_dx = dU_dx + ej * dU[j];
    // conjugated action against the imaginary part (e_0 d_0 - sum_{j>=1} e_j d_j);
    // moving e_n across e_j flips the sign for j >= 1, so this is the grouping
    // under which r1 + e_n r2 reassembles the left Dirac derivative exactly
    dV_dx_bar = dV_dx_bar + (j == 0 ? ej : -ej) * dV[j];
  }
  const Multivector r1 = dU_dx - dV[n];
  const Multivector r2 = dU[n] + dV_dx_bar;
  return {r1, r2};
}

struct OrderEstimate {
  int order = 0;          ///< nearest-integer growth exponent
  double slope = 0.0;     ///< mean log-log slope across rays
  double confidence = 0.0; ///< max deviation of per-ray slopes from the mean
  bool converged = false; ///< false when rays were degenerate or slopes scatter
  int rays_used = 0;
};

[[nodiscard]] inline std::vector<Paravector> default_order_rays(Signature sig,
                                                                int count = 8) {
  // Fixed generic directions in the open upper half space: every component
  // bounded away from zero so no hypercomplex variable degenerates on a ray.
  std::mt19937 rng(17u);
  std::uniform_real_distribution<double> mag(0.35, 1.0);
  std::vector<Paravector> rays;
  const int n = sig.generators();
  for (int i = 0; i < count; ++i) {
    std::vector<double> d(n + 1);
    for (int j = 0; j < n; ++j) {
      d[j] = mag(rng) * ((rng() & 1u) ? 1.0 : -1.0);
    }
    d[n] = mag(rng);
    double norm = 0.0;
    for (double v : d) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : d) v /= norm;
    rays.emplace_back(sig, std::move(d));
  }
  return rays;
}

[[nodiscard]] inline std::vector<double> default_order_radii() {
  std::vector<double> radii;
  for (int p = 4; p <= 12; ++p) radii.push_back(std::pow(2.0, p));
  return radii;
}

/// @brief Estimate the order of f at infinity from log|f| vs log r slopes
/// along rays into the upper half space, rounded to the nearest integer.
[[nodiscard]] inline OrderEstimate order_at_infinity(
    const PointField& f, const std::vector<Paravector>& rays,
    const std::vector<double>& radii) {
  if (radii.size() < 2) throw std::invalid_argument("order_at_infinity: need >= 2 radii");
  OrderEstimate est;
  std::vector<double> slopes;
  for (const Paravector& d : rays) {
    std::vector<double> logr, logf;
    bool usable = true;
    for (double r : radii) {
      const Paravector p = d * r;
      if (!f.domain(p)) {
        throw StencilOutsideDomainError("order_at_infinity: sample outside field domain");
      }
      const Multivector v = f.value(p);
      if (!v.is_finite()) { usable = false; break; }
      const double mag = v.norm();
      if (mag < 1e-280) { usable = false; break; }
      logr.push_back(std::log(r));
      logf.push_back(std::log(mag));
    }
    if (!usable) continue;
    // least-squares slope
    const double N = static_cast<double>(logr.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logr.size(); ++i) {
      sx += logr[i];
      sy += logf[i];
      sxx += logr[i] * logr[i];
      sxy += logr[i] * logf[i];
    }
    slopes.push_back((N * sxy - sx * sy) / (N * sxx - sx * sx));
  }
  est.rays_used = static_cast<int>(slopes.size());
  if (slopes.empty()) {
    est.converged = false;
    return est;
  }
  const double mean = std::accumulate(slopes.begin(), slopes.end(), 0.0) / slopes.size();
  double dev = 0.0;
  for (double s : slopes) dev = std::max(dev, std::abs(s - mean));
  est.slope = mean;
  est.confidence = dev;
  est.order = static_cast<int>(std::lround(mean));
  est.converged = dev < 0.25;
  return est;
}

[[nodiscard]] inline OrderEstimate order_at_infinity(const PointField& f) {
  return order_at_infinity(f, default_order_rays(f.sig), default_order_radii());
}

/// @brief Polynomial sum_{alpha} Z^alpha(w) c_alpha with right coefficients.
///
/// Right multiplication by constants preserves left regularity, so every
/// SymmetricPolynomial is a left-monogenic field.
class SymmetricPolynomial {
 public:
  explicit SymmetricPolynomial(Signature sig) : sig_(sig) {}

  [[nodiscard]] const Signature& signature() const { return sig_; }

  void set_term(const MultiIndex& alpha, const Multivector& coefficient) {
    require_same_signature(sig_, coefficient.signature(), "SymmetricPolynomial::set_term");
    if (alpha.degree() > kMaxFueterDegree) {
      throw std::length_error("SymmetricPolynomial: degree exceeds cap");
    }
    if (coefficient.is_zero()) {
      terms_.erase(alpha);
    } else {
      terms_.insert_or_assign(alpha, coefficient);
    }
  }

  [[nodiscard]] const std::map<MultiIndex, Multivector>& terms() const { return terms_; }

  /// Deg(p): highest |alpha| carrying a nonzero coefficient; -1 for the zero
  /// polynomial.
  [[nodiscard]] int degree() const {
    int d = -1;
    for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.degree());
    return d;
  }

  [[nodiscard]] Multivector evaluate(const Paravector& w) const {
    Multivector out(sig_);
    for (const auto& [alpha, c] : terms_) {
      out = out + fueter_Z(alpha, w) * c;
    }
    return out;
  }

  [[nodiscard]] PointField as_point_field() const {
    SymmetricPolynomial copy = *this;
    return PointField{sig_, [copy](const Paravector& w) { return copy.evaluate(w); }};
  }

 private:
  Signature sig_;
  std::map<MultiIndex, Multivector> terms_;
};

[[nodiscard]] inline Multivector eval_symmetric_polynomial(const SymmetricPolynomial& p,
                                                           const Paravector& w) {
  return p.evaluate(w);
}

}  // namespace cliffbvp
