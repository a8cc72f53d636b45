#pragma once

/**
 * @file multivector.hpp
 * @brief Dense arithmetic in the real Clifford algebra C(V_n) with
 *        anti-Euclidean generators (e_i^2 = -1, e_i e_j = -e_j e_i).
 *
 * Basis blades are indexed by bitmasks: bit j-1 set in the mask means the
 * generator e_j is a factor of the blade, with factors written in ascending
 * index order.  Mask 0 is the identity e_0.  A value of C(V_n) is stored as
 * 2^n coefficients in mask order.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliffbvp {

class SignatureMismatchError : public std::invalid_argument {
 public:
  explicit SignatureMismatchError(const std::string& what)
      : std::invalid_argument(what) {}
};

class SingularElementError : public std::runtime_error {
 public:
  explicit SingularElementError(const std::string& what)
      : std::runtime_error(what) {}
};

class TextFormError : public std::runtime_error {
 public:
  TextFormError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// @brief Generator count of a Clifford algebra C(V_n).
///
/// Every multivector carries its Signature; operations on values from
/// different signatures are rejected.  The cap of 12 generators keeps the
/// dense coefficient array at most 4096 doubles.
class Signature {
 public:
  static constexpr int kMaxGenerators = 12;

  explicit Signature(int n) : n_(n) {
    if (n < 1 || n > kMaxGenerators) {
      throw std::invalid_argument("Signature: generator count must be in [1, " +
                                  std::to_string(kMaxGenerators) + "], got " +
                                  std::to_string(n));
    }
  }

  [[nodiscard]] int generators() const { return n_; }
  [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_; }
  /// Bitmask with one bit per generator (all blades live below this).
  [[nodiscard]] unsigned full_mask() const { return (1u << n_) - 1u; }
  /// Mask bit of the distinguished last generator e_n.
  [[nodiscard]] unsigned e_n_bit() const { return 1u << (n_ - 1); }

  friend bool operator==(const Signature& a, const Signature& b) { return a.n_ == b.n_; }
  friend bool operator!=(const Signature& a, const Signature& b) { return a.n_ != b.n_; }

 private:
  int n_;
};

inline void require_same_signature(const Signature& a, const Signature& b,
                                   const char* op) {
  if (a != b) {
    throw SignatureMismatchError(std::string(op) + ": operands carry different signatures (n=" +
                                 std::to_string(a.generators()) + " vs n=" +
                                 std::to_string(b.generators()) + ")");
  }
}

struct BladeProduct {
  int sign;       ///< +1 or -1
  unsigned mask;  ///< symmetric difference of the factor masks
};

/// @brief Exact sign and result blade of the basis product e_A e_B.
///
/// sign = (-1)^{#(A∩B)} (-1)^{P(A,B)} with P(A,B) counting, for each j in B,
/// the elements of A larger than j; the result blade is A Δ B.  Integer-exact.
[[nodiscard]] inline BladeProduct basis_sign(unsigned mask_a, unsigned mask_b,
                                             const Signature& sig) {
  if ((mask_a & ~sig.full_mask()) != 0 || (mask_b & ~sig.full_mask()) != 0) {
    throw std::out_of_range("basis_sign: blade mask out of range for signature n=" +
                            std::to_string(sig.generators()));
  }
  int swaps = 0;
  unsigned b = mask_b;
  while (b != 0) {
    const int j = std::countr_zero(b);
    swaps += std::popcount(mask_a >> (j + 1));
    b &= b - 1;
  }
  const int squares = std::popcount(mask_a & mask_b);
  const int sign = ((swaps + squares) % 2 == 0) ? 1 : -1;
  return BladeProduct{sign, mask_a ^ mask_b};
}

/// @brief A value of C(V_n): 2^n real coefficients in blade-mask order.
///
/// Immutable in spirit: all operations return fresh values, so multivectors
/// may be shared freely between threads.
class Multivector {
 public:
  explicit Multivector(Signature sig)
      : sig_(sig), c_(sig.dim(), 0.0) {}

  Multivector(Signature sig, std::vector<double> coefficients)
      : sig_(sig), c_(std::move(coefficients)) {
    if (c_.size() != sig_.dim()) {
      throw std::invalid_argument("Multivector: coefficient count " +
                                  std::to_string(c_.size()) + " does not match 2^n = " +
                                  std::to_string(sig_.dim()));
    }
  }

  [[nodiscard]] static Multivector zero(Signature sig) { return Multivector(sig); }

  [[nodiscard]] static Multivector scalar(Signature sig, double value) {
    Multivector m(sig);
    m.c_[0] = value;
    return m;
  }

  [[nodiscard]] static Multivector basis_blade(Signature sig, unsigned mask) {
    if ((mask & ~sig.full_mask()) != 0) {
      throw std::out_of_range("basis_blade: mask out of range");
    }
    Multivector m(sig);
    m.c_[mask] = 1.0;
    return m;
  }

  /// Generator e_j for j in 1..n (j = 0 gives the identity).
  [[nodiscard]] static Multivector generator(Signature sig, int j) {
    if (j < 0 || j > sig.generators()) {
      throw std::out_of_range("generator: index must be in 0..n");
    }
    return basis_blade(sig, j == 0 ? 0u : (1u << (j - 1)));
  }

  [[nodiscard]] const Signature& signature() const { return sig_; }
  [[nodiscard]] std::size_t dim() const { return c_.size(); }
  [[nodiscard]] const std::vector<double>& coefficients() const { return c_; }

  [[nodiscard]] double operator[](unsigned mask) const { return c_.at(mask); }
  void set(unsigned mask, double value) { c_.at(mask) = value; }

  [[nodiscard]] double scalar_part() const { return c_[0]; }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
  }

  [[nodiscard]] bool is_finite() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return std::isfinite(v); });
  }

  /// True when no blade contains the distinguished generator e_n,
  /// i.e. the value lies in the subalgebra C(V_{n-1}).
  [[nodiscard]] bool is_para_real(double tol = 0.0) const {
    const unsigned bit = sig_.e_n_bit();
    for (unsigned m = 0; m < c_.size(); ++m) {
      if ((m & bit) != 0 && std::abs(c_[m]) > tol) return false;
    }
    return true;
  }

  /// True when only the scalar slot and single-generator slots are populated.
  [[nodiscard]] bool is_paravector(double tol = 0.0) const {
    for (unsigned m = 0; m < c_.size(); ++m) {
      if (std::popcount(m) > 1 && std::abs(c_[m]) > tol) return false;
    }
    return true;
  }

  friend Multivector operator+(const Multivector& a, const Multivector& b) {
    require_same_signature(a.sig_, b.sig_, "operator+");
    Multivector r(a.sig_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }

  friend Multivector operator-(const Multivector& a, const Multivector& b) {
    require_same_signature(a.sig_, b.sig_, "operator-");
    Multivector r(a.sig_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }

  friend Multivector operator-(const Multivector& a) {
    Multivector r(a.sig_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = -a.c_[i];
    return r;
  }

  friend Multivector operator*(const Multivector& a, double s) {
    Multivector r(a.sig_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] * s;
    return r;
  }

  friend Multivector operator*(double s, const Multivector& a) { return a * s; }

  friend Multivector operator/(const Multivector& a, double s) { return a * (1.0 / s); }

  /// Clifford product, bilinear expansion over basis_sign.
  friend Multivector operator*(const Multivector& a, const Multivector& b) {
    require_same_signature(a.sig_, b.sig_, "operator*");
    Multivector r(a.sig_);
    const std::size_t dim = r.c_.size();
    for (unsigned ma = 0; ma < dim; ++ma) {
      const double ca = a.c_[ma];
      if (ca == 0.0) continue;
      for (unsigned mb = 0; mb < dim; ++mb) {
        const double cb = b.c_[mb];
        if (cb == 0.0) continue;
        const BladeProduct p = basis_sign(ma, mb, a.sig_);
        r.c_[p.mask] += p.sign * ca * cb;
      }
    }
    return r;
  }

  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.sig_ == b.sig_ && a.c_ == b.c_;
  }

  /// Involution of Eq-style Clifford conjugation: blade of r generators
  /// picks up the sign (-1)^{r(r+1)/2}.  On paravectors this negates the
  /// vector part.  Applying it twice is the identity.
  [[nodiscard]] Multivector bar() const {
    Multivector r(sig_);
    for (unsigned m = 0; m < c_.size(); ++m) {
      const int k = std::popcount(m);
      const int sign = ((k * (k + 1) / 2) % 2 == 0) ? 1 : -1;
      r.c_[m] = sign * c_[m];
    }
    return r;
  }

  /// Reflection across the hyperplane: Re(a) - e_n Im^l(a).  Equivalent to
  /// negating every blade that contains e_n; an algebra automorphism and an
  /// involution.
  [[nodiscard]] Multivector star() const {
    Multivector r(sig_);
    const unsigned bit = sig_.e_n_bit();
    for (unsigned m = 0; m < c_.size(); ++m) {
      r.c_[m] = ((m & bit) != 0) ? -c_[m] : c_[m];
    }
    return r;
  }

  struct Decomposition;

  /// Split against the subalgebra C(V_{n-1}): a = re + e_n*im_left =
  /// re + im_right*e_n.  The two imaginary parts agree up to the sign
  /// (-1)^{#A} per blade.
  [[nodiscard]] Decomposition decompose() const;

  [[nodiscard]] double norm_squared() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return s;
  }

  [[nodiscard]] double norm() const { return std::sqrt(norm_squared()); }

  /// Banach-algebra norm |a|_0 = 2^{n/2} |a| (submultiplicative).
  [[nodiscard]] double norm0() const {
    return std::pow(2.0, sig_.generators() / 2.0) * norm();
  }

  friend double inner(const Multivector& a, const Multivector& b) {
    require_same_signature(a.sig_, b.sig_, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.c_.size(); ++i) s += a.c_[i] * b.c_[i];
    return s;
  }

  /// Multiplicative inverse.  Paravectors use the closed form bar(w)/|w|^2;
  /// every other element goes through a dense solve on the left-regular
  /// representation and raises SingularElementError when no inverse exists.
  [[nodiscard]] Multivector invert() const;

  /// Diagnostic text form: "c0 + c1*e1 + c12*e12 + ...".
  [[nodiscard]] std::string to_string() const;

 private:
  Signature sig_;
  std::vector<double> c_;
};

struct Multivector::Decomposition {
  Multivector re;        ///< component in C(V_{n-1})
  Multivector im_left;   ///< y^l with a = re + e_n y^l
  Multivector im_right;  ///< y^r with a = re + y^r e_n
};

inline Multivector::Decomposition Multivector::decompose() const {
  Decomposition d{Multivector(sig_), Multivector(sig_), Multivector(sig_)};
  const unsigned bit = sig_.e_n_bit();
  for (unsigned m = 0; m < c_.size(); ++m) {
    if ((m & bit) == 0) {
      d.re.c_[m] = c_[m];
    } else {
      const unsigned rest = m & ~bit;
      const int k = std::popcount(rest);
      // e_{A'} e_n = (-1)^{#A'} e_n e_{A'} for A' not containing n.
      d.im_right.c_[rest] = c_[m];
      d.im_left.c_[rest] = ((k % 2 == 0) ? 1.0 : -1.0) * c_[m];
    }
  }
  return d;
}

[[nodiscard]] inline Multivector bar(const Multivector& a) { return a.bar(); }
[[nodiscard]] inline Multivector star(const Multivector& a) { return a.star(); }

[[nodiscard]] inline bool approx_equal(const Multivector& a, const Multivector& b,
                                       double tol = 1e-12) {
  require_same_signature(a.signature(), b.signature(), "approx_equal");
  const double scale = std::max({1.0, a.norm(), b.norm()});
  return (a - b).norm() <= tol * scale;
}

/// @brief A point of R^{n+1} identified with the paravector w_0 e_0 + ... + w_n e_n.
class Paravector {
 public:
  Paravector(Signature sig, std::vector<double> components)
      : sig_(sig), w_(std::move(components)) {
    if (w_.size() != static_cast<std::size_t>(sig_.generators() + 1)) {
      throw std::invalid_argument("Paravector: expected n+1 components");
    }
  }

  explicit Paravector(Signature sig)
      : sig_(sig), w_(sig.generators() + 1, 0.0) {}

  /// Embed a hyperplane point (n coordinates, w_n = 0).
  [[nodiscard]] static Paravector on_hyperplane(Signature sig,
                                                const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(sig.generators())) {
      throw std::invalid_argument("on_hyperplane: expected n coordinates");
    }
    std::vector<double> w(x.begin(), x.end());
    w.push_back(0.0);
    return Paravector(sig, std::move(w));
  }

  [[nodiscard]] const Signature& signature() const { return sig_; }
  [[nodiscard]] double operator[](std::size_t i) const { return w_.at(i); }
  [[nodiscard]] const std::vector<double>& components() const { return w_; }
  [[nodiscard]] double height() const { return w_.back(); }  ///< Im(w) = w_n

  [[nodiscard]] bool in_upper_half_space() const { return height() > 0.0; }
  [[nodiscard]] bool in_lower_half_space() const { return height() < 0.0; }

  [[nodiscard]] Multivector embed() const {
    Multivector m(sig_);
    m.set(0, w_[0]);
    for (int j = 1; j <= sig_.generators(); ++j) m.set(1u << (j - 1), w_[j]);
    return m;
  }

  [[nodiscard]] static std::optional<Paravector> from_multivector(const Multivector& m,
                                                                  double tol = 0.0) {
    if (!m.is_paravector(tol)) return std::nullopt;
    const int n = m.signature().generators();
    std::vector<double> w(n + 1);
    w[0] = m[0];
    for (int j = 1; j <= n; ++j) w[j] = m[1u << (j - 1)];
    return Paravector(m.signature(), std::move(w));
  }

  [[nodiscard]] double norm_squared() const {
    double s = 0.0;
    for (double v : w_) s += v * v;
    return s;
  }

  [[nodiscard]] double norm() const { return std::sqrt(norm_squared()); }

  [[nodiscard]] Paravector bar() const {
    std::vector<double> w(w_);
    for (std::size_t i = 1; i < w.size(); ++i) w[i] = -w[i];
    return Paravector(sig_, std::move(w));
  }

  /// Mirror across the hyperplane w_n = 0 (the point w^*).
  [[nodiscard]] Paravector mirror() const {
    std::vector<double> w(w_);
    w.back() = -w.back();
    return Paravector(sig_, std::move(w));
  }

  /// Paravector inverse 1/w = bar(w)/|w|^2.
  [[nodiscard]] Paravector inverse() const {
    const double n2 = norm_squared();
    if (n2 == 0.0) throw SingularElementError("Paravector::inverse: zero paravector");
    std::vector<double> w(w_);
    w[0] /= n2;
    for (std::size_t i = 1; i < w.size(); ++i) w[i] = -w[i] / n2;
    return Paravector(sig_, std::move(w));
  }

  friend Paravector operator+(const Paravector& a, const Paravector& b) {
    require_same_signature(a.sig_, b.sig_, "Paravector+");
    std::vector<double> w(a.w_);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += b.w_[i];
    return Paravector(a.sig_, std::move(w));
  }

  friend Paravector operator-(const Paravector& a, const Paravector& b) {
    require_same_signature(a.sig_, b.sig_, "Paravector-");
    std::vector<double> w(a.w_);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= b.w_[i];
    return Paravector(a.sig_, std::move(w));
  }

  friend Paravector operator*(const Paravector& a, double s) {
    std::vector<double> w(a.w_);
    for (double& v : w) v *= s;
    return Paravector(a.sig_, std::move(w));
  }

  friend Paravector operator*(double s, const Paravector& a) { return a * s; }

 private:
  Signature sig_;
  std::vector<double> w_;
};

/// Shift a single coordinate; handy for finite-difference stencils.
[[nodiscard]] inline Paravector shifted(const Paravector& w, int axis, double delta) {
  std::vector<double> c = w.components();
  c.at(axis) += delta;
  return Paravector(w.signature(), std::move(c));
}

[[nodiscard]] inline std::string blade_name(unsigned mask) {
  if (mask == 0) return "e0";
  std::string s = "e";
  for (int j = 0; j < 32; ++j) {
    if (mask & (1u << j)) s += std::to_string(j + 1);
  }
  return s;
}

inline std::string Multivector::to_string() const {
  std::string out;
  char buf[40];
  for (unsigned m = 0; m < c_.size(); ++m) {
    const double v = c_[m];
    if (v == 0.0) continue;
    const double mag = std::abs(v);
    if (out.empty()) {
      out += (v < 0.0) ? "-" : "";
    } else {
      out += (v < 0.0) ? " - " : " + ";
    }
    std::snprintf(buf, sizeof buf, "%.17g", mag);
    out += buf;
    if (m != 0) {
      out += "*";
      out += blade_name(m);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

/// @brief Parse the diagnostic text form back into a value.
///
/// Accepts sums/differences of terms "number", "eIDX", "number*eIDX" where
/// IDX is a run of ascending single digits (e.g. e12 = e_1 e_2); blades with
/// indices above 9 use the list form e(10,11).
[[nodiscard]] Multivector parse_multivector(const std::string& text, Signature sig);

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline unsigned parse_blade_mask(const std::string& s, std::size_t& i, Signature sig) {
  // expects s[i] == 'e'
  const std::size_t start = i;
  ++i;
  unsigned mask = 0;
  if (i < s.size() && s[i] == '(') {
    ++i;
    while (true) {
      skip_ws(s, i);
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) throw TextFormError("expected blade index", i);
      const int idx = std::stoi(s.substr(i, j - i));
      i = j;
      if (idx < 0 || idx > sig.generators()) {
        throw TextFormError("blade index out of range for signature", start);
      }
      if (idx > 0) {
        const unsigned bit = 1u << (idx - 1);
        if (mask & bit) throw TextFormError("repeated blade index", start);
        mask |= bit;
      }
      skip_ws(s, i);
      if (i < s.size() && s[i] == ',') { ++i; continue; }
      if (i < s.size() && s[i] == ')') { ++i; break; }
      throw TextFormError("expected ',' or ')' in blade", i);
    }
    return mask;
  }
  std::size_t j = i;
  while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
  if (j == i) throw TextFormError("expected blade digits after 'e'", i);
  int prev = 0;
  for (std::size_t k = i; k < j; ++k) {
    const int idx = s[k] - '0';
    if (idx <= prev) throw TextFormError("blade indices must be ascending", start);
    if (idx > sig.generators()) {
      throw TextFormError("blade index out of range for signature", start);
    }
    if (idx > 0) mask |= 1u << (idx - 1);
    prev = idx;
  }
  i = j;
  return mask;
}

}  // namespace detail

inline Multivector parse_multivector(const std::string& text, Signature sig) {
  Multivector out(sig);
  std::size_t i = 0;
  detail::skip_ws(text, i);
  if (i >= text.size()) throw TextFormError("empty multivector literal", 0);
  bool first = true;
  while (i < text.size()) {
    double sign = 1.0;
    detail::skip_ws(text, i);
    if (!first) {
      if (text[i] == '+') { ++i; }
      else if (text[i] == '-') { sign = -1.0; ++i; }
      else throw TextFormError("expected '+' or '-' between terms", i);
      detail::skip_ws(text, i);
    } else {
      while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        if (text[i] == '-') sign = -sign;
        ++i;
        detail::skip_ws(text, i);
      }
    }
    first = false;
    if (i >= text.size()) throw TextFormError("dangling sign", i);
    double coeff = 1.0;
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.') {
      std::size_t used = 0;
      coeff = std::stod(text.substr(i), &used);
      i += used;
      have_number = true;
      detail::skip_ws(text, i);
      if (i < text.size() && text[i] == '*') {
        ++i;
        detail::skip_ws(text, i);
      } else if (i < text.size() && text[i] == 'e' &&
                 i + 1 < text.size() &&
                 (std::isdigit(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '(')) {
        // tight form like "2e1" is accepted
      } else {
        out.set(0, out[0] + sign * coeff);
        detail::skip_ws(text, i);
        continue;
      }
    }
    detail::skip_ws(text, i);
    if (i < text.size() && text[i] == 'e') {
      const unsigned mask = detail::parse_blade_mask(text, i, sig);
      out.set(mask, out[mask] + sign * coeff);
    } else if (have_number) {
      throw TextFormError("expected blade after '*'", i);
    } else {
      throw TextFormError("expected number or blade", i);
    }
    detail::skip_ws(text, i);
  }
  return out;
}

}  // namespace cliffbvp

// The general inverse needs a dense factorization; keep the heavy include at
// the bottom so the arithmetic above stays light to parse.
#include <Eigen/Dense>

namespace cliffbvp {

inline Multivector Multivector::invert() const {
  if (is_zero()) throw SingularElementError("invert: zero element");
  if (is_paravector()) {
    const double n2 = norm_squared();
    return bar() * (1.0 / n2);
  }
  const auto dim = static_cast<Eigen::Index>(c_.size());
  Eigen::MatrixXd rep(dim, dim);
  // Column j holds the coefficients of a * e_j.
  for (unsigned mj = 0; mj < c_.size(); ++mj) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
    for (unsigned ma = 0; ma < c_.size(); ++ma) {
      if (c_[ma] == 0.0) continue;
      const BladeProduct p = basis_sign(ma, mj, sig_);
      col[p.mask] += p.sign * c_[ma];
    }
    rep.col(mj) = col;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rep);
  if (!lu.isInvertible()) {
    throw SingularElementError("invert: left-regular representation is singular");
  }
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(dim);
  e0[0] = 1.0;
  const Eigen::VectorXd x = lu.solve(e0);
  std::vector<double> coeffs(x.data(), x.data() + dim);
  return Multivector(sig_, std::move(coeffs));
}

}  // namespace cliffbvp
