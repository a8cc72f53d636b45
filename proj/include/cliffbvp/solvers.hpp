#pragma once

/**
 * @file solvers.hpp
 * @brief Solvers for the Riemann jump problem, the Schwarz problem and the
 *        Hilbert problem on the Poincare upper half space, together with the
 *        symmetric-extension / self-reflection machinery and a numerical
 *        verification harness.
 *
 * Order m at infinity classifies every problem into four cases:
 *   C1: m >= 0        solution family with a free monogenic polynomial part
 *   C2: m = -1        unique, needs the datum to vanish at infinity
 *   C3: -n < m < -1   unique
 *   C4: m <= -n       unique, subject to vanishing moment conditions
 */

#include "quadrature.hpp"

namespace cliffbvp {

class SingularLambdaError : public std::runtime_error {
 public:
  explicit SingularLambdaError(const std::string& what) : std::runtime_error(what) {}
};

class DatumLimitNonzeroError : public std::runtime_error {
 public:
  DatumLimitNonzeroError(const std::string& what, Multivector limit)
      : std::runtime_error(what), limit_at_infinity(std::move(limit)) {}
  Multivector limit_at_infinity;
};

struct MomentConditionCheck {
  MultiIndex alpha;
  IntegralResult blade_measure;   ///< \int Z^alpha dsigma c
  IntegralResult scalar_measure;  ///< \int Z^alpha c dx (reported alongside)
  double threshold = 0.0;
  bool satisfied = false;
};

class ConditionViolatedError : public std::runtime_error {
 public:
  ConditionViolatedError(const std::string& what, std::vector<MomentConditionCheck> checks)
      : std::runtime_error(what), checks(std::move(checks)) {}
  std::vector<MomentConditionCheck> checks;
};

enum class CaseTag { C1, C2, C3, C4 };

[[nodiscard]] inline const char* case_name(CaseTag t) {
  switch (t) {
    case CaseTag::C1: return "C1";
    case CaseTag::C2: return "C2";
    case CaseTag::C3: return "C3";
    case CaseTag::C4: return "C4";
  }
  return "?";
}

[[nodiscard]] inline CaseTag classify_case(int n, int m) {
  if (m >= 0) return CaseTag::C1;
  if (m == -1) return CaseTag::C2;
  if (m > -n) return CaseTag::C3;  // -n < m < -1
  return CaseTag::C4;              // m <= -n
}

/// Free para-real constants of the m >= 0 family: one per multi-index of
/// degree <= m, i.e. binomial(n+m, m).
[[nodiscard]] inline long long count_free_constants(int n, int m) {
  if (m < 0) throw std::domain_error("count_free_constants: requires m >= 0");
  return static_cast<long long>(binomial(n + m, m));
}

/// Moment conditions of the m <= -n case: multi-indices of degree
/// 0..-(n+1+m), i.e. binomial(-m-1, n) of them.
[[nodiscard]] inline long long count_conditions(int n, int m) {
  if (m > -n) throw std::domain_error("count_conditions: requires m <= -n");
  return static_cast<long long>(binomial(-m - 1, n));
}

// ---------------------------------------------------------------------------
// Two-branch fields and reflection machinery
// ---------------------------------------------------------------------------

/// @brief A sectionally regular field: one branch per open half space, with
/// the hyperplane as jump surface.  Boundary values are taken as limits.
struct SectionallyRegularField {
  PointField upper;  ///< defined for w_n > 0
  PointField lower;  ///< defined for w_n < 0

  [[nodiscard]] Multivector evaluate(const Paravector& w) const {
    if (w.in_upper_half_space()) return upper.value(w);
    if (w.in_lower_half_space()) return lower.value(w);
    throw EvaluationOnHyperplaneError(
        "SectionallyRegularField: evaluation on the jump surface");
  }
};

/// Accompanying value [phi(w*)]* of a one-branch field at the mirrored point.
[[nodiscard]] inline Multivector accompany(const PointField& phi, const Paravector& w) {
  return phi.value(w.mirror()).star();
}

/// @brief Symmetric extension of a field on the upper half space: the lower
/// branch is w -> [phi(w*)]*.  Extending a regular field yields a sectionally
/// regular field (symmetry principle); tests check this numerically.
[[nodiscard]] inline SectionallyRegularField symmetric_extension(const PointField& phi) {
  PointField lower{phi.sig,
                   [phi](const Paravector& w) { return phi.value(w.mirror()).star(); },
                   [phi](const Paravector& w) { return phi.domain(w.mirror()); }};
  return SectionallyRegularField{phi, std::move(lower)};
}

/// Reflective companion: branches swap across the hyperplane through the
/// accompanying-value map.  Applying it twice restores the original field.
[[nodiscard]] inline SectionallyRegularField reflective(const SectionallyRegularField& psi) {
  PointField upper{
      psi.lower.sig,
      [f = psi.lower](const Paravector& w) { return f.value(w.mirror()).star(); },
      [f = psi.lower](const Paravector& w) { return f.domain(w.mirror()); }};
  PointField lower{
      psi.upper.sig,
      [f = psi.upper](const Paravector& w) { return f.value(w.mirror()).star(); },
      [f = psi.upper](const Paravector& w) { return f.domain(w.mirror()); }};
  return SectionallyRegularField{std::move(upper), std::move(lower)};
}

/// Self-reflection projection (psi + psi_reflected)/2; idempotent, and its
/// output equals its own reflective companion.
[[nodiscard]] inline SectionallyRegularField self_reflection(
    const SectionallyRegularField& psi) {
  const SectionallyRegularField flipped = reflective(psi);
  auto average = [](const PointField& a, const PointField& b) {
    return PointField{
        a.sig,
        [a, b](const Paravector& w) { return (a.value(w) + b.value(w)) * 0.5; },
        [a, b](const Paravector& w) { return a.domain(w) && b.domain(w); }};
  };
  return SectionallyRegularField{average(psi.upper, flipped.upper),
                                 average(psi.lower, flipped.lower)};
}

// ---------------------------------------------------------------------------
// Problems and solutions
// ---------------------------------------------------------------------------

struct SolverWarning {
  std::string code;
  std::string message;
};

struct HilbertProblem {
  Signature sig;
  int m = -1;           ///< prescribed order at infinity
  Multivector lambda;   ///< invertible constant; lambda = 1 is a Schwarz problem
  BoundaryFunction c;   ///< para-real boundary datum
  QuadratureScheme scheme;

  HilbertProblem(Signature sig_, int m_, Multivector lambda_, BoundaryFunction c_,
                 QuadratureScheme scheme_ = {})
      : sig(sig_), m(m_), lambda(std::move(lambda_)), c(std::move(c_)),
        scheme(scheme_) {
    require_same_signature(sig, lambda.signature(), "HilbertProblem");
    require_same_signature(sig, c.signature(), "HilbertProblem");
  }

  [[nodiscard]] static HilbertProblem schwarz(Signature sig_, int m_, BoundaryFunction c_,
                                              QuadratureScheme scheme_ = {}) {
    return HilbertProblem(sig_, m_, Multivector::scalar(sig_, 1.0), std::move(c_), scheme_);
  }
};

struct SolveOptions {
  bool check_classes = true;      ///< run the empirical class estimators (warnings)
  bool enforce_conditions = true; ///< raise on violated case-C2/C4 conditions
};

/// Coefficient attached to Z^alpha in the free polynomial part, for a
/// para-real free constant R.  On the hyperplane Z^alpha(x) is para-real when
/// alpha_n is even and a pure right e_n-multiple when alpha_n is odd, so the
/// complementary factor keeps Re(Z^alpha(x) * coeff) = 0 there:
///   alpha_n even ->  R e_n,     alpha_n odd -> R.
[[nodiscard]] inline Multivector free_polynomial_coefficient(const MultiIndex& alpha,
                                                             const Multivector& R) {
  if (!R.is_para_real()) {
    throw std::invalid_argument("free constant R_" + alpha.to_string() +
                                " must be para-real");
  }
  if (alpha.last_entry() % 2 == 0) {
    return R * Multivector::basis_blade(R.signature(), R.signature().e_n_bit());
  }
  return R;
}

/// @brief Solved Hilbert/Schwarz problem: principal Cauchy-integral part plus
/// a symbolic free polynomial (case C1), right-multiplied by lambda^{-1}.
///
/// Free constants default to zero; setting them selects one member of the
/// solution family.  Values are defined on the open upper half space.
class Solution {
 public:
  Solution(Signature sig, CaseTag tag, int m, Multivector lambda,
           Multivector lambda_inverse, bool lambda_is_paravector, BoundaryFunction c,
           QuadratureScheme scheme)
      : sig_(sig), case_tag_(tag), m_(m), lambda_(std::move(lambda)),
        lambda_inverse_(std::move(lambda_inverse)),
        lambda_is_paravector_(lambda_is_paravector), c_(std::move(c)), scheme_(scheme) {
    if (m_ >= 0) {
      for (auto& alpha : multi_indices_up_to_degree(sig_, m_)) {
        poly_basis_.push_back(alpha);
      }
    }
  }

  [[nodiscard]] const Signature& signature() const { return sig_; }
  [[nodiscard]] CaseTag case_tag() const { return case_tag_; }
  [[nodiscard]] int order() const { return m_; }
  [[nodiscard]] const Multivector& lambda() const { return lambda_; }
  [[nodiscard]] const Multivector& lambda_inverse() const { return lambda_inverse_; }
  [[nodiscard]] bool lambda_is_paravector() const { return lambda_is_paravector_; }
  [[nodiscard]] const BoundaryFunction& datum() const { return c_; }
  [[nodiscard]] const QuadratureScheme& scheme() const { return scheme_; }
  [[nodiscard]] const std::vector<MultiIndex>& poly_basis() const { return poly_basis_; }
  [[nodiscard]] const std::map<MultiIndex, Multivector>& free_constants() const {
    return free_constants_;
  }
  [[nodiscard]] const std::vector<MomentConditionCheck>& solvability() const {
    return solvability_;
  }
  [[nodiscard]] const std::vector<SolverWarning>& warnings() const { return warnings_; }

  void add_warning(SolverWarning w) { warnings_.push_back(std::move(w)); }
  void set_solvability(std::vector<MomentConditionCheck> checks) {
    solvability_ = std::move(checks);
  }

  /// Pick a member of the solution family; R must be para-real and alpha must
  /// lie in the polynomial basis (|alpha| <= m).
  void set_free_constant(const MultiIndex& alpha, const Multivector& R) {
    if (std::find(poly_basis_.begin(), poly_basis_.end(), alpha) == poly_basis_.end()) {
      throw std::invalid_argument("set_free_constant: alpha " + alpha.to_string() +
                                  " is outside the |alpha| <= m basis");
    }
    // validates para-reality as a side effect
    (void)free_polynomial_coefficient(alpha, R);
    if (R.is_zero()) {
      free_constants_.erase(alpha);
    } else {
      free_constants_.insert_or_assign(alpha, R);
    }
  }

  [[nodiscard]] Multivector principal_part(const Paravector& w) const {
    return cauchy_integral_S(c_, w, scheme_).value;
  }

  [[nodiscard]] Multivector polynomial_part(const Paravector& w) const {
    Multivector acc(sig_);
    for (const auto& [alpha, R] : free_constants_) {
      double inv_factorial = 1.0;
      for (int i = 2; i <= alpha.degree(); ++i) inv_factorial /= i;
      acc = acc + fueter_Z(alpha, w) * free_polynomial_coefficient(alpha, R) * inv_factorial;
    }
    return acc;
  }

  [[nodiscard]] Multivector evaluate(const Paravector& w) const {
    return finish(principal_part(w) + polynomial_part(w));
  }

  /// Evaluate at several points with one shared quadrature decomposition;
  /// required by finite-difference consumers (see cauchy_integral_S_batch).
  [[nodiscard]] std::vector<Multivector> evaluate_batch(
      const std::vector<Paravector>& points) const {
    const auto principal = cauchy_integral_S_batch(c_, points, scheme_);
    std::vector<Multivector> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      out.push_back(finish(principal[i].value + polynomial_part(points[i])));
    }
    return out;
  }

  [[nodiscard]] PointField as_point_field() const {
    Solution copy = *this;
    return PointField{sig_, [copy](const Paravector& w) { return copy.evaluate(w); },
                      [](const Paravector& w) { return w.in_upper_half_space(); }};
  }

 private:
  [[nodiscard]] Multivector finish(const Multivector& schwarz_value) const {
    if (lambda_trivial()) return schwarz_value;
    return schwarz_value * lambda_inverse_;
  }

  [[nodiscard]] bool lambda_trivial() const {
    return lambda_ == Multivector::scalar(sig_, 1.0);
  }

  Signature sig_;
  CaseTag case_tag_;
  int m_;
  Multivector lambda_;
  Multivector lambda_inverse_;
  bool lambda_is_paravector_;
  BoundaryFunction c_;
  QuadratureScheme scheme_;
  std::vector<MultiIndex> poly_basis_;
  std::map<MultiIndex, Multivector> free_constants_;
  std::vector<MomentConditionCheck> solvability_;
  std::vector<SolverWarning> warnings_;
};

// ---------------------------------------------------------------------------
// Condition checks shared by the solvers and the CLI "check" path
// ---------------------------------------------------------------------------

/// Moment conditions for the m <= -n case: every |alpha| in 0..-(n+1+m) must
/// integrate to zero against the datum; declared satisfied within
/// max(tolerance, 10 x (quadrature error + truncation tail)).
[[nodiscard]] inline std::vector<MomentConditionCheck> check_solvability(
    int m, const BoundaryFunction& c, const QuadratureScheme& scheme) {
  const Signature sig = c.signature();
  const int n = sig.generators();
  std::vector<MomentConditionCheck> checks;
  if (m > -n) return checks;
  const int max_degree = -(n + 1 + m);
  for (int d = 0; d <= max_degree; ++d) {
    for (const auto& alpha : multi_indices_of_degree(sig, d)) {
      IntegralResult blade = moment_integral(alpha, c, scheme);
      IntegralResult scalar = moment_integral_scalar_measure(alpha, c, scheme);
      const double threshold =
          std::max(scheme.tolerance,
                   10.0 * (blade.error_estimate + blade.truncation_tail_bound));
      const bool ok = blade.value.norm() <= threshold;
      checks.push_back({alpha, std::move(blade), std::move(scalar), threshold, ok});
    }
  }
  return checks;
}

[[nodiscard]] inline LimitEstimate check_datum_limit(const BoundaryFunction& c) {
  return estimate_limit_at_infinity(c, 0);
}

namespace solver_detail {

inline void run_class_checks(int m, const BoundaryFunction& c,
                             std::vector<SolverWarning>& warnings) {
  try {
    if (m >= 0) {
      const HatHReport rep = classify_hat_H(c, 0);
      if (!rep.in_hat_H_m) {
        warnings.push_back({"datum-class",
                            "datum fails the empirical Holder/dagger-Holder check "
                            "required for non-negative order (estimator is advisory)"});
      }
    } else {
      const int r = -(m + 1);
      const HatHReport rep = classify_hat_H(c, r);
      if (!rep.in_hat_H_m0) {
        warnings.push_back(
            {"datum-class",
             "datum fails the empirical weighted-class check for order " +
                 std::to_string(m) + " (estimator is advisory)"});
      }
    }
  } catch (const std::exception& e) {
    warnings.push_back({"datum-class-skipped",
                        std::string("class estimators could not run: ") + e.what()});
  }
}

inline void enforce_case_conditions(CaseTag tag, int m, const BoundaryFunction& c,
                                    const QuadratureScheme& scheme,
                                    std::vector<MomentConditionCheck>& checks,
                                    const SolveOptions& opts) {
  if (tag == CaseTag::C2 && opts.enforce_conditions) {
    const LimitEstimate limit = check_datum_limit(c);
    if (limit.value.norm() > std::max(1e-3, 5.0 * limit.spread)) {
      throw DatumLimitNonzeroError(
          "solve: order -1 requires the datum to vanish at infinity; estimated limit "
          "has magnitude " +
              std::to_string(limit.value.norm()),
          limit.value);
    }
  }
  if (tag == CaseTag::C4) {
    checks = check_solvability(m, c, scheme);
    if (opts.enforce_conditions) {
      for (const auto& chk : checks) {
        if (!chk.satisfied) {
          throw ConditionViolatedError(
              "solve: moment condition violated at alpha=" + chk.alpha.to_string() +
                  " (|moment| = " + std::to_string(chk.blade_measure.value.norm()) +
                  " > threshold " + std::to_string(chk.threshold) + ")",
              checks);
        }
      }
    }
  }
}

}  // namespace solver_detail

// ---------------------------------------------------------------------------
// Riemann jump problem
// ---------------------------------------------------------------------------

/// @brief Solved jump problem: a sectionally regular two-branch field equal to
/// +Phi above and -Phi below, Phi = S[c] + free polynomial (case C1).
class RiemannSolution {
 public:
  RiemannSolution(Signature sig, CaseTag tag, int m, BoundaryFunction c,
                  QuadratureScheme scheme)
      : sig_(sig), case_tag_(tag), m_(m), c_(std::move(c)), scheme_(scheme) {
    if (m_ >= 0) poly_basis_ = multi_indices_up_to_degree(sig_, m_);
  }

  [[nodiscard]] CaseTag case_tag() const { return case_tag_; }
  [[nodiscard]] int order() const { return m_; }
  [[nodiscard]] const std::vector<MultiIndex>& poly_basis() const { return poly_basis_; }
  [[nodiscard]] const std::vector<MomentConditionCheck>& solvability() const {
    return solvability_;
  }
  [[nodiscard]] const std::vector<SolverWarning>& warnings() const { return warnings_; }
  void add_warning(SolverWarning w) { warnings_.push_back(std::move(w)); }
  void set_solvability(std::vector<MomentConditionCheck> s) { solvability_ = std::move(s); }

  /// Free constants of the polynomial part; arbitrary hypercomplex values.
  void set_free_constant(const MultiIndex& alpha, const Multivector& value) {
    if (std::find(poly_basis_.begin(), poly_basis_.end(), alpha) == poly_basis_.end()) {
      throw std::invalid_argument("set_free_constant: alpha outside |alpha| <= m");
    }
    free_constants_.insert_or_assign(alpha, value);
  }

  /// One-branch value Phi(w), defined off the hyperplane on both sides.
  [[nodiscard]] Multivector phi(const Paravector& w) const {
    Multivector acc = cauchy_integral_S(c_, w, scheme_).value;
    for (const auto& [alpha, coef] : free_constants_) {
      double inv_factorial = 1.0;
      for (int i = 2; i <= alpha.degree(); ++i) inv_factorial /= i;
      acc = acc + fueter_Z(alpha, w) * coef * inv_factorial;
    }
    return acc;
  }

  /// The jump field Psi = +Phi above, -Phi below.
  [[nodiscard]] Multivector evaluate(const Paravector& w) const {
    if (w.in_upper_half_space()) return phi(w);
    if (w.in_lower_half_space()) return -phi(w);
    throw EvaluationOnHyperplaneError("RiemannSolution: evaluation on the jump surface");
  }

  [[nodiscard]] SectionallyRegularField as_field() const {
    RiemannSolution copy = *this;
    PointField upper{sig_, [copy](const Paravector& w) { return copy.phi(w); },
                     [](const Paravector& w) { return w.in_upper_half_space(); }};
    PointField lower{sig_, [copy](const Paravector& w) { return -copy.phi(w); },
                     [](const Paravector& w) { return w.in_lower_half_space(); }};
    return SectionallyRegularField{std::move(upper), std::move(lower)};
  }

 private:
  Signature sig_;
  CaseTag case_tag_;
  int m_;
  BoundaryFunction c_;
  QuadratureScheme scheme_;
  std::vector<MultiIndex> poly_basis_;
  std::map<MultiIndex, Multivector> free_constants_;
  std::vector<MomentConditionCheck> solvability_;
  std::vector<SolverWarning> warnings_;
};

[[nodiscard]] inline RiemannSolution solve_riemann_jump(int m, const BoundaryFunction& c,
                                                        const QuadratureScheme& scheme = {},
                                                        const SolveOptions& opts = {}) {
  const Signature sig = c.signature();
  const int n = sig.generators();
  scheme.validate();
  const CaseTag tag = classify_case(n, m);

  std::vector<SolverWarning> warnings;
  if (opts.check_classes) solver_detail::run_class_checks(m, c, warnings);
  std::vector<MomentConditionCheck> checks;
  solver_detail::enforce_case_conditions(tag, m, c, scheme, checks, opts);

  RiemannSolution sol(sig, tag, m, c, scheme);
  for (auto& w : warnings) sol.add_warning(std::move(w));
  sol.set_solvability(std::move(checks));
  return sol;
}

// ---------------------------------------------------------------------------
// Schwarz and Hilbert problems
// ---------------------------------------------------------------------------

[[nodiscard]] inline Solution solve_schwarz(int m, const BoundaryFunction& c,
                                            const QuadratureScheme& scheme = {},
                                            const SolveOptions& opts = {}) {
  const Signature sig = c.signature();
  const int n = sig.generators();
  scheme.validate();
  const CaseTag tag = classify_case(n, m);

  std::vector<SolverWarning> warnings;
  if (opts.check_classes) solver_detail::run_class_checks(m, c, warnings);
  std::vector<MomentConditionCheck> checks;
  solver_detail::enforce_case_conditions(tag, m, c, scheme, checks, opts);

  Solution sol(sig, tag, m, Multivector::scalar(sig, 1.0), Multivector::scalar(sig, 1.0),
               /*lambda_is_paravector=*/true, c, scheme);
  for (auto& w : warnings) sol.add_warning(std::move(w));
  sol.set_solvability(std::move(checks));
  return sol;
}

[[nodiscard]] inline Solution solve_hilbert(const HilbertProblem& problem,
                                            const SolveOptions& opts = {}) {
  const Signature sig = problem.sig;
  Multivector lambda_inverse(sig);
  try {
    lambda_inverse = problem.lambda.invert();
  } catch (const SingularElementError& e) {
    throw SingularLambdaError(std::string("solve_hilbert: lambda is not invertible: ") +
                              e.what());
  }
  const bool paravector = problem.lambda.is_paravector();

  Solution schwarz = solve_schwarz(problem.m, problem.c, problem.scheme, opts);
  Solution sol(sig, schwarz.case_tag(), problem.m, problem.lambda, lambda_inverse,
               paravector, problem.c, problem.scheme);
  for (const auto& w : schwarz.warnings()) sol.add_warning(w);
  if (!paravector) {
    sol.add_warning({"lambda-general",
                     "lambda is not a paravector; its inverse comes from the dense "
                     "regular-representation solve and the solution theory is asserted "
                     "only for paravector constants"});
  }
  sol.set_solvability(std::vector<MomentConditionCheck>(schwarz.solvability()));
  return sol;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerificationOptions {
  int interior_probes = 6;
  int boundary_probes = 10;
  std::vector<double> epsilons = {0.1, 0.05, 0.025};  ///< boundary approach offsets
  double stencil_h = 1e-3;
  double probe_box = 3.0;            ///< probes drawn from [-box, box]^n
  double interior_height_min = 0.5;  ///< w_n of interior probes in [min, min+box]
  unsigned seed = 24601u;
  int growth_rays = 6;
  std::vector<double> growth_radii = {16, 32, 64, 128, 256, 512};
  double interior_residual_tol = 1e-4;
  double boundary_order_min = 0.9;
  double jump_identity_tol = 1e-2;
};

struct VerificationReport {
  double max_interior_dirac_residual = 0.0;
  std::vector<double> boundary_sup_residual;  ///< one entry per epsilon
  double boundary_decay_order = 0.0;
  OrderEstimate growth;
  int required_order = 0;
  bool growth_ok = false;
  double reflection_identity_residual = 0.0;  ///< [Phi^+]* vs [Phi^*]^- at matched eps
  double jump_identity_residual = 0.0;        ///< |Phi + star(Phi) - 2c| at smallest eps
  bool interior_ok = false;
  bool boundary_ok = false;
  bool jump_ok = false;
  bool passed = false;

  [[nodiscard]] std::string summary() const {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "interior max |D[Phi]| = %.3e (%s)\n"
                  "boundary sup |Re(Phi lambda) - c| decay order = %.3f (%s)\n"
                  "growth order estimate = %d (slope %.3f, required <= %d, %s)\n"
                  "reflection identity residual = %.3e\n"
                  "jump identity residual at smallest eps = %.3e (%s)",
                  max_interior_dirac_residual, interior_ok ? "ok" : "FAIL",
                  boundary_decay_order, boundary_ok ? "ok" : "FAIL", growth.order,
                  growth.slope, required_order, growth_ok ? "ok" : "FAIL",
                  reflection_identity_residual, jump_identity_residual,
                  jump_ok ? "ok" : "FAIL");
    return buf;
  }
};

/// @brief Numerical verification of a solved problem: interior regularity,
/// boundary recovery along shrinking offsets, growth at infinity, and the
/// reflection identities of the symmetric extension.
[[nodiscard]] inline VerificationReport verify_solution(const Solution& sol,
                                                        const HilbertProblem& problem,
                                                        const VerificationOptions& opt = {}) {
  const Signature sig = sol.signature();
  const int n = sig.generators();
  VerificationReport report;
  report.required_order = problem.m;

  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> box(-opt.probe_box, opt.probe_box);
  std::uniform_real_distribution<double> height(opt.interior_height_min,
                                                opt.interior_height_min + opt.probe_box);

  // ---- interior Dirac residual over batched stencils -----------------------
  {
    std::vector<Paravector> stencil_points;
    std::vector<double> steps;
    for (int p = 0; p < opt.interior_probes; ++p) {
      std::vector<double> w(n + 1);
      for (int j = 0; j < n; ++j) w[j] = box(rng);
      w[n] = height(rng);
      const Paravector center(sig, w);
      const double step = opt.stencil_h * std::max(1.0, center.norm());
      steps.push_back(step);
      for (int axis = 0; axis <= n; ++axis) {
        stencil_points.push_back(shifted(center, axis, step));
        stencil_points.push_back(shifted(center, axis, -step));
      }
    }
    const auto values = sol.evaluate_batch(stencil_points);
    std::size_t cursor = 0;
    for (int p = 0; p < opt.interior_probes; ++p) {
      Multivector residual(sig);
      for (int axis = 0; axis <= n; ++axis) {
        const Multivector& plus = values[cursor++];
        const Multivector& minus = values[cursor++];
        residual = residual +
                   Multivector::generator(sig, axis) * (plus - minus) * (0.5 / steps[p]);
      }
      report.max_interior_dirac_residual =
          std::max(report.max_interior_dirac_residual, residual.norm());
    }
    report.interior_ok = report.max_interior_dirac_residual < opt.interior_residual_tol;
  }

  // ---- boundary recovery and reflection identities -------------------------
  {
    std::vector<std::vector<double>> probes;
    for (int p = 0; p < opt.boundary_probes; ++p) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = box(rng);
      probes.push_back(std::move(x));
    }

    std::vector<double> eps_sorted = opt.epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());

    // product field Psi = Phi * lambda, whose real part recovers the datum;
    // its symmetric extension carries the reflection identities
    const PointField phi_field = sol.as_point_field();
    const Multivector lambda = problem.lambda;
    const PointField psi_field{
        sig, [phi_field, lambda](const Paravector& w) { return phi_field.value(w) * lambda; },
        phi_field.domain};
    const SectionallyRegularField extension = symmetric_extension(psi_field);

    std::vector<double> sups;
    double refl_residual = 0.0;
    double jump_residual = 0.0;
    for (std::size_t ei = 0; ei < eps_sorted.size(); ++ei) {
      const double eps = eps_sorted[ei];
      std::vector<Paravector> pts;
      for (const auto& x : probes) {
        std::vector<double> w(x);
        w.push_back(eps);
        pts.emplace_back(sig, std::move(w));
      }
      const auto values = sol.evaluate_batch(pts);
      double sup = 0.0;
      double jump_sup = 0.0;
      double refl_sup = 0.0;
      for (std::size_t i = 0; i < probes.size(); ++i) {
        const Multivector cval = problem.c.evaluate(probes[i]);
        const Multivector boundary_product = values[i] * problem.lambda;
        sup = std::max(sup, (boundary_product.decompose().re - cval).norm());
        if (ei + 1 == eps_sorted.size()) {
          // lower-branch limit of the symmetric extension at (x, -eps),
          // evaluated independently, against the starred upper limit
          std::vector<double> wl(probes[i]);
          wl.push_back(-eps);
          const Multivector lower_limit = extension.lower.value(Paravector(sig, wl));
          refl_sup = std::max(refl_sup, (boundary_product.star() - lower_limit).norm());
          jump_sup = std::max(jump_sup,
                              (boundary_product + lower_limit - cval * 2.0).norm());
        }
      }
      sups.push_back(sup);
      if (ei + 1 == eps_sorted.size()) {
        jump_residual = jump_sup;
        refl_residual = refl_sup;
      }
    }
    report.boundary_sup_residual = sups;
    report.reflection_identity_residual = refl_residual;
    report.jump_identity_residual = jump_residual;

    // fitted decay order of sup residual vs eps
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < sups.size(); ++i) {
      if (sups[i] <= 0.0) continue;
      const double lx = std::log(eps_sorted[i]);
      const double ly = std::log(sups[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++cnt;
    }
    if (cnt >= 2) {
      report.boundary_decay_order = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      report.boundary_ok = report.boundary_decay_order >= opt.boundary_order_min;
    } else {
      // residuals at numerical zero: boundary recovery is exact
      report.boundary_decay_order = std::numeric_limits<double>::infinity();
      report.boundary_ok = true;
    }
    report.jump_ok = report.jump_identity_residual < opt.jump_identity_tol;
  }

  // ---- growth at infinity ---------------------------------------------------
  {
    std::vector<Paravector> rays = default_order_rays(sig, opt.growth_rays);
    std::vector<Paravector> samples;
    for (const auto& d : rays) {
      for (double r : opt.growth_radii) samples.push_back(d * r);
    }
    const auto values = sol.evaluate_batch(samples);
    bool all_tiny = true;
    std::vector<double> slopes;
    std::size_t cursor = 0;
    for (std::size_t ri = 0; ri < rays.size(); ++ri) {
      std::vector<double> lx, ly;
      bool usable = true;
      for (double r : opt.growth_radii) {
        const double mag = values[cursor++].norm();
        if (mag > 1e-12) all_tiny = false;
        if (mag < 1e-280) {
          usable = false;
          continue;
        }
        lx.push_back(std::log(r));
        ly.push_back(std::log(mag));
      }
      if (!usable || lx.size() < 2) continue;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double N = static_cast<double>(lx.size());
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      slopes.push_back((N * sxy - sx * sy) / (N * sxx - sx * sx));
    }
    if (slopes.empty()) {
      report.growth.converged = all_tiny;
      report.growth.order = all_tiny ? std::numeric_limits<int>::min() : 0;
      report.growth_ok = all_tiny;
    } else {
      const double mean = std::accumulate(slopes.begin(), slopes.end(), 0.0) / slopes.size();
      double dev = 0.0;
      for (double s : slopes) dev = std::max(dev, std::abs(s - mean));
      report.growth.slope = mean;
      report.growth.confidence = dev;
      report.growth.order = static_cast<int>(std::lround(mean));
      report.growth.converged = dev < 0.5;
      report.growth.rays_used = static_cast<int>(slopes.size());
      report.growth_ok = mean <= problem.m + 0.5 + dev;
    }
  }

  report.passed = report.interior_ok && report.boundary_ok && report.jump_ok &&
                  report.growth_ok;
  return report;
}

}  // namespace cliffbvp
