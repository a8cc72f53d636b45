#pragma once

/**
 * @file problem_io.hpp
 * @brief Problem files in, result bundles out.
 *
 * A problem file is a JSON document:
 *
 * {
 *   "n": 1, "m": -1,
 *   "lambda": "1",                      // multivector literal, optional
 *   "c": "1/(1+abs2(x))",               // or "c_csv": "samples.csv"
 *   "decay": 2,                         // polynomial exponent or "gaussian"
 *   "quadrature": {"R": 1e4, "base_grid": 64, "tol": 1e-6},
 *   "queries": {"points": [[0.0, 1.0]]},
 *       // or {"grid": {"axes": [{"min": -2, "max": 2, "count": 5}],
 *       //              "heights": [0.5, 1.0]}}
 *   "free_constants": {"[0]": "0.5"},   // optional, para-real literals
 *   "verify": true                      // optional, default true
 * }
 *
 * Unknown keys are rejected.  run_solve writes <stem>.solution.csv,
 * <stem>.verify.txt and <stem>.solvability.csv next to the problem file (or
 * under --out-dir) and returns the process exit code:
 *   0 solved (and verified when requested), 1 input error,
 *   2 solved with warnings, 3 solvability conditions violated.
 */

#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "solvers.hpp"

namespace cliffbvp {

class ProblemFileError : public std::runtime_error {
 public:
  explicit ProblemFileError(const std::string& what) : std::runtime_error(what) {}
};

struct ProblemFile {
  int n = 1;
  int m = -1;
  std::string lambda_text = "1";
  std::string c_expression;  // exactly one of c_expression / c_csv is set
  std::string c_csv;
  std::optional<DecayHint> decay;
  QuadratureScheme scheme;
  std::vector<std::vector<double>> queries;  // each has n+1 coordinates
  std::map<std::string, std::string> free_constants;
  bool verify = true;

  [[nodiscard]] static ProblemFile load(const std::string& path);

  [[nodiscard]] Signature signature() const { return Signature(n); }

  [[nodiscard]] BoundaryFunction datum() const {
    const Signature sig = signature();
    if (!c_csv.empty()) {
      return BoundaryFunction::from_table(SampleTable::load_csv(c_csv, sig), sig, decay);
    }
    return BoundaryFunction::from_expression(c_expression, sig, decay);
  }

  [[nodiscard]] HilbertProblem problem() const {
    const Signature sig = signature();
    return HilbertProblem(sig, m, parse_multivector(lambda_text, sig), datum(), scheme);
  }
};

namespace io_detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ProblemFileError("unknown key '" + it.key() + "' in " + where);
  }
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace io_detail

inline ProblemFile ProblemFile::load(const std::string& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw ProblemFileError("cannot open problem file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemFileError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProblemFileError("problem file must be a JSON object");
  io_detail::reject_unknown_keys(doc,
                                 {"n", "m", "lambda", "c", "c_csv", "decay", "quadrature",
                                  "queries", "free_constants", "verify"},
                                 "problem file");

  ProblemFile p;
  if (!doc.contains("n") || !doc.contains("m")) {
    throw ProblemFileError("problem file requires integer keys 'n' and 'm'");
  }
  p.n = doc.at("n").get<int>();
  p.m = doc.at("m").get<int>();
  if (p.n < 1 || p.n > Signature::kMaxGenerators) {
    throw ProblemFileError("n out of range");
  }
  if (doc.contains("lambda")) p.lambda_text = doc.at("lambda").get<std::string>();
  const bool has_expr = doc.contains("c");
  const bool has_csv = doc.contains("c_csv");
  if (has_expr == has_csv) {
    throw ProblemFileError("provide exactly one of 'c' (expression) or 'c_csv' (samples)");
  }
  if (has_expr) p.c_expression = doc.at("c").get<std::string>();
  if (has_csv) p.c_csv = doc.at("c_csv").get<std::string>();

  if (doc.contains("decay")) {
    const auto& d = doc.at("decay");
    if (d.is_string()) {
      if (d.get<std::string>() != "gaussian") {
        throw ProblemFileError("decay must be a number or \"gaussian\"");
      }
      p.decay = DecayHint::gaussian();
    } else {
      p.decay = DecayHint::polynomial(d.get<double>());
    }
  }

  if (doc.contains("quadrature")) {
    const auto& q = doc.at("quadrature");
    io_detail::reject_unknown_keys(q, {"R", "base_grid", "tol", "core_halfwidth", "threads"},
                                   "quadrature");
    if (q.contains("R")) p.scheme.truncation_radius = q.at("R").get<double>();
    if (q.contains("base_grid")) p.scheme.base_grid = q.at("base_grid").get<int>();
    if (q.contains("tol")) p.scheme.tolerance = q.at("tol").get<double>();
    if (q.contains("core_halfwidth")) {
      p.scheme.core_halfwidth = q.at("core_halfwidth").get<double>();
    }
    if (q.contains("threads")) p.scheme.threads = q.at("threads").get<int>();
  }

  if (!doc.contains("queries")) throw ProblemFileError("problem file requires 'queries'");
  const auto& queries = doc.at("queries");
  io_detail::reject_unknown_keys(queries, {"points", "grid"}, "queries");
  if (queries.contains("points") == queries.contains("grid")) {
    throw ProblemFileError("queries needs exactly one of 'points' or 'grid'");
  }
  if (queries.contains("points")) {
    for (const auto& pt : queries.at("points")) {
      std::vector<double> w = pt.get<std::vector<double>>();
      if (w.size() != static_cast<std::size_t>(p.n) + 1) {
        throw ProblemFileError("query points need n+1 coordinates");
      }
      if (!(w.back() > 0.0)) {
        throw ProblemFileError("query points must lie in the open upper half space");
      }
      p.queries.push_back(std::move(w));
    }
  } else {
    const auto& grid = queries.at("grid");
    io_detail::reject_unknown_keys(grid, {"axes", "heights"}, "queries.grid");
    if (!grid.contains("axes") || !grid.contains("heights")) {
      throw ProblemFileError("grid queries need 'axes' and 'heights'");
    }
    const auto& axes = grid.at("axes");
    if (axes.size() != static_cast<std::size_t>(p.n)) {
      throw ProblemFileError("grid needs one axis spec per hyperplane coordinate");
    }
    std::vector<std::vector<double>> axis_values;
    for (const auto& ax : axes) {
      io_detail::reject_unknown_keys(ax, {"min", "max", "count"}, "queries.grid.axes[]");
      const double lo = ax.at("min").get<double>();
      const double hi = ax.at("max").get<double>();
      const int count = ax.at("count").get<int>();
      if (count < 1) throw ProblemFileError("axis count must be >= 1");
      std::vector<double> vals;
      for (int i = 0; i < count; ++i) {
        vals.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
      }
      axis_values.push_back(std::move(vals));
    }
    for (const auto& h : grid.at("heights")) {
      const double height = h.get<double>();
      if (!(height > 0.0)) throw ProblemFileError("grid heights must be positive");
      std::vector<int> idx(p.n, 0);
      while (true) {
        std::vector<double> w(p.n + 1);
        for (int j = 0; j < p.n; ++j) w[j] = axis_values[j][idx[j]];
        w[p.n] = height;
        p.queries.push_back(std::move(w));
        int j = p.n - 1;
        while (j >= 0 && ++idx[j] == static_cast<int>(axis_values[j].size())) {
          idx[j] = 0;
          --j;
        }
        if (j < 0) break;
      }
    }
  }
  if (p.queries.empty()) throw ProblemFileError("no query points");

  if (doc.contains("free_constants")) {
    for (auto it = doc.at("free_constants").begin(); it != doc.at("free_constants").end();
         ++it) {
      p.free_constants[it.key()] = it.value().get<std::string>();
    }
  }
  if (doc.contains("verify")) p.verify = doc.at("verify").get<bool>();
  return p;
}

[[nodiscard]] inline MultiIndex parse_multi_index(const std::string& text, Signature sig) {
  // "[a1,a2,...]"
  std::vector<int> alpha;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ProblemFileError("bad multi-index '" + text + "': " + why);
  };
  if (i >= text.size() || text[i] != '[') fail("expected '['");
  ++i;
  while (i < text.size() && text[i] != ']') {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(text.substr(i), &used);
    } catch (...) {
      fail("expected integer");
    }
    alpha.push_back(v);
    i += used;
    if (i < text.size() && text[i] == ',') ++i;
  }
  if (i >= text.size() || text[i] != ']') fail("expected ']'");
  if (alpha.size() != static_cast<std::size_t>(sig.generators())) fail("needs n entries");
  return MultiIndex(sig, std::move(alpha));
}

struct RunOptions {
  std::string out_dir;                     ///< default: alongside the problem file
  std::optional<double> quad_R;            ///< --quad-R override
  std::optional<int> quad_grid;            ///< --quad-grid override
  std::optional<double> quad_tol;          ///< --quad-tol override
  std::vector<double> probe_eps;           ///< --probe-eps override
  bool no_verify = false;                  ///< --no-verify
  unsigned seed = 24601u;                  ///< --seed for probe sampling
};

namespace io_detail {

inline std::filesystem::path output_stem(const std::string& problem_path,
                                         const RunOptions& opt) {
  const std::filesystem::path p(problem_path);
  std::filesystem::path dir = opt.out_dir.empty() ? p.parent_path()
                                                  : std::filesystem::path(opt.out_dir);
  if (!dir.empty()) std::filesystem::create_directories(dir);
  return dir / p.stem();
}

inline void write_solution_csv(const std::filesystem::path& path, const Signature& sig,
                               const std::vector<std::vector<double>>& queries,
                               const std::vector<Multivector>& values) {
  std::ofstream out(path, std::ios::binary);
  const int n = sig.generators();
  for (int j = 0; j <= n; ++j) out << "w" << j << ",";
  for (unsigned mask = 0; mask < sig.dim(); ++mask) {
    out << blade_name(mask) << (mask + 1 < sig.dim() ? "," : "\n");
  }
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (double v : queries[i]) out << format_double(v) << ",";
    const auto& c = values[i].coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) {
      out << format_double(c[k]) << (k + 1 < c.size() ? "," : "\n");
    }
  }
}

inline void write_solvability_csv(const std::filesystem::path& path, const Signature& sig,
                                  const std::vector<MomentConditionCheck>& checks) {
  std::ofstream out(path, std::ios::binary);
  out << "alpha,degree";
  for (unsigned mask = 0; mask < sig.dim(); ++mask) out << ",moment_" << blade_name(mask);
  out << ",error_estimate,tail_bound,threshold,satisfied,scalar_measure_norm,"
         "scalar_measure_error\n";
  for (const auto& chk : checks) {
    out << "\"" << chk.alpha.to_string() << "\"," << chk.alpha.degree();
    for (double v : chk.blade_measure.value.coefficients()) {
      out << "," << format_double(v);
    }
    out << "," << format_double(chk.blade_measure.error_estimate) << ","
        << format_double(chk.blade_measure.truncation_tail_bound) << ","
        << format_double(chk.threshold) << "," << (chk.satisfied ? 1 : 0) << ","
        << format_double(chk.scalar_measure.value.norm()) << ","
        << format_double(chk.scalar_measure.error_estimate) << "\n";
  }
}

inline void write_warnings(std::ostream& out, const std::vector<SolverWarning>& warnings) {
  for (const auto& w : warnings) {
    out << "warning[" << w.code << "]: " << w.message << "\n";
  }
}

}  // namespace io_detail

/// Solve the problem in `path`; write the result bundle; return the exit code.
inline int run_solve(const std::string& path, const RunOptions& opt = {},
                     std::ostream& log = std::cout) {
  ProblemFile pf;
  try {
    pf = ProblemFile::load(path);
  } catch (const std::exception& e) {
    log << "input error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (opt.quad_R) pf.scheme.truncation_radius = *opt.quad_R;
    if (opt.quad_grid) pf.scheme.base_grid = *opt.quad_grid;
    if (opt.quad_tol) pf.scheme.tolerance = *opt.quad_tol;
    const Signature sig = pf.signature();
    const HilbertProblem problem = pf.problem();
    const auto stem = io_detail::output_stem(path, opt);

    Solution sol = [&]() {
      try {
        return solve_hilbert(problem);
      } catch (const ConditionViolatedError& e) {
        io_detail::write_solvability_csv(stem.string() + ".solvability.csv", sig, e.checks);
        throw;
      }
    }();

    for (const auto& [alpha_text, literal] : pf.free_constants) {
      sol.set_free_constant(parse_multi_index(alpha_text, sig),
                            parse_multivector(literal, sig));
    }

    std::vector<Paravector> points;
    points.reserve(pf.queries.size());
    for (const auto& q : pf.queries) points.emplace_back(sig, q);
    const std::vector<Multivector> values = sol.evaluate_batch(points);

    io_detail::write_solution_csv(stem.string() + ".solution.csv", sig, pf.queries, values);
    io_detail::write_solvability_csv(stem.string() + ".solvability.csv", sig,
                                     sol.solvability());

    bool verified = true;
    std::ofstream vout(stem.string() + ".verify.txt", std::ios::binary);
    vout << "problem: n=" << pf.n << " m=" << pf.m << " case=" << case_name(sol.case_tag())
         << " lambda=" << sol.lambda().to_string() << "\n";
    vout << "datum: " << problem.c.source_text() << "\n";
    io_detail::write_warnings(vout, sol.warnings());
    if (pf.verify && !opt.no_verify) {
      VerificationOptions vopt;
      vopt.seed = opt.seed;
      if (!opt.probe_eps.empty()) vopt.epsilons = opt.probe_eps;
      if (sig.generators() >= 2) {
        vopt.interior_probes = 3;
        vopt.boundary_probes = 4;
        vopt.growth_rays = 4;
        vopt.growth_radii = {16, 64, 256};
      }
      const VerificationReport report = verify_solution(sol, problem, vopt);
      verified = report.passed;
      vout << report.summary() << "\n";
      vout << "[machine]\n";
      vout << "interior_max_dirac_residual=" << io_detail::format_double(
                 report.max_interior_dirac_residual) << "\n";
      for (std::size_t i = 0; i < report.boundary_sup_residual.size(); ++i) {
        vout << "boundary_sup_residual_" << i << "="
             << io_detail::format_double(report.boundary_sup_residual[i]) << "\n";
      }
      vout << "boundary_decay_order=" << io_detail::format_double(report.boundary_decay_order)
           << "\n";
      vout << "growth_order=" << report.growth.order << "\n";
      vout << "growth_slope=" << io_detail::format_double(report.growth.slope) << "\n";
      vout << "reflection_identity_residual="
           << io_detail::format_double(report.reflection_identity_residual) << "\n";
      vout << "jump_identity_residual="
           << io_detail::format_double(report.jump_identity_residual) << "\n";
      vout << "passed=" << (report.passed ? 1 : 0) << "\n";
    } else {
      vout << "verification skipped\n";
    }

    if (!sol.warnings().empty()) {
      io_detail::write_warnings(log, sol.warnings());
      log << "solved with warnings: " << stem.string() << ".solution.csv\n";
      return 2;
    }
    if (!verified) {
      log << "solved but verification checks failed; see " << stem.string()
          << ".verify.txt\n";
      return 2;
    }
    log << "solved: " << stem.string() << ".solution.csv\n";
    return 0;
  } catch (const ConditionViolatedError& e) {
    log << "solvability violated: " << e.what() << "\n";
    for (const auto& chk : e.checks) {
      log << "  alpha=" << chk.alpha.to_string()
          << " |moment|=" << chk.blade_measure.value.norm()
          << " threshold=" << chk.threshold << (chk.satisfied ? " ok" : " VIOLATED")
          << "\n";
    }
    return 3;
  } catch (const DatumLimitNonzeroError& e) {
    log << "solvability violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    log << "input error: " << e.what() << "\n";
    return 1;
  }
}

/// Class/solvability reports only; no solve.
inline int run_check(const std::string& path, const RunOptions& opt = {},
                     std::ostream& log = std::cout) {
  ProblemFile pf;
  try {
    pf = ProblemFile::load(path);
  } catch (const std::exception& e) {
    log << "input error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (opt.quad_R) pf.scheme.truncation_radius = *opt.quad_R;
    if (opt.quad_grid) pf.scheme.base_grid = *opt.quad_grid;
    if (opt.quad_tol) pf.scheme.tolerance = *opt.quad_tol;
    const Signature sig = pf.signature();
    const BoundaryFunction c = pf.datum();
    const auto stem = io_detail::output_stem(path, opt);

    const int r = pf.m >= 0 ? 0 : -(pf.m + 1);
    const HatHReport classes = classify_hat_H(c, r);
    const LimitEstimate limit = check_datum_limit(c);

    std::ofstream out(stem.string() + ".check.txt", std::ios::binary);
    out << "problem: n=" << pf.n << " m=" << pf.m << "\n";
    out << "datum: " << c.source_text() << "\n";
    out << "weighted class order r=" << r << "\n";
    out << "holder: mu=" << io_detail::format_double(classes.holder.mu)
        << " M=" << io_detail::format_double(classes.holder.coefficient)
        << " in_class=" << (classes.in_H_m ? 1 : 0) << "\n";
    out << "holder_dagger: mu=" << io_detail::format_double(classes.holder_dagger.mu)
        << " M=" << io_detail::format_double(classes.holder_dagger.coefficient)
        << " in_class=" << (classes.in_H_m_dagger ? 1 : 0) << "\n";
    out << "f_m_at_infinity_norm="
        << io_detail::format_double(classes.f_m_at_infinity.norm()) << "\n";
    out << "in_hat_H=" << (classes.in_hat_H_m ? 1 : 0)
        << " in_hat_H0=" << (classes.in_hat_H_m0 ? 1 : 0) << "\n";
    out << "datum_limit_norm=" << io_detail::format_double(limit.value.norm()) << "\n";

    const auto checks = check_solvability(pf.m, c, pf.scheme);
    io_detail::write_solvability_csv(stem.string() + ".solvability.csv", sig, checks);

    bool violated = false;
    for (const auto& chk : checks) violated = violated || !chk.satisfied;
    if (pf.m == -1 && limit.value.norm() > std::max(1e-3, 5.0 * limit.spread)) {
      violated = true;
      out << "datum limit at infinity is nonzero; order -1 requires a vanishing limit\n";
    }
    log << "check report: " << stem.string() << ".check.txt\n";
    if (violated) return 3;
    if (!classes.in_hat_H_m || (pf.m < 0 && !classes.in_hat_H_m0)) return 2;
    return 0;
  } catch (const std::exception& e) {
    log << "input error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cliffbvp
