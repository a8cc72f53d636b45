#pragma once

/**
 * @file boundary_expr.hpp
 * @brief Expression language and evaluator for para-real boundary data on the
 *        hyperplane, plus empirical estimators for Holder / dagger-Holder
 *        behaviour and decay classes.
 *
 * Grammar (precedence low to high; unary minus binds tighter than '*'):
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := factor (('*' | '/') factor)*
 *   factor  := '-' factor | primary
 *   primary := number | 'x' | x<digits> | blade | func '(' args ')' | '(' expr ')'
 *   blade   := e<digits>            -- ascending single-digit indices, e12 = e_1 e_2
 *            | 'e(' idx (',' idx)* ')'
 *   func    := exp | sin | cos | sqrt | pow | abs2 | gauss
 *
 * 'x' denotes the evaluation point embedded as a para-real paravector;
 * x0..x{n-1} are its coordinates.  abs2(v) = |v|^2 and gauss(v) = exp(-|v|^2).
 * pow takes an integer literal exponent (negative exponents invert first).
 * Division requires a scalar divisor.  Blade literals must avoid the
 * generator e_n so that every parsed expression evaluates para-real.
 */

#include <cctype>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "monogenic.hpp"

namespace cliffbvp {

class ExprSyntaxError : public std::runtime_error {
 public:
  ExprSyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class ParaRealViolationError : public std::runtime_error {
 public:
  ParaRealViolationError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class ExprDomainError : public std::domain_error {
 public:
  explicit ExprDomainError(const std::string& what) : std::domain_error(what) {}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    kNumber,
    kCoordinate,  // x0..x{n-1}
    kPoint,       // the full point as a para-real paravector
    kBlade,
    kNegate,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kCall,
  };

  Kind kind;
  double number = 0.0;
  int coordinate = -1;
  unsigned blade_mask = 0;
  std::string callee;
  std::vector<ExprPtr> args;  // operands of unary/binary nodes live here too
};

namespace expr_detail {

inline ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

struct Token {
  enum class Kind { kNumber, kIdent, kPunct, kEnd };
  Kind kind;
  double number = 0.0;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= src_.size()) {
      tok_.kind = Token::Kind::kEnd;
      tok_.text.clear();
      return;
    }
    const char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      tok_.number = std::stod(src_.substr(i_), &used);
      tok_.text = src_.substr(i_, used);
      tok_.kind = Token::Kind::kNumber;
      i_ += used;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
        ++j;
      }
      tok_.kind = Token::Kind::kIdent;
      tok_.text = src_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    tok_.kind = Token::Kind::kPunct;
    tok_.text = std::string(1, c);
    ++i_;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, Signature sig, bool para_real_only)
      : lex_(src), sig_(sig), para_real_only_(para_real_only) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    if (lex_.peek().kind != Token::Kind::kEnd) {
      throw ExprSyntaxError("unexpected trailing input '" + lex_.peek().text + "'",
                            lex_.peek().pos);
    }
    return e;
  }

 private:
  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (is_punct("+") || is_punct("-")) {
      const bool add = is_punct("+");
      lex_.take();
      ExprPtr rhs = parse_term();
      Expr e;
      e.kind = add ? Expr::Kind::kAdd : Expr::Kind::kSub;
      e.args = {lhs, rhs};
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (is_punct("*") || is_punct("/")) {
      const bool mul = is_punct("*");
      lex_.take();
      ExprPtr rhs = parse_factor();
      Expr e;
      e.kind = mul ? Expr::Kind::kMul : Expr::Kind::kDiv;
      e.args = {lhs, rhs};
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    if (is_punct("-")) {
      lex_.take();
      Expr e;
      e.kind = Expr::Kind::kNegate;
      e.args = {parse_factor()};
      return make(std::move(e));
    }
    if (is_punct("+")) {
      lex_.take();
      return parse_factor();
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::kNumber: {
        Expr e;
        e.kind = Expr::Kind::kNumber;
        e.number = t.number;
        return make(std::move(e));
      }
      case Token::Kind::kPunct:
        if (t.text == "(") {
          ExprPtr inner = parse_expr();
          expect(")");
          return inner;
        }
        throw ExprSyntaxError("expected a value, found '" + t.text + "'", t.pos);
      case Token::Kind::kEnd:
        throw ExprSyntaxError("unexpected end of expression", t.pos);
      case Token::Kind::kIdent:
        return parse_ident(t);
    }
    throw ExprSyntaxError("unreachable", t.pos);
  }

  ExprPtr parse_ident(const Token& t) {
    const std::string& name = t.text;
    if (name == "x") {
      Expr e;
      e.kind = Expr::Kind::kPoint;
      return make(std::move(e));
    }
    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const int idx = std::stoi(name.substr(1));
      if (idx < 0 || idx >= sig_.generators()) {
        throw ExprSyntaxError("coordinate " + name + " out of range for n=" +
                                  std::to_string(sig_.generators()),
                              t.pos);
      }
      Expr e;
      e.kind = Expr::Kind::kCoordinate;
      e.coordinate = idx;
      return make(std::move(e));
    }
    if (name.size() > 1 && name[0] == 'e' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return parse_blade_digits(name, t.pos);
    }
    if (name == "e" && is_punct("(")) {
      return parse_blade_list(t.pos);
    }
    if (name == "exp" || name == "sin" || name == "cos" || name == "sqrt" ||
        name == "abs2" || name == "gauss" || name == "pow") {
      expect("(");
      Expr e;
      e.kind = Expr::Kind::kCall;
      e.callee = name;
      e.args.push_back(parse_expr());
      while (is_punct(",")) {
        lex_.take();
        e.args.push_back(parse_expr());
      }
      expect(")");
      const std::size_t want = (name == "pow") ? 2 : 1;
      if (e.args.size() != want) {
        throw ExprSyntaxError(name + " expects " + std::to_string(want) + " argument(s)",
                              t.pos);
      }
      if (name == "pow") validate_pow_exponent(e.args[1], t.pos);
      return make(std::move(e));
    }
    throw ExprSyntaxError("unknown identifier '" + name + "'", t.pos);
  }

  static void validate_pow_exponent(const ExprPtr& a, std::size_t pos) {
    const Expr* e = a.get();
    while (e->kind == Expr::Kind::kNegate) e = e->args[0].get();
    if (e->kind != Expr::Kind::kNumber || e->number != std::floor(e->number)) {
      throw ExprSyntaxError("pow exponent must be an integer literal", pos);
    }
  }

  ExprPtr parse_blade_digits(const std::string& name, std::size_t pos) {
    unsigned mask = 0;
    int prev = -1;
    for (std::size_t k = 1; k < name.size(); ++k) {
      const int idx = name[k] - '0';
      if (idx <= prev) {
        throw ExprSyntaxError("blade indices must be ascending in '" + name + "'", pos);
      }
      prev = idx;
      mask = add_blade_index(mask, idx, pos);
    }
    Expr e;
    e.kind = Expr::Kind::kBlade;
    e.blade_mask = mask;
    return make(std::move(e));
  }

  ExprPtr parse_blade_list(std::size_t pos) {
    expect("(");
    unsigned mask = 0;
    while (true) {
      const Token t = lex_.take();
      if (t.kind != Token::Kind::kNumber || t.number != std::floor(t.number)) {
        throw ExprSyntaxError("expected integer blade index", t.pos);
      }
      mask = add_blade_index(mask, static_cast<int>(t.number), t.pos);
      if (is_punct(",")) {
        lex_.take();
        continue;
      }
      expect(")");
      break;
    }
    Expr e;
    e.kind = Expr::Kind::kBlade;
    e.blade_mask = mask;
    return make(std::move(e));
  }

  unsigned add_blade_index(unsigned mask, int idx, std::size_t pos) const {
    const int n = sig_.generators();
    if (idx < 0 || idx > n) {
      throw ExprSyntaxError("blade index " + std::to_string(idx) + " out of range", pos);
    }
    if (para_real_only_ && idx == n) {
      throw ParaRealViolationError(
          "blade uses generator e" + std::to_string(n) + "; boundary data must be para-real",
          pos);
    }
    if (idx == 0) return mask;
    const unsigned bit = 1u << (idx - 1);
    if (mask & bit) throw ExprSyntaxError("repeated blade index", pos);
    return mask | bit;
  }

  bool is_punct(const char* p) const {
    return lex_.peek().kind == Token::Kind::kPunct && lex_.peek().text == p;
  }

  void expect(const char* p) {
    if (!is_punct(p)) {
      throw ExprSyntaxError(std::string("expected '") + p + "'", lex_.peek().pos);
    }
    lex_.take();
  }

  Lexer lex_;
  Signature sig_;
  bool para_real_only_;
};

}  // namespace expr_detail

/// Parse boundary-data text (para-real blades only).
[[nodiscard]] inline ExprPtr parse(const std::string& text, Signature sig) {
  return expr_detail::Parser(text, sig, /*para_real_only=*/true).parse();
}

/// Parse a constant/full-algebra expression (used for lambda literals).
[[nodiscard]] inline ExprPtr parse_full_algebra(const std::string& text, Signature sig) {
  return expr_detail::Parser(text, sig, /*para_real_only=*/false).parse();
}

[[nodiscard]] inline std::string pretty_print(const ExprPtr& e) {
  using K = Expr::Kind;
  auto wrap = [](const std::string& s) { return "(" + s + ")"; };
  switch (e->kind) {
    case K::kNumber: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->number);
      return buf;
    }
    case K::kCoordinate:
      return "x" + std::to_string(e->coordinate);
    case K::kPoint:
      return "x";
    case K::kBlade:
      return blade_name(e->blade_mask);
    case K::kNegate:
      return "-" + wrap(pretty_print(e->args[0]));
    case K::kAdd:
      return wrap(pretty_print(e->args[0])) + " + " + wrap(pretty_print(e->args[1]));
    case K::kSub:
      return wrap(pretty_print(e->args[0])) + " - " + wrap(pretty_print(e->args[1]));
    case K::kMul:
      return wrap(pretty_print(e->args[0])) + "*" + wrap(pretty_print(e->args[1]));
    case K::kDiv:
      return wrap(pretty_print(e->args[0])) + "/" + wrap(pretty_print(e->args[1]));
    case K::kCall: {
      std::string s = e->callee + "(";
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) s += ", ";
        s += pretty_print(e->args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

[[nodiscard]] inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->number != b->number || a->coordinate != b->coordinate ||
      a->blade_mask != b->blade_mask || a->callee != b->callee ||
      a->args.size() != b->args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  }
  return true;
}

/// Integer power of a multivector; negative exponents invert first.
[[nodiscard]] inline Multivector integer_power(const Multivector& base, int k) {
  const Signature sig = base.signature();
  Multivector b = (k < 0) ? base.invert() : base;
  int e = std::abs(k);
  Multivector out = Multivector::scalar(sig, 1.0);
  while (e > 0) {
    if (e & 1) out = out * b;
    b = b * b;
    e >>= 1;
  }
  return out;
}

[[nodiscard]] inline Multivector eval_expr(const ExprPtr& e, const std::vector<double>& x,
                                           Signature sig) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::kNumber:
      return Multivector::scalar(sig, e->number);
    case K::kCoordinate:
      if (e->coordinate >= static_cast<int>(x.size())) {
        throw ExprDomainError("coordinate index out of range for evaluation point");
      }
      return Multivector::scalar(sig, x[e->coordinate]);
    case K::kPoint:
      return Paravector::on_hyperplane(sig, x).embed();
    case K::kBlade:
      return Multivector::basis_blade(sig, e->blade_mask);
    case K::kNegate:
      return -eval_expr(e->args[0], x, sig);
    case K::kAdd:
      return eval_expr(e->args[0], x, sig) + eval_expr(e->args[1], x, sig);
    case K::kSub:
      return eval_expr(e->args[0], x, sig) - eval_expr(e->args[1], x, sig);
    case K::kMul:
      return eval_expr(e->args[0], x, sig) * eval_expr(e->args[1], x, sig);
    case K::kDiv: {
      const Multivector num = eval_expr(e->args[0], x, sig);
      const Multivector den = eval_expr(e->args[1], x, sig);
      for (unsigned m = 1; m < den.dim(); ++m) {
        if (den[m] != 0.0) throw ExprDomainError("division by a non-scalar value");
      }
      if (den[0] == 0.0) throw ExprDomainError("division by zero");
      return num * (1.0 / den[0]);
    }
    case K::kCall: {
      const Multivector a = eval_expr(e->args[0], x, sig);
      if (e->callee == "abs2") return Multivector::scalar(sig, a.norm_squared());
      if (e->callee == "gauss") return Multivector::scalar(sig, std::exp(-a.norm_squared()));
      if (e->callee == "pow") {
        const Expr* p = e->args[1].get();
        double sign = 1.0;
        while (p->kind == K::kNegate) {
          sign = -sign;
          p = p->args[0].get();
        }
        return integer_power(a, static_cast<int>(sign * p->number));
      }
      for (unsigned m = 1; m < a.dim(); ++m) {
        if (a[m] != 0.0) throw ExprDomainError(e->callee + " expects a scalar argument");
      }
      const double v = a[0];
      if (e->callee == "exp") return Multivector::scalar(sig, std::exp(v));
      if (e->callee == "sin") return Multivector::scalar(sig, std::sin(v));
      if (e->callee == "cos") return Multivector::scalar(sig, std::cos(v));
      if (e->callee == "sqrt") {
        if (v < 0.0) throw ExprDomainError("sqrt of a negative value");
        return Multivector::scalar(sig, std::sqrt(v));
      }
      throw ExprDomainError("unknown function " + e->callee);
    }
  }
  throw ExprDomainError("malformed expression node");
}

struct DecayHint {
  enum class Kind { kPolynomial, kGaussian };
  Kind kind = Kind::kPolynomial;
  double exponent = 0.0;  ///< polynomial: |c(x)| <= C (1+|x|)^{-exponent}

  [[nodiscard]] static DecayHint polynomial(double d) { return {Kind::kPolynomial, d}; }
  [[nodiscard]] static DecayHint gaussian() { return {Kind::kGaussian, 0.0}; }
};

/// @brief Finite table of hyperplane samples with nearest-neighbour lookup.
class SampleTable {
 public:
  SampleTable(Signature sig, std::vector<std::vector<double>> points,
              std::vector<Multivector> values)
      : sig_(sig) {
    if (points.size() != values.size()) {
      throw std::invalid_argument("SampleTable: point/value count mismatch");
    }
    if (points.empty()) throw std::invalid_argument("SampleTable: empty table");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != static_cast<std::size_t>(sig.generators())) {
        throw std::invalid_argument("SampleTable: point arity mismatch");
      }
      if (!values[i].is_para_real()) {
        throw std::invalid_argument("SampleTable: values must be para-real");
      }
      bool duplicate = false;
      for (const auto& q : points_) {
        if (q == points[i]) { duplicate = true; break; }
      }
      if (!duplicate) {
        points_.push_back(points[i]);
        values_.push_back(values[i]);
      }
    }
  }

  [[nodiscard]] Multivector evaluate(const std::vector<double>& x) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double t = points_[i][j] - x[j];
        d += t * t;
      }
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return values_[best];
  }

  [[nodiscard]] std::size_t size() const { return points_.size(); }

  /// CSV layout: header "x0,..,x{n-1},e0,e1,.." naming para-real blades,
  /// one sample per row.
  [[nodiscard]] static SampleTable load_csv(const std::string& path, Signature sig);

 private:
  Signature sig_;
  std::vector<std::vector<double>> points_;
  std::vector<Multivector> values_;
};

/// @brief Boundary datum c on the hyperplane: a parsed expression or a sample
/// table, with an optional decay hint for quadrature tail bounds.
class BoundaryFunction {
 public:
  [[nodiscard]] static BoundaryFunction from_expression(const std::string& text,
                                                        Signature sig,
                                                        std::optional<DecayHint> decay = {}) {
    BoundaryFunction f(sig);
    f.expr_ = parse(text, sig);
    f.source_ = text;
    f.decay_ = decay;
    return f;
  }

  [[nodiscard]] static BoundaryFunction from_table(SampleTable table, Signature sig,
                                                   std::optional<DecayHint> decay = {}) {
    BoundaryFunction f(sig);
    f.table_ = std::move(table);
    f.source_ = "<sampled>";
    f.decay_ = decay;
    return f;
  }

  [[nodiscard]] static BoundaryFunction zero(Signature sig) {
    return from_expression("0", sig, DecayHint::gaussian());
  }

  [[nodiscard]] const Signature& signature() const { return sig_; }
  [[nodiscard]] const std::optional<DecayHint>& decay_hint() const { return decay_; }
  void set_decay_hint(std::optional<DecayHint> d) { decay_ = std::move(d); }
  [[nodiscard]] const std::string& source_text() const { return source_; }
  [[nodiscard]] bool is_sampled() const { return table_.has_value(); }

  /// Evaluate at a hyperplane point given by its n coordinates.
  [[nodiscard]] Multivector evaluate(const std::vector<double>& x) const {
    if (x.size() != static_cast<std::size_t>(sig_.generators())) {
      throw std::invalid_argument("BoundaryFunction: expected n coordinates");
    }
    if (table_) return table_->evaluate(x);
    return eval_expr(expr_, x, sig_);
  }

  [[nodiscard]] Multivector evaluate(const Paravector& t) const {
    if (std::abs(t.height()) > 1e-12 * std::max(1.0, t.norm())) {
      throw std::invalid_argument("BoundaryFunction: point is off the hyperplane");
    }
    std::vector<double> x(t.components().begin(), t.components().end() - 1);
    return evaluate(x);
  }

  [[nodiscard]] const ExprPtr& expression() const { return expr_; }

 private:
  explicit BoundaryFunction(Signature sig) : sig_(sig) {}

  Signature sig_;
  ExprPtr expr_;
  std::optional<SampleTable> table_;
  std::optional<DecayHint> decay_;
  std::string source_;
};

[[nodiscard]] inline Multivector eval_boundary(const BoundaryFunction& c,
                                               const std::vector<double>& x) {
  return c.evaluate(x);
}

inline SampleTable SampleTable::load_csv(const std::string& path, Signature sig) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("SampleTable: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("SampleTable: empty file " + path);

  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };

  const int n = sig.generators();
  const auto header = split(line);
  if (header.size() < static_cast<std::size_t>(n) + 1) {
    throw std::runtime_error("SampleTable: header needs x0..x" + std::to_string(n - 1) +
                             " plus blade columns");
  }
  for (int j = 0; j < n; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw std::runtime_error("SampleTable: expected column x" + std::to_string(j));
    }
  }
  std::vector<unsigned> blade_of_column;
  for (std::size_t jcol = n; jcol < header.size(); ++jcol) {
    const Multivector blade = parse_multivector(header[jcol], sig);
    unsigned mask = 0;
    int hits = 0;
    for (unsigned m = 0; m < blade.dim(); ++m) {
      if (blade[m] != 0.0) {
        mask = m;
        ++hits;
      }
    }
    if (hits != 1 || blade[mask] != 1.0 || (mask & sig.e_n_bit())) {
      throw std::runtime_error("SampleTable: bad blade column '" + header[jcol] + "'");
    }
    blade_of_column.push_back(mask);
  }

  std::vector<std::vector<double>> points;
  std::vector<Multivector> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("SampleTable: ragged row in " + path);
    }
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = std::stod(cells[j]);
    Multivector v(sig);
    for (std::size_t jcol = n; jcol < cells.size(); ++jcol) {
      v.set(blade_of_column[jcol - n], std::stod(cells[jcol]));
    }
    points.push_back(std::move(x));
    values.push_back(std::move(v));
  }
  return SampleTable(sig, std::move(points), std::move(values));
}

// ---------------------------------------------------------------------------
// Empirical class estimators
// ---------------------------------------------------------------------------

/// Any para-real map on hyperplane coordinates; the estimators are generic so
/// they apply both to raw data and to weighted data x^m c(x).
using HyperplaneFunction = std::function<Multivector(const std::vector<double>&)>;

struct EnvelopeEstimate {
  double mu = 1.0;           ///< Holder index estimate, capped into (0, 1]
  double coefficient = 0.0;  ///< envelope coefficient M-hat
  double raw_slope = 1.0;    ///< uncapped log-log envelope slope
  bool in_class = true;
  int bins_used = 0;
};

struct HolderSamplerOptions {
  double window = 1.0;        ///< half-width of the sampling box around 0
  double shell_min = 1.0;     ///< dagger variant: inner sampling radius
  double shell_max = 1e4;     ///< dagger variant: outer sampling radius
  int pairs = 6000;
  int bins = 32;
  double min_scale_rel = 1e-4;
  unsigned seed = 20240901u;
  double exclusion_radius = 0.0;  ///< skip pairs inside this ball
};

namespace estimator_detail {

struct PairSample {
  double distance;  // metric distance (euclidean or dagger)
  double diff;      // |f(t) - f(s)|
};

inline std::vector<double> random_unit(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> d(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : d) {
      v = uni(rng);
      norm += v * v;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& v : d) v /= norm;
  return d;
}

inline EnvelopeEstimate fit_envelope(std::vector<PairSample>& samples, int bins) {
  EnvelopeEstimate est;
  samples.erase(std::remove_if(samples.begin(), samples.end(),
                               [](const PairSample& p) {
                                 return !(p.distance > 0.0) || !std::isfinite(p.diff);
                               }),
                samples.end());
  if (samples.empty()) throw std::invalid_argument("estimator: degenerate sampler");

  double lo = std::log(samples[0].distance), hi = lo;
  for (const auto& s : samples) {
    lo = std::min(lo, std::log(s.distance));
    hi = std::max(hi, std::log(s.distance));
  }
  if (!(hi > lo)) throw std::invalid_argument("estimator: all sample pairs coincident");

  std::vector<double> bin_max(bins, 0.0);
  for (const auto& s : samples) {
    int b = static_cast<int>((std::log(s.distance) - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    bin_max[b] = std::max(bin_max[b], s.diff);
  }

  std::vector<double> bx, by;
  for (int b = 0; b < bins; ++b) {
    if (bin_max[b] > 0.0) {
      bx.push_back(lo + (b + 0.5) * (hi - lo) / bins);
      by.push_back(std::log(bin_max[b]));
    }
  }
  est.bins_used = static_cast<int>(bx.size());
  if (bx.empty()) {
    // constant function: zero envelope, index 1 by convention
    est.mu = 1.0;
    est.coefficient = 0.0;
    est.raw_slope = 1.0;
    est.in_class = true;
    return est;
  }
  if (bx.size() == 1) {
    est.mu = 1.0;
    est.raw_slope = 1.0;
    est.coefficient = std::exp(by[0] - bx[0]);
    return est;
  }
  const double N = static_cast<double>(bx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < bx.size(); ++i) {
    sx += bx[i];
    sy += by[i];
    sxx += bx[i] * bx[i];
    sxy += bx[i] * by[i];
  }
  const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  est.raw_slope = slope;
  est.mu = std::clamp(slope, 1e-3, 1.0);
  double logM = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bx.size(); ++i) {
    logM = std::max(logM, by[i] - est.mu * bx[i]);
  }
  est.coefficient = std::exp(logM);
  est.in_class = slope > 0.05;
  return est;
}

}  // namespace estimator_detail

/// @brief Holder-envelope estimate of f on a window around the origin:
/// upper envelope of log|df| vs log|dx| over binned pair maxima.
[[nodiscard]] inline EnvelopeEstimate estimate_holder_fn(Signature sig,
                                                         const HyperplaneFunction& f,
                                                         const HolderSamplerOptions& opt = {}) {
  if (!(opt.window > 0.0)) throw std::invalid_argument("estimate_holder: window must be positive");
  const int n = sig.generators();
  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<estimator_detail::PairSample> samples;
  samples.reserve(opt.pairs);
  const double log_min = std::log(opt.window * opt.min_scale_rel);
  const double log_max = std::log(opt.window * 0.5);
  for (int i = 0; i < opt.pairs; ++i) {
    const double delta = std::exp(log_min + (log_max - log_min) * u01(rng));
    std::vector<double> s(n);
    if (i % 2 == 0) {
      for (double& v : s) v = opt.window * uni(rng);
    } else {
      // scale-proportional anchors resolve features at the origin
      for (double& v : s) v = 2.0 * delta * uni(rng);
    }
    double snorm = 0.0;
    for (double v : s) snorm += v * v;
    if (std::sqrt(snorm) < opt.exclusion_radius) continue;
    const auto dir = estimator_detail::random_unit(rng, n);
    std::vector<double> t(n);
    double tnorm = 0.0;
    bool inside = true;
    for (int j = 0; j < n; ++j) {
      t[j] = s[j] + delta * dir[j];
      tnorm += t[j] * t[j];
      if (std::abs(t[j]) > opt.window) inside = false;
    }
    if (!inside || std::sqrt(tnorm) < opt.exclusion_radius) continue;
    const double diff = (f(t) - f(s)).norm();
    samples.push_back({delta, diff});
  }
  if (samples.size() < 100) {
    throw std::invalid_argument("estimate_holder: sampler produced too few admissible pairs");
  }
  return estimator_detail::fit_envelope(samples, opt.bins);
}

/// @brief Dagger-Holder estimate: envelope of |df| against |1/xi - 1/zeta|
/// (paravector inverses), sampled on log-spaced shells away from the origin.
[[nodiscard]] inline EnvelopeEstimate estimate_holder_dagger_fn(
    Signature sig, const HyperplaneFunction& f, const HolderSamplerOptions& opt = {}) {
  if (!(opt.shell_min > 0.0)) {
    throw std::invalid_argument("estimate_holder_dagger: shells must exclude the origin");
  }
  const int n = sig.generators();
  std::mt19937 rng(opt.seed + 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<estimator_detail::PairSample> samples;
  samples.reserve(opt.pairs);
  const double lr0 = std::log(opt.shell_min);
  const double lr1 = std::log(opt.shell_max);
  for (int i = 0; i < opt.pairs; ++i) {
    const double r = std::exp(lr0 + (lr1 - lr0) * u01(rng));
    const auto dir = estimator_detail::random_unit(rng, n);
    std::vector<double> s(n), t(n);
    for (int j = 0; j < n; ++j) s[j] = r * dir[j];
    const double eta = std::exp(std::log(1e-4) * u01(rng));  // in (1e-4, 1]
    if (i % 2 == 0) {
      for (int j = 0; j < n; ++j) t[j] = r * (1.0 + eta) * dir[j];  // radial neighbour
    } else {
      const auto pert = estimator_detail::random_unit(rng, n);  // angular neighbour
      double norm = 0.0;
      for (int j = 0; j < n; ++j) {
        t[j] = dir[j] + eta * pert[j];
        norm += t[j] * t[j];
      }
      norm = std::sqrt(norm);
      for (int j = 0; j < n; ++j) t[j] = r * t[j] / norm;
    }
    const Paravector pa = Paravector::on_hyperplane(sig, s);
    const Paravector pb = Paravector::on_hyperplane(sig, t);
    const double dist = (pa.inverse() - pb.inverse()).norm();
    if (!(dist > 0.0)) continue;
    const double diff = (f(t) - f(s)).norm();
    samples.push_back({dist, diff});
  }
  if (samples.size() < 100) {
    throw std::invalid_argument("estimate_holder_dagger: degenerate sampler");
  }
  return estimator_detail::fit_envelope(samples, opt.bins);
}

[[nodiscard]] inline EnvelopeEstimate estimate_holder(const BoundaryFunction& c,
                                                      const HolderSamplerOptions& opt = {}) {
  return estimate_holder_fn(c.signature(),
                            [&c](const std::vector<double>& x) { return c.evaluate(x); }, opt);
}

[[nodiscard]] inline EnvelopeEstimate estimate_holder_dagger(
    const BoundaryFunction& c, const HolderSamplerOptions& opt = {}) {
  return estimate_holder_dagger_fn(
      c.signature(), [&c](const std::vector<double>& x) { return c.evaluate(x); }, opt);
}

struct LimitEstimate {
  Multivector value;
  double spread = 0.0;  ///< max deviation across rays at the two largest radii
};

/// Estimate lim f(x) along fixed generic hyperplane rays.
[[nodiscard]] inline LimitEstimate estimate_limit_at_infinity_fn(
    Signature sig, const HyperplaneFunction& f, std::vector<double> radii = {},
    int ray_count = 6) {
  const int n = sig.generators();
  if (radii.empty()) {
    for (int p = 7; p <= 13; ++p) radii.push_back(std::pow(2.0, p));
  }
  std::mt19937 rng(91u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<std::vector<double>> rays;
  for (int i = 0; i < ray_count; ++i) {
    std::vector<double> d(n);
    double norm = 0.0;
    for (double& v : d) {
      do { v = uni(rng); } while (std::abs(v) < 0.2);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : d) v /= norm;
    rays.push_back(std::move(d));
  }

  Multivector mean(sig);
  std::vector<Multivector> tops;
  const std::size_t tail_start = radii.size() >= 2 ? radii.size() - 2 : 0;
  for (const auto& d : rays) {
    for (std::size_t ri = tail_start; ri < radii.size(); ++ri) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = radii[ri] * d[j];
      const Multivector v = f(x);
      tops.push_back(v);
      mean = mean + v;
    }
  }
  mean = mean * (1.0 / static_cast<double>(tops.size()));
  double spread = 0.0;
  for (const auto& v : tops) spread = std::max(spread, (v - mean).norm());
  return LimitEstimate{mean, spread};
}

/// Weighted datum x -> x^m c(x) with the paravector power of the point.
[[nodiscard]] inline HyperplaneFunction weighted_datum(const BoundaryFunction& c, int m) {
  const Signature sig = c.signature();
  return [&c, m, sig](const std::vector<double>& x) {
    const Paravector p = Paravector::on_hyperplane(sig, x);
    if (m < 0 && p.norm() == 0.0) {
      throw ExprDomainError("weighted datum undefined at the origin");
    }
    return integer_power(p.embed(), m) * c.evaluate(x);
  };
}

[[nodiscard]] inline LimitEstimate estimate_limit_at_infinity(const BoundaryFunction& c,
                                                              int m = 0) {
  return estimate_limit_at_infinity_fn(c.signature(), weighted_datum(c, m));
}

struct HatHReport {
  explicit HatHReport(Signature sig) : f_m_at_infinity(sig) {}

  int m = 0;
  EnvelopeEstimate holder;
  EnvelopeEstimate holder_dagger;
  Multivector f_m_at_infinity;
  double limit_spread = 0.0;
  bool in_H_m = false;
  bool in_H_m_dagger = false;
  bool in_hat_H_m = false;
  bool in_hat_H_m0 = false;  ///< additionally f_m(inf) ~ 0
};

/// @brief Empirical membership report for the weighted classes: forms
/// f_m(x) = x^m c(x), runs both envelope estimators on it, and estimates
/// f_m at infinity.  Advisory: solvers treat failures as warnings only.
[[nodiscard]] inline HatHReport classify_hat_H(const BoundaryFunction& c, int m,
                                               const HolderSamplerOptions& opt = {}) {
  const Signature sig = c.signature();
  HatHReport report(sig);
  report.m = m;

  HolderSamplerOptions local = opt;
  if (m != 0) local.exclusion_radius = std::max(local.exclusion_radius, 1e-2);

  const HyperplaneFunction fm = weighted_datum(c, m);
  report.holder = estimate_holder_fn(sig, fm, local);
  report.holder_dagger = estimate_holder_dagger_fn(sig, fm, local);

  const LimitEstimate lim = estimate_limit_at_infinity_fn(sig, fm);
  report.f_m_at_infinity = lim.value;
  report.limit_spread = lim.spread;

  report.in_H_m = report.holder.in_class;
  report.in_H_m_dagger = report.holder_dagger.in_class;
  report.in_hat_H_m = report.in_H_m && report.in_H_m_dagger;
  report.in_hat_H_m0 =
      report.in_hat_H_m &&
      report.f_m_at_infinity.norm() <= std::max(1e-3, 4.0 * report.limit_spread);
  return report;
}

}  // namespace cliffbvp
