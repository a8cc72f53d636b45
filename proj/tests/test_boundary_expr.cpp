#include <cliffbvp/boundary_expr.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace cliffbvp;

namespace {

TEST(Parser, AcceptsTheCanonicalData) {
  const Signature sig1(1);
  const BoundaryFunction rational =
      BoundaryFunction::from_expression("1/(1+abs2(x))", sig1);
  EXPECT_TRUE(approx_equal(rational.evaluate({0.0}), Multivector::scalar(sig1, 1.0),
                           1e-15));
  EXPECT_TRUE(approx_equal(rational.evaluate({1.0}), Multivector::scalar(sig1, 0.5),
                           1e-15));

  const Signature sig3(3);
  const BoundaryFunction f = BoundaryFunction::from_expression("x0*e(1)*gauss(x)", sig3);
  const Multivector got = f.evaluate({1.0, 0.0, 0.0});
  EXPECT_TRUE(approx_equal(got, Multivector::generator(sig3, 1) * std::exp(-1.0), 1e-15));
}

TEST(Parser, RejectsBladesWithTheLastGenerator) {
  const Signature sig(3);
  EXPECT_THROW(parse("e(3)", sig), ParaRealViolationError);
  EXPECT_THROW(parse("e3", sig), ParaRealViolationError);
  EXPECT_THROW(parse("x0*e13", sig), ParaRealViolationError);
  // e_3 is admissible in full-algebra literals (lambda), not in boundary data
  EXPECT_NO_THROW(parse_full_algebra("e3", sig));
  // n = 1: para-real data is scalar only
  EXPECT_THROW(parse("e1", Signature(1)), ParaRealViolationError);
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  const Signature sig(2);
  try {
    parse("1/(1+abs2(x)", sig);
    FAIL() << "expected syntax error";
  } catch (const ExprSyntaxError& e) {
    EXPECT_EQ(e.position, 12u);
  }
  EXPECT_THROW(parse("x0 + ", sig), ExprSyntaxError);
  EXPECT_THROW(parse("x9", sig), ExprSyntaxError);
  EXPECT_THROW(parse("frob(x0)", sig), ExprSyntaxError);
  EXPECT_THROW(parse("pow(x0, x1)", sig), ExprSyntaxError);
  EXPECT_THROW(parse("pow(x0, 0.5)", sig), ExprSyntaxError);
}

TEST(Parser, GoldenCorpusRoundTrips) {
  const Signature sig(3);
  const std::vector<std::string> corpus = {
      "0",
      "1",
      "-1",
      "3.25",
      "x0",
      "x1",
      "x2",
      "x",
      "e0",
      "e1",
      "e2",
      "e12",
      "e(1)",
      "e(1,2)",
      "x0 + x1",
      "x0 - x1",
      "x0*x1",
      "x0/x1",
      "-x0",
      "--x0",
      "x0 - -x1",
      "2*x0 + 3*x1 - 4*x2",
      "(x0 + x1)*(x0 - x1)",
      "x0*x1*x2",
      "x0 + x1 + x2 + 1",
      "abs2(x)",
      "gauss(x)",
      "exp(x0)",
      "sin(x0)",
      "cos(x1)",
      "sqrt(abs2(x))",
      "sqrt(sqrt(abs2(x)))",
      "pow(x0, 3)",
      "pow(1 + abs2(x), -1)",
      "pow(x, 2)",
      "1/(1+abs2(x))",
      "x0/(1+abs2(x))",
      "gauss(x)*sin(x0)",
      "x0*e(1)*gauss(x)",
      "e1*x0 + e2*x1",
      "e12*gauss(x)",
      "(1 + e1)*(1 - e1)",
      "exp(-abs2(x))",
      "sin(x0)*cos(x1)",
      "sin(x0*x1)",
      "2.5e-3*x0",
      "x0*x0*x0",
      "1 - gauss(x)",
      "pow(x0 - x1, 2)*e(2)",
      "cos(abs2(x))/(2 + sin(x0))",
  };
  ASSERT_EQ(corpus.size(), 50u);
  for (const std::string& text : corpus) {
    const ExprPtr ast = parse(text, sig);
    const std::string printed = pretty_print(ast);
    const ExprPtr reparsed = parse(printed, sig);
    EXPECT_TRUE(structurally_equal(ast, reparsed)) << text << "  ->  " << printed;
  }
}

TEST(Parser, ParsedDataIsAlwaysParaReal) {
  const Signature sig(3);
  const std::vector<std::string> corpus = {
      "x0*e(1)*gauss(x)", "e12*sin(x1)", "x*x", "pow(x, 3)", "x - e1*x2",
  };
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (const auto& text : corpus) {
    const BoundaryFunction f = BoundaryFunction::from_expression(text, sig);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> x = {uni(rng), uni(rng), uni(rng)};
      const Multivector v = f.evaluate(x);
      EXPECT_TRUE(v.decompose().im_left.is_zero()) << text;
    }
  }
}

TEST(Evaluation, DomainErrorsPropagate) {
  const Signature sig(1);
  const BoundaryFunction inv = BoundaryFunction::from_expression("1/x0", sig);
  EXPECT_THROW(inv.evaluate({0.0}), ExprDomainError);
  const BoundaryFunction root = BoundaryFunction::from_expression("sqrt(x0)", sig);
  EXPECT_THROW(root.evaluate({-1.0}), ExprDomainError);
  const BoundaryFunction vecdiv = BoundaryFunction::from_expression("1/(x0*e1)", Signature(2));
  EXPECT_THROW(vecdiv.evaluate({1.0, 0.0}), ExprDomainError);
}

TEST(Evaluation, IntegerPowersUseTheCliffordProduct) {
  const Signature sig(2);
  const BoundaryFunction square = BoundaryFunction::from_expression("pow(x, 2)", sig);
  // x = x0 + x1 e1 on the hyperplane; x^2 = x0^2 - x1^2 + 2 x0 x1 e1
  const Multivector got = square.evaluate({2.0, 3.0});
  Multivector want(sig);
  want.set(0, 4.0 - 9.0);
  want.set(1, 12.0);
  EXPECT_TRUE(approx_equal(got, want, 1e-14));

  const BoundaryFunction recip = BoundaryFunction::from_expression("pow(x, -1)", sig);
  const Paravector p = Paravector::on_hyperplane(sig, {2.0, 3.0});
  EXPECT_TRUE(approx_equal(recip.evaluate({2.0, 3.0}), p.inverse().embed(), 1e-14));
}

TEST(SampleTables, NearestNeighbourLookupIsExactOnTablePoints) {
  const Signature sig(2);
  std::vector<std::vector<double>> pts = {{0, 0}, {1, 0}, {0, 1}, {1, 0}};  // dup row
  std::vector<Multivector> vals;
  for (double v : {1.0, 2.0, 3.0, 9.0}) vals.push_back(Multivector::scalar(sig, v));
  const SampleTable table(sig, pts, vals);
  EXPECT_EQ(table.size(), 3u);  // deduplicated
  EXPECT_EQ(table.evaluate({1, 0}), Multivector::scalar(sig, 2.0));
  EXPECT_EQ(table.evaluate({0.9, 0.05}), Multivector::scalar(sig, 2.0));

  Multivector with_en(sig);
  with_en.set(sig.e_n_bit(), 1.0);
  EXPECT_THROW(SampleTable(sig, {{0, 0}}, {with_en}), std::invalid_argument);
}

TEST(SampleTables, CsvRoundTrip) {
  const Signature sig(2);
  const auto path = std::filesystem::temp_directory_path() / "cliffbvp_table.csv";
  {
    std::ofstream out(path);
    out << "x0,x1,e0,e1\n";
    out << "0,0,1.5,-2\n";
    out << "1,0,0.25,0\n";
  }
  const SampleTable table = SampleTable::load_csv(path.string(), sig);
  EXPECT_EQ(table.size(), 2u);
  Multivector want(sig);
  want.set(0, 1.5);
  want.set(1, -2.0);
  EXPECT_EQ(table.evaluate({0, 0}), want);

  const BoundaryFunction f = BoundaryFunction::from_table(table, sig);
  EXPECT_EQ(f.evaluate({1.0, 0.0}), Multivector::scalar(sig, 0.25));

  {
    std::ofstream out(path);
    out << "x0,x1,e2\n0,0,1\n";  // e_n column is not para-real
  }
  EXPECT_THROW(SampleTable::load_csv(path.string(), sig), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(HolderEstimator, RecoversLipschitzAndSquareRootIndices) {
  const Signature sig(1);
  const BoundaryFunction linear = BoundaryFunction::from_expression("x0", sig);
  const auto lin = estimate_holder(linear);
  EXPECT_NEAR(lin.mu, 1.0, 0.05);
  EXPECT_TRUE(lin.in_class);

  const BoundaryFunction root =
      BoundaryFunction::from_expression("sqrt(sqrt(abs2(x)))", sig);
  const auto rt = estimate_holder(root);
  EXPECT_NEAR(rt.mu, 0.5, 0.05);
  EXPECT_TRUE(rt.in_class);

  const BoundaryFunction constant = BoundaryFunction::from_expression("3", sig);
  const auto cst = estimate_holder(constant);
  EXPECT_DOUBLE_EQ(cst.coefficient, 0.0);
  EXPECT_DOUBLE_EQ(cst.mu, 1.0);
  EXPECT_TRUE(cst.in_class);
}

TEST(HolderEstimator, WindowShrinkDoesNotInflateTheIndex) {
  const Signature sig(1);
  const BoundaryFunction root =
      BoundaryFunction::from_expression("sqrt(sqrt(abs2(x)))", sig);
  HolderSamplerOptions wide, narrow;
  wide.window = 1.0;
  narrow.window = 0.25;
  const double mu_wide = estimate_holder(root, wide).mu;
  const double mu_narrow = estimate_holder(root, narrow).mu;
  EXPECT_LE(mu_narrow, mu_wide + 0.1);
}

TEST(DaggerEstimator, SeparatesDecayingFromGrowingData) {
  const Signature sig(1);
  const BoundaryFunction constant = BoundaryFunction::from_expression("2", sig);
  const auto cst = estimate_holder_dagger(constant);
  EXPECT_DOUBLE_EQ(cst.coefficient, 0.0);
  EXPECT_TRUE(cst.in_class);

  const BoundaryFunction rational =
      BoundaryFunction::from_expression("1/(1+abs2(x))", sig);
  const auto rat = estimate_holder_dagger(rational);
  EXPECT_TRUE(rat.in_class);
  EXPECT_GT(rat.mu, 0.0);
  EXPECT_LE(rat.mu, 1.0);

  // an unbounded datum is not dagger-Holder: the envelope collapses
  const BoundaryFunction linear = BoundaryFunction::from_expression("x0", sig);
  const auto lin = estimate_holder_dagger(linear);
  EXPECT_FALSE(lin.in_class);
}

TEST(DaggerEstimator, RejectsShellsTouchingTheOrigin) {
  const Signature sig(1);
  const BoundaryFunction f = BoundaryFunction::from_expression("x0", sig);
  HolderSamplerOptions opt;
  opt.shell_min = 0.0;
  EXPECT_THROW(estimate_holder_dagger(f, opt), std::invalid_argument);
}

TEST(ClassReport, GaussianDataSitInEveryWeightedClass) {
  const Signature sig(1);
  const BoundaryFunction gauss = BoundaryFunction::from_expression("gauss(x)", sig);
  for (int m : {0, 1, 3}) {
    const HatHReport rep = classify_hat_H(gauss, m);
    EXPECT_LT(rep.f_m_at_infinity.norm(), 1e-6) << "m=" << m;
    EXPECT_TRUE(rep.in_hat_H_m) << "m=" << m;
    EXPECT_TRUE(rep.in_hat_H_m0) << "m=" << m;
  }
}

TEST(ClassReport, WeightedRationalLimitIsUnitSize) {
  // |x|^2 / (1 + |x|^2) -> 1, so the weighted datum has a finite nonzero
  // limit at infinity and fails the zero-limit refinement
  const Signature sig(1);
  const BoundaryFunction rational =
      BoundaryFunction::from_expression("1/(1+abs2(x))", sig);
  const HatHReport rep = classify_hat_H(rational, 2);
  EXPECT_NEAR(rep.f_m_at_infinity.norm(), 1.0, 1e-2);
  EXPECT_FALSE(rep.in_hat_H_m0);
}

TEST(ClassReport, ZeroDatumIsInEverything) {
  const Signature sig(2);
  const BoundaryFunction zero = BoundaryFunction::zero(sig);
  const HatHReport rep = classify_hat_H(zero, 1);
  EXPECT_TRUE(rep.in_hat_H_m);
  EXPECT_TRUE(rep.in_hat_H_m0);
  EXPECT_DOUBLE_EQ(rep.f_m_at_infinity.norm(), 0.0);
}

TEST(ClassReport, OrderZeroReducesToThePlainEstimators) {
  const Signature sig(1);
  const BoundaryFunction rational =
      BoundaryFunction::from_expression("1/(1+abs2(x))", sig);
  const HatHReport rep = classify_hat_H(rational, 0);
  const auto holder = estimate_holder(rational);
  const auto dagger = estimate_holder_dagger(rational);
  EXPECT_DOUBLE_EQ(rep.holder.mu, holder.mu);
  EXPECT_DOUBLE_EQ(rep.holder.coefficient, holder.coefficient);
  EXPECT_DOUBLE_EQ(rep.holder_dagger.mu, dagger.mu);
  EXPECT_DOUBLE_EQ(rep.holder_dagger.coefficient, dagger.coefficient);
}

TEST(LimitEstimate, TracksTheDatumAtInfinity) {
  const Signature sig(1);
  const BoundaryFunction shifted =
      BoundaryFunction::from_expression("0.3 + gauss(x)", sig);
  const LimitEstimate lim = estimate_limit_at_infinity(shifted, 0);
  EXPECT_NEAR(lim.value.norm(), 0.3, 1e-9);
  EXPECT_LT(lim.spread, 1e-9);
}

}  // namespace
