#include <cliffbvp/monogenic.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cliffbvp;

namespace {

Paravector random_point(Signature sig, std::mt19937& rng, double lo = 0.8,
                        double hi = 2.0) {
  // random direction, radius in [lo, hi]; stays away from the kernel pole
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(lo, hi);
  std::vector<double> w(sig.generators() + 1);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : w) {
      v = uni(rng);
      norm += v * v;
    }
  } while (norm < 1e-3);
  norm = std::sqrt(norm);
  const double r = rad(rng);
  for (double& v : w) v = v / norm * r;
  return Paravector(sig, std::move(w));
}

PointField field_of(Signature sig, std::function<Multivector(const Paravector&)> f) {
  return PointField{sig, std::move(f)};
}

TEST(HyperVariable, ClosedFormValues) {
  const Signature sig(2);
  // z_1 at w = e_0
  EXPECT_EQ(hyper_variable_z(1, Paravector(sig, {1, 0, 0})),
            -Multivector::generator(sig, 1));
  // z_j(0) = 0
  EXPECT_TRUE(hyper_variable_z(2, Paravector(sig)).is_zero());
  // z_2 at (0, 1, 3) = 3 e_0
  EXPECT_EQ(hyper_variable_z(2, Paravector(sig, {0, 1, 3})),
            Multivector::scalar(sig, 3.0));
  EXPECT_THROW(hyper_variable_z(3, Paravector(sig)), std::out_of_range);
}

TEST(FueterPower, WorkedExamplesAndTermCounts) {
  const Signature sig(2);
  const MultiIndex zero = MultiIndex::zero(sig);
  std::mt19937 rng(2);
  EXPECT_EQ(fueter_Z(zero, random_point(sig, rng)), Multivector::scalar(sig, 1.0));

  // (z_1, z_2)^{[1,1]} = z_1 z_2 + z_2 z_1; both variables equal 1 at (0,1,1)
  const Paravector w11(sig, {0, 1, 1});
  EXPECT_TRUE(approx_equal(fueter_Z(MultiIndex(sig, {1, 1}), w11),
                           Multivector::scalar(sig, 2.0), 1e-15));

  // (z_1, z_2)^{[2,0]} = z_1^2 pointwise
  for (int trial = 0; trial < 10; ++trial) {
    const Paravector w = random_point(sig, rng);
    const Multivector z1 = hyper_variable_z(1, w);
    EXPECT_TRUE(approx_equal(fueter_Z(MultiIndex(sig, {2, 0}), w), z1 * z1, 1e-13));
  }

  // distinct arrangements x multiplicity = |alpha|!
  for (int a1 = 0; a1 <= 3; ++a1) {
    for (int a2 = 0; a2 + a1 <= 5; ++a2) {
      const MultiIndex alpha(sig, {a1, a2});
      unsigned long long fact = 1;
      for (int i = 2; i <= alpha.degree(); ++i) fact *= i;
      unsigned long long mult = 1;
      for (int i = 2; i <= a1; ++i) mult *= i;
      for (int i = 2; i <= a2; ++i) mult *= i;
      EXPECT_EQ(fueter_arrangement_count(alpha) * mult, fact) << alpha.to_string();
    }
  }

  MultiIndex big(sig, {5, 4});
  std::mt19937 rng2(3);
  EXPECT_THROW(fueter_Z(big, random_point(sig, rng2)), std::length_error);
}

TEST(MultiIndexEnumeration, CountsMatchBinomials) {
  for (int n = 1; n <= 4; ++n) {
    const Signature sig(n);
    for (int d = 0; d <= 5; ++d) {
      EXPECT_EQ(multi_indices_of_degree(sig, d).size(), binomial(d + n - 1, n - 1));
      EXPECT_EQ(multi_indices_up_to_degree(sig, d).size(), binomial(d + n, n));
    }
  }
}

TEST(CauchyKernel, ClosedFormValuesAndNormLaw) {
  const Signature sig2(2);
  EXPECT_EQ(cauchy_kernel_E(Paravector(sig2, {1, 0, 0})), Multivector::scalar(sig2, 1.0));
  // n=2: E(2 e_0) = 2 / 2^3 = 1/4
  EXPECT_TRUE(approx_equal(cauchy_kernel_E(Paravector(sig2, {2, 0, 0})),
                           Multivector::scalar(sig2, 0.25), 1e-15));
  // E(e_n) = -e_n
  EXPECT_EQ(cauchy_kernel_E(Paravector(sig2, {0, 0, 1})),
            -Multivector::generator(sig2, 2));

  EXPECT_THROW(cauchy_kernel_E(Paravector(sig2)), PoleAtOriginError);

  std::mt19937 rng(4);
  for (int n : {1, 2, 3}) {
    const Signature sig(n);
    for (int trial = 0; trial < 20; ++trial) {
      const Paravector w = random_point(sig, rng, 0.3, 5.0);
      EXPECT_NEAR(cauchy_kernel_E(w).norm() * std::pow(w.norm(), n), 1.0, 1e-12);
    }
  }
}

TEST(KernelDerivative, MatchesFiniteDifferencesAndDecays) {
  const Signature sig(2);
  // closed form at w = e_0, l = 0, n = 2: -[1 - 3] e_0 = 2 e_0
  EXPECT_TRUE(approx_equal(dE_first(0, Paravector(sig, {1, 0, 0})),
                           Multivector::scalar(sig, 2.0), 1e-14));

  const Paravector w(sig, {1, 1, 0});
  const double h = 1e-5;
  for (int ell = 0; ell <= 2; ++ell) {
    const Multivector fd = (cauchy_kernel_E(shifted(w, ell, h)) -
                            cauchy_kernel_E(shifted(w, ell, -h))) *
                           (1.0 / (2.0 * h));
    EXPECT_TRUE(approx_equal(dE_first(ell, w), -fd, 1e-8)) << "ell=" << ell;
  }

  // |dE(R e_0)| R^{n+1} stays bounded along the axis
  for (double R : {10.0, 100.0, 1000.0}) {
    const Paravector p(sig, {R, 0, 0});
    for (int ell = 0; ell <= 2; ++ell) {
      EXPECT_LT(dE_first(ell, p).norm() * std::pow(R, 3), 10.0);
    }
  }
}

TEST(NegativePowers, LowOrdersAndDecayFit) {
  const Signature sig(2);
  const Paravector w(sig, {2, 1, 1});

  EXPECT_EQ(negative_power_W({}, w, 1e-4), cauchy_kernel_E(w));
  EXPECT_TRUE(approx_equal(negative_power_W({1}, w, 1e-4), dE_first(1, w), 1e-14));

  // k = 1 analytic vs nested-difference route of the kernel itself
  const double h = 1e-4;
  const Multivector fd =
      (cauchy_kernel_E(shifted(w, 1, h)) - cauchy_kernel_E(shifted(w, 1, -h))) *
      (-1.0 / (2.0 * h));
  EXPECT_TRUE(approx_equal(negative_power_W({1}, w, h), fd, 1e-7));

  // decay exponent of W over radii 10 -> 100 is -(n+k)
  std::mt19937 rng(5);
  for (int k = 1; k <= 3; ++k) {
    std::vector<int> indices;
    for (int i = 0; i < k; ++i) indices.push_back(i % 3);
    const Paravector dir = random_point(sig, rng, 1.0, 1.0);
    double mags[2];
    const double radii[2] = {10.0, 100.0};
    for (int i = 0; i < 2; ++i) {
      const Paravector p = dir * radii[i];
      mags[i] = negative_power_W(indices, p, 1e-4 * radii[i] * (k == 3 ? 10 : 1)).norm();
    }
    const double slope = std::log(mags[1] / mags[0]) / std::log(10.0);
    EXPECT_NEAR(slope, -(2.0 + k), 0.05) << "k=" << k;
  }

  // symmetry of mixed partials
  EXPECT_TRUE(approx_equal(negative_power_W({0, 1}, w, 1e-4),
                           negative_power_W({1, 0}, w, 1e-4), 1e-6));

  EXPECT_THROW(negative_power_W({0, 0, 0, 0}, w, 1e-4), std::invalid_argument);
  EXPECT_THROW(negative_power_W({0, 1}, Paravector(sig, {1e-5, 0, 0}), 1e-4),
               StencilCrossesOriginError);
}

TEST(DiracResidual, VanishesForTheKernelAndPolynomials) {
  std::mt19937 rng(6);
  for (int n : {1, 2, 3}) {
    const Signature sig(n);
    const PointField E = field_of(sig, [](const Paravector& p) {
      return cauchy_kernel_E(p);
    });

    std::vector<double> e0(n + 1, 0.0);
    e0[0] = 1.0;
    const Paravector first(sig, e0);
    EXPECT_LT(dirac_residual(E, first, 1e-4, DiracSide::kLeft).norm(), 1e-6);
    EXPECT_LT(dirac_residual(E, first, 1e-4, DiracSide::kRight).norm(), 1e-6);

    for (int trial = 0; trial < 5; ++trial) {
      const Paravector w = random_point(sig, rng);
      EXPECT_LT(dirac_residual(E, w, 1e-4, DiracSide::kLeft).norm(), 1e-6);
      EXPECT_LT(dirac_residual(E, w, 1e-4, DiracSide::kRight).norm(), 1e-6);
    }
  }

  // Fueter powers up to degree 3 are biregular; h = 1e-5 keeps the cubic
  // stencil bias under 1e-8
  const Signature sig(2);
  for (int d = 0; d <= 3; ++d) {
    for (const auto& alpha : multi_indices_of_degree(sig, d)) {
      const PointField Z = field_of(sig, [alpha](const Paravector& p) {
        return fueter_Z(alpha, p);
      });
      for (int trial = 0; trial < 4; ++trial) {
        const Paravector w = random_point(sig, rng);
        EXPECT_LT(dirac_residual(Z, w, 1e-5, DiracSide::kLeft).norm(), 1e-8)
            << alpha.to_string();
        EXPECT_LT(dirac_residual(Z, w, 1e-5, DiracSide::kRight).norm(), 1e-8)
            << alpha.to_string();
      }
    }
  }

  // constant fields cancel exactly
  const Multivector kappa = Multivector::scalar(sig, 3.5) + Multivector::generator(sig, 1);
  const PointField constant = field_of(sig, [kappa](const Paravector&) { return kappa; });
  EXPECT_EQ(dirac_residual(constant, random_point(sig, rng), 1e-4, DiracSide::kLeft),
            Multivector(sig));
}

TEST(DiracResidual, SecondOrderConvergenceUnderHalving) {
  const Signature sig(2);
  const PointField E = field_of(sig, [](const Paravector& p) {
    return cauchy_kernel_E(p);
  });
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Paravector w = random_point(sig, rng);
    const double r1 = dirac_residual(E, w, 2e-4, DiracSide::kLeft).norm();
    const double r2 = dirac_residual(E, w, 1e-4, DiracSide::kLeft).norm();
    if (r1 < 1e-10) continue;  // below the measurable floor
    EXPECT_GE(std::log2(r1 / r2), 1.8);
  }
}

TEST(DiracResidual, DomainViolationIsReported) {
  const Signature sig(2);
  const PointField upper = PointField{
      sig, [](const Paravector& p) { return cauchy_kernel_E(p); },
      [](const Paravector& p) { return p.in_upper_half_space(); }};
  EXPECT_THROW(dirac_residual(upper, Paravector(sig, {0, 0, 1e-6}), 1e-4,
                              DiracSide::kLeft),
               StencilOutsideDomainError);
}

TEST(CauchyRiemann, SplitsTheDiracResidual) {
  const Signature sig(2);
  const PointField E = field_of(sig, [](const Paravector& p) {
    return cauchy_kernel_E(p);
  });

  // E is regular, so both residuals vanish at (0,0,2)
  const Paravector top(sig, {0, 0, 2});
  const auto [r1, r2] = cauchy_riemann_residual(E, top, 1e-4);
  EXPECT_LT(r1.norm(), 1e-6);
  EXPECT_LT(r2.norm(), 1e-6);

  // r1 + e_n r2 equals the left Dirac residual for arbitrary smooth fields
  std::mt19937 rng(8);
  const PointField smooth = field_of(sig, [](const Paravector& p) {
    // not regular: mixes coordinates through a generic polynomial
    Multivector m(p.signature());
    m.set(0, p[0] * p[0] - 2.0 * p[1] * p[2]);
    m.set(1, p[1] * p[1] + p[0]);
    m.set(2, p[2] * p[0]);
    m.set(3, p[1] + p[2]);
    return m;
  });
  const Multivector en = Multivector::generator(sig, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const Paravector w = random_point(sig, rng);
    const auto [a, b] = cauchy_riemann_residual(smooth, w, 1e-4);
    const Multivector d = dirac_residual(smooth, w, 1e-4, DiracSide::kLeft);
    EXPECT_TRUE(approx_equal(a + en * b, d, 1e-12)) << (a + en * b - d).norm();
  }

  // para-real constants have vanishing split residuals
  const Multivector kappa = Multivector::scalar(sig, 2.0) + Multivector::generator(sig, 1);
  const PointField constant = field_of(sig, [kappa](const Paravector&) { return kappa; });
  const auto [c1, c2] = cauchy_riemann_residual(constant, random_point(sig, rng), 1e-4);
  EXPECT_TRUE(c1.is_zero());
  EXPECT_TRUE(c2.is_zero());
}

TEST(OrderAtInfinity, RecoversDegreesAndKernelDecay) {
  std::mt19937 rng(9);
  for (int n : {1, 2}) {
    const Signature sig(n);

    // degree-2 symmetric power with a nonzero coefficient
    SymmetricPolynomial p(sig);
    std::vector<int> alpha(n, 0);
    alpha[0] = 2;
    p.set_term(MultiIndex(sig, alpha), Multivector::scalar(sig, 1.0) * 0.7);
    const auto est = order_at_infinity(p.as_point_field());
    EXPECT_TRUE(est.converged);
    EXPECT_EQ(est.order, 2);

    const PointField E = field_of(sig, [](const Paravector& q) {
      return cauchy_kernel_E(q);
    });
    const auto ek = order_at_infinity(E);
    EXPECT_TRUE(ek.converged);
    EXPECT_EQ(ek.order, -n);

    const PointField constant = field_of(sig, [sig](const Paravector&) {
      return Multivector::scalar(sig, 4.2);
    });
    EXPECT_EQ(order_at_infinity(constant).order, 0);
  }
}

TEST(OrderAtInfinity, ExactOnRandomSymmetricPolynomials) {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const Signature sig(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int degree = trial % 4;
    SymmetricPolynomial p(sig);
    for (int d = 0; d <= degree; ++d) {
      for (const auto& alpha : multi_indices_of_degree(sig, d)) {
        Multivector coeff(sig);
        for (unsigned mask = 0; mask < sig.dim(); ++mask) coeff.set(mask, uni(rng));
        if (d == degree) {
          // keep the top layer bounded away from zero
          coeff.set(0, coeff[0] + (coeff[0] >= 0 ? 1.0 : -1.0));
        }
        p.set_term(alpha, coeff);
      }
    }
    ASSERT_EQ(p.degree(), degree);
    const auto est = order_at_infinity(p.as_point_field());
    EXPECT_EQ(est.order, degree) << "trial " << trial << " slope " << est.slope;
  }
}

TEST(SymmetricPolynomial, EvaluationAndDegree) {
  const Signature sig(2);
  SymmetricPolynomial p(sig);
  EXPECT_EQ(p.degree(), -1);

  const Multivector kappa = Multivector::scalar(sig, 0.5) + Multivector::generator(sig, 2);
  p.set_term(MultiIndex::zero(sig), kappa);
  std::mt19937 rng(11);
  EXPECT_EQ(p.evaluate(random_point(sig, rng)), kappa);
  EXPECT_EQ(p.degree(), 0);

  SymmetricPolynomial q(sig);
  q.set_term(MultiIndex(sig, {1, 1}), Multivector::scalar(sig, 1.0));
  EXPECT_TRUE(approx_equal(q.evaluate(Paravector(sig, {0, 1, 1})),
                           Multivector::scalar(sig, 2.0), 1e-15));

  // right-coefficient evaluation stays left monogenic
  const PointField f = q.as_point_field();
  for (int trial = 0; trial < 5; ++trial) {
    EXPECT_LT(dirac_residual(f, random_point(sig, rng), 1e-5, DiracSide::kLeft).norm(),
              1e-8);
  }
}

}  // namespace
