#include <cliffbvp/multivector.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cliffbvp;

namespace {

// Independent sign oracle: concatenate the index words of both blades and
// reduce with e_i e_j = -e_j e_i (i != j) and e_i e_i = -1 until the word is
// strictly ascending.  Shares nothing with basis_sign.
struct ReducedBlade {
  int sign;
  unsigned mask;
};

ReducedBlade generator_reduction_oracle(unsigned mask_a, unsigned mask_b) {
  std::vector<int> word;
  for (int j = 0; j < 16; ++j) {
    if (mask_a & (1u << j)) word.push_back(j + 1);
  }
  for (int j = 0; j < 16; ++j) {
    if (mask_b & (1u << j)) word.push_back(j + 1);
  }
  int sign = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      if (word[i] == word[i + 1]) {
        sign = -sign;  // e_i^2 = -1
        word.erase(word.begin() + i, word.begin() + i + 2);
        changed = true;
        break;
      }
      if (word[i] > word[i + 1]) {
        sign = -sign;  // anticommute
        std::swap(word[i], word[i + 1]);
        changed = true;
        break;
      }
    }
  }
  unsigned mask = 0;
  for (int idx : word) mask |= 1u << (idx - 1);
  return {sign, mask};
}

Multivector random_multivector(Signature sig, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Multivector m(sig);
  for (unsigned mask = 0; mask < sig.dim(); ++mask) m.set(mask, uni(rng));
  return m;
}

Paravector random_paravector(Signature sig, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> w(sig.generators() + 1);
  for (double& v : w) v = uni(rng);
  return Paravector(sig, std::move(w));
}

TEST(BasisSign, MatchesWorkedExamples) {
  const Signature sig(2);
  // e_1 e_2 = e_12
  auto p = basis_sign(0b01, 0b10, sig);
  EXPECT_EQ(p.sign, 1);
  EXPECT_EQ(p.mask, 0b11u);
  // e_1 e_1 = -1
  p = basis_sign(0b01, 0b01, sig);
  EXPECT_EQ(p.sign, -1);
  EXPECT_EQ(p.mask, 0u);
  // e_12 e_1 = e_2
  p = basis_sign(0b11, 0b01, sig);
  EXPECT_EQ(p.sign, 1);
  EXPECT_EQ(p.mask, 0b10u);
}

TEST(BasisSign, AgreesWithGeneratorReductionOracleExhaustively) {
  for (int n = 1; n <= 5; ++n) {
    const Signature sig(n);
    for (unsigned a = 0; a < sig.dim(); ++a) {
      for (unsigned b = 0; b < sig.dim(); ++b) {
        const auto got = basis_sign(a, b, sig);
        const auto want = generator_reduction_oracle(a, b);
        ASSERT_EQ(got.sign, want.sign) << "n=" << n << " a=" << a << " b=" << b;
        ASSERT_EQ(got.mask, want.mask) << "n=" << n << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(BasisSign, RejectsMasksOutOfRange) {
  const Signature sig(2);
  EXPECT_THROW(basis_sign(0b100, 0b01, sig), std::out_of_range);
}

TEST(Multivector, ProductExamples) {
  const Signature sig(2);
  const Multivector one = Multivector::scalar(sig, 1.0);
  const Multivector e1 = Multivector::generator(sig, 1);
  const Multivector e12 = Multivector::basis_blade(sig, 0b11);

  // (1 + e_1)(1 - e_1) = 1 - e_1^2 = 2
  EXPECT_EQ(((one + e1) * (one - e1)).to_string(), "2");

  std::mt19937 rng(7);
  const Multivector x = random_multivector(sig, rng);
  EXPECT_EQ(one * x, x);
  EXPECT_EQ(x * one, x);

  // (e_1 e_2)^2 = -1
  EXPECT_EQ((e12 * e12), Multivector::scalar(sig, -1.0));
}

TEST(Multivector, SignatureMismatchRejected) {
  const Multivector a = Multivector::scalar(Signature(2), 1.0);
  const Multivector b = Multivector::scalar(Signature(3), 1.0);
  EXPECT_THROW(a * b, SignatureMismatchError);
  EXPECT_THROW(a + b, SignatureMismatchError);
}

TEST(Multivector, AssociativityAndDistributivity) {
  std::mt19937 rng(42);
  for (int n : {2, 3, 4}) {
    const Signature sig(n);
    for (int trial = 0; trial < 200; ++trial) {
      const Multivector a = random_multivector(sig, rng);
      const Multivector b = random_multivector(sig, rng);
      const Multivector c = random_multivector(sig, rng);
      EXPECT_TRUE(approx_equal((a * b) * c, a * (b * c), 1e-12));
      EXPECT_TRUE(approx_equal(a * (b + c), a * b + a * c, 1e-12));
    }
  }
}

TEST(Involution, BarExamplesAndInvolutivity) {
  const Signature sig(3);
  EXPECT_EQ(Multivector::scalar(sig, 1.0).bar(), Multivector::scalar(sig, 1.0));
  EXPECT_EQ(Multivector::generator(sig, 1).bar(), -Multivector::generator(sig, 1));
  const Multivector e12 = Multivector::basis_blade(sig, 0b011);
  EXPECT_EQ(e12.bar(), -e12);
  const Multivector e123 = Multivector::basis_blade(sig, 0b111);
  EXPECT_EQ(e123.bar(), e123);  // exponent 3*4/2 = 6, even

  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector a = random_multivector(sig, rng);
    EXPECT_EQ(a.bar().bar(), a);
  }
}

TEST(Involution, StarReflectsTheLastGenerator) {
  const Signature sig(3);
  const Multivector e0 = Multivector::scalar(sig, 1.0);
  const Multivector en = Multivector::generator(sig, 3);
  EXPECT_EQ((e0 + en).star(), e0 - en);

  const Multivector e1n = Multivector::generator(sig, 1) * en;
  EXPECT_EQ(e1n.star(), -e1n);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector a = random_multivector(sig, rng);
    EXPECT_EQ(a.star().star(), a);
    // star is an algebra automorphism
    const Multivector b = random_multivector(sig, rng);
    EXPECT_TRUE(approx_equal((a * b).star(), a.star() * b.star(), 1e-12));
  }
}

TEST(Involution, BarAndStarCommuteOnParavectors) {
  const Signature sig(3);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Multivector w = random_paravector(sig, rng).embed();
    EXPECT_EQ(w.bar().star(), w.star().bar());
  }
}

TEST(Decompose, SplitsAgainstTheSubalgebra) {
  const Signature sig(3);
  const Multivector en = Multivector::generator(sig, 3);

  auto d = en.decompose();
  EXPECT_EQ(d.re, Multivector(sig));
  EXPECT_EQ(d.im_left, Multivector::scalar(sig, 1.0));
  EXPECT_EQ(d.im_right, Multivector::scalar(sig, 1.0));

  // e_1 + e_2 e_3: the e_n-part satisfies e_2 e_n = e_n (-e_2) = (+e_2) e_n
  const Multivector e1 = Multivector::generator(sig, 1);
  const Multivector e2 = Multivector::generator(sig, 2);
  d = (e1 + e2 * en).decompose();
  EXPECT_EQ(d.re, e1);
  EXPECT_EQ(d.im_left, -e2);
  EXPECT_EQ(d.im_right, e2);
  // the two imaginary parts differ by (-1)^{#A} per blade
  EXPECT_EQ(d.im_right, -d.im_left);

  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector a = random_multivector(sig, rng);
    const auto dec = a.decompose();
    EXPECT_TRUE(dec.re.is_para_real());
    EXPECT_TRUE(dec.im_left.is_para_real());
    EXPECT_TRUE(approx_equal(dec.re + en * dec.im_left, a, 1e-15));
    EXPECT_TRUE(approx_equal(dec.re + dec.im_right * en, a, 1e-15));
    EXPECT_TRUE(approx_equal(en * dec.im_left, dec.im_right * en, 1e-15));
    EXPECT_NEAR(a.norm_squared(),
                dec.re.norm_squared() + dec.im_left.norm_squared(), 1e-12);
  }
}

TEST(Norms, CoefficientNormAndBanachNorm) {
  const Signature sig(2);
  const Multivector v = Multivector::scalar(sig, 1.0) + Multivector::generator(sig, 1);
  EXPECT_NEAR(v.norm(), std::sqrt(2.0), 1e-15);

  for (unsigned mask = 0; mask < sig.dim(); ++mask) {
    EXPECT_DOUBLE_EQ(Multivector::basis_blade(sig, mask).norm(), 1.0);
  }

  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Multivector a = random_multivector(sig, rng);
    const Multivector b = random_multivector(sig, rng);
    EXPECT_LE((a * b).norm0(), a.norm0() * b.norm0() * (1 + 1e-12));
    EXPECT_NEAR(inner(a, b), inner(b, a), 1e-14);
  }
}

TEST(Norms, ParavectorProductIsIsometric) {
  std::mt19937 rng(19);
  for (int n : {2, 3, 4}) {
    const Signature sig(n);
    for (int trial = 0; trial < 100; ++trial) {
      const Paravector w = random_paravector(sig, rng);
      const Multivector mu = random_multivector(sig, rng);
      EXPECT_NEAR((w.embed() * mu).norm(), w.norm() * mu.norm(),
                  1e-12 * std::max(1.0, w.norm() * mu.norm()));
      EXPECT_NEAR((mu * w.embed()).norm(), w.norm() * mu.norm(),
                  1e-12 * std::max(1.0, w.norm() * mu.norm()));
      // w bar(w) = |w|^2
      EXPECT_TRUE(approx_equal(w.embed() * w.embed().bar(),
                               Multivector::scalar(sig, w.norm_squared()), 1e-12));
    }
  }
}

TEST(Invert, ClosedFormParavectorCases) {
  const Signature sig(2);
  EXPECT_EQ(Multivector::scalar(sig, 1.0).invert(), Multivector::scalar(sig, 1.0));

  // (2 e_1)^{-1} = -e_1 / 2
  const Multivector e1 = Multivector::generator(sig, 1);
  EXPECT_TRUE(approx_equal((e1 * 2.0).invert(), e1 * (-0.5), 1e-15));

  std::mt19937 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const Paravector w = random_paravector(sig, rng);
    if (w.norm() < 1e-3) continue;
    EXPECT_TRUE(approx_equal(w.embed() * w.embed().invert(),
                             Multivector::scalar(sig, 1.0), 1e-12));
  }
}

TEST(Invert, GeneralElementsThroughTheRegularRepresentation) {
  const Signature sig(2);
  const Multivector a =
      Multivector::scalar(sig, 1.0) + Multivector::basis_blade(sig, 0b11);
  const Multivector inv = a.invert();
  EXPECT_TRUE(approx_equal(a * inv, Multivector::scalar(sig, 1.0), 1e-12));
  EXPECT_TRUE(approx_equal(inv * a, Multivector::scalar(sig, 1.0), 1e-12));
}

TEST(Invert, SingularElementsAreReported) {
  const Signature sig(3);
  // (1 + e_123)(1 - e_123) = 1 - e_123^2 = 0 since e_123^2 = +1
  const Multivector z =
      Multivector::scalar(sig, 1.0) + Multivector::basis_blade(sig, 0b111);
  EXPECT_THROW(z.invert(), SingularElementError);
  EXPECT_THROW(Multivector(sig).invert(), SingularElementError);
}

TEST(TextForm, RoundTripsThroughTheParser) {
  std::mt19937 rng(29);
  for (int n : {1, 2, 3}) {
    const Signature sig(n);
    for (int trial = 0; trial < 40; ++trial) {
      Multivector a = random_multivector(sig, rng);
      if (trial % 3 == 0) a.set(0, 0.0);  // exercise missing scalar term
      const Multivector back = parse_multivector(a.to_string(), sig);
      EXPECT_EQ(back, a) << a.to_string();
    }
  }
  const Signature sig(2);
  EXPECT_EQ(parse_multivector("0", sig), Multivector(sig));
  EXPECT_EQ(parse_multivector("1 + 2*e1 - e12", sig),
            Multivector::scalar(sig, 1.0) + Multivector::generator(sig, 1) * 2.0 -
                Multivector::basis_blade(sig, 0b11));
  EXPECT_THROW(parse_multivector("1 + e7", sig), TextFormError);
  EXPECT_THROW(parse_multivector("", sig), TextFormError);
}

TEST(Paravector, EmbeddingAndInverse) {
  const Signature sig(3);
  const Paravector w(sig, {1.0, 2.0, 3.0, 4.0});
  EXPECT_TRUE(w.embed().is_paravector());
  EXPECT_EQ(Paravector::from_multivector(w.embed())->components(), w.components());
  EXPECT_DOUBLE_EQ(w.height(), 4.0);
  EXPECT_TRUE(w.in_upper_half_space());
  EXPECT_TRUE(w.mirror().in_lower_half_space());

  const Paravector inv = w.inverse();
  EXPECT_TRUE(approx_equal(w.embed() * inv.embed(), Multivector::scalar(sig, 1.0), 1e-12));
  EXPECT_TRUE(approx_equal(inv.embed(), w.embed().invert(), 1e-13));

  EXPECT_THROW(Paravector(sig).inverse(), SingularElementError);
}

TEST(ParaReal, PredicateTracksTheLastGenerator) {
  const Signature sig(3);
  EXPECT_TRUE(Multivector::generator(sig, 2).is_para_real());
  EXPECT_FALSE(Multivector::generator(sig, 3).is_para_real());
  EXPECT_FALSE(Multivector::basis_blade(sig, 0b101).is_para_real());
}

}  // namespace
