#include "multider/exact_poly.hpp"

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "multider/laguerre.hpp"

namespace multider {
namespace {

const Poly kOneMinusX{1, -1};

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 9);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

Poly random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(-1, max_degree);
  const int d = deg(rng);
  std::vector<Rational> c;
  for (int i = 0; i <= d; ++i) c.push_back(random_rational(rng));
  return Poly(std::move(c));
}

std::vector<Integer> random_integers(std::mt19937_64& rng, std::size_t n, unsigned bits, int sign_mode) {
  gmp_randclass gen(gmp_randinit_default);
  gen.seed(static_cast<unsigned long>(rng()));
  std::vector<Integer> v;
  for (std::size_t i = 0; i < n; ++i) {
    Integer z = gen.get_z_bits(bits);
    switch (sign_mode) {
      case 0: break;                                  // all nonnegative
      case 1: if (i % 2) z = -z; break;               // alternating
      case 2: if (rng() % 2) z = -z; break;           // mixed
      default: z = -z; break;                         // all nonpositive
    }
    v.push_back(z);
  }
  return v;
}

bool normalized(const Poly& p) { return p.is_zero() || sgn(p.coeffs().back()) != 0; }

TEST(PolyTest, ConstructionStripsTrailingZeros) {
  const Poly p{1, 2, 0, 0};
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(Poly({0, 0}).is_zero());
  EXPECT_EQ(Poly().degree(), -1);
  EXPECT_EQ((Poly::monomial(3, Rational(1, 2)).coeff(3)), Rational(1, 2));
  EXPECT_EQ(Poly({Rational(2, 4)}).coeffs()[0].get_den(), 2);
}

TEST(PolyTest, AddExamples) {
  EXPECT_EQ(kOneMinusX + (Poly{0, 1}), Poly{1});
  EXPECT_EQ(Poly() + kOneMinusX, kOneMinusX);
  EXPECT_EQ(kOneMinusX + kOneMinusX, (Poly{2, -2}));
  EXPECT_TRUE((kOneMinusX - kOneMinusX).is_zero());
}

TEST(PolyTest, MulExamples) {
  EXPECT_EQ(kOneMinusX * kOneMinusX, (Poly{1, -2, 1}));
  EXPECT_TRUE((kOneMinusX * Poly()).is_zero());
  EXPECT_EQ((Poly{1, 1}) * kOneMinusX, (Poly{1, 0, -1}));
}

TEST(PolyTest, ProductExamples) {
  EXPECT_EQ(poly_product({}), Poly{1});
  const std::vector<Poly> two{kOneMinusX, kOneMinusX};
  EXPECT_EQ(poly_product(two), (Poly{1, -2, 1}));

  const std::vector<Poly> deck(13, laguerre(4));
  const Poly p = poly_product(deck);
  EXPECT_EQ(p.degree(), 52);
  EXPECT_EQ(exp_moment(p), Rational(Integer("1493804444499093354916284290188948031229880469556")));
}

TEST(PolyTest, PowExamples) {
  EXPECT_EQ(poly_pow(kOneMinusX, 0), Poly{1});
  EXPECT_EQ(poly_pow(kOneMinusX, 2), (Poly{1, -2, 1}));
  EXPECT_TRUE(poly_pow(Poly(), 3).is_zero());
  EXPECT_EQ(poly_pow(Poly(), 0), Poly{1});
  const std::vector<Poly> deck(13, laguerre(4));
  EXPECT_EQ(poly_pow(laguerre(4), 13), poly_product(deck));
}

TEST(PolyTest, ToStringAndEvaluate) {
  const Poly p{1, Rational(-1, 2), 0, 3};
  EXPECT_EQ(p.to_string(), "3*x^3 - 1/2*x + 1");
  EXPECT_EQ(p.evaluate(2), Rational(24));
  EXPECT_EQ(Poly().to_string(), "0");
}

TEST(PolyProperty, RingAxioms) {
  std::mt19937_64 rng(20210125);
  for (int trial = 0; trial < 200; ++trial) {
    const Poly a = random_poly(rng, 6);
    const Poly b = random_poly(rng, 6);
    const Poly c = random_poly(rng, 6);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    for (const Poly& r : {a + b, a * b, a - b, a * (b + c)}) EXPECT_TRUE(normalized(r));
  }
}

TEST(PolyProperty, DegreeIsAdditive) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Poly a = random_poly(rng, 8);
    const Poly b = random_poly(rng, 8);
    if (a.is_zero() || b.is_zero()) continue;
    EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
  }
}

TEST(PolyProperty, PowMatchesProduct) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Poly p = random_poly(rng, 6);
    for (unsigned e = 0; e <= 8; ++e) {
      const std::vector<Poly> copies(e, p);
      EXPECT_EQ(poly_pow(p, e), poly_product(copies)) << p.to_string() << " ^ " << e;
    }
  }
}

TEST(PolyProperty, ProductOfMixedDegreesMatchesFold) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Poly> factors;
    Poly folded{1};
    const int count = static_cast<int>(rng() % 9);
    for (int i = 0; i < count; ++i) {
      factors.push_back(random_poly(rng, 5));
      folded = folded * factors.back();
    }
    EXPECT_EQ(poly_product(factors), folded);
  }
}

TEST(IntegerKernels, KroneckerMatchesSchoolbook) {
  std::mt19937_64 rng(17);
  for (int sign_a = 0; sign_a < 4; ++sign_a) {
    for (int sign_b = 0; sign_b < 4; ++sign_b) {
      for (const std::size_t n : {1, 2, 5, 17, 40}) {
        for (const unsigned bits : {1U, 63U, 64U, 65U, 300U}) {
          const auto a = random_integers(rng, n, bits, sign_a);
          const auto b = random_integers(rng, n + 3, bits + 7, sign_b);
          EXPECT_EQ(detail::mul_kronecker(a, b), detail::mul_schoolbook(a, b))
              << "signs " << sign_a << "," << sign_b << " n=" << n << " bits=" << bits;
        }
      }
    }
  }
}

TEST(IntegerKernels, ZerosInsideOperands) {
  const std::vector<Integer> a{0, 0, 5, 0, -3, 0, 0, 0, 0, 0, 0, 0, 0, 1};
  const std::vector<Integer> b{0, 7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0};
  EXPECT_EQ(detail::mul_kronecker(a, b), detail::mul_schoolbook(a, b));
  EXPECT_TRUE(detail::mul_kronecker({}, b).empty());
}

}  // namespace
}  // namespace multider
