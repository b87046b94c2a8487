#pragma once

// Exact scalars and dense univariate polynomials with rational coefficients.
//
// Integer and Rational are GMP's C++ classes. Poly keeps its coefficients in
// ascending order and is always normalized: the zero polynomial has no stored
// coefficients, every other polynomial has a nonzero leading coefficient.
//
// Multiplication clears denominators and multiplies the integer numerator
// vectors, either by schoolbook convolution or, for larger operands, by
// Kronecker substitution (pack both vectors into one huge integer each and let
// GMP's subquadratic multiplication do the convolution).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace multider {

using Integer = mpz_class;
using Rational = mpq_class;

class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<Rational> coeffs);
  explicit Poly(std::vector<Rational> coeffs);

  static Poly constant(const Rational& c);
  static Poly monomial(std::size_t power, const Rational& c = 1);

  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Degree, or -1 for the zero polynomial.
  std::ptrdiff_t degree() const noexcept {
    return static_cast<std::ptrdiff_t>(coeffs_.size()) - 1;
  }

  std::span<const Rational> coeffs() const noexcept { return coeffs_; }

  /// Coefficient of x^power; zero past the degree.
  Rational coeff(std::size_t power) const;

  Rational evaluate(const Rational& x) const;

  std::string to_string(char var = 'x') const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void normalize();

  std::vector<Rational> coeffs_;
};

Poly poly_add(const Poly& p, const Poly& q);
Poly poly_sub(const Poly& p, const Poly& q);
Poly poly_mul(const Poly& p, const Poly& q);

/// Product of all factors, multiplied along a balanced tree: the two factors of
/// smallest degree are always combined first. The empty product is 1.
Poly poly_product(std::span<const Poly> factors);

/// p^e by repeated squaring; p^0 = 1.
Poly poly_pow(const Poly& p, unsigned e);

inline Poly operator+(const Poly& p, const Poly& q) { return poly_add(p, q); }
inline Poly operator-(const Poly& p, const Poly& q) { return poly_sub(p, q); }
inline Poly operator*(const Poly& p, const Poly& q) { return poly_mul(p, q); }

namespace detail {

// Integer convolution kernels, exposed for cross-checking and benchmarks.
// Both return the full product vector (length m + n - 1, no trimming).
std::vector<Integer> mul_schoolbook(std::span<const Integer> a, std::span<const Integer> b);
std::vector<Integer> mul_kronecker(std::span<const Integer> a, std::span<const Integer> b);

// Dispatches on operand size.
std::vector<Integer> mul_integer(std::span<const Integer> a, std::span<const Integer> b);

}  // namespace detail

}  // namespace multider
