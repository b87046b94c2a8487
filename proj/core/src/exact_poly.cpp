#include "multider/exact_poly.hpp"

#include <algorithm>
#include <cstring>
#include <optional>
#include <queue>
#include <sstream>
#include <utility>

namespace multider {

namespace {

// Below this operand length schoolbook convolution beats packing.
constexpr std::size_t kKroneckerThreshold = 12;

// Integer numerators over a shared positive denominator. Internal products
// stay in this form so that no gcd work happens until the final conversion.
struct ScaledPoly {
  std::vector<Integer> num;
  Integer den = 1;
};

ScaledPoly to_scaled(const Poly& p) {
  ScaledPoly out;
  for (const auto& c : p.coeffs()) {
    mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c.get_den_mpz_t());
  }
  out.num.reserve(p.coeffs().size());
  Integer factor;
  for (const auto& c : p.coeffs()) {
    mpz_divexact(factor.get_mpz_t(), out.den.get_mpz_t(), c.get_den_mpz_t());
    out.num.emplace_back(c.get_num() * factor);
  }
  return out;
}

Poly from_scaled(const ScaledPoly& s) {
  std::vector<Rational> coeffs;
  coeffs.reserve(s.num.size());
  for (const auto& n : s.num) {
    Rational r(n, s.den);
    r.canonicalize();
    coeffs.push_back(std::move(r));
  }
  return Poly(std::move(coeffs));
}

ScaledPoly mul_scaled(const ScaledPoly& a, const ScaledPoly& b) {
  if (a.num.empty() || b.num.empty()) return {};
  return {detail::mul_integer(a.num, b.num), a.den * b.den};
}

// ---------------------------------------------------------------------------
// Kronecker substitution

using Limb = mp_limb_t;

std::size_t max_bits(std::span<const Integer> v) {
  std::size_t bits = 0;
  for (const auto& c : v) {
    if (sgn(c) != 0) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  }
  return bits;
}

enum class Take { positive, negative, magnitude };

// Lays the selected part of each coefficient into its own slot of
// `slot_limbs` limbs: the result equals sum_i part(v_i) * 2^(64 * slot_limbs * i).
Integer pack(std::span<const Integer> v, std::size_t slot_limbs, Take take) {
  Integer packed;
  const std::size_t total = v.size() * slot_limbs;
  Limb* dst = mpz_limbs_write(packed.get_mpz_t(), static_cast<mp_size_t>(total));
  std::fill(dst, dst + total, Limb{0});
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int s = sgn(v[i]);
    if (s == 0) continue;
    if (take == Take::positive && s < 0) continue;
    if (take == Take::negative && s > 0) continue;
    const mpz_srcptr z = v[i].get_mpz_t();
    const std::size_t n = mpz_size(z);
    const Limb* src = mpz_limbs_read(z);
    std::copy(src, src + n, dst + i * slot_limbs);
  }
  mpz_limbs_finish(packed.get_mpz_t(), static_cast<mp_size_t>(total));
  return packed;
}

std::vector<Integer> unpack(const Integer& packed, std::size_t count, std::size_t slot_limbs) {
  std::vector<Integer> out(count);
  const mpz_srcptr z = packed.get_mpz_t();
  const std::size_t n = mpz_size(z);
  const Limb* src = mpz_limbs_read(z);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t lo = i * slot_limbs;
    if (lo >= n) break;
    const std::size_t len = std::min(slot_limbs, n - lo);
    Limb* dst = mpz_limbs_write(out[i].get_mpz_t(), static_cast<mp_size_t>(len));
    std::copy(src + lo, src + lo + len, dst);
    mpz_limbs_finish(out[i].get_mpz_t(), static_cast<mp_size_t>(len));
  }
  return out;
}

// Sign pattern under which every coefficient becomes nonnegative:
// negate * (-1)^(i * flip_odd) * v_i >= 0 for all i.
struct SignPattern {
  bool negate = false;
  bool flip_odd = false;
};

std::optional<SignPattern> uniform_sign(std::span<const Integer> v) {
  for (const bool flip : {false, true}) {
    for (const bool neg : {false, true}) {
      bool ok = true;
      for (std::size_t i = 0; i < v.size() && ok; ++i) {
        int s = sgn(v[i]);
        if (neg) s = -s;
        if (flip && (i & 1U)) s = -s;
        ok = s >= 0;
      }
      if (ok) return SignPattern{neg, flip};
    }
  }
  return std::nullopt;
}

std::vector<Integer> apply_pattern(std::span<const Integer> v, SignPattern p) {
  std::vector<Integer> out(v.begin(), v.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (p.negate != (p.flip_odd && (i & 1U))) out[i] = -out[i];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) {
  for (auto& c : coeffs_) c.canonicalize();
  normalize();
}

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  normalize();
}

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(std::size_t power, const Rational& c) {
  std::vector<Rational> coeffs(power + 1);
  coeffs[power] = c;
  return Poly(std::move(coeffs));
}

Rational Poly::coeff(std::size_t power) const {
  return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

Rational Poly::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string Poly::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Rational& c = coeffs_[i];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) {
      os << mag.get_str();
      if (i > 0) os << '*';
    }
    if (i >= 1) os << var;
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

void Poly::normalize() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Poly poly_add(const Poly& p, const Poly& q) {
  const auto a = p.coeffs();
  const auto b = q.coeffs();
  std::vector<Rational> out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return Poly(std::move(out));
}

Poly poly_sub(const Poly& p, const Poly& q) {
  const auto a = p.coeffs();
  const auto b = q.coeffs();
  std::vector<Rational> out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return Poly(std::move(out));
}

Poly poly_mul(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return {};
  return from_scaled(mul_scaled(to_scaled(p), to_scaled(q)));
}

Poly poly_product(std::span<const Poly> factors) {
  if (factors.empty()) return Poly::constant(1);
  for (const auto& f : factors) {
    if (f.is_zero()) return {};
  }

  // Min-heap on (degree, insertion order); the order tiebreak makes the
  // pairing sequence a function of the input alone.
  using Entry = std::pair<std::pair<std::size_t, std::size_t>, std::size_t>;
  std::vector<ScaledPoly> pool;
  pool.reserve(2 * factors.size());
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::size_t seq = 0;
  for (const auto& f : factors) {
    pool.push_back(to_scaled(f));
    heap.push({{pool.back().num.size(), seq++}, pool.size() - 1});
  }
  while (heap.size() > 1) {
    const auto a = heap.top().second;
    heap.pop();
    const auto b = heap.top().second;
    heap.pop();
    pool.push_back(mul_scaled(pool[a], pool[b]));
    pool[a] = {};
    pool[b] = {};
    heap.push({{pool.back().num.size(), seq++}, pool.size() - 1});
  }
  return from_scaled(pool[heap.top().second]);
}

Poly poly_pow(const Poly& p, unsigned e) {
  if (e == 0) return Poly::constant(1);
  if (p.is_zero()) return {};
  ScaledPoly base = to_scaled(p);
  std::optional<ScaledPoly> acc;
  while (true) {
    if (e & 1U) acc = acc ? mul_scaled(*acc, base) : base;
    e >>= 1U;
    if (e == 0) break;
    base = mul_scaled(base, base);
  }
  return from_scaled(*acc);
}

// ---------------------------------------------------------------------------
// Integer kernels

namespace detail {

std::vector<Integer> mul_schoolbook(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Integer> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

std::vector<Integer> mul_kronecker(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t count = a.size() + b.size() - 1;

  // Every coefficient of |a| * |b| is below min(m, n) * max|a| * max|b|.
  const std::size_t terms = std::min(a.size(), b.size());
  std::size_t bits = max_bits(a) + max_bits(b) + mpz_sizeinbase(Integer(terms).get_mpz_t(), 2) + 1;
  const std::size_t slot = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;

  const auto pa = uniform_sign(a);
  const auto pb = uniform_sign(b);
  if (pa && pb && pa->flip_odd == pb->flip_odd) {
    // Both sides become nonnegative under the same alternation: one product.
    const auto ua = apply_pattern(a, *pa);
    const auto ub = apply_pattern(b, *pb);
    Integer prod = pack(ua, slot, Take::magnitude) * pack(ub, slot, Take::magnitude);
    auto out = unpack(prod, count, slot);
    const SignPattern back{pa->negate != pb->negate, pa->flip_odd};
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (back.negate != (back.flip_odd && (i & 1U))) out[i] = -out[i];
    }
    return out;
  }

  // a*b = 2*(a+ b+ + a- b-) - |a| |b|, with a = a+ - a-.
  const Integer pos = pack(a, slot, Take::positive) * pack(b, slot, Take::positive) +
                      pack(a, slot, Take::negative) * pack(b, slot, Take::negative);
  const Integer mag = pack(a, slot, Take::magnitude) * pack(b, slot, Take::magnitude);
  auto same = unpack(pos, count, slot);
  const auto all = unpack(mag, count, slot);
  for (std::size_t i = 0; i < count; ++i) {
    mpz_mul_2exp(same[i].get_mpz_t(), same[i].get_mpz_t(), 1);
    same[i] -= all[i];
  }
  return same;
}

std::vector<Integer> mul_integer(std::span<const Integer> a, std::span<const Integer> b) {
  if (std::min(a.size(), b.size()) < kKroneckerThreshold) return mul_schoolbook(a, b);
  return mul_kronecker(a, b);
}

}  // namespace detail

}  // namespace multider
