#include "multider/laguerre.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace multider {

namespace {

class FactorialTable {
 public:
  const Integer& get(std::size_t m) {
    {
      std::shared_lock lock(mutex_);
      if (m < table_.size()) return table_[m];
    }
    std::unique_lock lock(mutex_);
    if (table_.empty()) table_.emplace_back(1);
    // Deque growth at the back never moves existing elements.
    while (table_.size() <= m) {
      const Integer next = table_.back() * static_cast<unsigned long>(table_.size());
      table_.push_back(next);
    }
    return table_[m];
  }

 private:
  std::shared_mutex mutex_;
  std::deque<Integer> table_;
};

class LaguerreCache {
 public:
  const Poly& get(unsigned a) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(a); it != table_.end()) return it->second;
    }
    Poly built = build(a);
    std::unique_lock lock(mutex_);
    // First insert wins; a racing builder produced the same value.
    return table_.try_emplace(a, std::move(built)).first->second;
  }

 private:
  static Poly build(unsigned a) {
    std::vector<Rational> coeffs;
    coeffs.reserve(a + 1);
    Integer binom = 1;
    for (unsigned k = 0; k <= a; ++k) {
      Rational c(binom, factorial(k));
      c.canonicalize();
      coeffs.push_back(k % 2 == 0 ? c : Rational(-c));
      binom = binom * (a - k) / (k + 1);
    }
    return Poly(std::move(coeffs));
  }

  std::shared_mutex mutex_;
  std::map<unsigned, Poly> table_;
};

FactorialTable& factorials() {
  static FactorialTable table;
  return table;
}

LaguerreCache& laguerre_cache() {
  static LaguerreCache cache;
  return cache;
}

}  // namespace

const Integer& factorial(std::size_t m) { return factorials().get(m); }

const Poly& laguerre(unsigned a) { return laguerre_cache().get(a); }

Rational exp_moment(const Poly& p) {
  const auto coeffs = p.coeffs();
  if (coeffs.empty()) return 0;
  factorial(coeffs.size() - 1);

  Integer den = 1;
  for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());

  Integer sum = 0;
  Integer scale;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const auto& c = coeffs[m];
    if (sgn(c) == 0) continue;
    mpz_divexact(scale.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    scale *= c.get_num();
    mpz_addmul(sum.get_mpz_t(), scale.get_mpz_t(), factorial(m).get_mpz_t());
  }
  Rational out(sum, den);
  out.canonicalize();
  return out;
}

}  // namespace multider
