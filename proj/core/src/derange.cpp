#include "multider/derange.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>

#include "multider/laguerre.hpp"

namespace multider {

namespace {

Integer checked_count(const Rational& moment, std::size_t total, const char* what) {
  Rational signed_moment = (total % 2 == 0) ? moment : Rational(-moment);
  if (signed_moment.get_den() != 1) {
    throw InternalInconsistency(std::string(what) + ": non-integral moment " +
                                signed_moment.get_str());
  }
  if (sgn(signed_moment) < 0) {
    throw InternalInconsistency(std::string(what) + ": negative moment " +
                                signed_moment.get_str());
  }
  return signed_moment.get_num();
}

}  // namespace

// ---------------------------------------------------------------------------
// Multiset

Multiset::Multiset(std::initializer_list<unsigned> multiplicities)
    : Multiset(std::vector<unsigned>(multiplicities)) {}

Multiset::Multiset(std::vector<unsigned> multiplicities) : mult_(std::move(multiplicities)) {
  for (const unsigned a : mult_) {
    if (a == 0) throw std::invalid_argument("multiset multiplicities must be positive");
    total_ += a;
  }
}

Multiset Multiset::uniform(unsigned n, unsigned k) {
  if (k == 0) return {};
  return Multiset(std::vector<unsigned>(n, k));
}

unsigned Multiset::max_multiplicity() const noexcept {
  return mult_.empty() ? 0 : *std::max_element(mult_.begin(), mult_.end());
}

std::string Multiset::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < mult_.size(); ++i) os << (i ? "," : "") << mult_[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Counts

Integer classic_derangement(unsigned n) {
  Integer d = 1;
  for (unsigned i = 0; i < n; ++i) {
    // D_{i+1} = (i+1) D_i + (-1)^(i+1)
    d *= i + 1;
    if ((i + 1) % 2 == 0) {
      d += 1;
    } else {
      d -= 1;
    }
  }
  return d;
}

Integer total_arrangements(const Multiset& m) {
  Integer out = factorial(m.total());
  for (const unsigned a : m.multiplicities()) mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), factorial(a).get_mpz_t());
  return out;
}

DerangementCount multiset_derangement(const Multiset& m) {
  std::vector<unsigned> order(m.multiplicities().begin(), m.multiplicities().end());
  std::sort(order.begin(), order.end(), std::greater<>());
  std::vector<Poly> factors;
  factors.reserve(order.size());
  for (const unsigned a : order) factors.push_back(laguerre(a));
  const Rational moment = exp_moment(poly_product(factors));
  return {checked_count(moment, m.total(), "multiset_derangement"), m};
}

Integer uniform_count(unsigned n, unsigned k) {
  if (n == 0 || k == 0) return 1;
  const Rational moment = exp_moment(poly_pow(laguerre(k), n));
  return checked_count(moment, static_cast<std::size_t>(n) * k, "uniform_count");
}

Integer brute_force_count(const Multiset& m, const OracleBounds& bounds) {
  if (m.total() > bounds.brute_force_max_total) {
    throw InstanceTooLarge("brute force limited to total <= " +
                           std::to_string(bounds.brute_force_max_total) + ", got " +
                           std::to_string(m.total()));
  }
  const auto mult = m.multiplicities();
  std::vector<unsigned> reference;
  reference.reserve(m.total());
  for (unsigned sym = 0; sym < mult.size(); ++sym) reference.insert(reference.end(), mult[sym], sym);

  std::vector<unsigned> remaining(mult.begin(), mult.end());
  std::uint64_t count = 0;
  // Descend over positions choosing a symbol (not a copy), so each distinct
  // arrangement is reached once; the position constraint prunes in flight.
  std::function<void(std::size_t)> place = [&](std::size_t pos) {
    if (pos == reference.size()) {
      ++count;
      return;
    }
    for (unsigned sym = 0; sym < remaining.size(); ++sym) {
      if (sym == reference[pos] || remaining[sym] == 0) continue;
      --remaining[sym];
      place(pos + 1);
      ++remaining[sym];
    }
  };
  place(0);
  return Integer(static_cast<unsigned long>(count));
}

Integer macmahon_count(const Multiset& m, const OracleBounds& bounds) {
  const auto caps = m.multiplicities();
  const std::size_t n = caps.size();
  if (n > bounds.macmahon_max_symbols || n > 24 || m.max_multiplicity() > bounds.macmahon_max_multiplicity) {
    throw InstanceTooLarge("MacMahon oracle limited to n <= " +
                           std::to_string(bounds.macmahon_max_symbols) + " and a_i <= " +
                           std::to_string(bounds.macmahon_max_multiplicity) + ", got " +
                           m.to_string());
  }

  // Dense series in x_1..x_n, exponent of x_i capped at a_i, mixed-radix index.
  std::vector<std::size_t> stride(n);
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    stride[i] = size;
    size *= caps[i] + 1;
  }
  const std::size_t target = size - 1;

  // E = e_2 + 2 e_3 + ... + (n-1) e_n, one term per subset of size >= 2.
  struct Term {
    std::uint32_t mask;
    std::size_t shift;
    unsigned weight;
  };
  std::vector<Term> terms;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const int bits = __builtin_popcount(mask);
    if (bits < 2) continue;
    std::size_t shift = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) shift += stride[i];
    }
    terms.push_back({mask, shift, static_cast<unsigned>(bits - 1)});
  }

  // Sum of E^m over m; every term of E has degree >= 2 and nonnegative
  // coefficients, so the powers vanish within the caps after total/2 rounds.
  std::vector<Integer> power(size);
  power[0] = 1;
  Integer coefficient = (target == 0) ? 1 : 0;
  while (true) {
    std::vector<Integer> next(size);
    bool any = false;
    for (std::size_t idx = 0; idx < size; ++idx) {
      if (sgn(power[idx]) == 0) continue;
      std::uint32_t below_cap = 0;
      std::size_t rest = idx;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t digit = rest % (caps[i] + 1);
        rest /= caps[i] + 1;
        if (digit < caps[i]) below_cap |= 1U << i;
      }
      for (const auto& t : terms) {
        if ((t.mask & below_cap) != t.mask) continue;
        mpz_addmul_ui(next[idx + t.shift].get_mpz_t(), power[idx].get_mpz_t(), t.weight);
        any = true;
      }
    }
    if (!any) break;
    coefficient += next[target];
    power = std::move(next);
  }
  return coefficient;
}

Rational wrong_rank_probability(const Multiset& m) {
  if (m.total() == 0) throw std::invalid_argument("wrong_rank_probability needs a nonempty multiset");
  Rational p(multiset_derangement(m).value, total_arrangements(m));
  p.canonicalize();
  return p;
}

}  // namespace multider
