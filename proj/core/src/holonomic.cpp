#include "multider/holonomic.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "multider/derange.hpp"

namespace multider {

namespace {

// ---------------------------------------------------------------------------
// Linear algebra
//
// The unknown c_{j,e} (coefficient of n^e in p_j) sits at column
// j * (degree + 1) + e; row i is the equation at n = offset + i.

using Matrix = std::vector<std::vector<Integer>>;
using ModMatrix = std::vector<std::vector<std::uint64_t>>;

__extension__ using Wide = unsigned __int128;

// Arithmetic modulo a prime below 2^62.
struct ModPrime {
  std::uint64_t p;

  std::uint64_t reduce(const Integer& z) const { return mpz_fdiv_ui(z.get_mpz_t(), p); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<Wide>(a) * b % p);
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
  std::uint64_t inverse(std::uint64_t a) const {
    std::uint64_t result = 1;
    std::uint64_t e = p - 2;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
};

// Consecutive primes above 2^61, so sums of two residues never overflow.
class PrimeStream {
 public:
  std::uint64_t next() {
    mpz_nextprime(current_.get_mpz_t(), current_.get_mpz_t());
    return current_.get_ui();
  }

 private:
  Integer current_ = Integer(1) << 61;
};

ModMatrix reduce_system(const SequenceSlice& s, unsigned order, unsigned degree, const ModPrime& f) {
  const std::size_t cols = static_cast<std::size_t>(order + 1) * (degree + 1);
  const std::size_t rows = s.terms.size() - order;
  std::vector<std::uint64_t> term_mod(s.terms.size());
  for (std::size_t i = 0; i < s.terms.size(); ++i) term_mod[i] = f.reduce(s.terms[i]);
  ModMatrix m(rows, std::vector<std::uint64_t>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint64_t n_mod = f.reduce(Integer(static_cast<long>(s.offset + static_cast<std::int64_t>(r))));
    for (unsigned j = 0; j <= order; ++j) {
      std::uint64_t v = term_mod[r + j];
      for (unsigned e = 0; e <= degree; ++e) {
        m[r][j * (degree + 1) + e] = v;
        v = f.mul(v, n_mod);
      }
    }
  }
  return m;
}

struct ModReduction {
  std::vector<std::size_t> pivot_rows;  // original row indices
  std::vector<std::size_t> pivot_cols;
  ModMatrix rref;                       // first pivot_cols.size() rows are meaningful
};

// Gauss-Jordan to reduced row echelon form mod p.
ModReduction mod_rref(ModMatrix m, std::size_t cols, const ModPrime& f) {
  ModReduction out;
  std::vector<std::size_t> origin(m.size());
  for (std::size_t i = 0; i < origin.size(); ++i) origin[i] = i;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    std::swap(origin[p], origin[rank]);
    const std::uint64_t inv = f.inverse(m[rank][c]);
    for (std::size_t j = c; j < cols; ++j) m[rank][j] = f.mul(m[rank][j], inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][c] == 0) continue;
      const std::uint64_t factor = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = f.sub(m[i][j], f.mul(factor, m[rank][j]));
    }
    out.pivot_rows.push_back(origin[rank]);
    out.pivot_cols.push_back(c);
    ++rank;
  }
  m.resize(rank);
  out.rref = std::move(m);
  return out;
}

// Kernel basis vector attached to free column `free`: 1 there, zero at the
// other free columns. Over Q these vectors form the canonical (reduced
// echelon) kernel basis.
std::vector<std::uint64_t> mod_kernel_vector(const ModReduction& red, std::size_t cols, std::size_t free,
                                             const ModPrime& f) {
  std::vector<std::uint64_t> v(cols, 0);
  v[free] = 1;
  for (std::size_t i = 0; i < red.pivot_cols.size(); ++i) v[red.pivot_cols[i]] = f.neg(red.rref[i][free]);
  return v;
}

// First free column inside the p_r block, i.e. the kernel vector whose
// leading polynomial has the lowest degree.
std::optional<std::size_t> leading_free_column(const std::vector<std::size_t>& pivot_cols, std::size_t cols,
                                               std::size_t block_start) {
  std::vector<bool> is_pivot(cols, false);
  for (const auto c : pivot_cols) is_pivot[c] = true;
  for (std::size_t c = block_start; c < cols; ++c) {
    if (!is_pivot[c]) return c;
  }
  return std::nullopt;
}

// r/s with |r|, |s| <= sqrt(m/2) and r = s*u (mod m), if one exists.
std::optional<Rational> rational_reconstruction(const Integer& u, const Integer& m) {
  Integer bound;
  mpz_fdiv_q_2exp(bound.get_mpz_t(), m.get_mpz_t(), 1);
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  Integer r0 = m;
  Integer r1 = u;
  Integer s0 = 0;
  Integer s1 = 1;
  Integer q;
  Integer t;
  while (r1 > bound) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (sgn(s1) == 0 || abs(s1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), s1.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational out(r1, s1);
  out.canonicalize();
  return out;
}

std::vector<Integer> clear_denominators(const std::vector<Rational>& x) {
  Integer den = 1;
  for (const auto& v : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(x.size());
  Integer scale;
  for (const auto& v : x) {
    mpz_divexact(scale.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    out.push_back(v.get_num() * scale);
  }
  return out;
}

// Fraction-free (Bareiss) reduction to row echelon form; returns the pivot
// column of each nonzero row. Every division is exact.
std::vector<std::size_t> bareiss_echelon(Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  Integer prev = 1;
  Integer tmp;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    for (std::size_t i = row + 1; i < m.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        tmp = m[row][c] * m[i][j];
        mpz_submul(tmp.get_mpz_t(), m[i][c].get_mpz_t(), m[row][j].get_mpz_t());
        mpz_divexact(m[i][j].get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[row][c];
    pivot_cols.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivot_cols;
}

// Integer kernel basis of m, one vector per free column in ascending order.
std::vector<std::vector<Integer>> integer_kernel(Matrix m, std::size_t cols) {
  const auto pivot_cols = bareiss_echelon(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (const auto c : pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<Integer>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(cols);
    x[free] = 1;
    for (std::size_t i = pivot_cols.size(); i-- > 0;) {
      const std::size_t pc = pivot_cols[i];
      Rational sum = 0;
      for (std::size_t j = pc + 1; j < cols; ++j) {
        if (sgn(x[j]) != 0 && sgn(m[i][j]) != 0) sum += Rational(m[i][j]) * x[j];
      }
      x[pc] = -sum / Rational(m[i][pc]);
    }
    basis.push_back(clear_denominators(x));
  }
  return basis;
}

Integer power_of(std::int64_t n, unsigned e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), Integer(static_cast<long>(n)).get_mpz_t(), e);
  return out;
}

Matrix build_system(const SequenceSlice& s, unsigned order, unsigned degree, const std::vector<std::size_t>& rows) {
  const std::size_t cols = static_cast<std::size_t>(order + 1) * (degree + 1);
  Matrix m;
  m.reserve(rows.size());
  for (const std::size_t r : rows) {
    const std::int64_t n = s.offset + static_cast<std::int64_t>(r);
    std::vector<Integer> row(cols);
    for (unsigned j = 0; j <= order; ++j) {
      for (unsigned e = 0; e <= degree; ++e) row[j * (degree + 1) + e] = power_of(n, e) * s.terms[r + j];
    }
    m.push_back(std::move(row));
  }
  return m;
}

std::optional<Recurrence> as_verified_recurrence(const std::vector<Integer>& v, unsigned order, unsigned degree,
                                                 const SequenceSlice& s) {
  std::vector<std::vector<Integer>> polys(order + 1);
  for (unsigned j = 0; j <= order; ++j) {
    polys[j].assign(v.begin() + j * (degree + 1), v.begin() + (j + 1) * (degree + 1));
  }
  const bool leading_zero =
      std::all_of(polys[order].begin(), polys[order].end(), [](const Integer& z) { return sgn(z) == 0; });
  if (leading_zero) return std::nullopt;
  Recurrence rec(std::move(polys));
  if (!verify_recurrence(rec, s).ok) return std::nullopt;
  return rec;
}

// Kernel vector by Chinese remaindering over a stream of primes and rational
// reconstruction. Primes whose pivot columns differ from the first are
// skipped. Whatever comes back has been checked to annihilate every term.
constexpr std::size_t kMaxPrimes = 4096;

std::optional<Recurrence> multimodular_candidate(const SequenceSlice& s, unsigned order, unsigned degree,
                                                 PrimeStream primes, const ModPrime& first,
                                                 const ModReduction& first_red, std::size_t free) {
  const std::size_t cols = static_cast<std::size_t>(order + 1) * (degree + 1);
  std::vector<Integer> residues(cols);
  Integer modulus = 1;
  std::size_t used = 0;
  std::size_t next_attempt = 2;
  auto absorb = [&](const std::vector<std::uint64_t>& v, const ModPrime& f) {
    // x' = x + M * ((v - x) * M^-1 mod p)
    const std::uint64_t m_inv = f.inverse(f.reduce(modulus));
    for (std::size_t i = 0; i < cols; ++i) {
      const std::uint64_t delta = f.mul(f.sub(v[i], f.reduce(residues[i])), m_inv);
      mpz_addmul_ui(residues[i].get_mpz_t(), modulus.get_mpz_t(), delta);
    }
    modulus *= f.p;
    ++used;
  };

  absorb(mod_kernel_vector(first_red, cols, free, first), first);
  for (std::size_t attempt = 1; attempt < kMaxPrimes; ++attempt) {
    const ModPrime f{primes.next()};
    const auto red = mod_rref(reduce_system(s, order, degree, f), cols, f);
    if (red.pivot_cols != first_red.pivot_cols) continue;
    absorb(mod_kernel_vector(red, cols, free, f), f);
    if (used < next_attempt) continue;
    next_attempt = std::max(used + 1, used * 5 / 4);

    std::vector<Rational> x;
    x.reserve(cols);
    for (const auto& r : residues) {
      auto q = rational_reconstruction(r, modulus);
      if (!q) break;
      x.push_back(std::move(*q));
    }
    if (x.size() != cols) continue;
    if (auto rec = as_verified_recurrence(clear_denominators(x), order, degree, s)) return rec;
  }
  return std::nullopt;
}

std::optional<Recurrence> bareiss_candidate(const SequenceSlice& s, unsigned order, unsigned degree,
                                            const std::vector<std::size_t>& rows) {
  const std::size_t cols = static_cast<std::size_t>(order + 1) * (degree + 1);
  for (const auto& v : integer_kernel(build_system(s, order, degree, rows), cols)) {
    if (auto rec = as_verified_recurrence(v, order, degree, s)) return rec;
  }
  return std::nullopt;
}

std::optional<Recurrence> try_candidate(const SequenceSlice& s, unsigned order, unsigned degree) {
  const std::size_t cols = static_cast<std::size_t>(order + 1) * (degree + 1);
  const std::size_t rows = s.terms.size() - order;

  // A kernel over Q forces a kernel mod p, so full rank here rules the
  // candidate out.
  PrimeStream primes;
  const ModPrime first{primes.next()};
  const auto red = mod_rref(reduce_system(s, order, degree, first), cols, first);
  if (red.pivot_cols.size() == cols) return std::nullopt;

  const auto free = leading_free_column(red.pivot_cols, cols, static_cast<std::size_t>(order) * (degree + 1));
  if (free) {
    if (auto rec = multimodular_candidate(s, order, degree, primes, first, red, *free)) return rec;
  }

  // Rows independent mod p are independent over Q: eliminate on those first.
  std::vector<std::size_t> selected(red.pivot_rows);
  std::sort(selected.begin(), selected.end());
  if (auto rec = bareiss_candidate(s, order, degree, selected)) return rec;
  // The prime under-reported the rank; redo with every equation.
  std::vector<std::size_t> all(rows);
  for (std::size_t r = 0; r < rows; ++r) all[r] = r;
  return bareiss_candidate(s, order, degree, all);
}

std::string poly_text(const std::vector<Integer>& p, const std::string& var) {
  std::string out;
  bool first = true;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (sgn(p[i]) == 0) continue;
    const Integer mag = abs(p[i]);
    if (sgn(p[i]) < 0) {
      out += "-";
    } else if (!first) {
      out += "+";
    }
    first = false;
    if (i == 0 || mag != 1) {
      out += mag.get_str();
      if (i > 0) out += "*";
    }
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Recurrence

Recurrence::Recurrence(std::vector<std::vector<Integer>> coeff_polys, std::string variable)
    : polys_(std::move(coeff_polys)), variable_(std::move(variable)) {
  if (polys_.size() < 2) throw std::invalid_argument("a recurrence needs order >= 1");
  for (auto& p : polys_) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
  }
  if (polys_.back().empty()) throw std::invalid_argument("leading coefficient polynomial is zero");

  Integer content = 0;
  for (const auto& p : polys_) {
    for (const auto& c : p) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  }
  if (sgn(polys_.back().back()) < 0) content = -content;
  for (auto& p : polys_) {
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
  }
}

std::size_t Recurrence::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& p : polys_) {
    if (!p.empty()) d = std::max(d, p.size() - 1);
  }
  return d;
}

Integer Recurrence::eval(std::size_t j, std::int64_t n) const {
  const auto& p = polys_.at(j);
  Integer acc = 0;
  const Integer x(static_cast<long>(n));
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string Recurrence::render() const {
  std::string out;
  bool first = true;
  for (std::size_t j = polys_.size(); j-- > 0;) {
    const auto& p = polys_[j];
    if (p.empty()) continue;
    std::size_t nonzero = 0;
    for (const auto& c : p) nonzero += sgn(c) != 0;

    // Pull the sign of the leading coefficient out front.
    std::vector<Integer> q = p;
    const bool negative = sgn(q.back()) < 0;
    if (negative) {
      for (auto& c : q) c = -c;
    }
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    first = false;

    if (q.size() == 1) {
      if (q[0] != 1) out += q[0].get_str() + "*";
    } else if (nonzero == 1 && q.back() == 1) {
      out += poly_text(q, variable_) + "*";
    } else {
      out += "(" + poly_text(q, variable_) + ")*";
    }
    out += "s(" + variable_;
    if (j > 0) out += "+" + std::to_string(j);
    out += ")";
  }
  return out + " = 0";
}

std::string Recurrence::serialize() const {
  nlohmann::ordered_json doc;
  doc["order"] = order();
  doc["variable"] = variable_;
  auto polys = nlohmann::ordered_json::array();
  for (const auto& p : polys_) {
    auto coeffs = nlohmann::ordered_json::array();
    for (const auto& c : p) coeffs.push_back(c.get_str());
    polys.push_back(std::move(coeffs));
  }
  doc["coeff_polys"] = std::move(polys);
  return doc.dump();
}

Recurrence Recurrence::deserialize(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    const auto order = doc.at("order").get<std::size_t>();
    const auto variable = doc.at("variable").get<std::string>();
    const auto& polys = doc.at("coeff_polys");
    if (!polys.is_array() || polys.size() != order + 1) {
      throw ParseError("coeff_polys must hold order + 1 polynomials");
    }
    std::vector<std::vector<Integer>> coeffs;
    for (const auto& p : polys) {
      std::vector<Integer> row;
      for (const auto& c : p) {
        const auto str = c.get<std::string>();
        Integer z;
        if (str.empty() || z.set_str(str, 10) != 0) throw ParseError("bad coefficient '" + str + "'");
        row.push_back(z);
      }
      coeffs.push_back(std::move(row));
    }
    return Recurrence(std::move(coeffs), variable);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed recurrence document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Errors

InsufficientData::InsufficientData(std::size_t have_, std::size_t need_)
    : std::invalid_argument("insufficient data: " + std::to_string(have_) + " terms given, at least " +
                            std::to_string(need_) + " needed"),
      have(have_),
      need(need_) {}

LeadingCoefficientZero::LeadingCoefficientZero(std::int64_t n_)
    : std::runtime_error("leading coefficient vanishes at n = " + std::to_string(n_)), n(n_) {}

NonIntegralStep::NonIntegralStep(std::int64_t n_)
    : std::runtime_error("inexact division at n = " + std::to_string(n_)), n(n_) {}

// ---------------------------------------------------------------------------
// Guess / verify / extend

std::size_t terms_needed(unsigned order, unsigned degree, unsigned margin) {
  return static_cast<std::size_t>(order + 1) * (degree + 1) + order + margin;
}

std::optional<Recurrence> guess_recurrence(const SequenceSlice& s, const GuessOptions& options) {
  const std::size_t have = s.terms.size();
  bool any_feasible = false;
  for (unsigned total = 1; total <= options.max_order + options.max_degree; ++total) {
    for (unsigned order = 1; order <= std::min(total, options.max_order); ++order) {
      const unsigned degree = total - order;
      if (degree > options.max_degree) continue;
      if (have < terms_needed(order, degree, options.margin)) continue;
      any_feasible = true;
      if (auto rec = try_candidate(s, order, degree)) return rec;
    }
  }
  if (!any_feasible) throw InsufficientData(have, terms_needed(1, 0, options.margin));
  return std::nullopt;
}

VerificationReport verify_recurrence(const Recurrence& rec, const SequenceSlice& s) {
  VerificationReport report;
  const std::size_t r = rec.order();
  if (s.terms.size() < r + 1) {
    throw std::invalid_argument("verification needs at least order + 1 terms");
  }
  Integer residual;
  for (std::size_t i = 0; i + r < s.terms.size(); ++i) {
    const std::int64_t n = s.offset + static_cast<std::int64_t>(i);
    residual = 0;
    for (std::size_t j = 0; j <= r; ++j) {
      mpz_addmul(residual.get_mpz_t(), rec.eval(j, n).get_mpz_t(), s.terms[i + j].get_mpz_t());
    }
    const bool holds = sgn(residual) == 0;
    report.checks.push_back({n, holds});
    if (!holds && report.ok) {
      report.ok = false;
      report.first_failure = n;
    }
  }
  return report;
}

SequenceSlice extend_sequence(const Recurrence& rec, const SequenceSlice& init, std::int64_t upto) {
  const std::size_t r = rec.order();
  if (init.terms.size() < r) throw std::invalid_argument("extension needs at least order initial terms");
  if (upto < init.end_index() - 1) throw std::invalid_argument("upto precedes the initial terms");

  SequenceSlice out = init;
  out.terms.reserve(static_cast<std::size_t>(upto - out.offset + 1));
  Integer acc;
  Integer lead;
  while (out.end_index() <= upto) {
    const std::int64_t n = out.end_index() - static_cast<std::int64_t>(r);
    const std::size_t base = out.terms.size() - r;
    acc = 0;
    for (std::size_t j = 0; j < r; ++j) {
      mpz_submul(acc.get_mpz_t(), rec.eval(j, n).get_mpz_t(), out.terms[base + j].get_mpz_t());
    }
    lead = rec.eval(r, n);
    if (sgn(lead) == 0) throw LeadingCoefficientZero(n);
    if (!mpz_divisible_p(acc.get_mpz_t(), lead.get_mpz_t())) throw NonIntegralStep(n);
    mpz_divexact(acc.get_mpz_t(), acc.get_mpz_t(), lead.get_mpz_t());
    out.terms.push_back(acc);
  }
  return out;
}

SequenceSlice direct_uniform(Direction direction, unsigned fixed_value, std::int64_t upto) {
  SequenceSlice out;
  for (std::int64_t i = 0; i <= upto; ++i) {
    const auto idx = static_cast<unsigned>(i);
    out.terms.push_back(direction == Direction::fixed_k ? uniform_count(idx, fixed_value)
                                                        : uniform_count(fixed_value, idx));
  }
  return out;
}

UniformExtension guess_and_extend_uniform(Direction direction, unsigned fixed_value,
                                          unsigned seed_count, std::int64_t upto,
                                          const ExtensionOptions& options) {
  if (seed_count <= options.holdout) {
    throw std::invalid_argument("seed_count must exceed the holdout of " + std::to_string(options.holdout));
  }
  const SequenceSlice seed = direct_uniform(direction, fixed_value, seed_count - 1);

  SequenceSlice shown{seed.offset, {seed.terms.begin(), seed.terms.end() - options.holdout}};
  auto rec = guess_recurrence(shown, options.guess);
  if (!rec) {
    throw RecurrenceNotFound("no recurrence with order <= " + std::to_string(options.guess.max_order) +
                             " and degree <= " + std::to_string(options.guess.max_degree) + " fits " +
                             std::to_string(shown.terms.size()) + " seed terms");
  }
  const auto report = verify_recurrence(*rec, seed);
  if (!report.ok) {
    throw HoldoutMismatch("guessed recurrence fails on held-out term at n = " +
                          std::to_string(*report.first_failure));
  }

  if (upto < seed.end_index()) {
    SequenceSlice head{seed.offset, {seed.terms.begin(), seed.terms.begin() + (upto - seed.offset + 1)}};
    return {std::move(head), std::move(*rec)};
  }
  return {extend_sequence(*rec, seed, upto), std::move(*rec)};
}

}  // namespace multider
