// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Runtime limits are part of each criterion and are checked, not just reported.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "multider/derange.hpp"
#include "multider/exact_poly.hpp"
#include "multider/holonomic.hpp"
#include "multider/laguerre.hpp"
#include "multider/oeis.hpp"
#include "multider/sequence.hpp"

namespace {

using namespace multider;
using Clock = std::chrono::steady_clock;

const std::string kDeck = "1493804444499093354916284290188948031229880469556";
const std::string kDeck52 = "29672484407795138298279444403649511427278111361911893663894333196201";
const std::string kFixtures = std::string(MULTIDER_FIXTURE_DIR) + "/oeis";

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "multider");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::vector<std::vector<unsigned>> compositions_up_to(unsigned max_total) {
  std::vector<std::vector<unsigned>> out{{}};
  std::vector<unsigned> cur;
  std::function<void(unsigned)> grow = [&](unsigned left) {
    for (unsigned part = 1; part <= left; ++part) {
      cur.push_back(part);
      out.push_back(cur);
      grow(left - part);
      cur.pop_back();
    }
  };
  grow(max_total);
  return out;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// D_n by inclusion-exclusion, independent of the recurrence in the library.
Integer derangements_by_inclusion_exclusion(unsigned n) {
  Integer sum = 0;
  for (unsigned j = 0; j <= n; ++j) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n - j);
    const Integer term = binomial(n, j) * f;
    if (j % 2) sum -= term; else sum += term;
  }
  return sum;
}

Outcome golden_deck() {
  Outcome v;
  std::vector<std::string> args{"multi"};
  args.insert(args.end(), 13, "4");
  const auto start = Clock::now();
  const CliResult multi = cli(args);
  const CliResult deck = cli({"deck"});
  const double t = seconds_since(start);
  v.require(multi.code == 0 && multi.out == kDeck + "\n", "multi 4 x13 printed " + multi.out);
  v.require(deck.code == 0 && deck.out == kDeck + "\n", "deck printed " + deck.out);
  v.require(t < 5.0, "took " + fixed(t) + ", limit 5 s");
  v.note += (v.note.empty() ? "" : "; ") + std::string("both commands in ") + fixed(t);
  return v;
}

Outcome golden_distinct_deck() {
  Outcome v;
  const auto start = Clock::now();
  const CliResult r = cli({"derange", "52"});
  const double t = seconds_since(start);
  v.require(r.code == 0 && r.out == kDeck52 + "\n", "derange 52 printed " + r.out);
  v.require(t < 0.1, "took " + fixed(t) + ", limit 0.1 s");
  v.note += (v.note.empty() ? "" : "; ") + fixed(t);
  return v;
}

Outcome three_pairs() {
  Outcome v;
  const Multiset m{2, 2, 2};
  v.require(multiset_derangement(m).value == 10, "moment formula");
  v.require(brute_force_count(m) == 10, "brute force");
  v.require(macmahon_count(m) == 10, "MacMahon");
  return v;
}

Outcome triple_oracle_sweep() {
  Outcome v;
  const OracleBounds wide{10, 8, 8};
  const auto start = Clock::now();
  std::size_t instances = 0;
  for (const auto& c : compositions_up_to(8)) {
    const Multiset m(c);
    const Integer eg = multiset_derangement(m).value;
    v.require(eg == brute_force_count(m, wide), "brute force differs on " + m.to_string());
    v.require(eg == macmahon_count(m, wide), "MacMahon differs on " + m.to_string());
    ++instances;
  }
  const double t = seconds_since(start);
  v.require(t < 60.0, "took " + fixed(t) + ", limit 60 s");
  v.note += (v.note.empty() ? "" : "; ") + std::to_string(instances) + " instances in " + fixed(t);
  return v;
}

Outcome two_symbols() {
  Outcome v;
  for (unsigned k = 0; k <= 200; ++k) v.require(uniform_count(2, k) == 1, "F[2](" + std::to_string(k) + ")");
  return v;
}

Outcome franel() {
  Outcome v;
  for (unsigned k = 0; k <= 100; ++k) {
    Integer sum = 0;
    for (unsigned j = 0; j <= k; ++j) {
      const Integer b = binomial(k, j);
      sum += b * b * b;
    }
    v.require(uniform_count(3, k) == sum, "F[3](" + std::to_string(k) + ")");
  }
  return v;
}

Outcome distinct_cards() {
  Outcome v;
  for (unsigned n = 0; n <= 300; ++n) {
    const Integer f = uniform_count(n, 1);
    v.require(f == classic_derangement(n), "F[" + std::to_string(n) + "](1) vs recurrence");
    if (n <= 60) v.require(f == derangements_by_inclusion_exclusion(n), "F[" + std::to_string(n) + "](1) vs sum");
  }
  return v;
}

Outcome orthonormality() {
  Outcome v;
  for (unsigned j = 0; j <= 30; ++j) {
    for (unsigned k = 0; k <= 30; ++k) {
      v.require(exp_moment(laguerre(j) * laguerre(k)) == Rational(j == k ? 1 : 0),
                "j=" + std::to_string(j) + " k=" + std::to_string(k));
    }
  }
  return v;
}

Outcome recurrence_engine() {
  Outcome v;
  SequenceSlice d30;
  SequenceSlice d101;
  for (unsigned n = 0; n <= 100; ++n) {
    const Integer d = derangements_by_inclusion_exclusion(n);
    if (n < 30) d30.terms.push_back(d);
    d101.terms.push_back(d);
  }
  const auto rec = guess_recurrence(d30);
  v.require(rec.has_value(), "no recurrence from 30 derangement terms");
  if (rec) {
    v.require(rec->order() == 2 && rec->degree() == 1,
              "shape " + std::to_string(rec->order()) + "/" + std::to_string(rec->degree()));
    v.require(verify_recurrence(*rec, d101).ok, "does not annihilate D_0..D_100");
  }

  constexpr unsigned kSeed = 160;
  const auto start = Clock::now();
  for (unsigned k = 1; k <= 6; ++k) {
    try {
      const auto ext = guess_and_extend_uniform(Direction::fixed_k, k, kSeed, kSeed + 100);
      for (unsigned n : {kSeed + 1, kSeed + 17, kSeed + 42, kSeed + 77, kSeed + 100}) {
        v.require(ext.slice.at(n) == uniform_count(n, k), "k=" + std::to_string(k) + " n=" + std::to_string(n));
      }
    } catch (const std::exception& e) {
      v.require(false, "k=" + std::to_string(k) + ": " + e.what());
    }
  }
  v.note += (v.note.empty() ? "" : "; ") + std::string("k=1..6 in ") + fixed(seconds_since(start));
  return v;
}

Outcome scale_check() {
  Outcome v;
  auto start = Clock::now();
  const Integer direct = exp_moment(poly_pow(laguerre(4), 1000)).get_num();  // total 4000 is even
  const double t_direct = seconds_since(start);

  start = Clock::now();
  Integer via_recurrence;
  try {
    const auto ext = guess_and_extend_uniform(Direction::fixed_k, 4, 160, 1000);
    via_recurrence = ext.slice.at(1000);
  } catch (const std::exception& e) {
    v.require(false, std::string("recurrence path: ") + e.what());
  }
  const double t_rec = seconds_since(start);

  v.require(direct == via_recurrence, "paths disagree");
  v.require(direct == uniform_count(1000, 4), "uniform_count disagrees");
  v.require(t_direct < 300.0, "direct took " + fixed(t_direct) + ", limit 300 s");
  v.require(t_rec < 10.0, "recurrence took " + fixed(t_rec) + ", limit 10 s");
  v.note += (v.note.empty() ? "" : "; ") + std::to_string(direct.get_str().size()) + " digits; direct " +
            fixed(t_direct) + ", recurrence " + fixed(t_rec);
  return v;
}

Outcome oeis_fixtures() {
  Outcome v;
  OeisConfig cfg;
  cfg.cache_dir = kFixtures;
  cfg.online = false;
  OeisClient client(cfg);
  const struct {
    const char* id;
    unsigned k;
    std::size_t overlap;
  } cases[] = {{"A000166", 1, 61}, {"A000459", 2, 41}, {"A059073", 3, 13}, {"A059074", 4, 13}, {"A123297", 5, 12}};
  for (const auto& c : cases) {
    const SequenceSlice local = direct_uniform(Direction::fixed_k, c.k, 60);
    const auto report = client.cross_check(local, c.id);
    v.require(report.verdict == Verdict::match, std::string(c.id) + " " + std::string(to_string(report.verdict)));
    v.require(report.compared == c.overlap,
              std::string(c.id) + " compared " + std::to_string(report.compared));
    if (c.k == 4) v.require(local.at(13).get_str() == kDeck, "n=13 entry of A059074 is not the deck number");
  }
  v.require(client.network_requests() == 0, "network was used");
  return v;
}

Outcome property_suites() {
  Outcome v;
  std::mt19937_64 rng(12);
  auto random_poly = [&] {
    std::vector<Rational> c(rng() % 7);
    for (auto& x : c) {
      x = Rational(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9));
      x.canonicalize();
    }
    return Poly(std::move(c));
  };
  for (int i = 0; i < 100; ++i) {
    const Poly a = random_poly(), b = random_poly(), c = random_poly();
    v.require(a + b == b + a && a * b == b * a, "commutativity");
    v.require((a + b) + c == a + (b + c) && (a * b) * c == a * (b * c), "associativity");
    v.require(a * (b + c) == a * b + a * c, "distributivity");
  }

  for (int i = 0; i < 50; ++i) {
    std::vector<unsigned> m;
    for (unsigned total = 0; total < 8;) {
      const unsigned a = 1 + static_cast<unsigned>(rng() % (8 - total));
      m.push_back(a);
      total += a;
    }
    const Integer expected = brute_force_count(Multiset(m));
    std::shuffle(m.begin(), m.end(), rng);
    v.require(multiset_derangement(Multiset(m)).value == expected, "symmetry");
  }

  for (const auto& c : compositions_up_to(12)) {
    const Multiset m(c);
    const std::size_t top = m.max_multiplicity();
    if (top > m.total() - top) v.require(multiset_derangement(m).value == 0, "pigeonhole " + m.to_string());
  }

  const std::vector<std::vector<std::string>> commands{
      {"deck"},
      {"--format", "structured", "prob", "2", "2", "2"},
      {"--format", "bfile", "table", "--fixed", "k", "--value", "2", "--upto", "60", "--seed", "40"},
  };
  for (const auto& c : commands) v.require(cli(c).out == cli(c).out, "byte-determinism");

  const CliResult bfile = cli({"--format", "bfile", "table", "--fixed", "n", "--value", "3", "--upto", "50",
                               "--seed", "30"});
  const CliResult plain = cli({"table", "--fixed", "n", "--value", "3", "--upto", "50", "--seed", "30"});
  const SequenceSlice parsed = parse_bfile(bfile.out);
  v.require(to_bfile(parsed) == bfile.out, "b-file round-trip");
  v.require(parse_terms(plain.out) == parsed, "plain and b-file content differ");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden deck number via multi and deck", golden_deck},
      {"golden distinct-deck number via derange 52", golden_distinct_deck},
      {"M(2,2,2) = 10 by three methods", three_pairs},
      {"triple-oracle sweep, total <= 8", triple_oracle_sweep},
      {"F[2](k) = 1 for k <= 200", two_symbols},
      {"F[3](k) is the Franel sequence for k <= 100", franel},
      {"F[n](1) = D_n for n <= 300", distinct_cards},
      {"Laguerre orthonormality for j, k <= 30", orthonormality},
      {"recurrence engine", recurrence_engine},
      {"F[1000](4) direct vs recurrence", scale_check},
      {"OEIS fixtures, offline", oeis_fixtures},
      {"property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failures += !v.pass;
    std::cout << "criterion " << (i + 1) << ": " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first;
    if (!v.note.empty()) std::cout << "  [" << v.note << "]";
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
