#pragma once

// Counting derangements of multisets.
//
// A multiset 1^a_1 ... n^a_n is deranged by an arrangement w of its sorted
// word s when w_i != s_i at every position. Three independent counts are
// provided: the Laguerre moment formula (the production path), enumeration,
// and coefficient extraction from MacMahon's generating function.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multider/exact_poly.hpp"

namespace multider {

/// Multiplicity vector (a_1, ..., a_n); every a_i >= 1, n may be zero.
class Multiset {
 public:
  Multiset() = default;
  Multiset(std::initializer_list<unsigned> multiplicities);
  explicit Multiset(std::vector<unsigned> multiplicities);

  /// k repeated n times.
  static Multiset uniform(unsigned n, unsigned k);

  std::span<const unsigned> multiplicities() const noexcept { return mult_; }
  std::size_t symbols() const noexcept { return mult_.size(); }
  std::size_t total() const noexcept { return total_; }
  unsigned max_multiplicity() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Multiset&, const Multiset&) = default;

 private:
  std::vector<unsigned> mult_;
  std::size_t total_ = 0;
};

struct DerangementCount {
  Integer value;
  Multiset instance;
};

/// The moment formula produced a negative or non-integral count.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An oracle was asked for an instance beyond its configured bounds.
class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleBounds {
  std::size_t brute_force_max_total = 10;
  std::size_t macmahon_max_symbols = 6;
  unsigned macmahon_max_multiplicity = 6;
};

/// D_n, with D_0 = 1 and D_{n+1} = (n+1) D_n + (-1)^(n+1).
Integer classic_derangement(unsigned n);

/// Multinomial total! / (a_1! ... a_n!).
Integer total_arrangements(const Multiset& m);

/// (-1)^total * exp_moment(L_{a_1} ... L_{a_n}).
DerangementCount multiset_derangement(const Multiset& m);

/// F[n](k): derangements of k repeated n times, via L_k^n.
Integer uniform_count(unsigned n, unsigned k);

Integer brute_force_count(const Multiset& m, const OracleBounds& bounds = {});

Integer macmahon_count(const Multiset& m, const OracleBounds& bounds = {});

/// Probability that a uniformly random arrangement is a derangement.
Rational wrong_rank_probability(const Multiset& m);

}  // namespace multider
