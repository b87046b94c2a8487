#pragma once

// P-recursive sequences: guess a linear recurrence with polynomial
// coefficients from an exact prefix, verify it, and run it forward.
//
// A Recurrence of order r stores p_0, ..., p_r (integer coefficients,
// ascending degree in the index variable) and states
//
//     sum_{j=0..r} p_j(n) * s(n + j) = 0.
//
// Guessing is purely empirical. A recurrence is accepted only when the linear
// system is overdetermined by a margin of at least ten equations and the
// candidate annihilates every available term.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "multider/exact_poly.hpp"
#include "multider/sequence.hpp"

namespace multider {

class Recurrence {
 public:
  /// Normalizes: strips trailing zero coefficients, divides out the content,
  /// and makes the leading coefficient of p_r positive. Throws
  /// std::invalid_argument if there are fewer than two polynomials or p_r is
  /// identically zero.
  explicit Recurrence(std::vector<std::vector<Integer>> coeff_polys, std::string variable = "n");

  std::size_t order() const noexcept { return polys_.size() - 1; }
  std::size_t degree() const noexcept;
  const std::string& variable() const noexcept { return variable_; }
  const std::vector<std::vector<Integer>>& coeff_polys() const noexcept { return polys_; }

  /// p_j(n).
  Integer eval(std::size_t j, std::int64_t n) const;

  /// Human-readable equation, e.g. "s(n+2) - (n+1)*s(n+1) - (n+1)*s(n) = 0".
  std::string render() const;

  /// Structured text document (JSON) with order, variable and coeff_polys as
  /// lists of decimal integer strings.
  std::string serialize() const;
  static Recurrence deserialize(const std::string& text);

  friend bool operator==(const Recurrence&, const Recurrence&) = default;

 private:
  std::vector<std::vector<Integer>> polys_;
  std::string variable_;
};

struct GuessOptions {
  unsigned max_order = 12;
  unsigned max_degree = 12;
  unsigned margin = 10;
};

/// No (order, degree) candidate within the caps had enough terms.
class InsufficientData : public std::invalid_argument {
 public:
  InsufficientData(std::size_t have, std::size_t need);
  std::size_t have;
  std::size_t need;
};

class RecurrenceNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HoldoutMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p_r(n) vanished where the next term was needed.
class LeadingCoefficientZero : public std::runtime_error {
 public:
  explicit LeadingCoefficientZero(std::int64_t n);
  std::int64_t n;
};

/// The step at n did not divide exactly.
class NonIntegralStep : public std::runtime_error {
 public:
  explicit NonIntegralStep(std::int64_t n);
  std::int64_t n;
};

/// Terms needed to try an (order, degree) candidate: one equation per unknown,
/// the margin, and the order's worth of shifted terms.
std::size_t terms_needed(unsigned order, unsigned degree, unsigned margin);

/// Searches (order r, degree d) with r >= 1 by increasing r + d, then
/// increasing r, and returns the normalized recurrence of the first candidate
/// whose system has a nontrivial exact kernel. Candidates without enough
/// terms are skipped; if none had enough, throws InsufficientData.
std::optional<Recurrence> guess_recurrence(const SequenceSlice& s, const GuessOptions& options = {});

struct VerificationReport {
  struct Check {
    std::int64_t n;
    bool holds;
  };
  std::vector<Check> checks;
  bool ok = true;
  std::optional<std::int64_t> first_failure;
};

/// Evaluates the recurrence at every n with s(n), ..., s(n+r) in the slice.
VerificationReport verify_recurrence(const Recurrence& rec, const SequenceSlice& s);

/// Extends init through index `upto` inclusive.
SequenceSlice extend_sequence(const Recurrence& rec, const SequenceSlice& init, std::int64_t upto);

enum class Direction {
  fixed_k,  // F[n](k) for n = 0, 1, 2, ... with k fixed
  fixed_n,  // F[n](k) for k = 0, 1, 2, ... with n fixed
};

struct UniformExtension {
  SequenceSlice slice;
  Recurrence recurrence;
};

struct ExtensionOptions {
  GuessOptions guess;
  unsigned holdout = 10;
};

/// Computes seed_count terms directly, guesses from all but the last
/// `holdout`, checks the full seed, and extends to index upto.
UniformExtension guess_and_extend_uniform(Direction direction, unsigned fixed_value,
                                          unsigned seed_count, std::int64_t upto,
                                          const ExtensionOptions& options = {});

/// Direct termwise evaluation of the same family, indices 0..upto.
SequenceSlice direct_uniform(Direction direction, unsigned fixed_value, std::int64_t upto);

}  // namespace multider
