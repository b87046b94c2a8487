#pragma once

// Offset-tagged integer sequences and the b-file text format
// ("n a(n)" per line, the OEIS interchange convention).

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "multider/exact_poly.hpp"

namespace multider {

struct SequenceSlice {
  std::int64_t offset = 0;
  std::vector<Integer> terms;

  std::int64_t first_index() const noexcept { return offset; }
  /// One past the last index.
  std::int64_t end_index() const noexcept {
    return offset + static_cast<std::int64_t>(terms.size());
  }
  const Integer& at(std::int64_t index) const { return terms.at(static_cast<std::size_t>(index - offset)); }

  friend bool operator==(const SequenceSlice&, const SequenceSlice&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "n a(n)\n" for every term.
std::string to_bfile(const SequenceSlice& s);

/// One decimal integer per line.
std::string to_plain(const SequenceSlice& s);

/// Parses b-file text: blank lines and '#' comments are skipped, indices
/// must be consecutive.
SequenceSlice parse_bfile(std::string_view text);

/// Parses either format. A file whose data lines carry two fields is a
/// b-file; one field per line is a plain list starting at index 0.
SequenceSlice parse_terms(std::string_view text);

SequenceSlice read_terms_file(const std::filesystem::path& path);

}  // namespace multider
