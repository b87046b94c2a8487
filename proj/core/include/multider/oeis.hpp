#pragma once

// Cross-checks local sequences against OEIS b-files.
//
// Remote access is opt-in. Responses are cached on disk as the b-file text
// itself (bNNNNNN.txt), so a directory of committed b-files doubles as an
// offline fixture set.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "multider/sequence.hpp"

namespace multider {

class NetworkUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSequence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True for "A" followed by exactly six digits.
bool is_valid_sequence_id(std::string_view id);

struct OeisConfig {
  std::filesystem::path cache_dir = "oeis-cache";
  bool online = false;
  std::string base_url = "https://oeis.org";
  std::chrono::seconds timeout{10};
  unsigned retries = 1;

  /// Defaults overridden from the environment:
  ///   MULTIDER_OEIS_URL    base URL (e.g. a local fixture server)
  ///   MULTIDER_OEIS_CACHE  cache directory
  ///   MULTIDER_ONLINE=1    allow network access
  ///   MULTIDER_OFFLINE=1   forbid network access, overriding everything else
  static OeisConfig from_environment();
};

enum class Verdict { match, mismatch, not_found, offline };

std::string_view to_string(Verdict v) noexcept;

struct OeisReport {
  std::string sequence_id;
  std::size_t compared = 0;
  Verdict verdict = Verdict::offline;
  /// First differing index, in the remote numbering, when verdict is mismatch.
  std::optional<std::int64_t> mismatch_index;
  std::int64_t local_offset = 0;
  std::optional<std::int64_t> remote_offset;
  /// Human-readable cause for not_found and offline verdicts.
  std::string detail;
};

class OeisClient {
 public:
  explicit OeisClient(OeisConfig config);

  /// Cache first, then (if online) one HTTP request with one retry.
  /// Throws std::invalid_argument for a malformed id, NetworkUnavailable,
  /// UnknownSequence, or ParseError.
  SequenceSlice fetch_terms(std::string_view sequence_id);

  /// Compares local against remote over the overlap of their index ranges;
  /// an empty overlap is a vacuous match with compared == 0.
  /// Network and lookup failures become verdicts; a malformed remote payload
  /// still throws ParseError.
  OeisReport cross_check(const SequenceSlice& local, std::string_view sequence_id);

  std::size_t network_requests() const noexcept { return requests_; }
  const OeisConfig& config() const noexcept { return config_; }

  std::filesystem::path cache_path(std::string_view sequence_id) const;

 private:
  std::string download(std::string_view sequence_id);

  OeisConfig config_;
  std::size_t requests_ = 0;
};

/// Pure comparison step of cross_check.
OeisReport compare_slices(const SequenceSlice& local, const SequenceSlice& remote, std::string_view sequence_id);

}  // namespace multider
