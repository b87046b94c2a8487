#include "multider/oeis.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <httplib.h>

namespace multider {

namespace {

std::string bfile_name(std::string_view id) { return "b" + std::string(id.substr(1)) + ".txt"; }

void require_valid(std::string_view id) {
  if (!is_valid_sequence_id(id)) {
    throw std::invalid_argument("malformed OEIS id '" + std::string(id) + "' (expected A followed by six digits)");
  }
}

bool env_flag(const char* name) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' && std::string_view(v) != "0";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Write-then-rename, so readers never observe a partial file.
void write_atomically(const std::filesystem::path& target, const std::string& body) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::create_directories(target.parent_path());
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

// Splits "scheme://host[:port][/prefix]" into the origin httplib expects and
// a path prefix.
std::pair<std::string, std::string> split_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

}  // namespace

bool is_valid_sequence_id(std::string_view id) {
  if (id.size() != 7 || id[0] != 'A') return false;
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return false;
  }
  return true;
}

OeisConfig OeisConfig::from_environment() {
  OeisConfig cfg;
  if (const char* url = std::getenv("MULTIDER_OEIS_URL"); url && *url) cfg.base_url = url;
  if (const char* dir = std::getenv("MULTIDER_OEIS_CACHE"); dir && *dir) cfg.cache_dir = dir;
  if (env_flag("MULTIDER_ONLINE")) cfg.online = true;
  if (env_flag("MULTIDER_OFFLINE")) cfg.online = false;
  return cfg;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::match: return "match";
    case Verdict::mismatch: return "mismatch";
    case Verdict::not_found: return "not_found";
    case Verdict::offline: return "offline";
  }
  return "unknown";
}

OeisClient::OeisClient(OeisConfig config) : config_(std::move(config)) {
  if (env_flag("MULTIDER_OFFLINE")) config_.online = false;
}

std::filesystem::path OeisClient::cache_path(std::string_view sequence_id) const {
  require_valid(sequence_id);
  return config_.cache_dir / bfile_name(sequence_id);
}

std::string OeisClient::download(std::string_view sequence_id) {
  const auto [origin, prefix] = split_base_url(config_.base_url);
  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_follow_location(true);
  const std::string path = prefix + "/" + std::string(sequence_id) + "/" + bfile_name(sequence_id);

  std::string failure;
  for (unsigned attempt = 0; attempt <= config_.retries; ++attempt) {
    ++requests_;
    auto res = client.Get(path);
    if (!res) {
      failure = "request to " + origin + path + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 404) throw UnknownSequence(std::string(sequence_id) + " not found at " + origin);
    if (res->status != 200) {
      failure = "HTTP " + std::to_string(res->status) + " from " + origin + path;
      continue;
    }
    return res->body;
  }
  throw NetworkUnavailable(failure);
}

SequenceSlice OeisClient::fetch_terms(std::string_view sequence_id) {
  const auto cached = cache_path(sequence_id);
  std::error_code ec;
  if (std::filesystem::is_regular_file(cached, ec)) return parse_bfile(read_file(cached));
  if (!config_.online) throw NetworkUnavailable("network access disabled and no cached " + cached.string());

  const std::string body = download(sequence_id);
  const auto first = body.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && body[first] == '<') {
    throw ParseError("expected b-file text for " + std::string(sequence_id) + ", got HTML");
  }
  SequenceSlice slice = parse_bfile(body);
  write_atomically(cached, body);
  return slice;
}

OeisReport compare_slices(const SequenceSlice& local, const SequenceSlice& remote, std::string_view sequence_id) {
  OeisReport report;
  report.sequence_id = std::string(sequence_id);
  report.local_offset = local.offset;
  report.remote_offset = remote.offset;
  report.verdict = Verdict::match;
  const std::int64_t lo = std::max(local.first_index(), remote.first_index());
  const std::int64_t hi = std::min(local.end_index(), remote.end_index());
  report.compared = hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
  for (std::int64_t i = lo; i < hi; ++i) {
    if (local.at(i) != remote.at(i)) {
      report.verdict = Verdict::mismatch;
      report.mismatch_index = i;
      break;
    }
  }
  return report;
}

OeisReport OeisClient::cross_check(const SequenceSlice& local, std::string_view sequence_id) {
  if (local.terms.empty()) throw std::invalid_argument("cross_check needs at least one local term");
  require_valid(sequence_id);
  OeisReport report;
  report.sequence_id = std::string(sequence_id);
  report.local_offset = local.offset;
  try {
    return compare_slices(local, fetch_terms(sequence_id), sequence_id);
  } catch (const UnknownSequence& e) {
    report.verdict = Verdict::not_found;
    report.detail = e.what();
  } catch (const NetworkUnavailable& e) {
    report.verdict = Verdict::offline;
    report.detail = e.what();
  }
  return report;
}

}  // namespace multider
