#include "multider/sequence.hpp"

#include <fstream>
#include <sstream>

namespace multider {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool is_decimal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::size_t line_no) {
  if (!is_decimal(s)) {
    throw ParseError("line " + std::to_string(line_no) + ": not an integer: '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    fn(fields, line_no);
  }
}

}  // namespace

std::string to_bfile(const SequenceSlice& s) {
  std::string out;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    out += std::to_string(s.offset + static_cast<std::int64_t>(i));
    out += ' ';
    out += s.terms[i].get_str();
    out += '\n';
  }
  return out;
}

std::string to_plain(const SequenceSlice& s) {
  std::string out;
  for (const auto& t : s.terms) {
    out += t.get_str();
    out += '\n';
  }
  return out;
}

SequenceSlice parse_bfile(std::string_view text) {
  SequenceSlice out;
  bool first = true;
  for_each_data_line(text, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'n a(n)'");
    }
    const Integer index = parse_integer(f[0], line_no);
    if (!index.fits_slong_p()) throw ParseError("line " + std::to_string(line_no) + ": index out of range");
    const std::int64_t n = index.get_si();
    if (first) {
      out.offset = n;
      first = false;
    } else if (n != out.end_index()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected index " +
                       std::to_string(out.end_index()) + ", got " + std::to_string(n));
    }
    out.terms.push_back(parse_integer(f[1], line_no));
  });
  if (first) throw ParseError("no terms found");
  return out;
}

SequenceSlice parse_terms(std::string_view text) {
  std::size_t width = 0;
  for_each_data_line(text, [&](const std::vector<std::string_view>& f, std::size_t) {
    if (width == 0) width = f.size();
  });
  if (width == 0) throw ParseError("no terms found");
  if (width == 2) return parse_bfile(text);
  if (width != 1) throw ParseError("expected one or two fields per line");

  SequenceSlice out;
  for_each_data_line(text, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 1) throw ParseError("line " + std::to_string(line_no) + ": expected a single integer");
    out.terms.push_back(parse_integer(f[0], line_no));
  });
  return out;
}

SequenceSlice read_terms_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_terms(buf.str());
}

}  // namespace multider
