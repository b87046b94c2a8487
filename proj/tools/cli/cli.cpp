#include "cli/cli.hpp"

#include <fstream>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multider/derange.hpp"
#include "multider/holonomic.hpp"
#include "multider/oeis.hpp"
#include "multider/sequence.hpp"

namespace multider::cli {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { plain, bfile, structured };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json integers_json(std::span<const unsigned> v) {
  Json a = Json::array();
  for (const auto x : v) a.push_back(x);
  return a;
}

Json terms_json(const SequenceSlice& s) {
  Json a = Json::array();
  for (const auto& t : s.terms) a.push_back(t.get_str());
  return a;
}

void emit_single(std::ostream& out, Format format, std::int64_t index, const Integer& value, Json doc) {
  switch (format) {
    case Format::plain: out << value.get_str() << '\n'; break;
    case Format::bfile: out << index << ' ' << value.get_str() << '\n'; break;
    case Format::structured: out << doc.dump(2) << '\n'; break;
  }
}

void emit_count(std::ostream& out, Format format, const Multiset& m, const char* command) {
  const auto count = multiset_derangement(m);
  Json doc;
  doc["command"] = command;
  doc["multiset"] = integers_json(m.multiplicities());
  doc["value"] = count.value.get_str();
  doc["total_arrangements"] = total_arrangements(m).get_str();
  emit_single(out, format, static_cast<std::int64_t>(m.symbols()), count.value, std::move(doc));
}

void reject_bfile(Format format, const char* command) {
  if (format == Format::bfile) throw UsageError(std::string(command) + " has no b-file output");
}

struct TableArgs {
  std::string fixed;
  unsigned value = 0;
  unsigned upto = 0;
  unsigned seed = 160;
  unsigned max_order = 12;
  unsigned max_degree = 12;
  unsigned holdout = 10;
  bool direct_only = false;
  bool no_fallback = false;
  std::string recurrence_out;
};

Direction parse_direction(const std::string& fixed) { return fixed == "k" ? Direction::fixed_k : Direction::fixed_n; }

int cmd_table(const TableArgs& a, Format format, std::ostream& out, std::ostream& err) {
  const Direction dir = parse_direction(a.fixed);
  SequenceSlice slice;
  std::optional<Recurrence> rec;
  std::string method = "direct";

  if (!a.direct_only && a.upto >= a.seed) {
    ExtensionOptions options;
    options.guess.max_order = a.max_order;
    options.guess.max_degree = a.max_degree;
    options.holdout = a.holdout;
    try {
      auto ext = guess_and_extend_uniform(dir, a.value, a.seed, a.upto, options);
      slice = std::move(ext.slice);
      rec = std::move(ext.recurrence);
      method = "recurrence";
    } catch (const std::exception& e) {
      if (a.no_fallback) {
        err << "table: " << e.what() << '\n';
        return kComputation;
      }
      err << "table: " << e.what() << "; falling back to direct evaluation\n";
    }
  }
  if (method == "direct") slice = direct_uniform(dir, a.value, a.upto);

  if (rec) {
    if (!a.recurrence_out.empty()) {
      std::ofstream f(a.recurrence_out, std::ios::binary | std::ios::trunc);
      f << rec->serialize() << '\n';
      if (!f) throw UsageError("cannot write " + a.recurrence_out);
    } else {
      err << "# " << rec->render() << '\n' << rec->serialize() << '\n';
    }
  }

  switch (format) {
    case Format::plain: out << to_plain(slice); break;
    case Format::bfile: out << to_bfile(slice); break;
    case Format::structured: {
      Json doc;
      doc["command"] = "table";
      doc["fixed"] = a.fixed;
      doc["value"] = a.value;
      doc["method"] = method;
      doc["offset"] = slice.offset;
      doc["terms"] = terms_json(slice);
      doc["recurrence"] = rec ? Json::parse(rec->serialize()) : Json(nullptr);
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return kOk;
}

struct GuessArgs {
  std::string terms_file;
  unsigned max_order = 12;
  unsigned max_degree = 12;
  unsigned margin = 10;
};

int cmd_guess(const GuessArgs& a, Format format, std::ostream& out, std::ostream& err) {
  SequenceSlice s;
  try {
    s = read_terms_file(a.terms_file);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  std::optional<Recurrence> rec;
  try {
    rec = guess_recurrence(s, {a.max_order, a.max_degree, a.margin});
  } catch (const InsufficientData& e) {
    err << "guess: " << e.what() << " (max order " << a.max_order << ", max degree " << a.max_degree
        << ", margin " << a.margin << ")\n";
    return kComputation;
  }
  if (!rec) {
    out << "no recurrence found: searched order <= " << a.max_order << ", degree <= " << a.max_degree
        << " over " << s.terms.size() << " terms (offset " << s.offset << ")\n";
    return kComputation;
  }
  if (format != Format::structured) out << rec->render() << '\n';
  out << rec->serialize() << '\n';
  return kOk;
}

struct OeisArgs {
  std::string id;
  std::string fixed;
  unsigned value = 0;
  unsigned count = 0;
  bool online = false;
  std::string cache_dir;
};

int cmd_oeis_check(const OeisArgs& a, Format format, std::ostream& out) {
  reject_bfile(format, "oeis-check");
  if (!is_valid_sequence_id(a.id)) throw UsageError("malformed OEIS id '" + a.id + "'");
  if (a.count == 0) throw UsageError("--count must be positive");

  OeisConfig config = OeisConfig::from_environment();
  if (!a.cache_dir.empty()) config.cache_dir = a.cache_dir;
  if (a.online) config.online = true;
  OeisClient client(config);

  const SequenceSlice local = direct_uniform(parse_direction(a.fixed), a.value, a.count - 1);
  OeisReport report;
  try {
    report = client.cross_check(local, a.id);
  } catch (const ParseError& e) {
    out << a.id << ": malformed remote data: " << e.what() << '\n';
    return kRemote;
  }

  if (format == Format::structured) {
    Json doc;
    doc["command"] = "oeis-check";
    doc["sequence_id"] = report.sequence_id;
    doc["verdict"] = std::string(to_string(report.verdict));
    doc["compared"] = report.compared;
    doc["mismatch_index"] = report.mismatch_index ? Json(*report.mismatch_index) : Json(nullptr);
    doc["local_offset"] = report.local_offset;
    doc["remote_offset"] = report.remote_offset ? Json(*report.remote_offset) : Json(nullptr);
    if (!report.detail.empty()) doc["detail"] = report.detail;
    out << doc.dump(2) << '\n';
  } else {
    out << report.sequence_id << ": " << to_string(report.verdict);
    if (report.mismatch_index) out << " at n=" << *report.mismatch_index;
    if (report.remote_offset) {
      out << " (" << report.compared << " terms compared; local offset " << report.local_offset
          << ", remote offset " << *report.remote_offset << ")";
    }
    if (!report.detail.empty()) out << " (" << report.detail << ")";
    out << '\n';
  }
  switch (report.verdict) {
    case Verdict::match:
    case Verdict::offline: return kOk;
    case Verdict::mismatch: return kMismatch;
    case Verdict::not_found: return kRemote;
  }
  return kOk;
}

}  // namespace

std::string decimal_approximation(const Rational& q, int significant) {
  if (sgn(q) == 0) return "0";
  const bool negative = sgn(q) < 0;
  const Integer a = abs(q.get_num());
  const Integer& b = q.get_den();

  // e = floor(log10(a / b))
  long e = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 10)) - static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 10)) + 1;
  auto pow10 = [](unsigned long k) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, k);
    return p;
  };
  auto at_least = [&](long exp) {  // a / b >= 10^exp
    return exp >= 0 ? a >= b * pow10(static_cast<unsigned long>(exp)) : a * pow10(static_cast<unsigned long>(-exp)) >= b;
  };
  while (!at_least(e)) --e;
  while (at_least(e + 1)) ++e;

  long scale = significant - 1 - e;  // digits after the decimal point
  auto rounded = [&](long k) {
    Integer num = a;
    Integer den = b;
    if (k >= 0) {
      num *= pow10(static_cast<unsigned long>(k));
    } else {
      den *= pow10(static_cast<unsigned long>(-k));
    }
    Integer r = (2 * num + den) / (2 * den);
    return r;
  };
  Integer digits = rounded(scale);
  if (digits >= pow10(static_cast<unsigned long>(significant))) {
    --scale;
    digits = rounded(scale);
  }

  std::string s = digits.get_str();
  if (scale <= 0) {
    s.append(static_cast<std::size_t>(-scale), '0');
  } else {
    if (s.size() <= static_cast<std::size_t>(scale)) s.insert(0, static_cast<std::size_t>(scale) - s.size() + 1, '0');
    s.insert(s.size() - static_cast<std::size_t>(scale), ".");
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return negative ? "-" + s : s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counts of multiset derangements, recurrence-accelerated sequence tables, and OEIS cross-checks",
               "multider"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Exit status: 0 success/match/offline, 2 usage error, 3 computation error,\n"
      "4 OEIS mismatch, 5 OEIS sequence unknown or malformed remote data.");

  std::string format_name = "plain";
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"plain", "bfile", "structured"}));

  unsigned derange_n = 0;
  auto* derange = app.add_subcommand("derange", "Derangements of n distinct cards (D_0 = 1)");
  derange->add_option("n", derange_n, "Number of cards")->required();

  std::vector<unsigned> multi_args;
  auto* multi = app.add_subcommand("multi", "Derangements of the multiset 1^a_1 ... n^a_n");
  multi->add_option("multiplicities", multi_args, "a_1 ... a_n")->required()->check(CLI::Range(1u, 1000000u));

  auto* deck = app.add_subcommand("deck", "Derangements of a 52-card deck ignoring suits (4 x 13)");

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "F[n](k) along one axis, via guessed recurrence or directly");
  table->add_option("--fixed", table_args.fixed, "Which parameter is held fixed")
      ->required()
      ->check(CLI::IsMember({"k", "n"}));
  table->add_option("--value", table_args.value, "Value of the fixed parameter")->required();
  table->add_option("--upto", table_args.upto, "Last index")->required();
  table->add_option("--seed", table_args.seed, "Directly computed seed terms")->capture_default_str();
  table->add_option("--max-order", table_args.max_order, "Recurrence order cap")->capture_default_str();
  table->add_option("--max-degree", table_args.max_degree, "Coefficient degree cap")->capture_default_str();
  table->add_option("--holdout", table_args.holdout, "Seed terms hidden from the guesser")->capture_default_str();
  table->add_flag("--direct-only", table_args.direct_only, "Evaluate every term directly");
  table->add_flag("--no-fallback", table_args.no_fallback, "Fail instead of falling back to direct evaluation");
  table->add_option("--recurrence-out", table_args.recurrence_out,
                    "Write the recurrence here instead of the error stream");

  std::vector<unsigned> prob_args;
  auto* prob = app.add_subcommand("prob", "Probability that a random arrangement is a derangement");
  prob->add_option("multiplicities", prob_args, "a_1 ... a_n")->required()->check(CLI::Range(1u, 1000000u));

  GuessArgs guess_args;
  auto* guess = app.add_subcommand("guess", "Guess a P-recursive recurrence from a terms file");
  guess->add_option("--terms-file", guess_args.terms_file, "Plain or b-file terms")->required();
  guess->add_option("--max-order", guess_args.max_order, "Order cap")->capture_default_str();
  guess->add_option("--max-degree", guess_args.max_degree, "Degree cap")->capture_default_str();
  guess->add_option("--margin", guess_args.margin, "Extra equations beyond the unknown count")
      ->capture_default_str();

  OeisArgs oeis_args;
  auto* oeis = app.add_subcommand("oeis-check", "Compare local F-terms with an OEIS b-file");
  oeis->add_option("--id", oeis_args.id, "Sequence id, e.g. A000166")->required();
  oeis->add_option("--fixed", oeis_args.fixed, "Which parameter is held fixed")
      ->required()
      ->check(CLI::IsMember({"k", "n"}));
  oeis->add_option("--value", oeis_args.value, "Value of the fixed parameter")->required();
  oeis->add_option("--count", oeis_args.count, "Number of local terms, from index 0")->required();
  oeis->add_flag("--online", oeis_args.online, "Allow network access (MULTIDER_OFFLINE=1 overrides)");
  oeis->add_option("--cache-dir", oeis_args.cache_dir, "b-file cache / fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  const Format format = format_name == "bfile"        ? Format::bfile
                        : format_name == "structured" ? Format::structured
                                                      : Format::plain;
  try {
    if (*derange) {
      Json doc;
      doc["command"] = "derange";
      doc["n"] = derange_n;
      const Integer d = classic_derangement(derange_n);
      doc["value"] = d.get_str();
      emit_single(out, format, derange_n, d, std::move(doc));
      return kOk;
    }
    if (*multi) {
      emit_count(out, format, Multiset(multi_args), "multi");
      return kOk;
    }
    if (*deck) {
      emit_count(out, format, Multiset::uniform(13, 4), "deck");
      return kOk;
    }
    if (*table) return cmd_table(table_args, format, out, err);
    if (*prob) {
      reject_bfile(format, "prob");
      const Multiset m(prob_args);
      const Rational p = wrong_rank_probability(m);
      const std::string approx = decimal_approximation(p);
      if (format == Format::structured) {
        Json doc;
        doc["command"] = "prob";
        doc["multiset"] = integers_json(m.multiplicities());
        doc["probability"] = p.get_str();
        doc["decimal"] = approx;
        doc["derangements"] = multiset_derangement(m).value.get_str();
        doc["total_arrangements"] = total_arrangements(m).get_str();
        out << doc.dump(2) << '\n';
      } else {
        out << p.get_str() << " ≈ " << approx << '\n';
      }
      return kOk;
    }
    if (*guess) return cmd_guess(guess_args, format, out, err);
    if (*oeis) return cmd_oeis_check(oeis_args, format, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
  return kUsage;
}

}  // namespace multider::cli
