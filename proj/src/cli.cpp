#include "dividend/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dividend/freq_owen.hpp"
#include "dividend/freq_shapley.hpp"
#include "dividend/io.hpp"
#include "dividend/knn_owen.hpp"
#include "dividend/knn_shapley.hpp"
#include "dividend/oracle.hpp"
#include "dividend/report.hpp"

namespace dividend {
namespace {

constexpr int kDefaultMaxPlayers = 10;

struct Options {
  std::string data;
  std::string queries;
  std::string out;
  std::string csv;
  std::string numeric = "float";
  bool per_query = false;
  bool check_oracle = false;
  // frequency
  std::string value;
  // coalitions
  std::string coalitions;
  // k-NN
  int k = 0;
  std::string values;
  std::string metric = "euclidean";
  // oracle
  std::string method;
  std::string mode = "frequency";
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  int max_n = kDefaultMaxPlayers;
  bool yes_i_know = false;
};

struct Inputs {
  Dataset data;
  std::vector<Query> queries;
  std::vector<FrequencyValueFunction> vfs;
  KnnConfig knn;
  std::optional<CoalitionStructure> coalitions;
};

Inputs load(const Options& o, DataMode mode, bool with_coalitions) {
  Inputs in;
  in.data = parse_dataset(o.data, mode);
  if (mode == DataMode::frequency) {
    if (o.value.empty()) throw ConfigError("--value is required in frequency mode");
    in.vfs.push_back(parse_value_function(o.value));
  } else {
    validate_k(o.k);
    if (o.values.empty()) throw ConfigError("--values vc,vw,vn is required in k-NN mode");
    in.knn.k = o.k;
    in.knn.values = parse_outcome_values(o.values);
    in.knn.metric = metric_from_name(o.metric);
  }
  in.queries = parse_queries(o.queries, mode, &in.vfs);
  validate_query_labels(in.data, in.queries);
  if (with_coalitions) {
    in.coalitions =
        o.coalitions.empty() ? CoalitionStructure::from_dataset(in.data)
                             : parse_coalitions(o.coalitions);
    in.coalitions->validate(in.data);
  }
  return in;
}

CharacteristicGame game_for(const Inputs& in, DataMode mode) {
  return mode == DataMode::frequency ? frequency_game(in.data, in.queries, in.vfs)
                                     : knn_game(in.data, in.queries, in.knn);
}

OracleGuard guard_for(const Options& o) {
  if (o.max_n > kDefaultMaxPlayers && !o.yes_i_know) {
    throw ConfigError("--max-n above " + std::to_string(kDefaultMaxPlayers) +
                      " requires --yes-i-know");
  }
  OracleGuard guard;
  guard.max_players = o.max_n;
  guard.override = o.yes_i_know;
  return guard;
}

void enforce_player_guard(const Options& o, std::size_t players) {
  if (static_cast<int>(players) > o.max_n) {
    throw GuardRefusal("oracle enumeration refused for " + std::to_string(players) +
                       " examples (limit " + std::to_string(o.max_n) +
                       "); raise --max-n together with --yes-i-know");
  }
}

template <class Scalar>
ValueTable<Scalar> compute(const std::string& method, const Inputs& in,
                           const ReportOptions& ro) {
  if (method == "shapley-freq") {
    return shapley_frequency_values<Scalar>(in.data, in.queries, in.vfs, ro);
  }
  if (method == "owen-freq") {
    return owen_frequency_values<Scalar>(in.data, *in.coalitions, in.queries, in.vfs, ro);
  }
  if (method == "shapley-knn") return knn_shapley_values<Scalar>(in.data, in.queries, in.knn, ro);
  return knn_owen_values<Scalar>(in.data, *in.coalitions, in.queries, in.knn, ro);
}

void emit(const ValueReport& report, const Options& o, std::ostream& out) {
  verify_coalition_totals(report);
  if (o.out.empty()) {
    out << report_to_string(report);
  } else {
    write_report(report, o.out);
  }
  if (!o.csv.empty()) {
    std::ofstream csv(o.csv, std::ios::binary);
    if (!csv) throw InputError("cannot write '" + o.csv + "'");
    csv << examples_csv(report);
  }
}

int run_model(const std::string& method, const Options& o, std::ostream& out,
              std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const DataMode mode = method.ends_with("freq") ? DataMode::frequency : DataMode::knn;
  const bool owen = method.starts_with("owen");
  const Inputs in = load(o, mode, owen);
  // Oracle comparisons are exact by construction.
  const NumericMode numeric =
      o.check_oracle ? NumericMode::exact : numeric_mode_from_string(o.numeric);
  const ReportOptions ro{o.per_query, true};
  const CoalitionStructure* coalitions = in.coalitions ? &*in.coalitions : nullptr;
  const std::optional<int> k = mode == DataMode::knn ? std::optional<int>(o.k) : std::nullopt;

  ValueReport report;
  if (numeric == NumericMode::exact) {
    const auto table = compute<Rational>(method, in, ro);
    if (o.check_oracle) {
      const OracleGuard guard = guard_for(o);
      const CharacteristicGame game = game_for(in, mode);
      std::vector<Rational> expected;
      if (owen) {
        expected = exact_owen_all(game, coalition_players(in.data, *in.coalitions), guard);
      } else {
        enforce_player_guard(o, in.data.size());
        expected = exact_shapley_all(game, guard);
      }
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] != table.totals[i]) {
          err << "error: oracle disagrees for example " << in.data.examples[i].id
              << ": formula " << table.totals[i].str() << ", enumeration "
              << expected[i].str() << "\n";
          return kExitInputError;
        }
      }
    }
    report = build_report(method, numeric, in.data, coalitions, table, in.queries.size(), k);
    if (o.check_oracle) report.meta.extra["oracle_check"] = "agree";
  } else {
    const auto table = compute<double>(method, in, ro);
    report = build_report(method, numeric, in.data, coalitions, table, in.queries.size(), k);
  }
  report.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(report, o, out);
  return kExitOk;
}

int run_oracle(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const DataMode mode = o.mode == "knn" ? DataMode::knn : DataMode::frequency;
  if (o.mode != "knn" && o.mode != "frequency") {
    throw ConfigError("--mode must be frequency or knn");
  }
  const bool owen = o.method == "exact-owen";
  const Inputs in = load(o, mode, owen);
  const CharacteristicGame game = game_for(in, mode);
  const std::optional<int> k = mode == DataMode::knn ? std::optional<int>(o.k) : std::nullopt;
  const CoalitionStructure* coalitions = in.coalitions ? &*in.coalitions : nullptr;

  ValueReport report;
  if (o.method == "mc-shapley") {
    ValueTable<double> table(in.data.size());
    std::vector<double> errors;
    for (int p = 0; p < game.player_count; ++p) {
      const McEstimate est = mc_shapley(game, p, o.samples, o.seed);
      table.totals[p] = est.estimate;
      errors.push_back(est.standard_error);
    }
    report = build_report("oracle", NumericMode::floating, in.data, nullptr, table,
                          in.queries.size(), k);
    for (std::size_t i = 0; i < errors.size(); ++i) {
      report.examples[i].standard_error = errors[i];
    }
    report.meta.extra["samples"] = std::to_string(o.samples);
    report.meta.extra["seed"] = std::to_string(o.seed);
  } else {
    const OracleGuard guard = guard_for(o);
    ValueTable<Rational> table(in.data.size());
    if (owen) {
      table.totals = exact_owen_all(game, coalition_players(in.data, *in.coalitions), guard);
    } else if (o.method == "exact-shapley") {
      enforce_player_guard(o, in.data.size());
      table.totals = exact_shapley_all(game, guard);
    } else {
      throw ConfigError("--method must be exact-shapley, exact-owen or mc-shapley");
    }
    report = build_report("oracle", NumericMode::exact, in.data, coalitions, table,
                          in.queries.size(), k);
  }
  report.meta.extra["oracle_method"] = o.method;
  report.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(report, o, out);
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Dataset CSV")->required();
  cmd->add_option("--queries", o.queries, "Query CSV")->required();
  cmd->add_option("--out", o.out, "Report path (default: standard output)");
  cmd->add_option("--csv", o.csv, "Also write the examples table as CSV");
  cmd->add_option("--numeric", o.numeric, "exact|float")->check(CLI::IsMember({"exact", "float"}));
  cmd->add_flag("--per-query", o.per_query, "Keep the per-query breakdown");
  cmd->add_option("--max-n", o.max_n, "Oracle enumeration limit");
  cmd->add_flag("--yes-i-know", o.yes_i_know, "Allow oracle enumeration above the default limit");
}

void add_frequency(CLI::App* cmd, Options& o) {
  cmd->add_option("--value", o.value, "Value-function JSON");
}

void add_knn(CLI::App* cmd, Options& o) {
  cmd->add_option("--k", o.k, "Neighbours (odd)");
  cmd->add_option("--values", o.values, "v_correct,v_wrong,v_none");
  cmd->add_option("--metric", o.metric, "Distance (euclidean)");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapley and Owen data valuation for frequency rules and k-NN"};
  app.name("dividend");
  app.require_subcommand(1);
  Options o;

  auto* sf = app.add_subcommand("shapley-freq", "Shapley values, frequency rule");
  auto* of = app.add_subcommand("owen-freq", "Owen values, frequency rule");
  auto* sk = app.add_subcommand("shapley-knn", "Shapley values, k-NN");
  auto* ok = app.add_subcommand("owen-knn", "Owen values, k-NN");
  auto* oracle = app.add_subcommand("oracle", "Brute-force and Monte-Carlo reference values");
  for (auto* cmd : {sf, of, sk, ok, oracle}) add_common(cmd, o);
  for (auto* cmd : {sf, of, oracle}) add_frequency(cmd, o);
  for (auto* cmd : {sk, ok, oracle}) add_knn(cmd, o);
  for (auto* cmd : {of, ok, oracle}) {
    cmd->add_option("--coalitions", o.coalitions, "id,coalition CSV (overrides the dataset column)");
  }
  for (auto* cmd : {sf, of, sk, ok}) {
    cmd->add_flag("--check-oracle", o.check_oracle,
                  "Compare against brute-force enumeration (forces exact mode)");
  }
  oracle->add_option("--method", o.method, "exact-shapley|exact-owen|mc-shapley")->required();
  oracle->add_option("--mode", o.mode, "frequency|knn");
  oracle->add_option("--samples", o.samples, "Monte-Carlo samples");
  oracle->add_option("--seed", o.seed, "Monte-Carlo seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (oracle->parsed()) return run_oracle(o, out);
    for (auto* cmd : {sf, of, sk, ok}) {
      if (cmd->parsed()) return run_model(cmd->get_name(), o, out, err);
    }
    err << "error: no subcommand\n";
    return kExitInputError;
  } catch (const GuardRefusal& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuardRefusal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace dividend
