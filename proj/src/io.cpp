#include "dividend/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dividend {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  if (quoted) throw InputError("unterminated quote on line " + std::to_string(line_no));
  fields.push_back(trim(field));
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double parse_number(const std::string& text, const std::string& what) {
  double value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw InputError("invalid number '" + text + "' for " + what);
  }
  return value;
}

ExampleId parse_id(const std::string& text) {
  ExampleId id = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc() || ptr != text.data() + text.size() || id < 0) {
    throw InputError("invalid example id '" + text + "'");
  }
  return id;
}

std::vector<int> feature_columns(const CsvTable& table) {
  std::vector<int> cols;
  for (int d = 0;; ++d) {
    const int c = table.column("f" + std::to_string(d));
    if (c < 0) break;
    cols.push_back(c);
  }
  if (cols.empty()) throw InputError("k-NN input needs feature columns f0..fd");
  return cols;
}

int require_column(const CsvTable& table, const std::string& name) {
  const int c = table.column(name);
  if (c < 0) throw InputError("missing required column '" + name + "'");
  return c;
}

Eigen::VectorXd read_features(const std::vector<std::string>& row,
                              const std::vector<int>& cols, std::size_t row_no) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t d = 0; d < cols.size(); ++d) {
    if (row[cols[d]].empty()) {
      throw InputError("feature dimension mismatch: row " + std::to_string(row_no) +
                       " has an empty feature f" + std::to_string(d));
    }
    x[static_cast<Eigen::Index>(d)] =
        parse_number(row[cols[d]], "feature f" + std::to_string(d));
  }
  return x;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_record(line, line_no);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InputError("dimension mismatch: line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw InputError("CSV input has no header row");
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

Dataset dataset_from_csv(const CsvTable& table, DataMode mode) {
  Dataset data;
  const int id_col = require_column(table, "id");
  const int label_col = require_column(table, "label");
  const int coalition_col = table.column("coalition");
  const int bin_col = mode == DataMode::frequency ? require_column(table, "bin") : -1;
  const std::vector<int> fcols =
      mode == DataMode::knn ? feature_columns(table) : std::vector<int>{};
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    InSampleExample e;
    e.id = parse_id(row[id_col]);
    e.label = row[label_col];
    if (e.label.empty()) throw InputError("empty label for example " + row[id_col]);
    if (coalition_col >= 0 && !row[coalition_col].empty()) e.coalition = row[coalition_col];
    if (bin_col >= 0) e.bin = row[bin_col];
    if (!fcols.empty()) e.features = read_features(row, fcols, r + 1);
    data.examples.push_back(std::move(e));
  }
  if (mode == DataMode::frequency) {
    data.validate_frequency();
  } else {
    data.validate_knn();
  }
  return data;
}

Dataset parse_dataset(const std::string& path, DataMode mode) {
  return dataset_from_csv(read_csv(path), mode);
}

std::vector<Query> parse_queries(const std::string& path, DataMode mode,
                                 std::vector<FrequencyValueFunction>* value_functions) {
  const CsvTable table = read_csv(path);
  const int label_col = require_column(table, "label");
  std::vector<Query> queries;
  if (mode == DataMode::frequency) {
    const int bin_col = require_column(table, "bin");
    const int vf_col = table.column("value_function");
    std::map<std::string, std::size_t> loaded;
    const auto base = std::filesystem::path(path).parent_path();
    for (const auto& row : table.rows) {
      Query q;
      q.bin = row[bin_col];
      q.label = row[label_col];
      if (vf_col >= 0 && !row[vf_col].empty()) {
        if (!value_functions) throw InputError("per-query value functions not supported here");
        auto it = loaded.find(row[vf_col]);
        if (it == loaded.end()) {
          value_functions->push_back(parse_value_function((base / row[vf_col]).string()));
          it = loaded.emplace(row[vf_col], value_functions->size() - 1).first;
        }
        q.value_function = it->second;
      }
      queries.push_back(std::move(q));
    }
  } else {
    const std::vector<int> fcols = feature_columns(table);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      Query q;
      q.label = table.rows[r][label_col];
      q.features = read_features(table.rows[r], fcols, r + 1);
      queries.push_back(std::move(q));
    }
  }
  return queries;
}

FrequencyValueFunction value_function_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.empty()) throw InputError("value function document is empty");
  auto number = [](const nlohmann::json& node, const std::string& what) {
    if (!node.is_number()) throw InputError("value function field '" + what + "' is not numeric");
    return node.get<double>();
  };
  const auto family = doc.value("family", std::string{});
  if (family == "majority") {
    for (const char* key : {"correct", "wrong", "none"}) {
      if (!doc.contains(key)) throw InputError(std::string("majority value function needs '") + key + "'");
    }
    return FrequencyValueFunction::majority(number(doc["correct"], "correct"),
                                            number(doc["wrong"], "wrong"),
                                            number(doc["none"], "none"));
  }
  if (family == "table") {
    FrequencyValueFunction::Table entries;
    if (doc.contains("entries")) {
      if (!doc["entries"].is_array()) throw InputError("'entries' must be an array");
      for (const auto& entry : doc["entries"]) {
        if (!entry.is_object() || !entry.contains("a") || !entry.contains("b") ||
            !entry.contains("value")) {
          throw InputError("table entries need a, b and value");
        }
        if (!entry["a"].is_number_integer() || !entry["b"].is_number_integer() ||
            entry["a"].get<long>() < 0 || entry["b"].get<long>() < 0) {
          throw InputError("table entry counts must be non-negative integers");
        }
        const std::pair<long, long> key{entry["a"].get<long>(), entry["b"].get<long>()};
        if (!entries.emplace(key, number(entry["value"], "value")).second) {
          throw InputError("duplicate table entry");
        }
      }
    }
    std::optional<Money> fallback;
    if (doc.contains("default")) fallback = number(doc["default"], "default");
    return FrequencyValueFunction::table(std::move(entries), fallback);
  }
  throw InputError("value function family must be 'majority' or 'table'");
}

FrequencyValueFunction parse_value_function(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("cannot parse value function '" + path + "': " + e.what());
  }
  return value_function_from_json(doc);
}

CoalitionStructure parse_coalitions(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int id_col = require_column(table, "id");
  const int c_col = require_column(table, "coalition");
  std::vector<std::pair<CoalitionId, std::vector<ExampleId>>> groups;
  std::unordered_map<CoalitionId, std::size_t> index;
  for (const auto& row : table.rows) {
    auto [it, fresh] = index.try_emplace(row[c_col], groups.size());
    if (fresh) groups.emplace_back(row[c_col], std::vector<ExampleId>{});
    groups[it->second].second.push_back(parse_id(row[id_col]));
  }
  return CoalitionStructure(std::move(groups));
}

OutcomeValues parse_outcome_values(const std::string& text) {
  const auto parts = split_record(text, 1);
  if (parts.size() != 3) throw InputError("--values expects vc,vw,vn");
  return {parse_number(parts[0], "v_correct"), parse_number(parts[1], "v_wrong"),
          parse_number(parts[2], "v_none")};
}

}  // namespace dividend
