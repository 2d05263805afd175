#include "dividend/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dividend {

void verify_coalition_totals(const ValueReport& report) {
  for (const auto& c : report.coalitions) {
    if (c.exact) {
      Rational sum(0);
      for (const auto& e : report.examples) {
        if (e.coalition == c.id) sum += Rational(e.exact.value_or("0"));
      }
      if (sum != Rational(*c.exact)) {
        throw std::logic_error("coalition '" + c.id + "' total differs from member sum");
      }
      continue;
    }
    double sum = 0;
    bool any = false;
    for (const auto& e : report.examples) {
      if (e.coalition != c.id) continue;
      sum += e.value;
      any = true;
    }
    // Float totals are summed member by member in report order, so the
    // recomputation must reproduce them bit for bit.
    if ((any || c.value != 0) && sum != c.value) {
      throw std::logic_error("coalition '" + c.id + "' total differs from member sum");
    }
  }
}

nlohmann::ordered_json report_to_json(const ValueReport& report) {
  nlohmann::ordered_json doc;
  auto& meta = doc["meta"];
  meta["method"] = report.meta.method;
  meta["numeric"] = to_string(report.meta.numeric);
  if (report.meta.k) meta["k"] = *report.meta.k;
  meta["query_count"] = report.meta.query_count;
  meta["wall_seconds"] = report.meta.wall_seconds;
  if (!report.meta.extra.empty()) {
    for (const auto& [key, value] : report.meta.extra) meta["extra"][key] = value;
  }
  doc["examples"] = nlohmann::ordered_json::array();
  for (const auto& e : report.examples) {
    nlohmann::ordered_json row;
    row["id"] = e.id;
    row["value"] = e.value;
    if (e.exact) row["exact"] = *e.exact;
    if (e.coalition) row["coalition"] = *e.coalition;
    if (e.standard_error) row["standard_error"] = *e.standard_error;
    doc["examples"].push_back(std::move(row));
  }
  doc["coalitions"] = nlohmann::ordered_json::array();
  for (const auto& c : report.coalitions) {
    nlohmann::ordered_json row;
    row["id"] = c.id;
    row["value"] = c.value;
    if (c.exact) row["exact"] = *c.exact;
    doc["coalitions"].push_back(std::move(row));
  }
  if (report.per_query) {
    doc["per_query"] = nlohmann::ordered_json::array();
    for (const auto& q : *report.per_query) {
      nlohmann::ordered_json row;
      row["values"] = q.values;
      if (!q.exact.empty()) row["exact"] = q.exact;
      doc["per_query"].push_back(std::move(row));
    }
  }
  return doc;
}

ValueReport report_from_json(const nlohmann::ordered_json& doc) {
  ValueReport report;
  const auto& meta = doc.at("meta");
  report.meta.method = meta.at("method").get<std::string>();
  report.meta.numeric = numeric_mode_from_string(meta.at("numeric").get<std::string>());
  if (meta.contains("k")) report.meta.k = meta.at("k").get<int>();
  report.meta.query_count = meta.at("query_count").get<std::size_t>();
  report.meta.wall_seconds = meta.at("wall_seconds").get<double>();
  if (meta.contains("extra")) {
    for (const auto& [key, value] : meta.at("extra").items()) {
      report.meta.extra[key] = value.get<std::string>();
    }
  }
  for (const auto& row : doc.at("examples")) {
    ValueReport::ExampleValue e;
    e.id = row.at("id").get<ExampleId>();
    e.value = row.at("value").get<double>();
    if (row.contains("exact")) e.exact = row.at("exact").get<std::string>();
    if (row.contains("coalition")) e.coalition = row.at("coalition").get<std::string>();
    if (row.contains("standard_error")) {
      e.standard_error = row.at("standard_error").get<double>();
    }
    report.examples.push_back(std::move(e));
  }
  for (const auto& row : doc.at("coalitions")) {
    ValueReport::CoalitionValue c;
    c.id = row.at("id").get<std::string>();
    c.value = row.at("value").get<double>();
    if (row.contains("exact")) c.exact = row.at("exact").get<std::string>();
    report.coalitions.push_back(std::move(c));
  }
  if (doc.contains("per_query")) {
    std::vector<ValueReport::QueryValues> per;
    for (const auto& row : doc.at("per_query")) {
      ValueReport::QueryValues q;
      q.values = row.at("values").get<std::vector<double>>();
      if (row.contains("exact")) q.exact = row.at("exact").get<std::vector<std::string>>();
      per.push_back(std::move(q));
    }
    report.per_query = std::move(per);
  }
  return report;
}

std::string report_to_string(const ValueReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

void write_report(const ValueReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write report to '" + path + "'");
  out << report_to_string(report);
}

ValueReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read report '" + path + "'");
  return report_from_json(nlohmann::ordered_json::parse(in));
}

std::string examples_csv(const ValueReport& report) {
  std::ostringstream out;
  const bool exact = !report.examples.empty() && report.examples.front().exact;
  const bool grouped = !report.examples.empty() && report.examples.front().coalition;
  out << "id,value";
  if (exact) out << ",exact";
  if (grouped) out << ",coalition";
  out << "\n";
  out.precision(17);
  for (const auto& e : report.examples) {
    out << e.id << ',' << e.value;
    if (exact) out << ',' << e.exact.value_or("");
    if (grouped) out << ',' << e.coalition.value_or("");
    out << "\n";
  }
  return out.str();
}

}  // namespace dividend
