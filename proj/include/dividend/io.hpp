#ifndef DIVIDEND_IO_HPP
#define DIVIDEND_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "dividend/model.hpp"

namespace dividend {

enum class DataMode { frequency, knn };

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column position by name, or -1.
  int column(const std::string& name) const;
};

// Headered, comma-separated UTF-8; double quotes may enclose a field.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

// Frequency columns: id,bin,label[,coalition].
// k-NN columns: id,label[,coalition],f0..fd.
Dataset parse_dataset(const std::string& path, DataMode mode);
Dataset dataset_from_csv(const CsvTable& table, DataMode mode);

// Frequency columns: bin,label[,value_function]; the optional column holds a
// value-function file path, relative to the query file, that overrides the
// run default for that query. k-NN columns: label,f0..fd.
// Override value functions are appended to `value_functions`.
std::vector<Query> parse_queries(const std::string& path, DataMode mode,
                                 std::vector<FrequencyValueFunction>* value_functions);

FrequencyValueFunction parse_value_function(const std::string& path);
FrequencyValueFunction value_function_from_json(const nlohmann::json& doc);

// Two columns id,coalition.
CoalitionStructure parse_coalitions(const std::string& path);

// "vc,vw,vn".
OutcomeValues parse_outcome_values(const std::string& text);

}  // namespace dividend

#endif  // DIVIDEND_IO_HPP
