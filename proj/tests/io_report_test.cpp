#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "dividend/freq_shapley.hpp"
#include "dividend/io.hpp"
#include "dividend/report.hpp"
#include "test_support.hpp"

namespace dividend {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("dividend_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

TEST(Csv, QuotesAndBom) {
  const auto t = parse_csv("\xEF\xBB\xBFid,label\n1,\"a, b\"\n\n2,\"say \"\"hi\"\"\"\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"id", "label"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "a, b");
  EXPECT_EQ(t.rows[1][1], "say \"hi\"");
}

TEST(Csv, RaggedRowIsDimensionMismatch) {
  try {
    parse_csv("id,label,bin\n1,a\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension mismatch"), std::string::npos);
  }
}

TEST(Csv, EmptyInput) { EXPECT_THROW(parse_csv(""), InputError); }

TEST(Dataset, FrequencyColumns) {
  const auto d = dataset_from_csv(
      parse_csv("id,bin,label,coalition\n1,b0,y,A\n2,b0,n,\n"), DataMode::frequency);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(*d.examples[0].coalition, "A");
  EXPECT_FALSE(d.examples[1].coalition);
  EXPECT_THROW(dataset_from_csv(parse_csv("id,label\n1,y\n"), DataMode::frequency),
               InputError);
}

TEST(Dataset, KnnColumns) {
  const auto d = dataset_from_csv(parse_csv("id,label,f0,f1\n4,y,1.5,-2\n"), DataMode::knn);
  EXPECT_EQ(d.examples[0].features->size(), 2);
  EXPECT_EQ((*d.examples[0].features)[1], -2.0);
  EXPECT_THROW(dataset_from_csv(parse_csv("id,label,f0\n4,y,abc\n"), DataMode::knn),
               InputError);
  EXPECT_THROW(dataset_from_csv(parse_csv("id,label,f0,f1\n4,y,1,\n"), DataMode::knn),
               InputError);
  EXPECT_THROW(dataset_from_csv(parse_csv("id,label\n4,y\n"), DataMode::knn), InputError);
}

TEST(Dataset, ThirdLabelFromCsv) {
  EXPECT_THROW(dataset_from_csv(parse_csv("id,bin,label\n1,b,x\n2,b,y\n3,b,z\n"),
                                DataMode::frequency),
               InputError);
}

TEST(ValueFunction, Documents) {
  const auto maj = value_function_from_json(
      nlohmann::json::parse(R"({"family":"majority","correct":2,"wrong":-1,"none":0})"));
  EXPECT_TRUE(maj.is_majority());
  EXPECT_EQ(maj(3, 1), 2);
  const auto tab = value_function_from_json(nlohmann::json::parse(
      R"({"family":"table","entries":[{"a":1,"b":0,"value":4}],"default":0})"));
  EXPECT_EQ(tab(1, 0), 4);
  EXPECT_EQ(tab(5, 5), 0);
  EXPECT_THROW(value_function_from_json(nlohmann::json::object()), InputError);
  EXPECT_THROW(value_function_from_json(nlohmann::json::parse(
                   R"({"family":"majority","correct":"x","wrong":-1,"none":0})")),
               InputError);
  EXPECT_THROW(
      value_function_from_json(nlohmann::json::parse(R"({"family":"table","entries":[]})")),
      InputError);
  EXPECT_THROW(value_function_from_json(nlohmann::json::parse(R"({"family":"cubic"})")),
               InputError);
}

TEST(ValueFunction, EmptyFile) {
  TempDir dir;
  EXPECT_THROW(parse_value_function(dir.write("vf.json", "")), InputError);
  EXPECT_THROW(parse_value_function(dir.file("missing.json")), InputError);
}

TEST(Queries, PerQueryValueFunctions) {
  TempDir dir;
  dir.write("a.json", R"({"family":"majority","correct":1,"wrong":-1,"none":0})");
  dir.write("b.json", R"({"family":"majority","correct":5,"wrong":0,"none":0})");
  const auto path = dir.write("q.csv", "bin,label,value_function\nb0,y,a.json\nb0,n,\nb0,y,b.json\nb1,y,a.json\n");
  std::vector<FrequencyValueFunction> vfs = {FrequencyValueFunction::majority(0, 0, 0)};
  const auto qs = parse_queries(path, DataMode::frequency, &vfs);
  ASSERT_EQ(vfs.size(), 3u);
  EXPECT_EQ(qs[0].value_function, 1u);
  EXPECT_EQ(qs[1].value_function, 0u);
  EXPECT_EQ(qs[2].value_function, 2u);
  EXPECT_EQ(qs[3].value_function, 1u);
}

TEST(Coalitions, FromCsv) {
  TempDir dir;
  const auto cs = parse_coalitions(dir.write("c.csv", "id,coalition\n1,A\n2,B\n3,A\n"));
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.groups()[0].second, (std::vector<ExampleId>{1, 3}));
}

TEST(OutcomeValues, Parse) {
  const auto ov = parse_outcome_values("1,-2.5,0");
  EXPECT_EQ(ov.wrong, -2.5);
  EXPECT_THROW(parse_outcome_values("1,2"), InputError);
}

ValueReport sample_report() {
  Dataset d;
  d.examples = {testing::binned(1, "y", "b0", "A"), testing::binned(2, "y", "b0", "B"),
                testing::binned(3, "n", "b0", "A")};
  const std::vector<FrequencyValueFunction> vfs = {
      FrequencyValueFunction::majority(100, -500, 0)};
  ReportOptions ro;
  ro.per_query = true;
  const auto cs = CoalitionStructure::from_dataset(d);
  const auto t =
      shapley_frequency_values<Rational>(d, {testing::bin_query("b0", "y")}, vfs, ro);
  return build_report("shapley-freq", NumericMode::exact, d, &cs, t, 1);
}

TEST(Report, CoalitionTotals) {
  const auto r = sample_report();
  ASSERT_EQ(r.coalitions.size(), 2u);
  EXPECT_EQ(r.coalitions[0].id, "A");
  EXPECT_EQ(*r.coalitions[0].exact, "-50");
  EXPECT_EQ(r.coalitions[0].value, -50);
  EXPECT_NO_THROW(verify_coalition_totals(r));
  auto broken = r;
  broken.coalitions[0].exact = "-49";
  EXPECT_THROW(verify_coalition_totals(broken), std::logic_error);
}

TEST(Report, JsonRoundTrip) {
  const auto r = sample_report();
  const auto doc = report_to_json(r);
  EXPECT_EQ(doc["meta"]["numeric"], "exact");
  EXPECT_EQ(doc["examples"][0]["exact"], "150");
  EXPECT_EQ(report_to_json(report_from_json(doc)), doc);
  TempDir dir;
  write_report(r, dir.file("r.json"));
  EXPECT_EQ(report_to_json(read_report(dir.file("r.json"))), doc);
}

TEST(Report, ExamplesCsv) {
  const auto text = examples_csv(sample_report());
  EXPECT_EQ(text.substr(0, text.find('\n')), "id,value,exact,coalition");
}

}  // namespace
}  // namespace dividend
