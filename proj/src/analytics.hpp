#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "parser.hpp"
#include "sdg.hpp"

namespace sdglens::analytics {

struct CountryScore {
  std::string country;
  double mean_sentiment = 0.0;
  double z = 0.0;
  std::size_t n_paragraphs = 0;
};

// Population mean and standard deviation over countries; sigma = 0 gives
// all-zero z. Throws ValidationError on empty input.
std::map<std::string, double> country_zscores(const std::map<std::string, double>& means);

// Unweighted mean of paragraph expected values per country, then z-scores.
std::vector<CountryScore> country_scores(const std::vector<std::pair<std::string, double>>& paragraph_values);

struct CategoryShares {
  double environment = 0.0;
  double society = 0.0;
  double economy = 0.0;
  std::size_t n = 0;
};

// Throws ValidationError when an SDG 0 entry is present.
std::map<std::string, CategoryShares> category_shares(const std::vector<std::pair<std::string, SdgId>>& assignments);

using LabelMap = std::map<std::string, std::set<SdgId>>;

struct SdgEval {
  std::size_t gold_count = 0;
  std::size_t predicted_count = 0;
  std::size_t hits = 0;
  std::optional<double> recall;  // absent when the SDG never occurs in gold
  long long bias = 0;            // predicted_count - gold_count
};

struct EvalReport {
  double match_rate = 0.0;  // sum |gold & predicted| / sum |gold|
  double precision = 0.0;   // sum |gold & predicted| / sum |predicted|, 0 when nothing predicted
  std::size_t n_items = 0;
  std::array<SdgEval, kSdgCount> per_sdg{};  // index i holds SDG i+1
};

// Gold sets must be non-empty with at most two SDGs; keys must agree exactly.
// SDG 0 in a prediction means "nothing found" and is not counted.
EvalReport match_rate(const LabelMap& predictions, const LabelMap& gold);

struct GoldSet {
  LabelMap labels;
  std::map<std::string, std::string> type;  // item -> synergy|tradeoff
  std::size_t coarsened = 0;                // target codes reduced to goals
};

// CSV with header item_id,sdg_a,sdg_b,type; sdg_b may be empty; "13.2" is
// read as goal 13.
GoldSet parse_gold_csv(std::string_view content);
GoldSet load_gold_csv(const std::filesystem::path& path);

struct Edge {
  int from = 0;
  int to = 0;
  parse::Relationship relationship = parse::Relationship::kSynergy;
  std::size_t weight = 0;
};

class InterlinkageGraph {
 public:
  void add(const parse::InterlinkageRecord& record);

  std::size_t weight(int from, int to, parse::Relationship relationship) const;
  std::size_t neutral_count(int a, int b) const;  // unordered pair
  std::size_t total_weight() const;
  // Non-zero edges ordered by (from, to, relationship).
  std::vector<Edge> edges() const;
  const std::map<std::pair<int, int>, std::size_t>& neutral_tally() const { return neutral_; }

 private:
  // [relationship][from-1][to-1], synergy = 0, tradeoff = 1
  std::array<std::array<std::array<std::size_t, kSdgCount>, kSdgCount>, 2> weights_{};
  std::map<std::pair<int, int>, std::size_t> neutral_;
};

InterlinkageGraph build_interlinkage_graph(const std::vector<parse::InterlinkageRecord>& records);

struct ReportInputs {
  std::vector<CountryScore> scores;
  std::map<std::string, CategoryShares> shares;
  InterlinkageGraph graph;
  std::optional<EvalReport> eval;
};

// Writes country_zscores.csv, category_shares.csv, interlinkage_edges.csv,
// sdg_bias.csv and report.json into `dir`.
void export_report(const std::filesystem::path& dir, const ReportInputs& inputs);

std::string zscores_csv(const std::vector<CountryScore>& scores);
std::string shares_csv(const std::map<std::string, CategoryShares>& shares);
std::string edges_csv(const InterlinkageGraph& graph);
std::string bias_csv(const std::optional<EvalReport>& eval);
std::string report_json(const ReportInputs& inputs);
std::string eval_json(const EvalReport& eval, int indent = 2);

}  // namespace sdglens::analytics
