#include "analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "io.hpp"
#include "unicode.hpp"

namespace sdglens::analytics {

using nlohmann::ordered_json;
using parse::Directionality;
using parse::Relationship;

std::map<std::string, double> country_zscores(const std::map<std::string, double>& means) {
  if (means.empty()) throw ValidationError("z-scores need at least one country");
  const auto n = static_cast<double>(means.size());
  double mu = 0.0;
  for (const auto& [_, m] : means) mu += m;
  mu /= n;
  double var = 0.0;
  for (const auto& [_, m] : means) var += (m - mu) * (m - mu);
  const double sigma = std::sqrt(var / n);
  std::map<std::string, double> z;
  for (const auto& [c, m] : means) z[c] = sigma > 0.0 ? (m - mu) / sigma : 0.0;
  return z;
}

std::vector<CountryScore> country_scores(const std::vector<std::pair<std::string, double>>& paragraph_values) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [country, value] : paragraph_values) {
    auto& [sum, n] = acc[country];
    sum += value;
    ++n;
  }
  std::vector<CountryScore> out;
  if (acc.empty()) return out;
  std::map<std::string, double> means;
  for (const auto& [c, a] : acc) means[c] = a.first / static_cast<double>(a.second);
  const auto z = country_zscores(means);
  for (const auto& [c, a] : acc) out.push_back({c, means.at(c), z.at(c), a.second});
  return out;
}

std::map<std::string, CategoryShares> category_shares(const std::vector<std::pair<std::string, SdgId>>& assignments) {
  std::map<std::string, std::array<std::size_t, 3>> counts;
  for (const auto& [country, sdg] : assignments) {
    if (sdg == SdgId::none()) throw ValidationError("category shares: SDG 0 must be excluded upstream");
    ++counts[country][static_cast<std::size_t>(category_of(sdg))];
  }
  std::map<std::string, CategoryShares> out;
  for (const auto& [country, c] : counts) {
    const std::size_t n = c[0] + c[1] + c[2];
    const auto frac = [n](std::size_t k) { return static_cast<double>(k) / static_cast<double>(n); };
    auto& s = out[country];
    s.environment = frac(c[static_cast<std::size_t>(SdgCategory::kEnvironment)]);
    s.society = frac(c[static_cast<std::size_t>(SdgCategory::kSociety)]);
    s.economy = frac(c[static_cast<std::size_t>(SdgCategory::kEconomy)]);
    s.n = n;
  }
  return out;
}

EvalReport match_rate(const LabelMap& predictions, const LabelMap& gold) {
  for (const auto& [item, _] : predictions) {
    if (!gold.contains(item)) throw ValidationError("prediction for unknown gold item \"" + item + "\"");
  }
  for (const auto& [item, _] : gold) {
    if (!predictions.contains(item)) throw ValidationError("no prediction for gold item \"" + item + "\"");
  }
  EvalReport r;
  r.n_items = gold.size();
  std::size_t hits = 0, gold_total = 0, pred_total = 0;
  for (const auto& [item, g] : gold) {
    if (g.empty() || g.size() > 2) throw ValidationError("gold item \"" + item + "\" must carry one or two SDGs");
    if (g.contains(SdgId::none())) throw ValidationError("gold item \"" + item + "\" uses SDG 0");
    const auto& p = predictions.at(item);
    for (const auto& s : g) {
      auto& e = r.per_sdg[static_cast<std::size_t>(s.value() - 1)];
      ++e.gold_count;
      if (p.contains(s)) {
        ++e.hits;
        ++hits;
      }
    }
    for (const auto& s : p) {
      if (s == SdgId::none()) continue;
      ++r.per_sdg[static_cast<std::size_t>(s.value() - 1)].predicted_count;
      ++pred_total;
    }
    gold_total += g.size();
  }
  r.match_rate = gold_total ? static_cast<double>(hits) / static_cast<double>(gold_total) : 0.0;
  r.precision = pred_total ? static_cast<double>(hits) / static_cast<double>(pred_total) : 0.0;
  for (auto& e : r.per_sdg) {
    if (e.gold_count) e.recall = static_cast<double>(e.hits) / static_cast<double>(e.gold_count);
    e.bias = static_cast<long long>(e.predicted_count) - static_cast<long long>(e.gold_count);
  }
  return r;
}

namespace {

// "13", "SDG 13", "13.2", "13.a" -> 13; sets `coarse` for target codes.
SdgId parse_gold_sdg(std::string_view field, bool& coarse, std::size_t row) {
  auto s = unicode::trim(field);
  if (s.size() >= 3 && (s.substr(0, 3) == "SDG" || s.substr(0, 3) == "sdg")) s = unicode::trim(s.substr(3));
  coarse = false;
  const auto dot = s.find('.');
  if (dot != std::string_view::npos) {
    coarse = true;
    s = s.substr(0, dot);
  }
  int value = -1;
  if (!s.empty() && s.size() <= 2 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    value = std::stoi(std::string(s));
  }
  const auto id = SdgId::try_from(value);
  if (!id || *id == SdgId::none()) {
    throw ValidationError("gold row " + std::to_string(row) + ": invalid SDG \"" + std::string(field) + "\"");
  }
  return *id;
}

}  // namespace

GoldSet parse_gold_csv(std::string_view content) {
  const auto rows = io::parse_csv(content);
  if (rows.empty()) throw ValidationError("gold CSV is empty");
  const std::vector<std::string> expected{"item_id", "sdg_a", "sdg_b", "type"};
  if (rows[0] != expected) throw ValidationError("gold CSV header must be item_id,sdg_a,sdg_b,type");
  GoldSet gold;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 4) throw ValidationError("gold row " + std::to_string(i) + ": expected 4 fields");
    if (row[0].empty()) throw ValidationError("gold row " + std::to_string(i) + ": empty item_id");
    if (gold.labels.contains(row[0])) throw ValidationError("gold row " + std::to_string(i) + ": duplicate item_id");
    std::set<SdgId> set;
    bool coarse = false;
    set.insert(parse_gold_sdg(row[1], coarse, i));
    gold.coarsened += coarse;
    if (!unicode::trim(row[2]).empty()) {
      set.insert(parse_gold_sdg(row[2], coarse, i));
      gold.coarsened += coarse;
    }
    const auto type = unicode::fold_case(unicode::trim(row[3]));
    if (!type.empty() && type != "synergy" && type != "tradeoff") {
      throw ValidationError("gold row " + std::to_string(i) + ": type must be synergy or tradeoff");
    }
    gold.labels.emplace(row[0], std::move(set));
    gold.type.emplace(row[0], type);
  }
  return gold;
}

GoldSet load_gold_csv(const std::filesystem::path& path) { return parse_gold_csv(io::read_file(path)); }

void InterlinkageGraph::add(const parse::InterlinkageRecord& r) {
  const int a = r.sdg_a.value(), b = r.sdg_b.value();
  if (r.relationship == Relationship::kNeutral) {
    ++neutral_[{std::min(a, b), std::max(a, b)}];
    return;
  }
  auto& w = weights_[r.relationship == Relationship::kSynergy ? 0 : 1];
  const auto ai = static_cast<std::size_t>(a - 1), bi = static_cast<std::size_t>(b - 1);
  if (r.directionality == Directionality::kOutward || r.directionality == Directionality::kBoth) ++w[ai][bi];
  if (r.directionality == Directionality::kInward || r.directionality == Directionality::kBoth) ++w[bi][ai];
}

std::size_t InterlinkageGraph::weight(int from, int to, Relationship relationship) const {
  if (relationship == Relationship::kNeutral) return 0;
  return weights_[relationship == Relationship::kSynergy ? 0 : 1][static_cast<std::size_t>(from - 1)]
                 [static_cast<std::size_t>(to - 1)];
}

std::size_t InterlinkageGraph::neutral_count(int a, int b) const {
  const auto it = neutral_.find({std::min(a, b), std::max(a, b)});
  return it == neutral_.end() ? 0 : it->second;
}

std::size_t InterlinkageGraph::total_weight() const {
  std::size_t total = 0;
  for (const auto& rel : weights_) {
    for (const auto& row : rel) total = std::accumulate(row.begin(), row.end(), total);
  }
  return total;
}

std::vector<Edge> InterlinkageGraph::edges() const {
  std::vector<Edge> out;
  for (int a = 1; a <= kSdgCount; ++a) {
    for (int b = 1; b <= kSdgCount; ++b) {
      for (auto rel : {Relationship::kSynergy, Relationship::kTradeoff}) {
        if (const auto w = weight(a, b, rel)) out.push_back({a, b, rel, w});
      }
    }
  }
  return out;
}

InterlinkageGraph build_interlinkage_graph(const std::vector<parse::InterlinkageRecord>& records) {
  InterlinkageGraph g;
  for (const auto& r : records) g.add(r);
  return g;
}

std::string zscores_csv(const std::vector<CountryScore>& scores) {
  std::string out = io::csv_row({"country", "mean_sentiment", "z", "n_paragraphs"});
  for (const auto& s : scores) {
    out += io::csv_row({s.country, io::format_double(s.mean_sentiment), io::format_double(s.z),
                        std::to_string(s.n_paragraphs)});
  }
  return out;
}

std::string shares_csv(const std::map<std::string, CategoryShares>& shares) {
  std::string out = io::csv_row({"country", "environment", "society", "economy", "n_assignments"});
  for (const auto& [c, s] : shares) {
    out += io::csv_row({c, io::format_double(s.environment), io::format_double(s.society),
                        io::format_double(s.economy), std::to_string(s.n)});
  }
  return out;
}

std::string edges_csv(const InterlinkageGraph& graph) {
  std::string out = io::csv_row({"a", "b", "relationship", "weight"});
  for (const auto& e : graph.edges()) {
    out += io::csv_row({std::to_string(e.from), std::to_string(e.to), std::string(parse::relationship_name(e.relationship)),
                        std::to_string(e.weight)});
  }
  return out;
}

std::string bias_csv(const std::optional<EvalReport>& eval) {
  std::string out = io::csv_row({"sdg", "gold_count", "predicted_count", "recall", "bias"});
  if (!eval) return out;
  for (int i = 0; i < kSdgCount; ++i) {
    const auto& e = eval->per_sdg[static_cast<std::size_t>(i)];
    out += io::csv_row({std::to_string(i + 1), std::to_string(e.gold_count), std::to_string(e.predicted_count),
                        e.recall ? io::format_double(*e.recall) : std::string(), std::to_string(e.bias)});
  }
  return out;
}

namespace {

ordered_json num(double x) { return ordered_json::parse(io::format_double(x)); }

ordered_json eval_to_json(const EvalReport& eval) {
  ordered_json j;
  j["match_rate"] = num(eval.match_rate);
  j["precision"] = num(eval.precision);
  j["n_items"] = eval.n_items;
  ordered_json per = ordered_json::array();
  for (int i = 0; i < kSdgCount; ++i) {
    const auto& e = eval.per_sdg[static_cast<std::size_t>(i)];
    per.push_back({{"sdg", i + 1},
                   {"gold_count", e.gold_count},
                   {"predicted_count", e.predicted_count},
                   {"recall", e.recall ? num(*e.recall) : ordered_json(nullptr)},
                   {"bias", e.bias}});
  }
  j["per_sdg"] = std::move(per);
  return j;
}

}  // namespace

std::string eval_json(const EvalReport& eval, int indent) { return eval_to_json(eval).dump(indent); }

std::string report_json(const ReportInputs& in) {
  ordered_json j;
  ordered_json scores = ordered_json::array();
  for (const auto& s : in.scores) {
    scores.push_back({{"country", s.country},
                      {"mean_sentiment", num(s.mean_sentiment)},
                      {"z", num(s.z)},
                      {"n_paragraphs", s.n_paragraphs}});
  }
  j["country_zscores"] = std::move(scores);
  ordered_json shares = ordered_json::array();
  for (const auto& [c, s] : in.shares) {
    shares.push_back({{"country", c},
                      {"environment", num(s.environment)},
                      {"society", num(s.society)},
                      {"economy", num(s.economy)},
                      {"n_assignments", s.n}});
  }
  j["category_shares"] = std::move(shares);
  ordered_json edges = ordered_json::array();
  for (const auto& e : in.graph.edges()) {
    edges.push_back({{"a", e.from}, {"b", e.to}, {"relationship", parse::relationship_name(e.relationship)}, {"weight", e.weight}});
  }
  j["interlinkage_edges"] = std::move(edges);
  ordered_json neutral = ordered_json::array();
  for (const auto& [pair, n] : in.graph.neutral_tally()) {
    neutral.push_back({{"a", pair.first}, {"b", pair.second}, {"count", n}});
  }
  j["neutral_pairs"] = std::move(neutral);
  j["eval"] = in.eval ? eval_to_json(*in.eval) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

void export_report(const std::filesystem::path& dir, const ReportInputs& inputs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory " + dir.string() + ": " + ec.message());
  io::write_file_atomic(dir / "country_zscores.csv", zscores_csv(inputs.scores));
  io::write_file_atomic(dir / "category_shares.csv", shares_csv(inputs.shares));
  io::write_file_atomic(dir / "interlinkage_edges.csv", edges_csv(inputs.graph));
  io::write_file_atomic(dir / "sdg_bias.csv", bias_csv(inputs.eval));
  io::write_file_atomic(dir / "report.json", report_json(inputs));
}

}  // namespace sdglens::analytics
