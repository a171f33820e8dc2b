#include "tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"
#include "unicode.hpp"

namespace sdglens::tagger {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_word_char(cp)) {
      unicode::append_utf8(current, unicode::to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double SparseVector::norm_squared() const {
  double s = 0.0;
  for (const auto& [_, w] : entries) s += w * w;
  return s;
}

SparseVector SparseVector::scaled(double factor) const {
  SparseVector out = *this;
  for (auto& [_, w] : out.entries) w *= factor;
  return out;
}

double dot(const SparseVector& u, const SparseVector& v) {
  double s = 0.0;
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

namespace {

// sqrt(nu * nv) instead of sqrt(nu) * sqrt(nv): for u == v this is exactly
// |dot| and the ratio is exactly 1.
double cosine_from(double uv, double uu, double vv) {
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(uv / std::sqrt(uu * vv), 0.0, 1.0);
}

}  // namespace

double cosine_similarity(const SparseVector& u, const SparseVector& v) {
  return cosine_from(dot(u, v), u.norm_squared(), v.norm_squared());
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("cosine_similarity: dimension mismatch");
  double uv = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  return cosine_from(uv, uu, vv);
}

TfidfModel TfidfModel::build(std::span<const std::string> corpus) {
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(corpus.size());
  for (const auto& text : corpus) tokens.push_back(tokenize(text));
  return build_from_tokens(tokens);
}

TfidfModel TfidfModel::build_from_tokens(std::span<const std::vector<std::string>> corpus) {
  if (corpus.empty()) throw ValidationError("cannot build a TF-IDF model from an empty corpus");
  TfidfModel m;
  std::set<std::string, std::less<>> terms;
  for (const auto& doc : corpus) terms.insert(doc.begin(), doc.end());
  m.vocabulary_.assign(terms.begin(), terms.end());
  for (std::size_t i = 0; i < m.vocabulary_.size(); ++i) m.index_.emplace(m.vocabulary_[i], i);

  std::vector<std::map<std::size_t, std::size_t>> counts(corpus.size());
  std::vector<std::size_t> df(m.vocabulary_.size(), 0);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus[d]) ++counts[d][m.index_.find(t)->second];
    for (const auto& [term, _] : counts[d]) ++df[term];
  }
  const auto n = static_cast<double>(corpus.size());
  m.idf_.resize(df.size());
  for (std::size_t t = 0; t < df.size(); ++t) m.idf_[t] = std::log(n / static_cast<double>(df[t]));

  m.vectors_.resize(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& [term, tf] : counts[d]) {
      const double w = static_cast<double>(tf) * m.idf_[term];
      if (w != 0.0) m.vectors_[d].entries.emplace_back(term, w);
    }
  }
  return m;
}

std::size_t TfidfModel::term_index(std::string_view term) const {
  auto it = index_.find(term);
  return it == index_.end() ? npos : it->second;
}

double TfidfModel::idf(std::string_view term) const {
  const auto t = term_index(term);
  return t == npos ? 0.0 : idf_[t];
}

double TfidfModel::weight(std::size_t doc, std::string_view term) const {
  const auto t = term_index(term);
  if (t == npos) return 0.0;
  const auto& entries = vectors_.at(doc).entries;
  auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(t, 0.0),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  return (it != entries.end() && it->first == t) ? it->second : 0.0;
}

}  // namespace sdglens::tagger
