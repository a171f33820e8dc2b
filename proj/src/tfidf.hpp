#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdglens::tagger {

// Lowercase runs of letters/digits; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

// Sorted (term index, weight) pairs with non-zero weight.
struct SparseVector {
  std::vector<std::pair<std::size_t, double>> entries;

  double norm_squared() const;
  SparseVector scaled(double factor) const;
};

double dot(const SparseVector& u, const SparseVector& v);

// dot(u,v) / (|u||v|) clamped to [0,1]; 0 when either norm is 0.
double cosine_similarity(const SparseVector& u, const SparseVector& v);
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// tf = raw count, idf = ln(N / df), weight = tf * idf. The vocabulary is the
// sorted set of corpus terms and is fixed once built.
class TfidfModel {
 public:
  // Throws ValidationError for an empty corpus.
  static TfidfModel build(std::span<const std::string> corpus);
  static TfidfModel build_from_tokens(std::span<const std::vector<std::string>> corpus);

  std::size_t document_count() const { return vectors_.size(); }
  const SparseVector& vector(std::size_t doc) const { return vectors_.at(doc); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  double idf(std::string_view term) const;
  // 0 for a term outside the vocabulary.
  double weight(std::size_t doc, std::string_view term) const;
  std::size_t term_index(std::string_view term) const;  // npos if absent

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<double> idf_;
  std::vector<SparseVector> vectors_;
};

}  // namespace sdglens::tagger
