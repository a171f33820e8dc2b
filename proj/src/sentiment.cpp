#include "sentiment.hpp"

#include <cctype>
#include <cmath>

#include "error.hpp"
#include "unicode.hpp"

namespace sdglens::sentiment {

void validate(const Distribution& d) {
  for (double p : {d.p0, d.p1, d.p2}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sentiment probability outside [0,1]");
  }
  if (std::abs(d.p0 + d.p1 + d.p2 - 1.0) > 1e-9) throw ValidationError("sentiment probabilities do not sum to 1");
}

Distribution one_hot(int label) {
  switch (label) {
    case 0: return {1.0, 0.0, 0.0};
    case 1: return {0.0, 1.0, 0.0};
    case 2: return {0.0, 0.0, 1.0};
    default: throw ValidationError("sentiment label must be 0, 1 or 2");
  }
}

double expected_sentiment(const Distribution& d) {
  validate(d);
  return d.p1 + 2.0 * d.p2;
}

LexiconClassifier::LexiconClassifier(std::vector<std::string> negative, std::vector<std::string> positive) {
  for (auto& s : negative) negative_.push_back(unicode::fold_case(s));
  for (auto& s : positive) positive_.push_back(unicode::fold_case(s));
}

namespace {

std::size_t count_words(const std::string& text, const std::vector<std::string>& phrases) {
  const auto boundary = [&](std::size_t pos) {
    if (pos == 0 || pos >= text.size()) return true;
    const auto a = static_cast<unsigned char>(text[pos - 1]);
    const auto b = static_cast<unsigned char>(text[pos]);
    const auto w = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
    return !(w(a) && w(b));
  };
  std::size_t n = 0;
  for (const auto& p : phrases) {
    if (p.empty()) continue;
    for (auto pos = text.find(p); pos != std::string::npos; pos = text.find(p, pos + 1)) {
      if (boundary(pos) && boundary(pos + p.size())) ++n;
    }
  }
  return n;
}

}  // namespace

Distribution LexiconClassifier::classify(std::string_view text) {
  const std::string folded = unicode::fold_case(text);
  const double w0 = 1.0 + static_cast<double>(count_words(folded, negative_));
  const double w2 = 1.0 + static_cast<double>(count_words(folded, positive_));
  const double total = w0 + 1.0 + w2;
  Distribution d{w0 / total, 1.0 / total, 0.0};
  d.p2 = 1.0 - d.p0 - d.p1;
  return d;
}

}  // namespace sdglens::sentiment
