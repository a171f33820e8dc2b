#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sdglens::sentiment {

// Probabilities over class 0 (risk), 1 (neutral), 2 (opportunity).
struct Distribution {
  double p0 = 0.0;
  double p1 = 1.0;
  double p2 = 0.0;
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

// Throws ValidationError unless each p is in [0,1] and the sum is 1 +- 1e-9.
void validate(const Distribution& d);
Distribution one_hot(int label);  // label in {0,1,2}
double expected_sentiment(const Distribution& d);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Distribution classify(std::string_view text) = 0;
};

// Offline classifier counting risk and opportunity phrases: weights
// (1 + neg, 1, 1 + pos), normalized.
class LexiconClassifier final : public Classifier {
 public:
  LexiconClassifier(std::vector<std::string> negative, std::vector<std::string> positive);
  Distribution classify(std::string_view text) override;

 private:
  std::vector<std::string> negative_;
  std::vector<std::string> positive_;
};

}  // namespace sdglens::sentiment
