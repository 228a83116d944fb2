#ifndef LABNER_FEATURES_HPP
#define LABNER_FEATURES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace labner {

// Hand-crafted emission features for one token in context. The template
// list is fixed:
//   w=<lowercased surface>         shape=<X/x/d/o classes, runs collapsed>
//   pre1=..pre4=, suf1=..suf4=     (code point prefixes/suffixes, lowercased)
//   digits                         (surface is ASCII digits only)
//   title                          (initial uppercase, no other uppercase)
//   w[-d]= / w[+d]=                (lowercased context within the window,
//                                   <s> / </s> past the sentence edge)
// Deterministic: the same sentence and position always produce the same
// feature list, in the same order.
class FeatureExtractor {
public:
  explicit FeatureExtractor(std::size_t window = 2) : window_(window) {}

  std::size_t window() const { return window_; }

  std::vector<std::string> extract(std::span<const std::string> surfaces, std::size_t position) const;

private:
  std::size_t window_;
};

}  // namespace labner

#endif  // LABNER_FEATURES_HPP
