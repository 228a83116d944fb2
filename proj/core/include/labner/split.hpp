#ifndef LABNER_SPLIT_HPP
#define LABNER_SPLIT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace labner {

enum class SplitSide { Train, Validation };

// A deterministic train/validation partition of document ids. The same
// (id set, seed, fraction) always regenerates the same assignment,
// independent of the order the ids were supplied in.
struct SplitSpec {
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  std::map<std::string, SplitSide> assignment;

  std::vector<std::string> side(SplitSide side) const;
  bool operator==(const SplitSpec&) const = default;
};

// Sorts the ids, shuffles with a seeded Fisher-Yates (mt19937_64, so the
// result is identical across platforms) and assigns the first
// round(train_fraction * n) to train. Throws error when either side
// would be empty or ids repeat.
SplitSpec generate_split(std::vector<std::string> doc_ids, std::uint64_t seed,
                         double train_fraction);

std::string split_to_json(const SplitSpec& spec);
SplitSpec split_from_json(std::string_view json_text);

}  // namespace labner

#endif  // LABNER_SPLIT_HPP
