#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vrec/rng.hpp"
#include "vrec/types.hpp"

namespace vrec {

// hash: pseudo-random per-page assignment keyed on (seed, page index).
// sequential: first train_fraction of pages train, the rest evaluate,
// mimicking a time-ordered split.
enum class SplitMethod { hash, sequential };

inline const char* split_method_name(SplitMethod m) {
  return m == SplitMethod::hash ? "hash" : "sequential";
}

inline SplitMethod split_method_from_name(const std::string& name) {
  if (name == "hash") return SplitMethod::hash;
  if (name == "sequential") return SplitMethod::sequential;
  throw ValidationError("unknown split method: " + name);
}

struct SplitConfig {
  SplitMethod method = SplitMethod::hash;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
      throw ValidationError("train_fraction must be in (0,1)");
    }
  }
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
};

inline SplitIndices split_pages(std::size_t page_count, const SplitConfig& config) {
  config.validate();
  SplitIndices out;
  if (config.method == SplitMethod::sequential) {
    const std::size_t cut =
        static_cast<std::size_t>(config.train_fraction * page_count);
    for (std::size_t i = 0; i < page_count; ++i) {
      (i < cut ? out.train : out.eval).push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < page_count; ++i) {
      std::uint64_t h = config.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
      const double u =
          static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
      (u < config.train_fraction ? out.train : out.eval).push_back(i);
    }
  }
  if (out.train.empty() || out.eval.empty()) {
    throw ValidationError("split produced an empty train or eval set (" +
                          std::to_string(page_count) + " pages)");
  }
  return out;
}

inline std::vector<PageLog> select_pages(const Dataset& data,
                                         std::span<const std::size_t> indices) {
  std::vector<PageLog> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(data.pages.at(i));
  return out;
}

}  // namespace vrec
