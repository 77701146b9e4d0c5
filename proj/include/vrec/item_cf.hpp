#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vrec/types.hpp"

namespace vrec {

struct ItemCfConfig {
  int neighborhood = 20;
};

// Item-based collaborative filtering over page-level co-click vectors.
// Similarity is the cosine of binary page-item click vectors; each item
// keeps its top-N neighbors. At ranking time an item is scored by the
// similarity-weighted sum over the page's clicked items (excluding
// itself); pages without clicks fall back to global item click rates.
class ItemCfModel {
 public:
  static ItemCfModel train(const Dataset& data, const ItemCfConfig& config = {});

  double similarity(const std::string& item, const std::string& other) const;
  double global_click_rate(const std::string& item) const;

  std::vector<int> rank(const PageLog& page) const;

  std::string to_json() const;
  static ItemCfModel from_json(const std::string& text);
  void save(const std::string& path) const;
  static ItemCfModel load(const std::string& path);

 private:
  // item -> neighbors ordered by (similarity desc, id asc)
  std::unordered_map<std::string, std::vector<std::pair<std::string, double>>>
      neighbors_;
  std::unordered_map<std::string, double> click_rate_;
  int neighborhood_ = 20;
};

}  // namespace vrec
