#pragma once

#include <cstddef>
#include <vector>

#include "vrec/types.hpp"

namespace vrec {

using StateVector = std::vector<double>;

// State layout, fixed for a configured t_max:
//   <age, gender, purchase_power,
//    ctr_0..ctr_{t_max-1}, cvr_0.., price_0..,
//    page_id, request_hour>
// Pages shorter than t_max are zero-padded in the item-feature blocks.
inline std::size_t state_dim(std::size_t t_max) { return 3 + 3 * t_max + 2; }

inline StateVector build_state(const PageLog& page, std::size_t t_max) {
  const std::size_t t = page.size();
  if (t > t_max) {
    throw ValidationError("page has " + std::to_string(t) +
                          " slots but t_max is " + std::to_string(t_max));
  }
  StateVector s(state_dim(t_max), 0.0);
  s[0] = static_cast<double>(page.context.age);
  s[1] = static_cast<double>(page.context.gender);
  s[2] = static_cast<double>(page.context.purchase_power);
  for (std::size_t i = 0; i < t; ++i) {
    const ItemFeatures& f = page.slots[i].item;
    s[3 + i] = f.ctr;
    s[3 + t_max + i] = f.cvr;
    s[3 + 2 * t_max + i] = f.price;
  }
  s[3 + 3 * t_max] = static_cast<double>(page.context.page_id);
  s[3 + 3 * t_max + 1] = static_cast<double>(page.context.request_hour);
  return s;
}

}  // namespace vrec
