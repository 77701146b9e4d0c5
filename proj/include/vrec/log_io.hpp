#pragma once

#include <iosfwd>
#include <string>

#include "vrec/types.hpp"

namespace vrec {

enum class LogFormat { jsonl };

// Loads a page log file. One JSON object per line:
//   {"ctx": {"age": int, "gender": int, "power": int, "page_id": int,
//            "hour": int},
//    "items": [{"id": str, "ctr": float, "cvr": float, "price": float,
//               "p_cart": float?, "p_fav": float?,
//               "clicked": 0|1, "carted": 0|1, "wishlisted": 0|1,
//               "purchased": 0|1}, ...]}
// Empty lines are not allowed except a trailing newline. Any malformed or
// invariant-violating record aborts the load with the offending line number.
Dataset load_logs(const std::string& path, LogFormat format = LogFormat::jsonl);

Dataset parse_logs(std::istream& in);

void save_logs(const Dataset& data, const std::string& path,
               LogFormat format = LogFormat::jsonl);

std::string serialize_logs(const Dataset& data);

}  // namespace vrec
