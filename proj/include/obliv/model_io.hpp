// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "obliv/common.hpp"
#include "obliv/model.hpp"

namespace obliv {

// Malformed model document. location() is "line N, column M" for syntax
// errors and a field path such as "trees[3].leaves_hex[2]" otherwise.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// Canonical JSON-shaped text document. Every floating value is written as a
// lowercase hex bit pattern (8 digits for binary32, 16 for binary64), so a
// round trip is bit-exact. Output is deterministic: equal models produce
// byte-identical documents.
//
//   {
//     "float_features": [{"index": 0, "borders_hex": ["3f000000"]}],
//     "trees": [{"depth": 1, "splits": [{"feature": 0, "border": 0}],
//                "leaves_hex": ["0000000000000000", "3ff0000000000000"]}],
//     "scale_hex": "3ff0000000000000",
//     "bias_hex": "0000000000000000"
//   }
//
// Throws Error if the model is invalid.
std::string serialize_model(const ObliviousModel& model);

// Throws ParseError on malformed input and Error (listing every validation
// issue) when the document parses but describes an invalid model.
ObliviousModel deserialize_model(std::string_view document);

void save_model(const ObliviousModel& model, const std::filesystem::path& path);
ObliviousModel load_model(const std::filesystem::path& path);

}  // namespace obliv
