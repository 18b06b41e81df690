// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#include "obliv/common.hpp"

#include <cstdlib>
#include <string>

namespace obliv {
namespace {

[[noreturn]] void bad_value(std::string_view what, std::string_view text) {
  throw ConfigError("unknown " + std::string(what) + " \"" + std::string(text) + "\"");
}

// OBLIV_MAX_WIDTH caps the widths reported as supported, e.g. to exercise
// the pre-AVX-512 paths on a newer machine.
VectorWidth width_cap() {
  const char* cap = std::getenv("OBLIV_MAX_WIDTH");
  if (cap == nullptr || *cap == '\0') return VectorWidth::W512;
  return parse_width(cap);
}

bool cpu_has(VectorWidth w) {
  switch (w) {
    case VectorWidth::Scalar:
    case VectorWidth::W128:
      return true;  // SSE2 is part of x86-64.
    case VectorWidth::W256:
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("f16c");
    case VectorWidth::W512:
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512bw");
  }
  return false;
}

}  // namespace

std::string_view to_string(VectorWidth w) {
  switch (w) {
    case VectorWidth::Scalar:
      return "scalar";
    case VectorWidth::W128:
      return "128";
    case VectorWidth::W256:
      return "256";
    case VectorWidth::W512:
      return "512";
  }
  return "?";
}

VectorWidth parse_width(std::string_view text) {
  if (text == "scalar") return VectorWidth::Scalar;
  if (text == "128") return VectorWidth::W128;
  if (text == "256") return VectorWidth::W256;
  if (text == "512") return VectorWidth::W512;
  bad_value("vector width", text);
}

bool host_supports(VectorWidth w) {
  static const VectorWidth cap = width_cap();
  return static_cast<int>(w) <= static_cast<int>(cap) && cpu_has(w);
}

VectorWidth widest_supported_width() {
  for (auto w : {VectorWidth::W512, VectorWidth::W256, VectorWidth::W128}) {
    if (host_supports(w)) return w;
  }
  return VectorWidth::Scalar;
}

std::string_view to_string(TailPolicy t) {
  return t == TailPolicy::ScalarTail ? "scalar" : "padded";
}

TailPolicy parse_tail_policy(std::string_view text) {
  if (text == "scalar") return TailPolicy::ScalarTail;
  if (text == "padded") return TailPolicy::PaddedGroup;
  bad_value("tail policy", text);
}

std::string_view to_string(Layout l) {
  return l == Layout::ObjectMajor ? "object-major" : "feature-major";
}

Layout parse_layout(std::string_view text) {
  if (text == "object-major") return Layout::ObjectMajor;
  if (text == "feature-major") return Layout::FeatureMajor;
  bad_value("layout", text);
}

}  // namespace obliv
