// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <new>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace obliv {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid evaluation configuration or a width the host cannot execute.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input shape does not match the model (feature count, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid generator parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kCacheLine = 64;

// Minimal allocator handing out cache-line aligned storage.
template <typename T>
struct AlignedAllocator {
  using value_type = T;

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(
        ::operator new(n * sizeof(T), std::align_val_t{kCacheLine}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{kCacheLine});
  }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

// Register width used by a kernel. Wide variants hold 16/32/64 byte lanes.
enum class VectorWidth : std::uint8_t { Scalar, W128, W256, W512 };

inline constexpr VectorWidth kAllWidths[] = {
    VectorWidth::Scalar, VectorWidth::W128, VectorWidth::W256,
    VectorWidth::W512};

// Bytes per register (1 for the scalar path).
constexpr std::size_t width_bytes(VectorWidth w) {
  switch (w) {
    case VectorWidth::W128:
      return 16;
    case VectorWidth::W256:
      return 32;
    case VectorWidth::W512:
      return 64;
    case VectorWidth::Scalar:
      break;
  }
  return 1;
}

std::string_view to_string(VectorWidth w);
VectorWidth parse_width(std::string_view text);

// True when the running CPU can execute kernels of this width.
bool host_supports(VectorWidth w);
// Widest width the host supports.
VectorWidth widest_supported_width();

// How objects that do not fill a whole lane group are processed.
enum class TailPolicy : std::uint8_t { ScalarTail, PaddedGroup };

std::string_view to_string(TailPolicy t);
TailPolicy parse_tail_policy(std::string_view text);

// Input matrix orientation. FeatureMajor is the transposed form.
enum class Layout : std::uint8_t { ObjectMajor, FeatureMajor };

std::string_view to_string(Layout l);
Layout parse_layout(std::string_view text);

}  // namespace obliv
