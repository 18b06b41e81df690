// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

// 128-bit kernels. SSE2 only, so they run on every x86-64 host.

#include <emmintrin.h>

#include "kernels/kernels.hpp"

namespace obliv::kernels {
namespace {

constexpr std::size_t kBytes = 16;

// 16 objects: four registers of comparison counts, packed to bytes once.
void quantize(const float* values, const float* borders, std::size_t n_borders,
              std::uint8_t* out) {
  const __m128 v0 = _mm_loadu_ps(values);
  const __m128 v1 = _mm_loadu_ps(values + 4);
  const __m128 v2 = _mm_loadu_ps(values + 8);
  const __m128 v3 = _mm_loadu_ps(values + 12);
  __m128i c0 = _mm_setzero_si128();
  __m128i c1 = _mm_setzero_si128();
  __m128i c2 = _mm_setzero_si128();
  __m128i c3 = _mm_setzero_si128();
  for (std::size_t b = 0; b < n_borders; ++b) {
    const __m128 border = _mm_set1_ps(borders[b]);
    // cmpgt is an ordered compare: NaN yields 0. True lanes are -1.
    c0 = _mm_sub_epi32(c0, _mm_castps_si128(_mm_cmpgt_ps(v0, border)));
    c1 = _mm_sub_epi32(c1, _mm_castps_si128(_mm_cmpgt_ps(v1, border)));
    c2 = _mm_sub_epi32(c2, _mm_castps_si128(_mm_cmpgt_ps(v2, border)));
    c3 = _mm_sub_epi32(c3, _mm_castps_si128(_mm_cmpgt_ps(v3, border)));
  }
  const __m128i lo = _mm_packs_epi32(c0, c1);
  const __m128i hi = _mm_packs_epi32(c2, c3);
  _mm_storeu_si128(reinterpret_cast<__m128i*>(out), _mm_packus_epi16(lo, hi));
}

// All-ones where q <= k: the saturating difference q - k is zero exactly
// when the condition q > k fails.
inline __m128i not_greater(__m128i q, __m128i k) {
  return _mm_cmpeq_epi8(_mm_subs_epu8(q, k), _mm_setzero_si128());
}

void leaf_indices(const std::uint8_t* const* rows, const std::uint8_t* ordinals, int depth,
                  std::size_t n_groups, std::uint8_t* out) {
  __m128i k[8];
  __m128i bit[8];
  for (int d = 0; d < depth; ++d) {
    k[d] = _mm_set1_epi8(static_cast<char>(ordinals[d]));
    bit[d] = _mm_set1_epi8(static_cast<char>(1u << d));
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t offset = g * kBytes;
    __m128i index = _mm_setzero_si128();
    for (int d = 0; d < depth; ++d) {
      const __m128i q = _mm_load_si128(reinterpret_cast<const __m128i*>(rows[d] + offset));
      index = _mm_or_si128(index, _mm_andnot_si128(not_greater(q, k[d]), bit[d]));
    }
    _mm_store_si128(reinterpret_cast<__m128i*>(out + offset), index);
  }
}

void condition_bits(const std::uint8_t* row, std::uint8_t ordinal, std::size_t n_groups,
                    std::uint8_t* out) {
  const __m128i k = _mm_set1_epi8(static_cast<char>(ordinal));
  const __m128i one = _mm_set1_epi8(1);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t offset = g * kBytes;
    const __m128i q = _mm_load_si128(reinterpret_cast<const __m128i*>(row + offset));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + offset),
                     _mm_andnot_si128(not_greater(q, k), one));
  }
}

// Eight objects per group: scalar leaf loads, vector adds.
void naive64(const std::uint8_t* idx, const double* leaves, std::size_t n_groups,
             double* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 8, acc += 8) {
    const __m128d a0 = _mm_set_pd(leaves[idx[1]], leaves[idx[0]]);
    const __m128d a1 = _mm_set_pd(leaves[idx[3]], leaves[idx[2]]);
    const __m128d a2 = _mm_set_pd(leaves[idx[5]], leaves[idx[4]]);
    const __m128d a3 = _mm_set_pd(leaves[idx[7]], leaves[idx[6]]);
    _mm_store_pd(acc + 0, _mm_add_pd(_mm_load_pd(acc + 0), a0));
    _mm_store_pd(acc + 2, _mm_add_pd(_mm_load_pd(acc + 2), a1));
    _mm_store_pd(acc + 4, _mm_add_pd(_mm_load_pd(acc + 4), a2));
    _mm_store_pd(acc + 6, _mm_add_pd(_mm_load_pd(acc + 6), a3));
  }
}

// Sixteen objects per group. Without F16C the widening is scalar.
void naive16(const std::uint8_t* idx, const Half* leaves, std::size_t n_groups, float* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 16, acc += 16) {
    for (int r = 0; r < 4; ++r) {
      const std::uint8_t* i = idx + 4 * r;
      const __m128 v = _mm_set_ps(half_to_float(leaves[i[3]]), half_to_float(leaves[i[2]]),
                                  half_to_float(leaves[i[1]]), half_to_float(leaves[i[0]]));
      _mm_store_ps(acc + 4 * r, _mm_add_ps(_mm_load_ps(acc + 4 * r), v));
    }
  }
}

}  // namespace

const KernelSet& sse_kernels() {
  static const KernelSet kSet{
      .width = VectorWidth::W128,
      .quantize_group = kBytes,
      .index_group = kBytes,
      .naive64_group = 8,
      .naive16_group = 16,
      .gather64_group = 0,
      .permute64_group = 0,
      .permute16_group = 0,
      .quantize = quantize,
      .leaf_indices = leaf_indices,
      .condition_bits = condition_bits,
      .naive64 = naive64,
      .naive16 = naive16,
      .gather64 = nullptr,
      .permute64 = nullptr,
      .permute16 = nullptr,
  };
  return kSet;
}

}  // namespace obliv::kernels
