// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

// 256-bit kernels (AVX2 + F16C).

#include <immintrin.h>

#include "kernels/kernels.hpp"

namespace obliv::kernels {
namespace {

constexpr std::size_t kBytes = 32;

// 32 objects: four registers of counts. The in-lane packs interleave the
// 128-bit halves, so a final dword permute restores object order.
void quantize(const float* values, const float* borders, std::size_t n_borders,
              std::uint8_t* out) {
  const __m256 v0 = _mm256_loadu_ps(values);
  const __m256 v1 = _mm256_loadu_ps(values + 8);
  const __m256 v2 = _mm256_loadu_ps(values + 16);
  const __m256 v3 = _mm256_loadu_ps(values + 24);
  __m256i c0 = _mm256_setzero_si256();
  __m256i c1 = _mm256_setzero_si256();
  __m256i c2 = _mm256_setzero_si256();
  __m256i c3 = _mm256_setzero_si256();
  for (std::size_t b = 0; b < n_borders; ++b) {
    const __m256 border = _mm256_set1_ps(borders[b]);
    c0 = _mm256_sub_epi32(c0, _mm256_castps_si256(_mm256_cmp_ps(v0, border, _CMP_GT_OQ)));
    c1 = _mm256_sub_epi32(c1, _mm256_castps_si256(_mm256_cmp_ps(v1, border, _CMP_GT_OQ)));
    c2 = _mm256_sub_epi32(c2, _mm256_castps_si256(_mm256_cmp_ps(v2, border, _CMP_GT_OQ)));
    c3 = _mm256_sub_epi32(c3, _mm256_castps_si256(_mm256_cmp_ps(v3, border, _CMP_GT_OQ)));
  }
  const __m256i lo = _mm256_packs_epi32(c0, c1);
  const __m256i hi = _mm256_packs_epi32(c2, c3);
  const __m256i bytes = _mm256_packus_epi16(lo, hi);
  const __m256i order = _mm256_setr_epi32(0, 4, 1, 5, 2, 6, 3, 7);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out),
                      _mm256_permutevar8x32_epi32(bytes, order));
}

// All-ones where q <= k.
inline __m256i not_greater(__m256i q, __m256i k) {
  return _mm256_cmpeq_epi8(_mm256_subs_epu8(q, k), _mm256_setzero_si256());
}

void leaf_indices(const std::uint8_t* const* rows, const std::uint8_t* ordinals, int depth,
                  std::size_t n_groups, std::uint8_t* out) {
  __m256i k[8];
  __m256i bit[8];
  for (int d = 0; d < depth; ++d) {
    k[d] = _mm256_set1_epi8(static_cast<char>(ordinals[d]));
    bit[d] = _mm256_set1_epi8(static_cast<char>(1u << d));
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t offset = g * kBytes;
    __m256i index = _mm256_setzero_si256();
    for (int d = 0; d < depth; ++d) {
      const __m256i q =
          _mm256_load_si256(reinterpret_cast<const __m256i*>(rows[d] + offset));
      index = _mm256_or_si256(index, _mm256_andnot_si256(not_greater(q, k[d]), bit[d]));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(out + offset), index);
  }
}

void condition_bits(const std::uint8_t* row, std::uint8_t ordinal, std::size_t n_groups,
                    std::uint8_t* out) {
  const __m256i k = _mm256_set1_epi8(static_cast<char>(ordinal));
  const __m256i one = _mm256_set1_epi8(1);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t offset = g * kBytes;
    const __m256i q = _mm256_load_si256(reinterpret_cast<const __m256i*>(row + offset));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + offset),
                        _mm256_andnot_si256(not_greater(q, k), one));
  }
}

void naive64(const std::uint8_t* idx, const double* leaves, std::size_t n_groups,
             double* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 8, acc += 8) {
    const __m256d a0 =
        _mm256_set_pd(leaves[idx[3]], leaves[idx[2]], leaves[idx[1]], leaves[idx[0]]);
    const __m256d a1 =
        _mm256_set_pd(leaves[idx[7]], leaves[idx[6]], leaves[idx[5]], leaves[idx[4]]);
    _mm256_store_pd(acc, _mm256_add_pd(_mm256_load_pd(acc), a0));
    _mm256_store_pd(acc + 4, _mm256_add_pd(_mm256_load_pd(acc + 4), a1));
  }
}

inline __m128i load_halves8(const std::uint8_t* i, const Half* leaves) {
  return _mm_setr_epi16(
      static_cast<short>(leaves[i[0]].bits), static_cast<short>(leaves[i[1]].bits),
      static_cast<short>(leaves[i[2]].bits), static_cast<short>(leaves[i[3]].bits),
      static_cast<short>(leaves[i[4]].bits), static_cast<short>(leaves[i[5]].bits),
      static_cast<short>(leaves[i[6]].bits), static_cast<short>(leaves[i[7]].bits));
}

void naive16(const std::uint8_t* idx, const Half* leaves, std::size_t n_groups, float* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 16, acc += 16) {
    const __m256 a0 = _mm256_cvtph_ps(load_halves8(idx, leaves));
    const __m256 a1 = _mm256_cvtph_ps(load_halves8(idx + 8, leaves));
    _mm256_store_ps(acc, _mm256_add_ps(_mm256_load_ps(acc), a0));
    _mm256_store_ps(acc + 8, _mm256_add_ps(_mm256_load_ps(acc + 8), a1));
  }
}

// Eight objects per group as two 4-lane gathers.
void gather64(const std::uint8_t* idx, const double* leaves, std::size_t n_groups,
              double* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 8, acc += 8) {
    const __m128i packed = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(idx));
    const __m128i i0 = _mm_cvtepu8_epi32(packed);
    const __m128i i1 = _mm_cvtepu8_epi32(_mm_srli_si128(packed, 4));
    const __m256d a0 = _mm256_i32gather_pd(leaves, i0, 8);
    const __m256d a1 = _mm256_i32gather_pd(leaves, i1, 8);
    _mm256_store_pd(acc, _mm256_add_pd(_mm256_load_pd(acc), a0));
    _mm256_store_pd(acc + 4, _mm256_add_pd(_mm256_load_pd(acc + 4), a1));
  }
}

}  // namespace

const KernelSet& avx2_kernels() {
  static const KernelSet kSet{
      .width = VectorWidth::W256,
      .quantize_group = kBytes,
      .index_group = kBytes,
      .naive64_group = 8,
      .naive16_group = 16,
      .gather64_group = 8,
      .permute64_group = 0,
      .permute16_group = 0,
      .quantize = quantize,
      .leaf_indices = leaf_indices,
      .condition_bits = condition_bits,
      .naive64 = naive64,
      .naive16 = naive16,
      .gather64 = gather64,
      .permute64 = nullptr,
      .permute16 = nullptr,
  };
  return kSet;
}

}  // namespace obliv::kernels
