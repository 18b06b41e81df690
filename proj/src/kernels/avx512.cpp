// Copyright 2026 The obliv Authors
// SPDX-License-Identifier: Apache-2.0

// 512-bit kernels (AVX-512 F + BW), including the permute-based leaf
// fetches that only exist at this width.

#include <immintrin.h>

#include "kernels/kernels.hpp"

namespace obliv::kernels {
namespace {

constexpr std::size_t kBytes = 64;

void quantize(const float* values, const float* borders, std::size_t n_borders,
              std::uint8_t* out) {
  const __m512 v0 = _mm512_loadu_ps(values);
  const __m512 v1 = _mm512_loadu_ps(values + 16);
  const __m512 v2 = _mm512_loadu_ps(values + 32);
  const __m512 v3 = _mm512_loadu_ps(values + 48);
  const __m512i one = _mm512_set1_epi32(1);
  __m512i c0 = _mm512_setzero_si512();
  __m512i c1 = _mm512_setzero_si512();
  __m512i c2 = _mm512_setzero_si512();
  __m512i c3 = _mm512_setzero_si512();
  for (std::size_t b = 0; b < n_borders; ++b) {
    const __m512 border = _mm512_set1_ps(borders[b]);
    c0 = _mm512_mask_add_epi32(c0, _mm512_cmp_ps_mask(v0, border, _CMP_GT_OQ), c0, one);
    c1 = _mm512_mask_add_epi32(c1, _mm512_cmp_ps_mask(v1, border, _CMP_GT_OQ), c1, one);
    c2 = _mm512_mask_add_epi32(c2, _mm512_cmp_ps_mask(v2, border, _CMP_GT_OQ), c2, one);
    c3 = _mm512_mask_add_epi32(c3, _mm512_cmp_ps_mask(v3, border, _CMP_GT_OQ), c3, one);
  }
  // Counts are <= 254, so truncating narrowing is exact.
  _mm_storeu_si128(reinterpret_cast<__m128i*>(out), _mm512_cvtepi32_epi8(c0));
  _mm_storeu_si128(reinterpret_cast<__m128i*>(out + 16), _mm512_cvtepi32_epi8(c1));
  _mm_storeu_si128(reinterpret_cast<__m128i*>(out + 32), _mm512_cvtepi32_epi8(c2));
  _mm_storeu_si128(reinterpret_cast<__m128i*>(out + 48), _mm512_cvtepi32_epi8(c3));
}

void leaf_indices(const std::uint8_t* const* rows, const std::uint8_t* ordinals, int depth,
                  std::size_t n_groups, std::uint8_t* out) {
  __m512i k[8];
  __m512i bit[8];
  for (int d = 0; d < depth; ++d) {
    k[d] = _mm512_set1_epi8(static_cast<char>(ordinals[d]));
    bit[d] = _mm512_set1_epi8(static_cast<char>(1u << d));
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t offset = g * kBytes;
    __m512i index = _mm512_setzero_si512();
    for (int d = 0; d < depth; ++d) {
      const __m512i q = _mm512_load_si512(rows[d] + offset);
      index = _mm512_mask_add_epi8(index, _mm512_cmpgt_epu8_mask(q, k[d]), index, bit[d]);
    }
    _mm512_store_si512(out + offset, index);
  }
}

void condition_bits(const std::uint8_t* row, std::uint8_t ordinal, std::size_t n_groups,
                    std::uint8_t* out) {
  const __m512i k = _mm512_set1_epi8(static_cast<char>(ordinal));
  const __m512i one = _mm512_set1_epi8(1);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t offset = g * kBytes;
    const __m512i q = _mm512_load_si512(row + offset);
    _mm512_storeu_si512(out + offset, _mm512_maskz_mov_epi8(_mm512_cmpgt_epu8_mask(q, k), one));
  }
}

void naive64(const std::uint8_t* idx, const double* leaves, std::size_t n_groups,
             double* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 8, acc += 8) {
    const __m512d a = _mm512_set_pd(leaves[idx[7]], leaves[idx[6]], leaves[idx[5]],
                                    leaves[idx[4]], leaves[idx[3]], leaves[idx[2]],
                                    leaves[idx[1]], leaves[idx[0]]);
    _mm512_store_pd(acc, _mm512_add_pd(_mm512_load_pd(acc), a));
  }
}

void naive16(const std::uint8_t* idx, const Half* leaves, std::size_t n_groups, float* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 16, acc += 16) {
    const __m256i halves = _mm256_setr_epi16(
        static_cast<short>(leaves[idx[0]].bits), static_cast<short>(leaves[idx[1]].bits),
        static_cast<short>(leaves[idx[2]].bits), static_cast<short>(leaves[idx[3]].bits),
        static_cast<short>(leaves[idx[4]].bits), static_cast<short>(leaves[idx[5]].bits),
        static_cast<short>(leaves[idx[6]].bits), static_cast<short>(leaves[idx[7]].bits),
        static_cast<short>(leaves[idx[8]].bits), static_cast<short>(leaves[idx[9]].bits),
        static_cast<short>(leaves[idx[10]].bits), static_cast<short>(leaves[idx[11]].bits),
        static_cast<short>(leaves[idx[12]].bits), static_cast<short>(leaves[idx[13]].bits),
        static_cast<short>(leaves[idx[14]].bits), static_cast<short>(leaves[idx[15]].bits));
    _mm512_store_ps(acc, _mm512_add_ps(_mm512_load_ps(acc), _mm512_cvtph_ps(halves)));
  }
}

void gather64(const std::uint8_t* idx, const double* leaves, std::size_t n_groups,
              double* acc) {
  for (std::size_t g = 0; g < n_groups; ++g, idx += 8, acc += 8) {
    const __m256i lanes =
        _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(idx)));
    const __m512d a = _mm512_i32gather_pd(lanes, leaves, 8);
    _mm512_store_pd(acc, _mm512_add_pd(_mm512_load_pd(acc), a));
  }
}

// The whole leaf table sits in kVectors registers of 8 doubles. An index
// splits into a register number (high bits) and a lane (low 3 bits); each
// register contributes through a masked permute, so exactly one merge per
// object takes effect and no branch depends on the data.
template <int kVectors>
void permute64_impl(const std::uint8_t* idx, const double* leaves, std::size_t n_groups,
                    double* acc) {
  __m512d table[kVectors];
  for (int v = 0; v < kVectors; ++v) table[v] = _mm512_load_pd(leaves + 8 * v);

  for (std::size_t g = 0; g < n_groups; ++g, idx += 8, acc += 8) {
    const __m512i lanes =
        _mm512_cvtepu8_epi64(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(idx)));
    __m512d picked = _mm512_setzero_pd();
    if constexpr (kVectors == 1) {
      picked = _mm512_permutexvar_pd(lanes, table[0]);
    } else {
      const __m512i vector_id = _mm512_srli_epi64(lanes, 3);
      for (int v = 0; v < kVectors; ++v) {
        const __mmask8 mine = _mm512_cmpeq_epi64_mask(vector_id, _mm512_set1_epi64(v));
        picked = _mm512_mask_permutexvar_pd(picked, mine, lanes, table[v]);
      }
    }
    _mm512_store_pd(acc, _mm512_add_pd(_mm512_load_pd(acc), picked));
  }
}

void permute64(const std::uint8_t* idx, const double* leaves, int depth, std::size_t n_groups,
               double* acc) {
  switch (depth) {
    case 1:
    case 2:
    case 3:
      return permute64_impl<1>(idx, leaves, n_groups, acc);
    case 4:
      return permute64_impl<2>(idx, leaves, n_groups, acc);
    case 5:
      return permute64_impl<4>(idx, leaves, n_groups, acc);
    case 6:
      return permute64_impl<8>(idx, leaves, n_groups, acc);
    case 7:
      return permute64_impl<16>(idx, leaves, n_groups, acc);
    default:
      return permute64_impl<32>(idx, leaves, n_groups, acc);
  }
}

// Same scheme with 32 binary16 lanes per register: 32 objects per group,
// register number = index >> 5. Picked halves are widened to binary32
// before they are added.
template <int kVectors>
void permute16_impl(const std::uint8_t* idx, const Half* leaves, std::size_t n_groups,
                    float* acc) {
  __m512i table[kVectors];
  for (int v = 0; v < kVectors; ++v) table[v] = _mm512_load_si512(leaves + 32 * v);

  for (std::size_t g = 0; g < n_groups; ++g, idx += 32, acc += 32) {
    const __m512i lanes =
        _mm512_cvtepu8_epi16(_mm256_load_si256(reinterpret_cast<const __m256i*>(idx)));
    __m512i picked = _mm512_setzero_si512();
    if constexpr (kVectors == 1) {
      picked = _mm512_permutexvar_epi16(lanes, table[0]);
    } else {
      const __m512i vector_id = _mm512_srli_epi16(lanes, 5);
      for (int v = 0; v < kVectors; ++v) {
        const __mmask32 mine =
            _mm512_cmpeq_epi16_mask(vector_id, _mm512_set1_epi16(static_cast<short>(v)));
        picked = _mm512_mask_permutexvar_epi16(picked, mine, lanes, table[v]);
      }
    }
    const __m512 lo = _mm512_cvtph_ps(_mm512_castsi512_si256(picked));
    const __m512 hi = _mm512_cvtph_ps(_mm512_extracti64x4_epi64(picked, 1));
    _mm512_store_ps(acc, _mm512_add_ps(_mm512_load_ps(acc), lo));
    _mm512_store_ps(acc + 16, _mm512_add_ps(_mm512_load_ps(acc + 16), hi));
  }
}

void permute16(const std::uint8_t* idx, const Half* leaves, int depth, std::size_t n_groups,
               float* acc) {
  switch (depth) {
    case 6:
      return permute16_impl<2>(idx, leaves, n_groups, acc);
    case 7:
      return permute16_impl<4>(idx, leaves, n_groups, acc);
    case 8:
      return permute16_impl<8>(idx, leaves, n_groups, acc);
    default:
      return permute16_impl<1>(idx, leaves, n_groups, acc);
  }
}

}  // namespace

const KernelSet& avx512_kernels() {
  static const KernelSet kSet{
      .width = VectorWidth::W512,
      .quantize_group = kBytes,
      .index_group = kBytes,
      .naive64_group = 8,
      .naive16_group = 16,
      .gather64_group = 8,
      .permute64_group = 8,
      .permute16_group = 32,
      .quantize = quantize,
      .leaf_indices = leaf_indices,
      .condition_bits = condition_bits,
      .naive64 = naive64,
      .naive16 = naive16,
      .gather64 = gather64,
      .permute64 = permute64,
      .permute16 = permute16,
  };
  return kSet;
}

}  // namespace obliv::kernels
