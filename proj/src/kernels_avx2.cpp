/*
 *  Copyright 2026 The PVC Authors. All Rights Reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "pvc/kernels.hpp"

namespace pvc::kernels {

namespace {

// Lanes are folded as (l0 + l1) + (l2 + l3).
inline double fold(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

inline __m128i load_idx4(const std::uint32_t* idx) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx));
}

double gather_sum_avx2(const double* values, const std::uint32_t* idx, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_i32gather_pd(values, load_idx4(idx + i), 8));
  double s = fold(acc);
  for (; i < n; ++i) s += values[idx[i]];
  return s;
}

double gather_sq_dev_avx2(const double* values, const std::uint32_t* idx, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(c, _mm256_i32gather_pd(values, load_idx4(idx + i), 8));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = fold(acc);
  for (; i < n; ++i) {
    const double d = center - values[idx[i]];
    s += d * d;
  }
  return s;
}

double sq_norm_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = fold(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

void shrink_ratio_avx2(const double* num, const double* den, double lambda, double* out, std::size_t n) {
  const __m256d l = _mm256_set1_pd(lambda);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(num + i), _mm256_add_pd(l, _mm256_loadu_pd(den + i))));
  for (; i < n; ++i) out[i] = num[i] / (lambda + den[i]);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::avx2, "avx2", gather_sum_avx2, gather_sq_dev_avx2, sq_norm_avx2, shrink_ratio_avx2};
  return t;
}

}  // namespace pvc::kernels
