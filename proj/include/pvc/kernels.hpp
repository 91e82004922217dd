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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Arithmetic inner loops of the solver. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant selected at runtime.
// Vector variants accumulate in 4 lanes and fold the lanes in a fixed
// order, so results are reproducible for a given instruction set but may
// differ from the scalar reference in the last bits.

namespace pvc::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  /// sum_i values[idx[i]]
  double (*gather_sum)(const double* values, const std::uint32_t* idx, std::size_t n);
  /// sum_i (center - values[idx[i]])^2
  double (*gather_sq_dev)(const double* values, const std::uint32_t* idx, std::size_t n, double center);
  /// sum_i x[i]^2
  double (*sq_norm)(const double* x, std::size_t n);
  /// out[i] = num[i] / (lambda + den[i])
  void (*shrink_ratio)(const double* num, const double* den, double lambda, double* out, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif

bool supported(Isa isa);
/// Best instruction set the running CPU supports.
Isa detect();
/// Table for `isa`; throws std::runtime_error when unsupported.
const KernelTable& table(Isa isa);

/// Process-wide table used by the solver. Defaults to detect().
const KernelTable& active();
void select(Isa isa);

std::string_view to_string(Isa isa);
/// Accepts "scalar", "avx2" or "auto".
Isa parse_isa(std::string_view name);

inline double gather_sum(std::span<const double> values, std::span<const std::uint32_t> idx) {
  return active().gather_sum(values.data(), idx.data(), idx.size());
}
inline double gather_sq_dev(std::span<const double> values, std::span<const std::uint32_t> idx, double center) {
  return active().gather_sq_dev(values.data(), idx.data(), idx.size(), center);
}
inline double sq_norm(std::span<const double> x) { return active().sq_norm(x.data(), x.size()); }
inline void shrink_ratio(std::span<const double> num, std::span<const double> den, double lambda, std::span<double> out) {
  active().shrink_ratio(num.data(), den.data(), lambda, out.data(), out.size());
}

}  // namespace pvc::kernels
