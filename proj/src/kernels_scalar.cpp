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

#include "pvc/kernels.hpp"

namespace pvc::kernels {

namespace {

double gather_sum_scalar(const double* values, const std::uint32_t* idx, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += values[idx[i]];
  return s;
}

double gather_sq_dev_scalar(const double* values, const std::uint32_t* idx, std::size_t n, double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = center - values[idx[i]];
    s += d * d;
  }
  return s;
}

double sq_norm_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void shrink_ratio_scalar(const double* num, const double* den, double lambda, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = num[i] / (lambda + den[i]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, "scalar", gather_sum_scalar, gather_sq_dev_scalar, sq_norm_scalar,
                             shrink_ratio_scalar};
  return t;
}

}  // namespace pvc::kernels
