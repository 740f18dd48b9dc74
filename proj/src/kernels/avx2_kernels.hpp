#pragma once

#include <cstddef>

// Internal declarations shared between the dispatch unit and the AVX2
// translation unit. Definitions live in kernels_avx2.cpp, which is the only
// file compiled with -mavx2 -mfma; nothing here may be called before the
// dispatcher has checked CPU support.

namespace surrex::kern::detail {

double avx2_sum(const double* a, std::size_t n);
double avx2_dot(const double* a, const double* b, std::size_t n);
double avx2_weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
double avx2_squared_l2(const double* a, const double* b, std::size_t n);
void avx2_squared_l2_rows(const double* rows, std::size_t n, std::size_t d, const double* query,
                          double* out);

}  // namespace surrex::kern::detail
