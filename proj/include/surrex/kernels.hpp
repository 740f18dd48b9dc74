#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace surrex::kern {

// Arithmetic inner loops used by the samplers, the ridge solver and the
// fidelity evaluation. Each kernel has a scalar reference implementation and
// an AVX2/FMA variant; the variant is picked once at runtime from CPU
// capabilities and can be pinned with set_backend() or the SURREX_KERNELS
// environment variable (scalar | avx2 | auto). Variants may sum in a
// different order, so results can differ from the reference in the last few
// ulps; within one process the selection is fixed, which keeps runs
// reproducible.

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend backend);

/// Pins the backend; returns false (and leaves the selection unchanged) when
/// the requested backend is not available on this CPU.
bool set_backend(Backend backend);

/// Re-runs automatic selection, honoring SURREX_KERNELS.
void reset_backend();

const char* backend_name(Backend backend);

/// Parses "scalar" / "avx2" / "auto"; returns false on unknown names or
/// unavailable backends.
bool set_backend_by_name(const std::string& name);

double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
/// sum_i a[i] * b[i] * w[i]
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
/// sum_i (a[i] - b[i])^2
double squared_l2(const double* a, const double* b, std::size_t n);
/// out[i] = squared l2 distance between row i of `rows` (row-major n x d) and `query`.
void squared_l2_rows(const double* rows, std::size_t n, std::size_t d, const double* query,
                     double* out);

inline double sum(std::span<const double> a) { return sum(a.data(), a.size()); }
inline double dot(std::span<const double> a, std::span<const double> b) {
  return dot(a.data(), b.data(), a.size());
}
inline double weighted_dot(std::span<const double> a, std::span<const double> b,
                           std::span<const double> w) {
  return weighted_dot(a.data(), b.data(), w.data(), a.size());
}
inline double squared_l2(std::span<const double> a, std::span<const double> b) {
  return squared_l2(a.data(), b.data(), a.size());
}

namespace detail {

struct Ops {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
  double (*squared_l2)(const double*, const double*, std::size_t);
  void (*squared_l2_rows)(const double*, std::size_t, std::size_t, const double*, double*);
};

const Ops& scalar_ops();
/// nullptr when the binary was built without AVX2 support.
const Ops* avx2_ops();

}  // namespace detail

}  // namespace surrex::kern
