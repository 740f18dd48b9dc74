#include "surrex/kernels.hpp"

#include <atomic>
#include <cstdlib>

#ifdef SURREX_HAVE_AVX2_TU
#include "avx2_kernels.hpp"
#endif

namespace surrex::kern {

namespace {

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_dot_scalar(const double* a, const double* b, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * w[i];
  return acc;
}

double squared_l2_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

void squared_l2_rows_scalar(const double* rows, std::size_t n, std::size_t d, const double* query,
                            double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = squared_l2_scalar(rows + i * d, query, d);
}

constexpr detail::Ops kScalarOps{
    sum_scalar, dot_scalar, weighted_dot_scalar, squared_l2_scalar, squared_l2_rows_scalar,
};

std::atomic<const detail::Ops*> g_ops{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

void select(Backend backend) {
  if (backend == Backend::avx2 && detail::avx2_ops() != nullptr) {
    g_ops.store(detail::avx2_ops(), std::memory_order_relaxed);
    g_backend.store(Backend::avx2, std::memory_order_relaxed);
  } else {
    g_ops.store(&kScalarOps, std::memory_order_relaxed);
    g_backend.store(Backend::scalar, std::memory_order_relaxed);
  }
}

void auto_select() {
  const char* env = std::getenv("SURREX_KERNELS");
  if (env != nullptr) {
    const std::string name(env);
    if (name == "scalar") {
      select(Backend::scalar);
      return;
    }
    if (name == "avx2" && backend_available(Backend::avx2)) {
      select(Backend::avx2);
      return;
    }
    // unknown value or unavailable backend: fall through to detection
  }
  select(backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar);
}

const detail::Ops& ops() {
  const detail::Ops* current = g_ops.load(std::memory_order_relaxed);
  if (current == nullptr) {
    auto_select();
    current = g_ops.load(std::memory_order_relaxed);
  }
  return *current;
}

}  // namespace

namespace detail {

const Ops& scalar_ops() { return kScalarOps; }

const Ops* avx2_ops() {
#ifdef SURREX_HAVE_AVX2_TU
  // The cpu check runs in this plain TU; AVX2 code is only reachable after it
  // has passed.
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (!supported) return nullptr;
  static constexpr Ops table{avx2_sum, avx2_dot, avx2_weighted_dot, avx2_squared_l2,
                             avx2_squared_l2_rows};
  return &table;
#else
  return nullptr;
#endif
}

}  // namespace detail

Backend active_backend() {
  ops();
  return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return detail::avx2_ops() != nullptr;
  }
  return false;
}

bool set_backend(Backend backend) {
  if (!backend_available(backend)) return false;
  select(backend);
  return true;
}

void reset_backend() { auto_select(); }

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool set_backend_by_name(const std::string& name) {
  if (name == "auto") {
    reset_backend();
    return true;
  }
  if (name == "scalar") return set_backend(Backend::scalar);
  if (name == "avx2") return set_backend(Backend::avx2);
  return false;
}

double sum(const double* a, std::size_t n) { return ops().sum(a, n); }

double dot(const double* a, const double* b, std::size_t n) { return ops().dot(a, b, n); }

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  return ops().weighted_dot(a, b, w, n);
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  return ops().squared_l2(a, b, n);
}

void squared_l2_rows(const double* rows, std::size_t n, std::size_t d, const double* query,
                     double* out) {
  ops().squared_l2_rows(rows, n, d, query, out);
}

}  // namespace surrex::kern
