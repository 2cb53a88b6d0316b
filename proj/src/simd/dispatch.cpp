#include "wavecb/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace wavecb::simd {

namespace detail {
extern const KernelTable scalar_table;
#ifdef WAVECB_HAVE_AVX2_TU
extern const KernelTable avx2_table;
#endif
#ifdef WAVECB_HAVE_NEON_TU
extern const KernelTable neon_table;
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(WAVECB_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_neon() {
#ifdef WAVECB_HAVE_NEON_TU
  return true;  // NEON is baseline on A64
#else
  return false;
#endif
}

Path detect() {
  if (const char* env = std::getenv("WAVECB_SIMD")) {
    if (!std::strcmp(env, "scalar")) return Path::scalar;
    if (!std::strcmp(env, "avx2") && cpu_has_avx2()) return Path::avx2;
    if (!std::strcmp(env, "neon") && cpu_has_neon()) return Path::neon;
    if (std::strcmp(env, "auto") != 0) return Path::scalar;
  }
  if (cpu_has_avx2()) return Path::avx2;
  if (cpu_has_neon()) return Path::neon;
  return Path::scalar;
}

std::atomic<int> g_path{-1};

Path current() {
  int p = g_path.load(std::memory_order_relaxed);
  if (p < 0) {
    p = static_cast<int>(detect());
    g_path.store(p, std::memory_order_relaxed);
  }
  return static_cast<Path>(p);
}

}  // namespace

bool path_supported(Path p) {
  switch (p) {
    case Path::scalar: return true;
    case Path::avx2: return cpu_has_avx2();
    case Path::neon: return cpu_has_neon();
  }
  return false;
}

const KernelTable& kernels_for(Path p) {
  switch (p) {
#ifdef WAVECB_HAVE_AVX2_TU
    case Path::avx2: return detail::avx2_table;
#endif
#ifdef WAVECB_HAVE_NEON_TU
    case Path::neon: return detail::neon_table;
#endif
    default: return detail::scalar_table;
  }
}

const KernelTable& kernels() { return kernels_for(current()); }

Path active_path() { return current(); }

void force_path(Path p) {
  if (!path_supported(p))
    throw std::runtime_error(std::string("simd path not supported here: ") +
                             path_name(p));
  g_path.store(static_cast<int>(p), std::memory_order_relaxed);
}

const char* path_name(Path p) {
  switch (p) {
    case Path::scalar: return "scalar";
    case Path::avx2: return "avx2";
    case Path::neon: return "neon";
  }
  return "?";
}

}  // namespace wavecb::simd
