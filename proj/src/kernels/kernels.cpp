#include "biaslens/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "biaslens/rng.hpp"

namespace biaslens::kernels {

namespace scalar {

double logistic_sweep(std::span<const double> eta, std::span<const double> y,
                      std::span<double> pi, std::span<double> w,
                      std::span<double> r) {
  const std::size_t n = eta.size();
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = eta[i];
    const double t = std::exp(-std::fabs(e));  // in [0, 1]
    const double d = 1.0 + t;
    const double p = e >= 0.0 ? 1.0 / d : t / d;
    pi[i] = p;
    w[i] = t / (d * d);
    r[i] = y[i] - p;
    // log(1+exp(e)) = max(e,0) + log1p(exp(-|e|))
    ll += y[i] * e - (std::log1p(t) + (e > 0.0 ? e : 0.0));
  }
  return ll;
}

double bernoulli_loglik(std::span<const double> eta,
                        std::span<const double> y) {
  const std::size_t n = eta.size();
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = eta[i];
    const double t = std::exp(-std::fabs(e));
    ll += y[i] * e - (std::log1p(t) + (e > 0.0 ? e : 0.0));
  }
  return ll;
}

void counter_uniform_fill(std::uint64_t stream, std::uint64_t start,
                          std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rng::counter_uniform(stream, start + i);
  }
}

}  // namespace scalar

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

std::atomic<Level> g_level{[] {
  return (cpu_supports_avx2() && avx2::compiled_in()) ? Level::kAvx2
                                                      : Level::kScalar;
}()};

}  // namespace

Level active_level() { return g_level.load(std::memory_order_relaxed); }

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kAvx2:
      return "avx2";
    case Level::kScalar:
      return "scalar";
  }
  return "unknown";
}

bool force_level(Level level) {
  if (level == Level::kAvx2 && !(cpu_supports_avx2() && avx2::compiled_in())) {
    return false;
  }
  g_level.store(level, std::memory_order_relaxed);
  return true;
}

double logistic_sweep(std::span<const double> eta, std::span<const double> y,
                      std::span<double> pi, std::span<double> w,
                      std::span<double> r) {
  if (active_level() == Level::kAvx2) {
    return avx2::logistic_sweep(eta, y, pi, w, r);
  }
  return scalar::logistic_sweep(eta, y, pi, w, r);
}

double bernoulli_loglik(std::span<const double> eta,
                        std::span<const double> y) {
  if (active_level() == Level::kAvx2) {
    return avx2::bernoulli_loglik(eta, y);
  }
  return scalar::bernoulli_loglik(eta, y);
}

void counter_uniform_fill(std::uint64_t stream, std::uint64_t start,
                          std::span<double> out) {
  if (active_level() == Level::kAvx2) {
    return avx2::counter_uniform_fill(stream, start, out);
  }
  return scalar::counter_uniform_fill(stream, start, out);
}

}  // namespace biaslens::kernels
