#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Row-sweep kernels behind the likelihood code. Scalar reference
// implementations are the semantics; the AVX2 variants are selected at
// runtime via CPUID and must agree with the reference (equivalence-tested).

namespace biaslens::kernels {

enum class Level { kScalar, kAvx2 };

bool cpu_supports_avx2();

// Currently dispatched level.
Level active_level();
std::string_view level_name(Level level);

// Override dispatch (tests, benchmarking). Requesting kAvx2 on a CPU
// without AVX2 keeps the scalar path and returns false.
bool force_level(Level level);

// One logistic sweep: pi = sigmoid(eta), w = pi*(1-pi), r = y - pi.
// Returns sum_i [ y_i*eta_i - log(1+exp(eta_i)) ]. y must be 0/1.
double logistic_sweep(std::span<const double> eta, std::span<const double> y,
                      std::span<double> pi, std::span<double> w,
                      std::span<double> r);

// Bernoulli log-likelihood only.
double bernoulli_loglik(std::span<const double> eta, std::span<const double> y);

// out[i] = counter_uniform(stream, start + i); bit-identical across levels.
void counter_uniform_fill(std::uint64_t stream, std::uint64_t start,
                          std::span<double> out);

namespace scalar {
double logistic_sweep(std::span<const double> eta, std::span<const double> y,
                      std::span<double> pi, std::span<double> w,
                      std::span<double> r);
double bernoulli_loglik(std::span<const double> eta, std::span<const double> y);
void counter_uniform_fill(std::uint64_t stream, std::uint64_t start,
                          std::span<double> out);
}  // namespace scalar

namespace avx2 {
// Compiled in a -mavx2 translation unit; call only when cpu_supports_avx2().
double logistic_sweep(std::span<const double> eta, std::span<const double> y,
                      std::span<double> pi, std::span<double> w,
                      std::span<double> r);
double bernoulli_loglik(std::span<const double> eta, std::span<const double> y);
void counter_uniform_fill(std::uint64_t stream, std::uint64_t start,
                          std::span<double> out);
bool compiled_in();
}  // namespace avx2

}  // namespace biaslens::kernels
