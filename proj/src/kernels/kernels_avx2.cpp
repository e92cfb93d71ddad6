// AVX2 + FMA variants of the row-sweep kernels. Compiled with -mavx2 -mfma in
// this translation unit only; callers must gate on cpu_supports_avx2().

#include "biaslens/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

#include "biaslens/rng.hpp"

namespace biaslens::kernels::avx2 {

namespace {

// ---- double-precision exp, Cephes expansion ----

const __m256d kExpHi = _mm256_set1_pd(709.436);
const __m256d kExpLo = _mm256_set1_pd(-708.396);
const __m256d kLog2E = _mm256_set1_pd(1.4426950408889634073599);
const __m256d kC1 = _mm256_set1_pd(6.93145751953125e-1);
const __m256d kC2 = _mm256_set1_pd(1.42860682030941723212e-6);
const __m256d kExpP0 = _mm256_set1_pd(1.26177193074810590878e-4);
const __m256d kExpP1 = _mm256_set1_pd(3.02994407707441961300e-2);
const __m256d kExpP2 = _mm256_set1_pd(9.99999999999999999910e-1);
const __m256d kExpQ0 = _mm256_set1_pd(3.00198505138664455042e-6);
const __m256d kExpQ1 = _mm256_set1_pd(2.52448340349684104192e-3);
const __m256d kExpQ2 = _mm256_set1_pd(2.27265548208155028766e-1);
const __m256d kExpQ3 = _mm256_set1_pd(2.00000000000000000005e0);

inline __m256d exp_pd(__m256d x) {
  const __m256d under = _mm256_cmp_pd(x, kExpLo, _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, kExpHi, _CMP_GT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, kExpLo), kExpHi);

  // n = round(x / ln 2); Cody-Waite reduction x -= n*ln2
  __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(x, kLog2E, _mm256_set1_pd(0.5)));
  const __m128i n32 = _mm256_cvtpd_epi32(px);
  x = _mm256_fnmadd_pd(px, kC1, x);
  x = _mm256_fnmadd_pd(px, kC2, x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_fmadd_pd(kExpP0, xx, kExpP1);
  p = _mm256_fmadd_pd(p, xx, kExpP2);
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_fmadd_pd(kExpQ0, xx, kExpQ1);
  q = _mm256_fmadd_pd(q, xx, kExpQ2);
  q = _mm256_fmadd_pd(q, xx, kExpQ3);
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

  // scale by 2^n through the exponent bits; n in [-1022, 1024]
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i pow2 =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));

  e = _mm256_andnot_pd(under, e);
  e = _mm256_blendv_pd(e, _mm256_set1_pd(HUGE_VAL), over);
  return e;
}

// ---- log1p on t in [0, 1], Cephes log expansion ----

const __m256d kLogP0 = _mm256_set1_pd(1.01875663804580931796e-4);
const __m256d kLogP1 = _mm256_set1_pd(4.97494994976747001425e-1);
const __m256d kLogP2 = _mm256_set1_pd(4.70579119878881725854e0);
const __m256d kLogP3 = _mm256_set1_pd(1.44989225341610930846e1);
const __m256d kLogP4 = _mm256_set1_pd(1.79368678507819816313e1);
const __m256d kLogP5 = _mm256_set1_pd(7.70838733755885391666e0);
const __m256d kLogQ0 = _mm256_set1_pd(1.12873587189167450590e1);
const __m256d kLogQ1 = _mm256_set1_pd(4.52279145837532221105e1);
const __m256d kLogQ2 = _mm256_set1_pd(8.29875266912776603211e1);
const __m256d kLogQ3 = _mm256_set1_pd(7.11544750618563894466e1);
const __m256d kLogQ4 = _mm256_set1_pd(2.31251620126765340583e1);
const __m256d kSqrt2 = _mm256_set1_pd(1.41421356237309504880);
const __m256d kLn2Hi = _mm256_set1_pd(0.693359375);
const __m256d kLn2Lo = _mm256_set1_pd(-2.121944400546905827679e-4);

inline __m256d log1p_unit(__m256d t) {
  // small branch: t - t^2/2 + t^3/3 - t^4/4
  __m256d s = _mm256_fmadd_pd(_mm256_set1_pd(-0.25), t,
                              _mm256_set1_pd(1.0 / 3.0));
  s = _mm256_fmadd_pd(s, t, _mm256_set1_pd(-0.5));
  s = _mm256_fmadd_pd(s, t, _mm256_set1_pd(1.0));
  s = _mm256_mul_pd(s, t);

  // rational branch on x = 1 + t in [1, 2]
  __m256d x = _mm256_add_pd(_mm256_set1_pd(1.0), t);
  const __m256d big = _mm256_cmp_pd(x, kSqrt2, _CMP_GT_OQ);
  const __m256d half_x = _mm256_mul_pd(x, _mm256_set1_pd(0.5));
  x = _mm256_blendv_pd(x, half_x, big);
  const __m256d e = _mm256_and_pd(big, _mm256_set1_pd(1.0));
  const __m256d z = _mm256_sub_pd(x, _mm256_set1_pd(1.0));
  const __m256d zz = _mm256_mul_pd(z, z);

  __m256d p = _mm256_fmadd_pd(kLogP0, z, kLogP1);
  p = _mm256_fmadd_pd(p, z, kLogP2);
  p = _mm256_fmadd_pd(p, z, kLogP3);
  p = _mm256_fmadd_pd(p, z, kLogP4);
  p = _mm256_fmadd_pd(p, z, kLogP5);
  __m256d q = _mm256_add_pd(z, kLogQ0);
  q = _mm256_fmadd_pd(q, z, kLogQ1);
  q = _mm256_fmadd_pd(q, z, kLogQ2);
  q = _mm256_fmadd_pd(q, z, kLogQ3);
  q = _mm256_fmadd_pd(q, z, kLogQ4);

  __m256d y = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(z, zz), p), q);
  y = _mm256_fmadd_pd(e, kLn2Lo, y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, y);
  __m256d rat = _mm256_add_pd(z, y);
  rat = _mm256_fmadd_pd(e, kLn2Hi, rat);

  const __m256d small = _mm256_cmp_pd(t, _mm256_set1_pd(1e-4), _CMP_LT_OQ);
  return _mm256_blendv_pd(rat, s, small);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

const __m256d kSignMask = _mm256_set1_pd(-0.0);
const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kZero = _mm256_setzero_pd();

// 64x64 -> low 64 multiply (Haswell idiom: three 32-bit partial products).
inline __m256i mul64(__m256i a, __m256i b) {
  const __m256i bswap = _mm256_shuffle_epi32(b, 0xB1);
  const __m256i prodlh = _mm256_mullo_epi32(a, bswap);
  const __m256i prodlh2 = _mm256_hadd_epi32(prodlh, _mm256_setzero_si256());
  const __m256i prodlh3 = _mm256_shuffle_epi32(prodlh2, 0x73);
  const __m256i prodll = _mm256_mul_epu32(a, b);
  return _mm256_add_epi64(prodll, prodlh3);
}

inline __m256i mix64(__m256i z) {
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mul64(z, _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ULL)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mul64(z, _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebULL)));
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

}  // namespace

bool compiled_in() { return true; }

double logistic_sweep(std::span<const double> eta, std::span<const double> y,
                      std::span<double> pi, std::span<double> w,
                      std::span<double> r) {
  const std::size_t n = eta.size();
  std::size_t i = 0;
  __m256d acc = kZero;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = _mm256_loadu_pd(eta.data() + i);
    const __m256d yy = _mm256_loadu_pd(y.data() + i);
    const __m256d t = exp_pd(_mm256_or_pd(_mm256_andnot_pd(kSignMask, e),
                                          kSignMask));  // exp(-|e|)
    const __m256d d = _mm256_add_pd(kOne, t);
    const __m256d nonneg = _mm256_cmp_pd(e, kZero, _CMP_GE_OQ);
    const __m256d p = _mm256_div_pd(_mm256_blendv_pd(t, kOne, nonneg), d);
    const __m256d wv = _mm256_div_pd(t, _mm256_mul_pd(d, d));
    _mm256_storeu_pd(pi.data() + i, p);
    _mm256_storeu_pd(w.data() + i, wv);
    _mm256_storeu_pd(r.data() + i, _mm256_sub_pd(yy, p));
    const __m256d sp =
        _mm256_add_pd(log1p_unit(t), _mm256_max_pd(e, kZero));
    acc = _mm256_add_pd(acc, _mm256_fmsub_pd(yy, e, sp));
  }
  double ll = hsum(acc);
  if (i < n) {
    ll += scalar::logistic_sweep(eta.subspan(i), y.subspan(i), pi.subspan(i),
                                 w.subspan(i), r.subspan(i));
  }
  return ll;
}

double bernoulli_loglik(std::span<const double> eta,
                        std::span<const double> y) {
  const std::size_t n = eta.size();
  std::size_t i = 0;
  __m256d acc = kZero;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = _mm256_loadu_pd(eta.data() + i);
    const __m256d yy = _mm256_loadu_pd(y.data() + i);
    const __m256d t =
        exp_pd(_mm256_or_pd(_mm256_andnot_pd(kSignMask, e), kSignMask));
    const __m256d sp =
        _mm256_add_pd(log1p_unit(t), _mm256_max_pd(e, kZero));
    acc = _mm256_add_pd(acc, _mm256_fmsub_pd(yy, e, sp));
  }
  double ll = hsum(acc);
  if (i < n) {
    ll += scalar::bernoulli_loglik(eta.subspan(i), y.subspan(i));
  }
  return ll;
}

void counter_uniform_fill(std::uint64_t stream, std::uint64_t start,
                          std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  const std::uint64_t g = rng::kGolden;
  __m256i state = _mm256_set_epi64x(
      static_cast<long long>(stream + (start + 4) * g),
      static_cast<long long>(stream + (start + 3) * g),
      static_cast<long long>(stream + (start + 2) * g),
      static_cast<long long>(stream + (start + 1) * g));
  const __m256i step = _mm256_set1_epi64x(static_cast<long long>(4 * g));
  const __m256i expo = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d two52 = _mm256_set1_pd(0x1.0p52);
  const __m256d scale = _mm256_set1_pd(0x1.0p-52);
  for (; i + 4 <= n; i += 4) {
    const __m256i z = mix64(state);
    state = _mm256_add_epi64(state, step);
    const __m256i mant = _mm256_srli_epi64(z, 12);
    const __m256d d =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(mant, expo)), two52);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(d, scale));
  }
  if (i < n) {
    scalar::counter_uniform_fill(stream, start + i, out.subspan(i));
  }
}

}  // namespace biaslens::kernels::avx2

#else  // non-AVX2 build: stubs that must never be dispatched to

#include "biaslens/errors.hpp"

namespace biaslens::kernels::avx2 {

bool compiled_in() { return false; }

double logistic_sweep(std::span<const double>, std::span<const double>,
                      std::span<double>, std::span<double>,
                      std::span<double>) {
  throw RuntimeFailure("avx2 kernels not compiled in");
}

double bernoulli_loglik(std::span<const double>, std::span<const double>) {
  throw RuntimeFailure("avx2 kernels not compiled in");
}

void counter_uniform_fill(std::uint64_t, std::uint64_t, std::span<double>) {
  throw RuntimeFailure("avx2 kernels not compiled in");
}

}  // namespace biaslens::kernels::avx2

#endif
