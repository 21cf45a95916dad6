#include "kernels_internal.hpp"

// AVX2 variants of the reference kernels. This translation unit is the only
// one compiled with -mavx2; callers reach it through the dispatch table after
// a cpuid check.
//
// axpy/scale/add3 use unfused _mm256_mul_pd + _mm256_add_pd so each element
// sees the same two roundings as the scalar kernel and the backends stay
// bit-identical. Reductions keep four lane partials and fold at the end.

#ifdef EVACSIM_HAVE_AVX2

#include <immintrin.h>

namespace evacsim::kernels {
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double* x, std::size_t n, double c) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vc));
    for (; i < n; ++i) x[i] *= c;
}

void add3_avx2(const double* a, const double* b, const double* c, double* out,
               std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ab = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(ab, _mm256_loadu_pd(c + i)));
    }
    for (; i < n; ++i) out[i] = a[i] + b[i] + c[i];
}

std::size_t count_leq_avx2(const double* x, std::size_t n, double bound) {
    const __m256d vb = _mm256_set1_pd(bound);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vb, _CMP_LE_OQ);
        count += static_cast<std::size_t>(
            __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(cmp))));
    }
    for (; i < n; ++i)
        if (x[i] <= bound) ++count;
    return count;
}

GridMoments grid_moments_avx2(const double* p, std::size_t n) {
    __m256d m0 = _mm256_setzero_pd();
    __m256d m1 = _mm256_setzero_pd();
    __m256d m2 = _mm256_setzero_pd();
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        m0 = _mm256_add_pd(m0, v);
        const __m256d iv = _mm256_mul_pd(idx, v);
        m1 = _mm256_add_pd(m1, iv);
        m2 = _mm256_add_pd(m2, _mm256_mul_pd(idx, iv));
        idx = _mm256_add_pd(idx, four);
    }
    GridMoments m{hsum(m0), hsum(m1), hsum(m2)};
    for (; i < n; ++i) {
        const double k = static_cast<double>(i);
        m.m0 += p[i];
        m.m1 += k * p[i];
        m.m2 += k * k * p[i];
    }
    return m;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        "avx2",     sum_avx2,   dot_avx2,      axpy_avx2,
        scale_avx2, add3_avx2,  count_leq_avx2, grid_moments_avx2,
    };
    return ops;
}

}  // namespace evacsim::kernels

#endif  // EVACSIM_HAVE_AVX2
