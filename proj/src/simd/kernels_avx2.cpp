// AVX2+FMA backend. Compiled with -mavx2 -mfma -ffp-contract=off; the scalar
// tails below must round exactly like the scalar backend.

#include <immintrin.h>

#include <cmath>

#include "locreg/simd/kernels.hpp"

namespace locreg::simd {

namespace {

void squared_distances_avx2(const double* const* cols, std::size_t dim,
                            std::size_t n, const double* query, double* out) {
    const double* c0 = cols[0];
    const double q0 = query[0];
    const __m256d q0v = _mm256_set1_pd(q0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(c0 + i), q0v);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, d));
    }
    for (; i < n; ++i) {
        const double d = c0[i] - q0;
        out[i] = d * d;
    }
    for (std::size_t a = 1; a < dim; ++a) {
        const double* ca = cols[a];
        const double qa = query[a];
        const __m256d qav = _mm256_set1_pd(qa);
        i = 0;
        for (; i + 4 <= n; i += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(ca + i), qav);
            const __m256d acc = _mm256_loadu_pd(out + i);
            _mm256_storeu_pd(out + i, _mm256_fmadd_pd(d, d, acc));
        }
        for (; i < n; ++i) {
            const double d = ca[i] - qa;
            out[i] = std::fma(d, d, out[i]);
        }
    }
}

void epanechnikov_weights_avx2(const double* d2, std::size_t n, double inv_h2,
                               double scale, double* out) {
    const __m256d inv = _mm256_set1_pd(inv_h2);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d sc = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(d2 + i), inv);
        const __m256d u = _mm256_sub_pd(one, t);
        // max(u, 0) returns +0 for u <= 0, matching the scalar branch.
        const __m256d w = _mm256_mul_pd(_mm256_max_pd(u, zero), sc);
        _mm256_storeu_pd(out + i, w);
    }
    for (; i < n; ++i) {
        const double u = 1.0 - d2[i] * inv_h2;
        out[i] = u > 0.0 ? u * scale : 0.0;
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        squared_distances_avx2,
        epanechnikov_weights_avx2,
        scalar_ops().gaussian_weights,
        "avx2",
    };
    return ops;
}

}  // namespace locreg::simd
