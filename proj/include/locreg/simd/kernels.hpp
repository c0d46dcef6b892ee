#pragma once

#include <cmath>
#include <cstddef>

namespace locreg::simd {

/// Batch kernels over column-major (structure-of-arrays) coordinate data.
///
/// Every kernel is an elementwise map: output element i depends only on input
/// element i, and both backends perform the identical sequence of IEEE-754
/// operations per element (fused multiply-add in both). Backends therefore
/// produce bit-identical results, which the test suite asserts.
struct Ops {
    // out[i] = sum_a fma(cols[a][i] - query[a], same, acc), accumulated in
    // coordinate order starting from coordinate 0.
    void (*squared_distances)(const double* const* cols, std::size_t dim,
                              std::size_t n, const double* query, double* out);

    // out[i] = (1 - d2[i]*inv_h2) > 0 ? (1 - d2[i]*inv_h2) * scale : 0
    void (*epanechnikov_weights)(const double* d2, std::size_t n, double inv_h2,
                                 double scale, double* out);

    // out[i] = scale * exp(-0.5 * (d2[i]*inv_h2)); exp stays scalar in every
    // backend, so this entry is shared.
    void (*gaussian_weights)(const double* d2, std::size_t n, double inv_h2,
                             double scale, double* out);

    const char* name;
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
#define LOCREG_X86 1
const Ops& avx2_ops();
bool avx2_supported();
#else
#define LOCREG_X86 0
#endif

/// Backend chosen once per process: LOCREG_SIMD={auto,scalar,avx2} overrides
/// CPU detection. Requesting an unsupported backend raises InvalidArgument.
const Ops& active_ops();

/// Squared distance of point i to the query, with the same fused accumulation
/// as the batch kernel (bit-identical to its per-element result).
inline double point_dist2(const double* const* cols, std::size_t dim,
                          std::size_t i, const double* query) {
    double d = cols[0][i] - query[0];
    double acc = d * d;
    for (std::size_t a = 1; a < dim; ++a) {
        d = cols[a][i] - query[a];
        acc = std::fma(d, d, acc);
    }
    return acc;
}

}  // namespace locreg::simd
