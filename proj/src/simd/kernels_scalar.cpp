#include <cmath>

#include "locreg/simd/kernels.hpp"

namespace locreg::simd {

namespace detail {

void squared_distances_scalar(const double* const* cols, std::size_t dim,
                              std::size_t n, const double* query, double* out) {
    const double q0 = query[0];
    const double* c0 = cols[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double d = c0[i] - q0;
        out[i] = d * d;
    }
    for (std::size_t a = 1; a < dim; ++a) {
        const double qa = query[a];
        const double* ca = cols[a];
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ca[i] - qa;
            out[i] = std::fma(d, d, out[i]);
        }
    }
}

void epanechnikov_weights_scalar(const double* d2, std::size_t n, double inv_h2,
                                 double scale, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 1.0 - d2[i] * inv_h2;
        out[i] = u > 0.0 ? u * scale : 0.0;
    }
}

void gaussian_weights_scalar(const double* d2, std::size_t n, double inv_h2,
                             double scale, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = scale * std::exp(-0.5 * (d2[i] * inv_h2));
    }
}

}  // namespace detail

const Ops& scalar_ops() {
    static const Ops ops{
        detail::squared_distances_scalar,
        detail::epanechnikov_weights_scalar,
        detail::gaussian_weights_scalar,
        "scalar",
    };
    return ops;
}

}  // namespace locreg::simd
