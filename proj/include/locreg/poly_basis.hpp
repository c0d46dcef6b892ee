#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace locreg {

/// Multi-index monomial basis of total degree <= degree in `dim` variables,
/// graded-lexicographic order with the constant term first, so the first
/// coefficient of any fit is the intercept.
struct PolyBasis {
    std::size_t degree = 1;
    std::size_t dim = 1;
    std::vector<std::vector<unsigned>> exponents;

    static PolyBasis make(std::size_t dim, std::size_t degree);

    std::size_t size() const { return exponents.size(); }

    /// Writes the design row for offset u into out (size() entries):
    /// out[j] = prod_a u[a]^exponents[j][a].
    void design_row(std::span<const double> u, double* out) const;
};

/// Row-major design matrix (points.n x basis.size()) with rows
/// design_row(point_i - x).
std::vector<double> build_design(const struct PointSet& points,
                                 std::span<const double> x,
                                 const PolyBasis& basis);

}  // namespace locreg
