#include "locreg/poly_basis.hpp"

#include "locreg/errors.hpp"
#include "locreg/point_set.hpp"

namespace locreg {

namespace {

void enumerate_degree(std::size_t dim, unsigned total, std::size_t coord,
                      std::vector<unsigned>& current,
                      std::vector<std::vector<unsigned>>& out) {
    if (coord + 1 == dim) {
        current[coord] = total;
        out.push_back(current);
        return;
    }
    for (unsigned e = total; e != static_cast<unsigned>(-1); --e) {
        current[coord] = e;
        enumerate_degree(dim, total - e, coord + 1, current, out);
    }
}

}  // namespace

PolyBasis PolyBasis::make(std::size_t dim, std::size_t degree) {
    if (dim == 0) raise(ErrorCode::DimensionMismatch, "basis dimension must be >= 1");
    PolyBasis basis;
    basis.degree = degree;
    basis.dim = dim;
    std::vector<unsigned> current(dim, 0);
    for (unsigned g = 0; g <= degree; ++g)
        enumerate_degree(dim, g, 0, current, basis.exponents);
    return basis;
}

void PolyBasis::design_row(std::span<const double> u, double* out) const {
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        double v = 1.0;
        const auto& alpha = exponents[j];
        for (std::size_t a = 0; a < dim; ++a)
            for (unsigned e = 0; e < alpha[a]; ++e) v *= u[a];
        out[j] = v;
    }
}

std::vector<double> build_design(const PointSet& points, std::span<const double> x,
                                 const PolyBasis& basis) {
    if (points.dim != x.size() || points.dim != basis.dim)
        raise(ErrorCode::DimensionMismatch,
              "design requires matching point, center and basis dimensions");
    const std::size_t m = basis.size();
    std::vector<double> design(points.n * m);
    std::vector<double> u(points.dim);
    for (std::size_t i = 0; i < points.n; ++i) {
        for (std::size_t a = 0; a < points.dim; ++a) u[a] = points.cols[a][i] - x[a];
        basis.design_row(u, design.data() + i * m);
    }
    return design;
}

}  // namespace locreg
