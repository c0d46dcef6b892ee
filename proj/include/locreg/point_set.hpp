#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "locreg/errors.hpp"

namespace locreg {

/// Point cloud in ambient dimension `dim`, stored column-major: cols[a][i] is
/// coordinate a of point i. Row ids are the insertion order 0..n-1.
struct PointSet {
    std::vector<std::vector<double>> cols;
    std::size_t n = 0;
    std::size_t dim = 0;

    PointSet() = default;

    PointSet(std::size_t n_points, std::size_t dimension)
        : cols(dimension, std::vector<double>(n_points, 0.0)),
          n(n_points),
          dim(dimension) {}

    static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) raise(ErrorCode::EmptyPointSet, "point set has no rows");
        PointSet ps(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != ps.dim)
                raise(ErrorCode::DimensionMismatch,
                      "row " + std::to_string(i) + " has dimension " +
                          std::to_string(rows[i].size()) + ", expected " +
                          std::to_string(ps.dim));
            for (std::size_t a = 0; a < ps.dim; ++a) ps.cols[a][i] = rows[i][a];
        }
        ps.validate();
        return ps;
    }

    double coord(std::size_t i, std::size_t a) const { return cols[a][i]; }

    std::vector<double> row(std::size_t i) const {
        std::vector<double> r(dim);
        for (std::size_t a = 0; a < dim; ++a) r[a] = cols[a][i];
        return r;
    }

    std::vector<const double*> col_ptrs() const {
        std::vector<const double*> p(dim);
        for (std::size_t a = 0; a < dim; ++a) p[a] = cols[a].data();
        return p;
    }

    /// Single-coordinate view of this cloud (copies column a).
    PointSet coordinate_subset(std::size_t a) const {
        PointSet ps(n, 1);
        ps.cols[0] = cols[a];
        return ps;
    }

    void validate() const {
        if (n == 0) raise(ErrorCode::EmptyPointSet, "point set has no rows");
        if (dim == 0) raise(ErrorCode::DimensionMismatch, "ambient dimension is 0");
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t i = 0; i < n; ++i)
                if (!std::isfinite(cols[a][i]))
                    raise(ErrorCode::InvalidArgument,
                          "non-finite coordinate at row " + std::to_string(i));
    }
};

struct Dataset {
    PointSet x;
    std::vector<double> y;

    void validate() const {
        x.validate();
        if (y.size() != x.n)
            raise(ErrorCode::DimensionMismatch,
                  "response length " + std::to_string(y.size()) +
                      " does not match point count " + std::to_string(x.n));
        for (double v : y)
            if (!std::isfinite(v))
                raise(ErrorCode::InvalidArgument, "non-finite response value");
    }
};

/// Per-coordinate affine transform fitted by standardize(); apply/invert are
/// exact inverses up to rounding.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> sd;

    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> out(x.size());
        for (std::size_t a = 0; a < x.size(); ++a) out[a] = (x[a] - mean[a]) / sd[a];
        return out;
    }

    std::vector<double> invert(std::span<const double> z) const {
        std::vector<double> out(z.size());
        for (std::size_t a = 0; a < z.size(); ++a) out[a] = z[a] * sd[a] + mean[a];
        return out;
    }
};

}  // namespace locreg
