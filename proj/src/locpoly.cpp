#include "locreg/locpoly.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "locreg/parallel.hpp"
#include "locreg/simd/kernels.hpp"

namespace locreg {

std::pair<Dataset, Standardizer> standardize(const Dataset& data) {
    data.validate();
    const std::size_t n = data.x.n;
    if (n < 2)
        raise(ErrorCode::InvalidArgument, "standardize requires at least 2 points");

    Standardizer st;
    st.mean.resize(data.x.dim);
    st.sd.resize(data.x.dim);
    Dataset out;
    out.x = PointSet(n, data.x.dim);
    out.y = data.y;

    for (std::size_t a = 0; a < data.x.dim; ++a) {
        const auto& col = data.x.cols[a];
        double sum = 0.0;
        for (double v : col) sum += v;
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sd > 0.0) || !std::isfinite(sd))
            raise(ErrorCode::DegenerateCoordinate,
                  "coordinate " + std::to_string(a + 1) +
                      " has zero sample standard deviation");
        st.mean[a] = mean;
        st.sd[a] = sd;
        for (std::size_t i = 0; i < n; ++i) out.x.cols[a][i] = (col[i] - mean) / sd;
    }
    return {std::move(out), std::move(st)};
}

namespace detail {

WeightedRows scan_support(const PointSet& points, std::span<const double> x,
                          const KernelSpec& kernel,
                          std::optional<std::size_t> exclude) {
    const auto cols = points.col_ptrs();
    std::vector<double> d2(points.n);
    simd::active_ops().squared_distances(cols.data(), points.dim, points.n,
                                         x.data(), d2.data());
    std::vector<double> w(points.n);
    kernel_weights(kernel, d2.data(), points.n, w.data());

    WeightedRows rows;
    const std::size_t excluded = exclude.value_or(points.n);
    for (std::size_t i = 0; i < points.n; ++i) {
        if (i == excluded) continue;
        if (w[i] > 0.0) {
            rows.ids.push_back(i);
            rows.weights.push_back(w[i]);
            if (d2[i] == 0.0 && !rows.zero_distance_id) rows.zero_distance_id = i;
        }
    }
    return rows;
}

// Support via the spatial index; weights recomputed with the same fused
// arithmetic as the batch scan, so the result matches scan_support exactly.
WeightedRows indexed_support(const NeighborIndex& index, std::span<const double> x,
                             const KernelSpec& kernel,
                             std::optional<std::size_t> exclude) {
    const auto ids = index.radius_query(x, kernel.h);
    const auto cols = index.points().col_ptrs();
    WeightedRows rows;
    rows.ids.reserve(ids.size());
    rows.weights.reserve(ids.size());
    const std::size_t excluded = exclude.value_or(index.size());
    for (const std::size_t id : ids) {
        if (id == excluded) continue;
        const double d2 = simd::point_dist2(cols.data(), index.dim(), id, x.data());
        const double w = weight_from_dist2(kernel, d2);
        if (w > 0.0) {
            rows.ids.push_back(id);
            rows.weights.push_back(w);
            if (d2 == 0.0 && !rows.zero_distance_id) rows.zero_distance_id = id;
        }
    }
    return rows;
}

LocalFit weighted_polyfit(const Dataset& data, std::span<const double> x,
                          const PolyBasis& basis, const WeightedRows& rows,
                          std::optional<std::size_t> self_id) {
    const std::size_t s = rows.ids.size();
    const std::size_t m = basis.size();
    if (s == 0)
        raise(ErrorCode::NoSupport, "no points receive positive kernel weight");

    Eigen::MatrixXd scaled_design(s, m);
    Eigen::VectorXd scaled_response(s);
    std::vector<double> u(data.x.dim);
    std::vector<double> row(m);
    for (std::size_t r = 0; r < s; ++r) {
        const std::size_t id = rows.ids[r];
        for (std::size_t a = 0; a < data.x.dim; ++a)
            u[a] = data.x.cols[a][id] - x[a];
        basis.design_row(u, row.data());
        const double sw = std::sqrt(rows.weights[r]);
        for (std::size_t j = 0; j < m; ++j)
            scaled_design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                sw * row[j];
        scaled_response(static_cast<Eigen::Index>(r)) = sw * data.y[id];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled_design,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    // Directions with singular value below eps * max(n, cols) * sigma_max are
    // truncated; the solve is then the minimum-norm least squares solution.
    // n is the full sample size: zero-weight rows are omitted from the scaled
    // design but belong to it algebraically.
    svd.setThreshold(std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(data.x.n, m)));
    const Eigen::VectorXd beta = svd.solve(scaled_response);

    LocalFit fit;
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.fitted = fit.coefficients[0];
    fit.support_count = s;
    fit.effective_rank = static_cast<std::size_t>(svd.rank());

    if (self_id) {
        for (std::size_t r = 0; r < s; ++r) {
            if (rows.ids[r] != *self_id) continue;
            // Smoother diagonal: e1' (X'WX)^+ e1 * w_self, from the SVD of the
            // scaled design (X'WX = V S^2 V').
            const auto& v = svd.matrixV();
            const auto& sv = svd.singularValues();
            double acc = 0.0;
            for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(fit.effective_rank);
                 ++t) {
                const double ratio = v(0, t) / sv(t);
                acc += ratio * ratio;
            }
            fit.s_self = acc * rows.weights[r];
            break;
        }
    }
    return fit;
}

}  // namespace detail

namespace {

void check_fit_inputs(const Dataset& data, std::span<const double> x,
                      const KernelSpec& kernel, const PolyBasis& basis,
                      std::optional<std::size_t> exclude) {
    kernel.validate();
    if (data.x.dim != x.size() || data.x.dim != kernel.dim ||
        data.x.dim != basis.dim)
        raise(ErrorCode::DimensionMismatch,
              "data, query, kernel and basis dimensions must all agree");
    if (exclude && *exclude >= data.x.n)
        raise(ErrorCode::InvalidArgument,
              "excluded id " + std::to_string(*exclude) + " is out of range");
}

}  // namespace

LocalFit local_fit(const Dataset& data, std::span<const double> x,
                   const KernelSpec& kernel, const PolyBasis& basis,
                   std::optional<std::size_t> exclude,
                   std::optional<std::size_t> self_id) {
    check_fit_inputs(data, x, kernel, basis, exclude);
    const auto rows = detail::scan_support(data.x, x, kernel, exclude);
    if (!self_id) self_id = rows.zero_distance_id;
    return detail::weighted_polyfit(data, x, basis, rows, self_id);
}

std::vector<LocalFit> fit_block(const Dataset& data,
                                std::span<const std::size_t> block,
                                const KernelSpec& kernel, const PolyBasis& basis,
                                const NeighborIndex* index) {
    kernel.validate();
    if (data.x.dim != kernel.dim || data.x.dim != basis.dim)
        raise(ErrorCode::DimensionMismatch,
              "data, kernel and basis dimensions must all agree");
    for (const std::size_t j : block)
        if (j >= data.x.n)
            raise(ErrorCode::InvalidArgument,
                  "block id " + std::to_string(j) + " is out of range");
    const bool use_index = index != nullptr && support_radius(kernel).has_value();
    if (use_index && (index->size() != data.x.n || index->dim() != data.x.dim))
        raise(ErrorCode::InvalidArgument, "index does not match the dataset");

    std::vector<LocalFit> fits(block.size());
    parallel_for(block.size(), [&](std::size_t b) {
        const std::size_t j = block[b];
        const auto x = data.x.row(j);
        try {
            const auto rows = use_index
                                  ? detail::indexed_support(*index, x, kernel, {})
                                  : detail::scan_support(data.x, x, kernel, {});
            fits[b] = detail::weighted_polyfit(data, x, basis, rows, j);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoSupport)
                raise(ErrorCode::NoSupport,
                      "block point id=" + std::to_string(j) + ": " + e.what());
            throw;
        }
    });
    return fits;
}

double loo_prediction(const Dataset& data, std::size_t j, const KernelSpec& kernel,
                      const PolyBasis& basis) {
    if (j >= data.x.n)
        raise(ErrorCode::InvalidArgument,
              "row id " + std::to_string(j) + " is out of range");
    const auto x = data.x.row(j);
    return local_fit(data, x, kernel, basis, j).fitted;
}

}  // namespace locreg
