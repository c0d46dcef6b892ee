#include "locreg/dimest.hpp"

#include <cmath>
#include <optional>

#include "locreg/parallel.hpp"

namespace locreg {

DimEstimate estimate_dimension(const PointSet& points,
                               std::span<const std::size_t> block, std::size_t k,
                               const NeighborIndex& index) {
    if (block.empty())
        raise(ErrorCode::InvalidArgument, "dimension estimate needs a non-empty block");
    if (k < 3 || k + 1 > points.n)
        raise(ErrorCode::KOutOfRange,
              "k=" + std::to_string(k) + " must satisfy 3 <= k <= n-1 (n=" +
                  std::to_string(points.n) + ")");
    if (index.size() != points.n || index.dim() != points.dim)
        raise(ErrorCode::InvalidArgument, "index does not match the point set");
    for (const std::size_t j : block)
        if (j >= points.n)
            raise(ErrorCode::InvalidArgument,
                  "block id " + std::to_string(j) + " is out of range");

    std::vector<std::optional<double>> local(block.size());
    parallel_for(block.size(), [&](std::size_t b) {
        const std::size_t j = block[b];
        const auto x = points.row(j);
        const auto nn = index.knn(x, k, j);
        const double t_k = nn.back().distance;
        if (!(t_k > 0.0)) return;  // all k neighbors coincide with x
        double log_sum = 0.0;
        for (std::size_t t = 0; t + 1 < k; ++t) {
            if (!(nn[t].distance > 0.0)) return;  // duplicate neighbor
            log_sum += std::log(t_k / nn[t].distance);
        }
        if (!(log_sum > 0.0)) return;  // all distances tied
        const double est = static_cast<double>(k - 1) / log_sum;
        if (std::isfinite(est) && est > 0.0) local[b] = est;
    });

    DimEstimate out;
    out.k = k;
    double sum = 0.0;
    for (std::size_t b = 0; b < block.size(); ++b) {
        if (local[b]) {
            out.point_ids.push_back(block[b]);
            out.per_point.push_back(*local[b]);
            sum += *local[b];
        } else {
            out.skipped.push_back(block[b]);
        }
    }
    if (out.per_point.empty())
        raise(ErrorCode::AllPointsDegenerate,
              "every block point has degenerate neighbor distances");
    out.d_hat = sum / static_cast<double>(out.per_point.size());
    return out;
}

}  // namespace locreg
