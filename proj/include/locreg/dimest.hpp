#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "locreg/neighbor_index.hpp"

namespace locreg {

/// Maximum-likelihood intrinsic-dimension estimate over a block of points.
/// per_point[i] belongs to point_ids[i]; skipped lists the block points whose
/// neighbor distances were degenerate (zero or all tied).
struct DimEstimate {
    std::size_t k = 0;
    std::vector<std::size_t> point_ids;
    std::vector<double> per_point;
    std::vector<std::size_t> skipped;
    double d_hat = 0.0;
};

/// For each block point x with T_j(x) the distance to its j-th nearest
/// neighbor (self excluded), the local estimate is
///   [ (1/(k-1)) * sum_{j=1}^{k-1} ln(T_k(x)/T_j(x)) ]^-1,
/// and d_hat averages the local estimates over the non-skipped block points.
DimEstimate estimate_dimension(const PointSet& points,
                               std::span<const std::size_t> block, std::size_t k,
                               const NeighborIndex& index);

}  // namespace locreg
