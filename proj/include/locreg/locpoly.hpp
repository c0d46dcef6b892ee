#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "locreg/kernels.hpp"
#include "locreg/neighbor_index.hpp"
#include "locreg/point_set.hpp"
#include "locreg/poly_basis.hpp"

namespace locreg {

/// One weighted least-squares fit at a point. fitted duplicates
/// coefficients[0]; s_self is present only when the fit was told which data
/// row the query coincides with; effective_rank < basis size marks a
/// rank-deficient (minimum-norm) solve.
struct LocalFit {
    std::vector<double> coefficients;
    double fitted = 0.0;
    std::optional<double> s_self;
    std::size_t support_count = 0;
    std::size_t effective_rank = 0;
};

/// Centers and scales every predictor coordinate to sample mean 0 and sample
/// standard deviation 1 (denominator n-1). The response is left untouched.
std::pair<Dataset, Standardizer> standardize(const Dataset& data);

/// Local polynomial fit at x: minimizes sum_i w_i (Y_i - row_i . beta)^2 over
/// rows with positive kernel weight (the `exclude` row dropped), via a
/// rank-revealing SVD of the sqrt(w)-scaled design. Rank-deficient solves
/// return the minimum-norm coefficients. `self_id` names the data row equal
/// to x, enabling the smoother-diagonal entry s_self.
LocalFit local_fit(const Dataset& data, std::span<const double> x,
                   const KernelSpec& kernel, const PolyBasis& basis,
                   std::optional<std::size_t> exclude = std::nullopt,
                   std::optional<std::size_t> self_id = std::nullopt);

/// Self-inclusive fits at every block point (x = X_j, self_id = j), assembled
/// in block order. When `index` is given and the kernel has compact support,
/// the support rows come from a radius query instead of a full scan; the two
/// paths produce identical fits.
std::vector<LocalFit> fit_block(const Dataset& data,
                                std::span<const std::size_t> block,
                                const KernelSpec& kernel, const PolyBasis& basis,
                                const NeighborIndex* index = nullptr);

/// Leave-one-out prediction at X_j: the fit at X_j with row j excluded.
double loo_prediction(const Dataset& data, std::size_t j, const KernelSpec& kernel,
                      const PolyBasis& basis);

namespace detail {

/// Support rows of a prospective fit: ids ascending, weights strictly
/// positive. zero_distance_id is the smallest row id coinciding with the
/// query, when one exists.
struct WeightedRows {
    std::vector<std::size_t> ids;
    std::vector<double> weights;
    std::optional<std::size_t> zero_distance_id;
};

/// Kernel-weight pass over the whole cloud: returns rows with w > 0, minus
/// the excluded id.
WeightedRows scan_support(const PointSet& points, std::span<const double> x,
                          const KernelSpec& kernel,
                          std::optional<std::size_t> exclude);

/// The solve behind local_fit, on caller-supplied weights. Exposed so tests
/// can drive it with externally scaled weights.
LocalFit weighted_polyfit(const Dataset& data, std::span<const double> x,
                          const PolyBasis& basis, const WeightedRows& rows,
                          std::optional<std::size_t> self_id);

}  // namespace detail

}  // namespace locreg
