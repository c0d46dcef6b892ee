#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "locreg/kernels.hpp"
#include "locreg/locpoly.hpp"

namespace locreg {

/// Candidate bandwidths h_b = lambda_b * n^(-1/(d_hat+4)).
struct BandwidthGrid {
    std::vector<double> lambdas;
    std::size_t n = 0;
    double d_hat = 0.0;
    std::vector<double> candidates;
};

/// 20 geometric points from 0.3 to 6.0; brackets the feasibility boundary of
/// the compact kernel on standardized predictors.
std::vector<double> default_lambda_grid();

BandwidthGrid candidate_bandwidths(std::vector<double> lambdas, std::size_t n,
                                   double d_hat);

struct CriterionScore {
    double lambda = 0.0;
    double h = 0.0;
    bool feasible = false;
    std::string reason;     // set when infeasible
    double mgcv = 0.0;      // valid when feasible
    double atr = 0.0;       // block-average smoother diagonal
    double rss_block = 0.0; // block mean squared residual
};

struct BandwidthSelection {
    BandwidthGrid grid;
    std::vector<CriterionScore> scores;
    double chosen = 0.0;
    std::size_t chosen_index = 0;
};

/// Modified leave-one-out CV over the block, computed through the smoother
/// diagonal identity (Y_j - fit_j)^2 / (1 - S_jj)^2 in a single block pass.
/// Throws Infeasible when any block point has no support, a rank-deficient
/// self-fit, or S_jj within 1e-10 of 1.
double mcv(const Dataset& data, std::span<const std::size_t> block, double h,
           const PolyBasis& basis, KernelFamily family,
           const NeighborIndex* index = nullptr);

/// Generalized variant: per-point diagonals replaced by their block average.
/// Infeasible candidates come back with feasible=false instead of throwing.
CriterionScore mgcv(const Dataset& data, std::span<const std::size_t> block,
                    double h, const PolyBasis& basis, KernelFamily family,
                    const NeighborIndex* index = nullptr);

/// Index of the feasible score with minimal mgcv; scores must be in ascending
/// candidate order, so equal minima resolve to the smaller h. Throws
/// NoFeasibleBandwidth when nothing is feasible.
std::size_t argmin_feasible(std::span<const CriterionScore> scores);

/// Scores every candidate and picks the feasible minimizer (ties toward the
/// smaller h). Throws NoFeasibleBandwidth when nothing is feasible.
BandwidthSelection select_bandwidth(const Dataset& data,
                                    std::span<const std::size_t> block,
                                    const BandwidthGrid& grid,
                                    const PolyBasis& basis, KernelFamily family,
                                    const NeighborIndex* index = nullptr);

}  // namespace locreg
