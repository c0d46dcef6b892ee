#include "locreg/bandwidth.hpp"

#include <cmath>

#include "locreg/parallel.hpp"

namespace locreg {

std::vector<double> default_lambda_grid() {
    constexpr std::size_t count = 20;
    constexpr double lo = 0.3;
    constexpr double hi = 6.0;
    std::vector<double> lambdas(count);
    for (std::size_t i = 0; i < count; ++i)
        lambdas[i] = lo * std::pow(hi / lo,
                                   static_cast<double>(i) /
                                       static_cast<double>(count - 1));
    return lambdas;
}

BandwidthGrid candidate_bandwidths(std::vector<double> lambdas, std::size_t n,
                                   double d_hat) {
    if (lambdas.empty()) raise(ErrorCode::BadGrid, "lambda grid is empty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i]))
            raise(ErrorCode::BadGrid, "lambda values must be positive and finite");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            raise(ErrorCode::BadGrid, "lambda values must be strictly ascending");
    }
    if (n < 2) raise(ErrorCode::BadGrid, "grid needs n >= 2");
    if (!(d_hat > 0.0) || !std::isfinite(d_hat))
        raise(ErrorCode::BadGrid, "d_hat must be positive and finite");

    BandwidthGrid grid;
    grid.n = n;
    grid.d_hat = d_hat;
    const double rate = std::pow(static_cast<double>(n), -1.0 / (d_hat + 4.0));
    grid.candidates.resize(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        grid.candidates[i] = lambdas[i] * rate;
    grid.lambdas = std::move(lambdas);
    return grid;
}

namespace {

constexpr double kDiagonalGuard = 1e-10;

struct BlockPass {
    bool ok = false;
    std::string reason;
    std::vector<double> fitted;
    std::vector<double> s_diag;
    double rss = 0.0;  // block mean squared residual
    double atr = 0.0;
};

BlockPass run_block(const Dataset& data, std::span<const std::size_t> block,
                    double h, const PolyBasis& basis, KernelFamily family,
                    const NeighborIndex* index) {
    BlockPass pass;
    if (block.empty()) raise(ErrorCode::InvalidArgument, "block is empty");
    const KernelSpec kernel{family, h, data.x.dim};

    std::vector<LocalFit> fits;
    try {
        fits = fit_block(data, block, kernel, basis, index);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoSupport) {
            pass.reason = e.what();
            return pass;
        }
        throw;
    }

    const std::size_t n1 = block.size();
    pass.fitted.resize(n1);
    pass.s_diag.resize(n1);
    double rss_sum = 0.0;
    double s_sum = 0.0;
    for (std::size_t b = 0; b < n1; ++b) {
        const LocalFit& fit = fits[b];
        if (fit.effective_rank < basis.size()) {
            pass.reason = "rank-deficient self-fit at block point id=" +
                          std::to_string(block[b]);
            return pass;
        }
        pass.fitted[b] = fit.fitted;
        pass.s_diag[b] = fit.s_self.value();
        const double res = data.y[block[b]] - fit.fitted;
        rss_sum += res * res;
        s_sum += pass.s_diag[b];
    }
    pass.rss = rss_sum / static_cast<double>(n1);
    pass.atr = s_sum / static_cast<double>(n1);
    pass.ok = true;
    return pass;
}

}  // namespace

double mcv(const Dataset& data, std::span<const std::size_t> block, double h,
           const PolyBasis& basis, KernelFamily family, const NeighborIndex* index) {
    const BlockPass pass = run_block(data, block, h, basis, family, index);
    if (!pass.ok)
        raise(ErrorCode::Infeasible, "h=" + std::to_string(h) + ": " + pass.reason);
    double sum = 0.0;
    for (std::size_t b = 0; b < block.size(); ++b) {
        const double denom = 1.0 - pass.s_diag[b];
        if (denom <= kDiagonalGuard)
            raise(ErrorCode::Infeasible,
                  "h=" + std::to_string(h) + ": smoother diagonal at block point id=" +
                      std::to_string(block[b]) + " is within 1e-10 of 1");
        const double t = (data.y[block[b]] - pass.fitted[b]) / denom;
        sum += t * t;
    }
    return sum / static_cast<double>(block.size());
}

CriterionScore mgcv(const Dataset& data, std::span<const std::size_t> block,
                    double h, const PolyBasis& basis, KernelFamily family,
                    const NeighborIndex* index) {
    CriterionScore score;
    score.h = h;
    const BlockPass pass = run_block(data, block, h, basis, family, index);
    if (!pass.ok) {
        score.reason = pass.reason;
        return score;
    }
    score.atr = pass.atr;
    score.rss_block = pass.rss;
    if (!(pass.atr > 0.0) || 1.0 - pass.atr <= kDiagonalGuard) {
        score.reason = "average smoother diagonal outside (0, 1)";
        return score;
    }
    const double denom = 1.0 - pass.atr;
    score.mgcv = pass.rss / (denom * denom);
    score.feasible = true;
    return score;
}

std::size_t argmin_feasible(std::span<const CriterionScore> scores) {
    bool found = false;
    std::size_t best = 0;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (!scores[c].feasible) continue;
        // Ascending candidate order makes strict '<' resolve ties toward the
        // smaller bandwidth.
        if (!found || scores[c].mgcv < scores[best].mgcv) {
            best = c;
            found = true;
        }
    }
    if (!found)
        raise(ErrorCode::NoFeasibleBandwidth,
              "no candidate bandwidth produced a feasible block fit");
    return best;
}

BandwidthSelection select_bandwidth(const Dataset& data,
                                    std::span<const std::size_t> block,
                                    const BandwidthGrid& grid,
                                    const PolyBasis& basis, KernelFamily family,
                                    const NeighborIndex* index) {
    if (grid.candidates.empty()) raise(ErrorCode::BadGrid, "empty candidate grid");

    BandwidthSelection selection;
    selection.grid = grid;
    selection.scores.resize(grid.candidates.size());
    parallel_for(grid.candidates.size(), [&](std::size_t c) {
        selection.scores[c] = mgcv(data, block, grid.candidates[c], basis, family, index);
        selection.scores[c].lambda = grid.lambdas[c];
    });

    selection.chosen_index = argmin_feasible(selection.scores);
    selection.chosen = selection.scores[selection.chosen_index].h;
    return selection;
}

}  // namespace locreg
