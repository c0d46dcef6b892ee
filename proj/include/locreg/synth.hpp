#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locreg/bandwidth.hpp"
#include "locreg/dimest.hpp"
#include "locreg/locpoly.hpp"

namespace locreg {

/// Configuration of one synthetic draw: n points on (or near) the embedded
/// curve, unit-variance response noise, coordinate noise of scale sigma_prime
/// (0 = perfect embedding).
struct GenConfig {
    std::size_t n = 200;
    std::uint64_t seed = 0;
    double sigma_prime = 0.0;
};

struct GeneratedData {
    Dataset dataset;
    std::vector<double> latent;  // curve parameter of each point
    std::vector<double> truth;   // regression function at each observed X
};

/// m(x) = cos(x1) + x2 - x3^2 on R^3.
double true_regression(std::span<const double> x);

/// Draws the predictor cloud and responses. Sub-streams (channel indices of
/// the seeded generator): 0 = curve parameter, 1..3 = per-coordinate noise,
/// 4 = response noise; each stream is drawn to completion before the next.
GeneratedData generate(const GenConfig& config);

/// Ids of the n1 central points by rank of the first coordinate (offset
/// floor((n-n1)/2)), returned in rank order. Ranks are unchanged by
/// standardization, so raw and standardized inputs give the same block.
std::vector<std::size_t> middle_block(const Dataset& data, std::size_t n1);

/// Response model override for diagnostics: `linear` replaces the regression
/// function by c0 + coef.x (constant when coef is zero), `noiseless` drops the
/// response noise while reusing the same draws elsewhere. Defaults reproduce
/// the standard generator.
struct ResponseModel {
    bool noiseless = false;
    bool linear = false;
    double c0 = 0.0;
    std::array<double, 3> coef{{0.0, 0.0, 0.0}};

    bool standard() const { return !noiseless && !linear; }
};

/// Rewrites truth/response in place per the model, reusing the original noise
/// draws (y - truth) when noise is kept.
void apply_response_model(GeneratedData& data, const ResponseModel& model);

struct ExperimentConfig {
    GenConfig gen;
    std::size_t block_size = 100;
    std::size_t k = 15;
    std::vector<double> lambdas;  // empty = default_lambda_grid()
    KernelFamily family = KernelFamily::epanechnikov;
    std::size_t degree = 1;
    ResponseModel model;
};

struct ExperimentResult {
    std::uint64_t seed = 0;
    double d_hat = 0.0;
    double h_ull = 0.0;
    double h_mll = 0.0;
    double mse_ull = 0.0;
    double mse_mll = 0.0;
    std::vector<std::size_t> block;
};

/// One block-point row of the fitted-curve table (ascending x1_std).
struct CurvePoint {
    double x1_std;
    double truth;
    double y;
    double ull_fit;
    double mll_fit;
};

struct ExperimentRun {
    ExperimentResult result;
    std::vector<CurvePoint> curve;
    BandwidthSelection selection_ull;
    BandwidthSelection selection_mll;
    DimEstimate dim;
};

/// Full single-seed pipeline: standardize, pick the middle block, estimate
/// d_hat on the ambient cloud, select bandwidths separately for the
/// single-coordinate fit (grid exponent d = 1) and the all-coordinates fit
/// (grid exponent d_hat), fit both at the block points, and score each
/// against the true regression function.
ExperimentRun run_experiment(const ExperimentConfig& config);

struct NoiseSweepRow {
    double sigma_prime;
    double mean_mse;
    double sd_mse;
};

/// Mean (and sd) over seeds of the all-coordinates MSE at each noise scale,
/// ascending by sigma_prime.
std::vector<NoiseSweepRow> noise_sweep(std::span<const double> sigma_primes,
                                       std::span<const std::uint64_t> seeds,
                                       const ExperimentConfig& base);

struct RateStudyResult {
    std::vector<std::size_t> ns;
    std::vector<double> mse;
    std::vector<double> h;
    double slope = 0.0;
    bool slope_defined = false;
};

/// For each n: perfect-embedding draws, one degree-q fit at eval_point with
/// h = lambda0 * n^(-1/(2q+3)), squared error against the true regression
/// value averaged over seeds; slope is the least-squares slope of log MSE
/// against log n. Fits run on raw (unstandardized) coordinates.
RateStudyResult rate_study(std::span<const std::size_t> ns,
                           std::span<const std::uint64_t> seeds, double lambda0,
                           std::size_t degree, std::span<const double> eval_point,
                           KernelFamily family = KernelFamily::epanechnikov,
                           const ResponseModel& model = {});

struct BiasVarianceResult {
    double bias = 0.0;
    double variance = 0.0;
    std::size_t reps = 0;
};

/// Monte Carlo conditional bias/variance of the degree-1 fit at x: over reps
/// fresh perfect-embedding draws of size n, the mean of (fit - m(x)) and the
/// sample variance of the fit. Raw coordinates, rep r seeded with
/// derive_seed(seed, r). `predictor_dims` restricts the fit to a subset of
/// ambient coordinates (empty = all three, the blind fit); {0} probes the
/// d = 1 estimator on the curve coordinate.
BiasVarianceResult bias_variance_probe(std::span<const double> x, double h,
                                       std::size_t n, std::size_t reps,
                                       std::uint64_t seed,
                                       KernelFamily family = KernelFamily::epanechnikov,
                                       const ResponseModel& model = {},
                                       std::span<const std::size_t> predictor_dims = {});

}  // namespace locreg
