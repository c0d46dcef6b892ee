#include "locreg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locreg/parallel.hpp"
#include "locreg/rng.hpp"

namespace locreg {

double true_regression(std::span<const double> x) {
    if (x.size() != 3)
        raise(ErrorCode::DimensionMismatch,
              "true regression function expects dimension 3, got " +
                  std::to_string(x.size()));
    return std::cos(x[0]) + x[1] - x[2] * x[2];
}

GeneratedData generate(const GenConfig& config) {
    if (config.n < 10)
        raise(ErrorCode::InvalidArgument, "generator requires n >= 10");
    if (!(config.sigma_prime >= 0.0) || !std::isfinite(config.sigma_prime))
        raise(ErrorCode::InvalidArgument, "sigma_prime must be >= 0");

    const std::size_t n = config.n;
    GeneratedData out;
    out.dataset.x = PointSet(n, 3);
    out.dataset.y.resize(n);
    out.latent.resize(n);
    out.truth.resize(n);

    NormalStream curve_stream(config.seed, 0);
    for (std::size_t i = 0; i < n; ++i) out.latent[i] = curve_stream.next();

    auto& x1 = out.dataset.x.cols[0];
    auto& x2 = out.dataset.x.cols[1];
    auto& x3 = out.dataset.x.cols[2];
    for (std::size_t i = 0; i < n; ++i) {
        const double t = out.latent[i];
        x1[i] = t;
        x2[i] = t * t * t + std::sin(t) - 1.0;
        x3[i] = std::log(t * t + 1.0) - t;
    }
    if (config.sigma_prime > 0.0) {
        for (std::size_t a = 0; a < 3; ++a) {
            NormalStream noise(config.seed, 1 + a);
            auto& col = out.dataset.x.cols[a];
            for (std::size_t i = 0; i < n; ++i)
                col[i] += config.sigma_prime * noise.next();
        }
    }

    NormalStream response_noise(config.seed, 4);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi[3] = {x1[i], x2[i], x3[i]};
        out.truth[i] = true_regression(xi);
        out.dataset.y[i] = out.truth[i] + response_noise.next();
    }
    return out;
}

std::vector<std::size_t> middle_block(const Dataset& data, std::size_t n1) {
    data.validate();
    const std::size_t n = data.x.n;
    if (n1 > n)
        raise(ErrorCode::BlockTooLarge, "block size " + std::to_string(n1) +
                                            " exceeds sample size " + std::to_string(n));
    if (n1 == 0) raise(ErrorCode::InvalidArgument, "block size must be >= 1");

    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    const double* first = data.x.cols[0].data();
    std::sort(ids.begin(), ids.end(), [first](std::size_t i, std::size_t j) {
        return first[i] < first[j] || (first[i] == first[j] && i < j);
    });
    const std::size_t offset = (n - n1) / 2;
    return {ids.begin() + static_cast<std::ptrdiff_t>(offset),
            ids.begin() + static_cast<std::ptrdiff_t>(offset + n1)};
}

void apply_response_model(GeneratedData& data, const ResponseModel& model) {
    if (model.standard()) return;
    for (std::size_t i = 0; i < data.dataset.x.n; ++i) {
        const double noise = data.dataset.y[i] - data.truth[i];
        if (model.linear) {
            double v = model.c0;
            for (std::size_t a = 0; a < data.dataset.x.dim && a < 3; ++a)
                v += model.coef[a] * data.dataset.x.cols[a][i];
            data.truth[i] = v;
        }
        data.dataset.y[i] = data.truth[i] + (model.noiseless ? 0.0 : noise);
    }
}

ExperimentRun run_experiment(const ExperimentConfig& config) {
    GeneratedData gen = generate(config.gen);
    apply_response_model(gen, config.model);
    const auto [std_data, standardizer] = standardize(gen.dataset);

    ExperimentRun run;
    run.result.seed = config.gen.seed;
    run.result.block = middle_block(std_data, config.block_size);
    const auto& block = run.result.block;

    const NeighborIndex index = NeighborIndex::build(std_data.x);
    run.dim = estimate_dimension(std_data.x, block, config.k, index);
    run.result.d_hat = run.dim.d_hat;

    const auto lambdas =
        config.lambdas.empty() ? default_lambda_grid() : config.lambdas;

    // Single-coordinate fit: first predictor only, grid exponent for d = 1.
    Dataset ull_data;
    ull_data.x = std_data.x.coordinate_subset(0);
    ull_data.y = std_data.y;
    const NeighborIndex ull_index = NeighborIndex::build(ull_data.x);
    const PolyBasis ull_basis = PolyBasis::make(1, config.degree);
    run.selection_ull = select_bandwidth(
        ull_data, block, candidate_bandwidths(lambdas, std_data.x.n, 1.0),
        ull_basis, config.family, &ull_index);
    run.result.h_ull = run.selection_ull.chosen;

    // All-coordinates fit: grid exponent from the estimated dimension.
    const PolyBasis mll_basis = PolyBasis::make(std_data.x.dim, config.degree);
    run.selection_mll = select_bandwidth(
        std_data, block,
        candidate_bandwidths(lambdas, std_data.x.n, run.result.d_hat), mll_basis,
        config.family, &index);
    run.result.h_mll = run.selection_mll.chosen;

    const auto ull_fits =
        fit_block(ull_data, block, {config.family, run.result.h_ull, 1},
                  ull_basis, &ull_index);
    const auto mll_fits =
        fit_block(std_data, block, {config.family, run.result.h_mll, std_data.x.dim},
                  mll_basis, &index);

    double sse_ull = 0.0;
    double sse_mll = 0.0;
    run.curve.resize(block.size());
    for (std::size_t b = 0; b < block.size(); ++b) {
        const std::size_t j = block[b];
        const double truth = gen.truth[j];
        sse_ull += (ull_fits[b].fitted - truth) * (ull_fits[b].fitted - truth);
        sse_mll += (mll_fits[b].fitted - truth) * (mll_fits[b].fitted - truth);
        run.curve[b] = {std_data.x.cols[0][j], truth, std_data.y[j],
                        ull_fits[b].fitted, mll_fits[b].fitted};
    }
    run.result.mse_ull = sse_ull / static_cast<double>(block.size());
    run.result.mse_mll = sse_mll / static_cast<double>(block.size());
    return run;
}

std::vector<NoiseSweepRow> noise_sweep(std::span<const double> sigma_primes,
                                       std::span<const std::uint64_t> seeds,
                                       const ExperimentConfig& base) {
    if (sigma_primes.empty() || seeds.empty())
        raise(ErrorCode::InvalidArgument, "noise sweep needs noise scales and seeds");
    std::vector<double> scales(sigma_primes.begin(), sigma_primes.end());
    std::sort(scales.begin(), scales.end());

    const std::size_t total = scales.size() * seeds.size();
    std::vector<double> mse(total);
    parallel_for(total, [&](std::size_t t) {
        ExperimentConfig config = base;
        config.gen.sigma_prime = scales[t / seeds.size()];
        config.gen.seed = seeds[t % seeds.size()];
        mse[t] = run_experiment(config).result.mse_mll;
    });

    std::vector<NoiseSweepRow> rows(scales.size());
    for (std::size_t s = 0; s < scales.size(); ++s) {
        double sum = 0.0;
        for (std::size_t r = 0; r < seeds.size(); ++r) sum += mse[s * seeds.size() + r];
        const double mean = sum / static_cast<double>(seeds.size());
        double ss = 0.0;
        for (std::size_t r = 0; r < seeds.size(); ++r) {
            const double d = mse[s * seeds.size() + r] - mean;
            ss += d * d;
        }
        const double sd =
            seeds.size() > 1 ? std::sqrt(ss / static_cast<double>(seeds.size() - 1))
                             : 0.0;
        rows[s] = {scales[s], mean, sd};
    }
    return rows;
}

namespace {

Dataset probe_dataset(const GenConfig& gen, const ResponseModel& model) {
    GeneratedData data = generate(gen);
    apply_response_model(data, model);
    return std::move(data.dataset);
}

double probe_truth_at(std::span<const double> x, const ResponseModel& model) {
    if (!model.linear) return true_regression(x);
    double v = model.c0;
    for (std::size_t a = 0; a < x.size() && a < 3; ++a) v += model.coef[a] * x[a];
    return v;
}

}  // namespace

RateStudyResult rate_study(std::span<const std::size_t> ns,
                           std::span<const std::uint64_t> seeds, double lambda0,
                           std::size_t degree, std::span<const double> eval_point,
                           KernelFamily family, const ResponseModel& model) {
    if (ns.size() < 4)
        raise(ErrorCode::InvalidArgument, "rate study needs at least 4 sample sizes");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1])
            raise(ErrorCode::InvalidArgument, "sample sizes must be strictly ascending");
    if (seeds.empty()) raise(ErrorCode::InvalidArgument, "rate study needs seeds");
    if (!(lambda0 > 0.0))
        raise(ErrorCode::InvalidArgument, "lambda0 must be positive");
    if (eval_point.size() != 3)
        raise(ErrorCode::DimensionMismatch, "evaluation point must have dimension 3");

    const PolyBasis basis = PolyBasis::make(3, degree);
    // h = lambda0 * n^(-1/(2p+d)) with p = degree+1 and intrinsic d = 1.
    const double exponent = -1.0 / static_cast<double>(2 * (degree + 1) + 1);
    const double target = probe_truth_at(eval_point, model);

    RateStudyResult result;
    result.ns.assign(ns.begin(), ns.end());
    result.h.resize(ns.size());
    result.mse.resize(ns.size());

    std::vector<double> errors(ns.size() * seeds.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        result.h[i] = lambda0 * std::pow(static_cast<double>(ns[i]), exponent);

    parallel_for(ns.size() * seeds.size(), [&](std::size_t t) {
        const std::size_t i = t / seeds.size();
        const std::size_t r = t % seeds.size();
        const Dataset data =
            probe_dataset({ns[i], seeds[r], 0.0}, model);
        const KernelSpec kernel{family, result.h[i], 3};
        const double fit = local_fit(data, eval_point, kernel, basis).fitted;
        errors[t] = (fit - target) * (fit - target);
    });

    for (std::size_t i = 0; i < ns.size(); ++i) {
        double sum = 0.0;
        for (std::size_t r = 0; r < seeds.size(); ++r)
            sum += errors[i * seeds.size() + r];
        result.mse[i] = sum / static_cast<double>(seeds.size());
    }

    // Least-squares slope of log MSE on log n; undefined at machine-zero MSE.
    const double floor = 1e-20;
    if (*std::max_element(result.mse.begin(), result.mse.end()) < floor) {
        result.slope_defined = false;
        return result;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        mx += std::log(static_cast<double>(ns[i]));
        my += std::log(std::max(result.mse[i], floor));
    }
    mx /= static_cast<double>(ns.size());
    my /= static_cast<double>(ns.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dx = std::log(static_cast<double>(ns[i])) - mx;
        sxy += dx * (std::log(std::max(result.mse[i], floor)) - my);
        sxx += dx * dx;
    }
    result.slope = sxy / sxx;
    result.slope_defined = true;
    return result;
}

BiasVarianceResult bias_variance_probe(std::span<const double> x, double h,
                                       std::size_t n, std::size_t reps,
                                       std::uint64_t seed, KernelFamily family,
                                       const ResponseModel& model,
                                       std::span<const std::size_t> predictor_dims) {
    if (reps < 100)
        raise(ErrorCode::InvalidArgument, "probe requires reps >= 100");
    if (x.size() != 3)
        raise(ErrorCode::DimensionMismatch, "probe point must have dimension 3");

    std::vector<std::size_t> dims(predictor_dims.begin(), predictor_dims.end());
    if (dims.empty()) dims = {0, 1, 2};
    std::vector<double> x_sub(dims.size());
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (dims[a] > 2)
            raise(ErrorCode::InvalidArgument, "predictor dims must be within 0..2");
        x_sub[a] = x[dims[a]];
    }

    const PolyBasis basis = PolyBasis::make(dims.size(), 1);
    const KernelSpec kernel{family, h, dims.size()};
    const double target = probe_truth_at(x, model);

    std::vector<double> fits(reps);
    parallel_for(reps, [&](std::size_t r) {
        const Dataset full =
            probe_dataset({n, derive_seed(seed, r), 0.0}, model);
        Dataset data;
        data.x = PointSet(full.x.n, dims.size());
        for (std::size_t a = 0; a < dims.size(); ++a)
            data.x.cols[a] = full.x.cols[dims[a]];
        data.y = full.y;
        fits[r] = local_fit(data, x_sub, kernel, basis).fitted;
    });

    double sum = 0.0;
    for (double f : fits) sum += f - target;
    const double bias = sum / static_cast<double>(reps);

    double mean_fit = 0.0;
    for (double f : fits) mean_fit += f;
    mean_fit /= static_cast<double>(reps);
    double ss = 0.0;
    for (double f : fits) ss += (f - mean_fit) * (f - mean_fit);

    BiasVarianceResult out;
    out.bias = bias;
    out.variance = ss / static_cast<double>(reps - 1);
    out.reps = reps;
    return out;
}

}  // namespace locreg
