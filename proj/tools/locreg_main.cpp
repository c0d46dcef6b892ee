// locreg command-line frontend: synthetic data generation, intrinsic-dimension
// estimation, bandwidth selection, local polynomial fitting, and the
// experiment/sweep drivers. Tables go to CSV, scalar results to summary.json;
// all randomness is fixed by --seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locreg/bandwidth.hpp"
#include "locreg/csv.hpp"
#include "locreg/dimest.hpp"
#include "locreg/errors.hpp"
#include "locreg/locpoly.hpp"
#include "locreg/parallel.hpp"
#include "locreg/rng.hpp"
#include "locreg/synth.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Options {
    std::uint64_t seed = 1;
    std::size_t n = 200;
    double sigma_prime = 0.0;
    std::size_t k = 15;
    std::string kernel = "epanechnikov";
    std::size_t degree = 1;
    std::string lambdas = "default";
    std::size_t block_size = 100;
    std::string block_ids;
    std::string input;
    std::string eval;
    std::string output_dir = ".";
    std::size_t reps = 20;
    std::string ns = "500,1000,2000,4000,8000";
    std::string sweep = "0.02:0.20:0.02";
    double lambda0 = 1.0;
    std::string eval_point = "0,-1,0";
    std::string bandwidth = "auto";
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::string::size_type pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const std::string token =
            text.substr(pos, next == std::string::npos ? next : next - pos);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0')
            locreg::raise(locreg::ErrorCode::InvalidArgument,
                          std::string("cannot parse ") + what + " entry '" + token + "'");
        values.push_back(v);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (values.empty())
        locreg::raise(locreg::ErrorCode::InvalidArgument,
                      std::string(what) + " list is empty");
    return values;
}

std::vector<double> resolve_lambdas(const std::string& text) {
    if (text == "default") return locreg::default_lambda_grid();
    return parse_double_list(text, "lambda");
}

std::vector<double> parse_sweep(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        locreg::raise(locreg::ErrorCode::InvalidArgument,
                      "--sweep must look like start:end:step");
    const double start = std::stod(text.substr(0, c1));
    const double end = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0) || end < start)
        locreg::raise(locreg::ErrorCode::InvalidArgument, "bad sweep range");
    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double v = start + step * i;
        if (v > end + step * 0.5) break;
        values.push_back(v);
    }
    return values;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(text, what)) {
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            locreg::raise(locreg::ErrorCode::InvalidArgument,
                          std::string(what) + " entries must be non-negative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::uint64_t> derived_seeds(std::uint64_t seed, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) seeds[i] = locreg::derive_seed(seed, i);
    return seeds;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        locreg::raise(locreg::ErrorCode::IoError,
                      "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

std::string fmt(double v) { return locreg::format_double(v); }

locreg::Dataset load_or_generate(const Options& opt, json& config,
                                 bool require_response = true) {
    if (!opt.input.empty()) {
        config["input"] = opt.input;
        return locreg::read_dataset_csv(opt.input, require_response);
    }
    config["n"] = opt.n;
    config["seed"] = opt.seed;
    config["sigma_prime"] = opt.sigma_prime;
    return locreg::generate({opt.n, opt.seed, opt.sigma_prime}).dataset;
}

std::vector<std::size_t> resolve_block(const Options& opt, const locreg::Dataset& std_data,
                                       json& config) {
    if (!opt.block_ids.empty()) {
        auto ids = parse_size_list(opt.block_ids, "block id");
        config["block_ids"] = ids;
        return ids;
    }
    config["block_size"] = opt.block_size;
    return locreg::middle_block(std_data, opt.block_size);
}

// ---------------------------------------------------------------------------

int cmd_generate(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);
    const auto gen = locreg::generate({opt.n, opt.seed, opt.sigma_prime});

    locreg::CsvTable dataset;
    dataset.header = {"x1", "x2", "x3", "y"};
    for (std::size_t i = 0; i < gen.dataset.x.n; ++i)
        dataset.rows.push_back({fmt(gen.dataset.x.cols[0][i]), fmt(gen.dataset.x.cols[1][i]),
                                fmt(gen.dataset.x.cols[2][i]), fmt(gen.dataset.y[i])});
    dataset.write(dir / "dataset.csv");

    locreg::CsvTable truth;
    truth.header = {"m_true", "latent"};
    for (std::size_t i = 0; i < gen.dataset.x.n; ++i)
        truth.rows.push_back({fmt(gen.truth[i]), fmt(gen.latent[i])});
    truth.write(dir / "truth.csv");

    json summary;
    summary["command"] = "generate";
    summary["config"] = {{"seed", opt.seed},
                         {"n", opt.n},
                         {"sigma_prime", opt.sigma_prime},
                         {"output_dir", opt.output_dir}};
    summary["outputs"] = {{"dataset", "dataset.csv"}, {"truth", "truth.csv"}};
    write_json(dir / "summary.json", summary);
    return 0;
}

int cmd_estimate_dim(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);

    json config;
    config["k"] = opt.k;
    const auto data = load_or_generate(opt, config, /*require_response=*/false);
    const auto [std_data, standardizer] = locreg::standardize(data);
    const auto block = resolve_block(opt, std_data, config);
    config["output_dir"] = opt.output_dir;

    const auto index = locreg::NeighborIndex::build(std_data.x);
    const auto dim = locreg::estimate_dimension(std_data.x, block, opt.k, index);

    std::map<std::size_t, double> by_id;
    for (std::size_t i = 0; i < dim.point_ids.size(); ++i)
        by_id[dim.point_ids[i]] = dim.per_point[i];

    locreg::CsvTable table;
    table.header = {"id", "d_local", "skipped"};
    for (const std::size_t id : block) {
        const auto it = by_id.find(id);
        table.rows.push_back({std::to_string(id),
                              it == by_id.end() ? "nan" : fmt(it->second),
                              it == by_id.end() ? "1" : "0"});
    }
    table.write(dir / "dim_points.csv");

    json summary;
    summary["command"] = "estimate-dim";
    summary["config"] = config;
    summary["d_hat"] = dim.d_hat;
    summary["points_used"] = dim.per_point.size();
    summary["points_skipped"] = dim.skipped.size();
    write_json(dir / "summary.json", summary);
    return 0;
}

void write_scores_csv(const fs::path& path, const locreg::BandwidthSelection& sel) {
    locreg::CsvTable table;
    table.header = {"lambda", "h", "atr", "rss", "mgcv", "feasible"};
    for (const auto& s : sel.scores)
        table.rows.push_back({fmt(s.lambda), fmt(s.h),
                              s.feasible ? fmt(s.atr) : "nan",
                              s.feasible ? fmt(s.rss_block) : "nan",
                              s.feasible ? fmt(s.mgcv) : "nan",
                              s.feasible ? "1" : "0"});
    table.write(path);
}

int cmd_select_bandwidth(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);

    json config;
    config["k"] = opt.k;
    config["kernel"] = opt.kernel;
    config["degree"] = opt.degree;
    const auto data = load_or_generate(opt, config);
    const auto [std_data, standardizer] = locreg::standardize(data);
    const auto block = resolve_block(opt, std_data, config);
    const auto lambdas = resolve_lambdas(opt.lambdas);
    config["lambdas"] = lambdas;
    config["output_dir"] = opt.output_dir;

    const auto index = locreg::NeighborIndex::build(std_data.x);
    const auto dim = locreg::estimate_dimension(std_data.x, block, opt.k, index);
    const auto grid = locreg::candidate_bandwidths(lambdas, std_data.x.n, dim.d_hat);
    const auto basis = locreg::PolyBasis::make(std_data.x.dim, opt.degree);
    const auto family = locreg::kernel_family_from_string(opt.kernel);
    const auto selection =
        locreg::select_bandwidth(std_data, block, grid, basis, family, &index);

    write_scores_csv(dir / "scores.csv", selection);

    json summary;
    summary["command"] = "select-bandwidth";
    summary["config"] = config;
    summary["d_hat"] = dim.d_hat;
    summary["chosen_h"] = selection.chosen;
    summary["chosen_lambda"] = selection.grid.lambdas[selection.chosen_index];
    write_json(dir / "summary.json", summary);
    return 0;
}

int cmd_fit(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);
    if (opt.input.empty())
        locreg::raise(locreg::ErrorCode::InvalidArgument, "fit requires --input");

    json config;
    config["input"] = opt.input;
    config["kernel"] = opt.kernel;
    config["degree"] = opt.degree;
    config["bandwidth"] = opt.bandwidth;
    config["output_dir"] = opt.output_dir;

    const auto data = locreg::read_dataset_csv(opt.input, true);
    const auto [std_data, standardizer] = locreg::standardize(data);
    const auto family = locreg::kernel_family_from_string(opt.kernel);
    const auto basis = locreg::PolyBasis::make(std_data.x.dim, opt.degree);

    double h = 0.0;
    std::optional<double> d_hat;
    if (opt.bandwidth == "auto") {
        config["k"] = opt.k;
        const auto lambdas = resolve_lambdas(opt.lambdas);
        config["lambdas"] = lambdas;
        json block_config;
        const auto block = resolve_block(opt, std_data, block_config);
        config.update(block_config);
        const auto index = locreg::NeighborIndex::build(std_data.x);
        const auto dim = locreg::estimate_dimension(std_data.x, block, opt.k, index);
        d_hat = dim.d_hat;
        const auto grid =
            locreg::candidate_bandwidths(lambdas, std_data.x.n, dim.d_hat);
        h = locreg::select_bandwidth(std_data, block, grid, basis, family, &index)
                .chosen;
    } else {
        char* end = nullptr;
        h = std::strtod(opt.bandwidth.c_str(), &end);
        if (end == opt.bandwidth.c_str() || *end != '\0')
            locreg::raise(locreg::ErrorCode::InvalidArgument,
                          "--bandwidth must be a number or 'auto'");
    }

    locreg::PointSet eval_points = data.x;
    if (!opt.eval.empty()) {
        config["eval"] = opt.eval;
        eval_points = locreg::read_dataset_csv(opt.eval, false).x;
        if (eval_points.dim != data.x.dim)
            locreg::raise(locreg::ErrorCode::DimensionMismatch,
                          "evaluation points do not match the dataset dimension");
    }

    const locreg::KernelSpec kernel{family, h, std_data.x.dim};
    std::vector<locreg::LocalFit> fits(eval_points.n);
    locreg::parallel_for(eval_points.n, [&](std::size_t i) {
        const auto z = standardizer.apply(eval_points.row(i));
        fits[i] = locreg::local_fit(std_data, z, kernel, basis);
    });

    locreg::CsvTable table;
    for (std::size_t a = 0; a < eval_points.dim; ++a)
        table.header.push_back("x" + std::to_string(a + 1));
    table.header.insert(table.header.end(),
                        {"m_hat", "h", "support_count", "effective_rank"});
    for (std::size_t i = 0; i < eval_points.n; ++i) {
        std::vector<std::string> row;
        for (std::size_t a = 0; a < eval_points.dim; ++a)
            row.push_back(fmt(eval_points.cols[a][i]));
        row.push_back(fmt(fits[i].fitted));
        row.push_back(fmt(h));
        row.push_back(std::to_string(fits[i].support_count));
        row.push_back(std::to_string(fits[i].effective_rank));
        table.rows.push_back(std::move(row));
    }
    table.write(dir / "predictions.csv");

    json summary;
    summary["command"] = "fit";
    summary["config"] = config;
    summary["h"] = h;
    if (d_hat) summary["d_hat"] = *d_hat;
    summary["points"] = eval_points.n;
    write_json(dir / "summary.json", summary);
    return 0;
}

int cmd_experiment(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);

    locreg::ExperimentConfig config;
    config.gen = {opt.n, opt.seed, opt.sigma_prime};
    config.block_size = opt.block_size;
    config.k = opt.k;
    config.lambdas = resolve_lambdas(opt.lambdas);
    config.family = locreg::kernel_family_from_string(opt.kernel);
    config.degree = opt.degree;

    const auto run = locreg::run_experiment(config);

    locreg::CsvTable curve;
    curve.header = {"x1_std", "m_true", "y", "ull_fit", "mll_fit"};
    for (const auto& p : run.curve)
        curve.rows.push_back(
            {fmt(p.x1_std), fmt(p.truth), fmt(p.y), fmt(p.ull_fit), fmt(p.mll_fit)});
    curve.write(dir / "experiment_curve.csv");

    write_scores_csv(dir / "scores_ull.csv", run.selection_ull);
    write_scores_csv(dir / "scores_mll.csv", run.selection_mll);

    json summary;
    summary["command"] = "experiment";
    summary["config"] = {{"seed", opt.seed},
                         {"n", opt.n},
                         {"sigma_prime", opt.sigma_prime},
                         {"block_size", opt.block_size},
                         {"k", opt.k},
                         {"kernel", opt.kernel},
                         {"degree", opt.degree},
                         {"lambdas", config.lambdas},
                         {"output_dir", opt.output_dir}};
    summary["d_hat"] = run.result.d_hat;
    summary["h_ull"] = run.result.h_ull;
    summary["h_mll"] = run.result.h_mll;
    summary["mse_ull"] = run.result.mse_ull;
    summary["mse_mll"] = run.result.mse_mll;
    summary["block"] = run.result.block;
    write_json(dir / "summary.json", summary);
    return 0;
}

int cmd_noise_sweep(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);

    locreg::ExperimentConfig base;
    base.gen.n = opt.n;
    base.block_size = opt.block_size;
    base.k = opt.k;
    base.lambdas = resolve_lambdas(opt.lambdas);
    base.family = locreg::kernel_family_from_string(opt.kernel);
    base.degree = opt.degree;

    const auto scales = parse_sweep(opt.sweep);
    const auto seeds = derived_seeds(opt.seed, opt.reps);
    const auto rows = locreg::noise_sweep(scales, seeds, base);

    locreg::CsvTable table;
    table.header = {"sigma_prime", "mean_mse", "sd_mse"};
    for (const auto& r : rows)
        table.rows.push_back({fmt(r.sigma_prime), fmt(r.mean_mse), fmt(r.sd_mse)});
    table.write(dir / "noise_sweep.csv");

    json summary;
    summary["command"] = "noise-sweep";
    summary["config"] = {{"seed", opt.seed},       {"reps", opt.reps},
                         {"sweep", opt.sweep},     {"n", opt.n},
                         {"block_size", opt.block_size}, {"k", opt.k},
                         {"kernel", opt.kernel},   {"degree", opt.degree},
                         {"lambdas", base.lambdas}, {"output_dir", opt.output_dir}};
    summary["noise_scales"] = scales;
    write_json(dir / "summary.json", summary);
    return 0;
}

int cmd_rate_study(const Options& opt) {
    const fs::path dir(opt.output_dir);
    fs::create_directories(dir);

    const auto ns = parse_size_list(opt.ns, "n");
    const auto seeds = derived_seeds(opt.seed, opt.reps);
    const auto eval_point = parse_double_list(opt.eval_point, "eval point coordinate");
    const auto family = locreg::kernel_family_from_string(opt.kernel);

    const auto result =
        locreg::rate_study(ns, seeds, opt.lambda0, opt.degree, eval_point, family);

    locreg::CsvTable table;
    table.header = {"n", "h", "mse"};
    for (std::size_t i = 0; i < result.ns.size(); ++i)
        table.rows.push_back(
            {std::to_string(result.ns[i]), fmt(result.h[i]), fmt(result.mse[i])});
    table.write(dir / "rate_mse.csv");

    json summary;
    summary["command"] = "rate-study";
    summary["config"] = {{"seed", opt.seed},     {"reps", opt.reps},
                         {"ns", result.ns},      {"lambda0", opt.lambda0},
                         {"degree", opt.degree}, {"kernel", opt.kernel},
                         {"eval_point", std::vector<double>(eval_point.begin(),
                                                            eval_point.end())},
                         {"output_dir", opt.output_dir}};
    summary["slope_defined"] = result.slope_defined;
    if (result.slope_defined) summary["slope"] = result.slope;
    write_json(dir / "summary.json", summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Manifold-adaptive local polynomial regression toolkit"};
    app.require_subcommand(1);

    Options opt;
    int (*runner)(const Options&) = nullptr;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", opt.output_dir, "Directory for output files");
        sub->add_option("--seed", opt.seed, "Master RNG seed");
    };

    auto* generate = app.add_subcommand("generate", "Draw a synthetic dataset");
    add_common(generate);
    generate->add_option("--n", opt.n, "Sample size");
    generate->add_option("--sigma-prime", opt.sigma_prime, "Coordinate noise scale");
    generate->callback([&] { runner = cmd_generate; });

    auto add_data_source = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "Dataset CSV (x1..xD, y)");
        sub->add_option("--n", opt.n, "Sample size when generating");
        sub->add_option("--sigma-prime", opt.sigma_prime, "Coordinate noise scale");
    };
    auto add_block = [&](CLI::App* sub) {
        sub->add_option("--block-size", opt.block_size, "Middle block size");
        sub->add_option("--block-ids", opt.block_ids, "Explicit block ids (comma list)");
    };

    auto* estimate = app.add_subcommand("estimate-dim", "Estimate intrinsic dimension");
    add_common(estimate);
    add_data_source(estimate);
    add_block(estimate);
    estimate->add_option("--k", opt.k, "Neighbor count");
    estimate->callback([&] { runner = cmd_estimate_dim; });

    auto* select = app.add_subcommand("select-bandwidth", "Score candidate bandwidths");
    add_common(select);
    add_data_source(select);
    add_block(select);
    select->add_option("--k", opt.k, "Neighbor count for the dimension estimate");
    select->add_option("--lambdas", opt.lambdas, "Comma list or 'default'");
    select->add_option("--kernel", opt.kernel, "epanechnikov|gaussian");
    select->add_option("--degree", opt.degree, "Polynomial degree");
    select->callback([&] { runner = cmd_select_bandwidth; });

    auto* fit = app.add_subcommand("fit", "Fit at evaluation points");
    add_common(fit);
    fit->add_option("--input", opt.input, "Dataset CSV (x1..xD, y)");
    fit->add_option("--eval", opt.eval, "Evaluation points CSV (default: the dataset)");
    fit->add_option("--bandwidth", opt.bandwidth,
                    "Bandwidth in standardized units, or 'auto'");
    fit->add_option("--kernel", opt.kernel, "epanechnikov|gaussian");
    fit->add_option("--degree", opt.degree, "Polynomial degree");
    fit->add_option("--k", opt.k, "Neighbor count (auto bandwidth)");
    fit->add_option("--lambdas", opt.lambdas, "Grid for auto bandwidth");
    add_block(fit);
    fit->callback([&] { runner = cmd_fit; });

    auto* experiment = app.add_subcommand("experiment", "Single-coordinate vs ambient fit");
    add_common(experiment);
    experiment->add_option("--n", opt.n, "Sample size");
    experiment->add_option("--sigma-prime", opt.sigma_prime, "Coordinate noise scale");
    experiment->add_option("--block-size", opt.block_size, "Middle block size");
    experiment->add_option("--k", opt.k, "Neighbor count");
    experiment->add_option("--kernel", opt.kernel, "epanechnikov|gaussian");
    experiment->add_option("--degree", opt.degree, "Polynomial degree");
    experiment->add_option("--lambdas", opt.lambdas, "Comma list or 'default'");
    experiment->callback([&] { runner = cmd_experiment; });

    auto* sweep = app.add_subcommand("noise-sweep", "MSE against coordinate noise");
    add_common(sweep);
    sweep->add_option("--sweep", opt.sweep, "start:end:step noise scales");
    sweep->add_option("--reps", opt.reps, "Seeds per noise scale");
    sweep->add_option("--n", opt.n, "Sample size");
    sweep->add_option("--block-size", opt.block_size, "Middle block size");
    sweep->add_option("--k", opt.k, "Neighbor count");
    sweep->add_option("--kernel", opt.kernel, "epanechnikov|gaussian");
    sweep->add_option("--degree", opt.degree, "Polynomial degree");
    sweep->add_option("--lambdas", opt.lambdas, "Comma list or 'default'");
    sweep->callback([&] { runner = cmd_noise_sweep; });

    auto* rate = app.add_subcommand("rate-study", "MSE decay against sample size");
    add_common(rate);
    rate->add_option("--ns", opt.ns, "Comma list of sample sizes");
    rate->add_option("--reps", opt.reps, "Seeds per sample size");
    rate->add_option("--lambda0", opt.lambda0, "Bandwidth constant");
    rate->add_option("--degree", opt.degree, "Polynomial degree");
    rate->add_option("--kernel", opt.kernel, "epanechnikov|gaussian");
    rate->add_option("--eval-point", opt.eval_point, "Evaluation point (comma list)");
    rate->callback([&] { runner = cmd_rate_study; });

    // rate-study averages over more seeds by default
    rate->preparse_callback([&](std::size_t) { opt.reps = 50; });

    CLI11_PARSE(app, argc, argv);

    try {
        return runner(opt);
    } catch (const locreg::Error& e) {
        json err;
        err["error"] = {{"code", locreg::error_code_name(e.code())},
                        {"message", e.what()}};
        std::cout << err.dump(2) << '\n';
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"code", "Internal"}, {"message", e.what()}};
        std::cout << err.dump(2) << '\n';
        return 1;
    }
}
