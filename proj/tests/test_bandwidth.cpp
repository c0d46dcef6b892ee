#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "locreg/bandwidth.hpp"
#include "locreg/synth.hpp"
#include "oracles.hpp"

using locreg::Dataset;
using locreg::KernelFamily;
using locreg::PointSet;
using locreg::PolyBasis;

namespace {

Dataset random_dataset(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
    Dataset data;
    data.x = oracles::random_cloud(n, dim, rng);
    data.y.resize(n);
    std::normal_distribution<double> normal;
    for (auto& v : data.y) v = normal(rng);
    return data;
}

std::vector<std::size_t> first_ids(std::size_t count) {
    std::vector<std::size_t> ids(count);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
}

double direct_loo_average(const Dataset& data, std::span<const std::size_t> block,
                          double h, const PolyBasis& basis, KernelFamily family) {
    double sum = 0.0;
    for (const std::size_t j : block) {
        const double pred = locreg::loo_prediction(
            data, j, {family, h, data.x.dim}, basis);
        sum += (data.y[j] - pred) * (data.y[j] - pred);
    }
    return sum / static_cast<double>(block.size());
}

}  // namespace

TEST_CASE("candidate grid formula") {
    const auto grid = locreg::candidate_bandwidths({1.0}, 16, 1.0);
    CHECK(grid.candidates[0] ==
          doctest::Approx(std::pow(16.0, -0.2)).epsilon(1e-15));

    const auto doubled = locreg::candidate_bandwidths({2.0}, 16, 1.0);
    CHECK(doubled.candidates[0] ==
          doctest::Approx(2.0 * grid.candidates[0]).epsilon(1e-15));

    // larger d_hat raises the exponent toward zero, so candidates grow
    const auto low = locreg::candidate_bandwidths({1.0}, 500, 1.0);
    const auto high = locreg::candidate_bandwidths({1.0}, 500, 3.0);
    CHECK(high.candidates[0] > low.candidates[0]);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(locreg::candidate_bandwidths({}, 10, 1.0), locreg::Error);
    CHECK_THROWS_AS(locreg::candidate_bandwidths({1.0, 1.0}, 10, 1.0), locreg::Error);
    CHECK_THROWS_AS(locreg::candidate_bandwidths({-1.0, 2.0}, 10, 1.0), locreg::Error);
    CHECK_THROWS_AS(locreg::candidate_bandwidths({1.0}, 10, 0.0), locreg::Error);
    CHECK_THROWS_AS(locreg::candidate_bandwidths({1.0}, 1, 1.0), locreg::Error);
}

TEST_CASE("default lambda grid brackets the compact-support boundary") {
    const auto lambdas = locreg::default_lambda_grid();
    REQUIRE(lambdas.size() == 20);
    CHECK(lambdas.front() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(lambdas.back() == doctest::Approx(6.0).epsilon(1e-12));
    for (std::size_t i = 1; i < lambdas.size(); ++i) CHECK(lambdas[i] > lambdas[i - 1]);
}

TEST_CASE("single-point block reduces to one identity term") {
    std::mt19937_64 rng(3);
    const auto data = random_dataset(20, 1, rng);
    const std::vector<std::size_t> block = {4};
    const auto basis = PolyBasis::make(1, 1);
    const double h = 1.2;

    const auto fit = locreg::fit_block(data, block, {KernelFamily::gaussian, h, 1},
                                       basis)[0];
    const double s = fit.s_self.value();
    const double expected = std::pow((data.y[4] - fit.fitted) / (1.0 - s), 2.0);
    CHECK(locreg::mcv(data, block, h, basis, KernelFamily::gaussian) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("noiseless linear data scores zero") {
    std::mt19937_64 rng(5);
    auto data = random_dataset(30, 1, rng);
    for (std::size_t i = 0; i < data.x.n; ++i)
        data.y[i] = 0.3 + 1.7 * data.x.cols[0][i];
    const auto block = first_ids(10);
    const auto basis = PolyBasis::make(1, 1);
    CHECK(locreg::mcv(data, block, 2.0, basis, KernelFamily::epanechnikov) <= 1e-16);
}

TEST_CASE("identity form matches the direct leave-one-out average") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t dim = 1 + rep % 3;
        const auto data = random_dataset(30, dim, rng);
        const auto block = first_ids(12);
        const auto basis = PolyBasis::make(dim, 1);
        const auto family =
            rep % 2 ? KernelFamily::gaussian : KernelFamily::epanechnikov;
        const double h = 2.0 + 0.1 * rep;
        const double identity = locreg::mcv(data, block, h, basis, family);
        const double direct = direct_loo_average(data, block, h, basis, family);
        CHECK(identity == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("equal smoother diagonals collapse mgcv onto mcv") {
    // Duplicated rows give every block point the same diagonal exactly.
    Dataset data;
    data.x = PointSet::from_rows({{0.2}, {0.2}, {0.2}, {0.2}});
    data.y = {1.0, -0.5, 2.0, 0.25};
    const auto block = first_ids(4);
    const auto basis = PolyBasis::make(1, 0);
    const double h = 1.0;
    const auto score = locreg::mgcv(data, block, h, basis, KernelFamily::epanechnikov);
    REQUIRE(score.feasible);
    const double direct = locreg::mcv(data, block, h, basis, KernelFamily::epanechnikov);
    CHECK(score.mgcv == doctest::Approx(direct).epsilon(1e-10));
    CHECK(score.atr == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("saturated smoother makes the candidate infeasible") {
    // Single supported point: S = 1, atr = 1.
    Dataset data;
    data.x = PointSet::from_rows({{0.0}, {5.0}});
    data.y = {1.0, 2.0};
    const std::vector<std::size_t> block = {0};
    const auto basis = PolyBasis::make(1, 0);
    const auto score =
        locreg::mgcv(data, block, 0.5, basis, KernelFamily::epanechnikov);
    CHECK(!score.feasible);
    CHECK_THROWS_AS(locreg::mcv(data, block, 0.5, basis, KernelFamily::epanechnikov),
                    locreg::Error);
}

TEST_CASE("generator data scores finite with atr inside (0,1)") {
    const auto gen = locreg::generate({200, 9, 0.0});
    const auto [std_data, st] = locreg::standardize(gen.dataset);
    const auto block = locreg::middle_block(std_data, 100);
    const auto index = locreg::NeighborIndex::build(std_data.x);
    const auto basis = PolyBasis::make(3, 1);
    const auto dim = locreg::estimate_dimension(std_data.x, block, 15, index);
    const auto grid =
        locreg::candidate_bandwidths(locreg::default_lambda_grid(), 200, dim.d_hat);
    const auto selection = locreg::select_bandwidth(std_data, block, grid, basis,
                                                    KernelFamily::epanechnikov, &index);
    const auto& chosen = selection.scores[selection.chosen_index];
    CHECK(chosen.feasible);
    CHECK(std::isfinite(chosen.mgcv));
    CHECK(chosen.atr > 0.0);
    CHECK(chosen.atr < 1.0);
}

TEST_CASE("selection picks the feasible minimizer with ties to the smaller h") {
    std::mt19937_64 rng(13);
    const auto data = random_dataset(60, 2, rng);
    const auto block = first_ids(20);
    const auto basis = PolyBasis::make(2, 1);
    const auto grid = locreg::candidate_bandwidths(locreg::default_lambda_grid(),
                                                   data.x.n, 2.0);
    const auto selection = locreg::select_bandwidth(data, block, grid, basis,
                                                    KernelFamily::epanechnikov);
    double best = std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    for (const auto& s : selection.scores) {
        if (!s.feasible) continue;
        if (s.mgcv < best) {
            best = s.mgcv;
            best_h = s.h;
        }
    }
    CHECK(selection.chosen == best_h);
    CHECK(selection.scores[selection.chosen_index].mgcv == best);

    // every feasible score with the same minimum sits at or above chosen h
    for (const auto& s : selection.scores)
        if (s.feasible && s.mgcv == best) CHECK(s.h >= selection.chosen);
}

TEST_CASE("a lone feasible candidate is chosen") {
    std::mt19937_64 rng(15);
    const auto data = random_dataset(40, 1, rng);
    const auto block = first_ids(8);
    const auto basis = PolyBasis::make(1, 1);
    // first candidate has no support anywhere, second covers the cloud
    locreg::BandwidthGrid grid;
    grid.n = data.x.n;
    grid.d_hat = 1.0;
    grid.lambdas = {1.0, 2.0};
    grid.candidates = {1e-9, 3.0};
    const auto selection = locreg::select_bandwidth(data, block, grid, basis,
                                                    KernelFamily::epanechnikov);
    CHECK(selection.chosen == 3.0);
    CHECK(!selection.scores[0].feasible);
    CHECK(selection.scores[1].feasible);
}

TEST_CASE("the argmin used by selection resolves ties to the smaller h") {
    auto score = [](double h, double mgcv, bool feasible) {
        locreg::CriterionScore s;
        s.h = h;
        s.mgcv = mgcv;
        s.feasible = feasible;
        return s;
    };
    const std::vector<locreg::CriterionScore> ordered = {
        score(0.1, 3.0, true), score(0.2, 1.0, true), score(0.4, 2.0, true)};
    CHECK(locreg::argmin_feasible(ordered) == 1);

    const std::vector<locreg::CriterionScore> tied = {
        score(0.1, 1.0, true), score(0.2, 1.0, true)};
    CHECK(locreg::argmin_feasible(tied) == 0);

    const std::vector<locreg::CriterionScore> gap = {
        score(0.1, 0.5, false), score(0.2, 4.0, true), score(0.4, 4.0, true)};
    CHECK(locreg::argmin_feasible(gap) == 1);

    const std::vector<locreg::CriterionScore> none = {score(0.1, 0.5, false)};
    CHECK_THROWS_AS(locreg::argmin_feasible(none), locreg::Error);
}

TEST_CASE("all-infeasible grids raise NoFeasibleBandwidth") {
    std::mt19937_64 rng(17);
    const auto data = random_dataset(40, 2, rng);
    const auto block = first_ids(10);
    const auto basis = PolyBasis::make(2, 1);
    const auto grid = locreg::candidate_bandwidths({1e-7, 1e-6}, data.x.n, 1.0);
    CHECK_THROWS_AS(locreg::select_bandwidth(data, block, grid, basis,
                                             KernelFamily::epanechnikov),
                    locreg::Error);
}

TEST_CASE("adding a constant to the responses changes nothing") {
    std::mt19937_64 rng(19);
    const auto data = random_dataset(50, 2, rng);
    const auto block = first_ids(15);
    const auto basis = PolyBasis::make(2, 1);
    const auto grid =
        locreg::candidate_bandwidths(locreg::default_lambda_grid(), data.x.n, 2.0);
    const auto base = locreg::select_bandwidth(data, block, grid, basis,
                                               KernelFamily::epanechnikov);

    Dataset shifted = data;
    for (auto& v : shifted.y) v += 41.5;
    const auto moved = locreg::select_bandwidth(shifted, block, grid, basis,
                                                KernelFamily::epanechnikov);
    CHECK(moved.chosen == base.chosen);
    for (std::size_t c = 0; c < base.scores.size(); ++c) {
        if (!base.scores[c].feasible) continue;
        CHECK(moved.scores[c].mgcv ==
              doctest::Approx(base.scores[c].mgcv).epsilon(1e-10));
    }
    const double h = base.chosen;
    CHECK(locreg::mcv(shifted, block, h, basis, KernelFamily::epanechnikov) ==
          doctest::Approx(locreg::mcv(data, block, h, basis,
                                      KernelFamily::epanechnikov))
              .epsilon(1e-10));
}

TEST_CASE("scaling the responses scales scores by c^2 and keeps the argmin") {
    std::mt19937_64 rng(23);
    const auto data = random_dataset(50, 1, rng);
    const auto block = first_ids(18);
    const auto basis = PolyBasis::make(1, 1);
    const auto grid =
        locreg::candidate_bandwidths(locreg::default_lambda_grid(), data.x.n, 1.0);
    const auto base = locreg::select_bandwidth(data, block, grid, basis,
                                               KernelFamily::epanechnikov);

    const double c = 7.25;
    Dataset scaled = data;
    for (auto& v : scaled.y) v *= c;
    const auto rescored = locreg::select_bandwidth(scaled, block, grid, basis,
                                                   KernelFamily::epanechnikov);
    CHECK(rescored.chosen == base.chosen);
    for (std::size_t i = 0; i < base.scores.size(); ++i) {
        if (!base.scores[i].feasible) continue;
        CHECK(rescored.scores[i].mgcv ==
              doctest::Approx(c * c * base.scores[i].mgcv).epsilon(1e-10));
    }
}
