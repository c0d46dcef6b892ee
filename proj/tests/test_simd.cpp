#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "locreg/simd/kernels.hpp"

using locreg::simd::Ops;

namespace {

struct Batch {
    std::vector<std::vector<double>> cols;
    std::vector<const double*> ptrs;
    std::vector<double> query;
    std::size_t n;
    std::size_t dim;
};

Batch make_batch(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Batch b;
    b.n = n;
    b.dim = dim;
    b.cols.resize(dim, std::vector<double>(n));
    for (auto& col : b.cols)
        for (auto& v : col) v = normal(rng);
    b.query.resize(dim);
    for (auto& v : b.query) v = normal(rng);
    for (auto& col : b.cols) b.ptrs.push_back(col.data());
    return b;
}

std::vector<double> run_distances(const Ops& ops, const Batch& b) {
    std::vector<double> out(b.n);
    ops.squared_distances(b.ptrs.data(), b.dim, b.n, b.query.data(), out.data());
    return out;
}

}  // namespace

TEST_CASE("scalar squared distances match a plain per-point loop") {
    const auto b = make_batch(37, 3, 1);
    const auto out = run_distances(locreg::simd::scalar_ops(), b);
    for (std::size_t i = 0; i < b.n; ++i) {
        double acc = 0.0;
        for (std::size_t a = 0; a < b.dim; ++a) {
            const double d = b.cols[a][i] - b.query[a];
            acc = std::fma(d, d, acc);
        }
        CHECK(out[i] == acc);
    }
}

TEST_CASE("point_dist2 agrees with the batch kernel element") {
    const auto b = make_batch(21, 4, 5);
    const auto out = run_distances(locreg::simd::scalar_ops(), b);
    for (std::size_t i = 0; i < b.n; ++i)
        CHECK(locreg::simd::point_dist2(b.ptrs.data(), b.dim, i, b.query.data()) ==
              out[i]);
}

TEST_CASE("epanechnikov weights vanish outside the support and scale inside") {
    const auto& ops = locreg::simd::scalar_ops();
    const std::vector<double> d2 = {0.0, 0.25, 1.0, 4.0};
    std::vector<double> w(d2.size());
    ops.epanechnikov_weights(d2.data(), d2.size(), 1.0, 2.0, w.data());
    CHECK(w[0] == 2.0);
    CHECK(w[1] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(w[2] == 0.0);
    CHECK(w[3] == 0.0);
}

TEST_CASE("gaussian weights follow exp(-d2/(2 h^2))") {
    const auto& ops = locreg::simd::scalar_ops();
    const std::vector<double> d2 = {0.0, 1.0, 9.0};
    std::vector<double> w(d2.size());
    ops.gaussian_weights(d2.data(), d2.size(), 0.25, 3.0, w.data());
    for (std::size_t i = 0; i < d2.size(); ++i)
        CHECK(w[i] == doctest::Approx(3.0 * std::exp(-0.125 * d2[i])).epsilon(1e-15));
}

#if defined(LOCREG_HAVE_AVX2)
TEST_CASE("avx2 backend is bit-identical to the scalar backend") {
    if (!locreg::simd::avx2_supported()) return;
    const auto& scalar = locreg::simd::scalar_ops();
    const auto& avx2 = locreg::simd::avx2_ops();

    // Sizes straddling the vector width exercise both main loop and tail.
    for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 250u, 1001u}) {
        for (std::size_t dim : {1u, 2u, 3u, 5u}) {
            const auto b = make_batch(n, dim, 100 * n + dim);
            const auto ds = run_distances(scalar, b);
            const auto dv = run_distances(avx2, b);
            for (std::size_t i = 0; i < n; ++i) CHECK(ds[i] == dv[i]);

            std::vector<double> ws(n), wv(n);
            scalar.epanechnikov_weights(ds.data(), n, 0.37, 1.91, ws.data());
            avx2.epanechnikov_weights(ds.data(), n, 0.37, 1.91, wv.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(ws[i] == wv[i]);
        }
    }
}

TEST_CASE("boundary weights agree between backends, including exact zero") {
    if (!locreg::simd::avx2_supported()) return;
    // d2 * inv_h2 == 1 exactly: weight must be +0 in both backends.
    std::vector<double> d2 = {1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 2.0, 1.0};
    std::vector<double> ws(d2.size()), wv(d2.size());
    locreg::simd::scalar_ops().epanechnikov_weights(d2.data(), d2.size(), 1.0, 3.0,
                                                    ws.data());
    locreg::simd::avx2_ops().epanechnikov_weights(d2.data(), d2.size(), 1.0, 3.0,
                                                  wv.data());
    for (std::size_t i = 0; i < d2.size(); ++i) {
        CHECK(ws[i] == wv[i]);
        if (d2[i] >= 1.0) CHECK(ws[i] == 0.0);
    }
    CHECK(!std::signbit(ws[0]));
    CHECK(!std::signbit(wv[0]));
}
#endif

TEST_CASE("active backend honors LOCREG_SIMD when set") {
    // The dispatch decision is cached per process; just sanity-check the name.
    const auto& ops = locreg::simd::active_ops();
    const std::string name = ops.name;
    CHECK((name == "scalar" || name == "avx2"));
}
