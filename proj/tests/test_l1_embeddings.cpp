#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperspec/l1_embeddings.hpp"
#include "support.hpp"

using namespace hyperspec;

namespace {

PointSet random_l1_points(std::size_t n, std::size_t m, std::mt19937_64& rng, bool integer = false) {
    std::uniform_real_distribution<double> u(0.0, 8.0);
    std::uniform_int_distribution<int> k(0, 8);
    Matrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) x(i, j) = integer ? k(rng) : u(rng);
    return PointSet(std::move(x), Metric::l1);
}

std::vector<std::vector<double>> rows_of(const PointSet& p) { return testing::to_dense(p.coords()); }

std::vector<FunctionSpec> bernstein_sample() {
    return {FunctionSpec::identity(), FunctionSpec::power(0.5), FunctionSpec::power(0.25),
            FunctionSpec::bernstein_mixture(0.0, {1.0}, {1.0}), FunctionSpec::bernstein_mixture(0.3, {0.5, 2.0}, {0.2, 3.0}),
            FunctionSpec::affine_of(FunctionSpec::exp_mixture({1.0, 1.0}, {0.5, 2.0}), -1.0, 2.0)};
}

}  // namespace

TEST_CASE("PointSet basics") {
    CHECK_THROWS_AS(PointSet(Matrix(), Metric::l1), InputError);
    CHECK_THROWS_AS(PointSet(Matrix{{1.0, NAN}}, Metric::l1), InputError);
    const PointSet p(Matrix{{0.0, 0.0}, {3.0, 4.0}}, Metric::l2);
    CHECK(p.pairwise()(0, 1) == 25.0);
    const PointSet q(Matrix{{0.0, 0.0}, {3.0, 4.0}}, Metric::l1);
    CHECK(q.pairwise()(1, 0) == 7.0);
    CHECK(metric_from_string("l2") == Metric::l2);
    CHECK(to_string(Metric::l1) == "l1");
    CHECK_THROWS_AS(metric_from_string("L1"), InputError);
}

TEST_CASE("cut_embedding examples") {
    const auto e = cut_embedding(PointSet(Matrix{{0.0}, {1.0}, {3.0}}, Metric::l1));
    CHECK(e.sides == std::vector<double>{1.0, 2.0});
    CHECK(e.bits == std::vector<std::uint8_t>{0, 0, 1, 0, 1, 1});
    CHECK(e.distance(0, 1) == 1.0);
    CHECK(e.distance(0, 2) == 3.0);
    CHECK(e.distance(1, 2) == 2.0);
    CHECK(e.row_index(2) == 3);
    CHECK(e.row_index(1) == 2);

    const auto same = cut_embedding(PointSet(Matrix{{2.0, 5.0}, {2.0, 5.0}}, Metric::l1));
    CHECK(same.dimension() == 0);

    const auto two = cut_embedding(PointSet(Matrix{{0.0, 0.0}, {1.0, 2.0}}, Metric::l1));
    CHECK(two.sides == std::vector<double>{1.0, 2.0});
    CHECK(two.bits == std::vector<std::uint8_t>{0, 0, 1, 1});
    CHECK(two.distance(0, 1) == 3.0);

    CHECK(cut_embedding(PointSet(Matrix{{1.0, 2.0}}, Metric::l1)).dimension() == 0);
    CHECK_THROWS_AS(cut_embedding(PointSet(Matrix{{1.0}}, Metric::l2)), InputError);
}

TEST_CASE("cut_embedding preserves distances and respects the dimension bound") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 11, m = 1 + trial % 4;
        const bool integer = trial % 2 == 0;
        const auto x = random_l1_points(n, m, rng, integer);
        const auto e = cut_embedding(x);
        CHECK(e.dimension() <= n * m);
        for (double s : e.sides) CHECK(s > 0.0);
        const auto r = rows_of(x);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double want = oracle::l1(r[i], r[j]);
                CHECK(std::abs(e.distance(i, j) - want) <= (integer ? 1e-12 : 1e-9) * std::max(1.0, want));
            }
    }
}

TEST_CASE("gram_from_squared_distances examples") {
    CHECK(gram_from_squared_distances(SymMatrix(Matrix(3, 3))).max_abs() == 0.0);

    const auto m2 = gram_from_squared_distances(SymMatrix(Matrix{{0, 4}, {4, 0}}));
    CHECK(m2(0, 0) == doctest::Approx(1.0));
    CHECK(m2(0, 1) == doctest::Approx(-1.0));

    const auto m3 = gram_from_squared_distances(SymMatrix(Matrix{{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}));
    const Matrix want{{1, 0, -1}, {0, 0, 0}, {-1, 0, 1}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(m3(i, j) - want(i, j)) <= 1e-14);

    CHECK_THROWS_AS(gram_from_squared_distances(SymMatrix(Matrix{{1, 2}, {2, 0}})), InputError);
}

TEST_CASE("gram reproduces centered inner products") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial, m = 1 + trial % 3;
        oracle::Dense y(n, std::vector<double>(m));
        for (auto& r : y)
            for (auto& v : r) v = u(rng);
        for (std::size_t j = 0; j < m; ++j) {
            double mean = 0.0;
            for (auto& r : y) mean += r[j];
            for (auto& r : y) r[j] -= mean / static_cast<double>(n);
        }
        oracle::Dense d(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) d[i][k] = oracle::sq_l2(y[i], y[k]);
        const auto g = gram_from_squared_distances(SymMatrix(testing::to_matrix(d)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                double ip = 0.0;
                for (std::size_t j = 0; j < m; ++j) ip += y[i][j] * y[k][j];
                CHECK(std::abs(g(i, k) - ip) <= 1e-12 * (1.0 + n));
            }
    }
}

TEST_CASE("negative_type_test") {
    CHECK(negative_type_test(SymMatrix(Matrix(4, 4))).holds);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (std::size_t n : {2u, 5u, 9u, 16u}) {
        oracle::Dense y(n, std::vector<double>(3));
        for (auto& r : y)
            for (auto& v : r) v = u(rng);
        oracle::Dense d(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) d[i][k] = oracle::sq_l2(y[i], y[k]);
        const auto v = negative_type_test(SymMatrix(testing::to_matrix(d)));
        CHECK(v.holds);
        CHECK(v.witness.empty());
    }

    // a = (1, 1) under x^2: distances 0, 1, 1, 4.
    const Matrix sq{{0, 1, 1, 4}, {1, 0, 4, 1}, {1, 4, 0, 1}, {4, 1, 1, 0}};
    const SymMatrix d(sq);
    const auto v = negative_type_test(d);
    CHECK_FALSE(v.holds);
    CHECK(v.max_projected_eigenvalue == doctest::Approx(2.0));
    REQUIRE(v.witness.size() == 4);
    double sum = 0.0, norm = 0.0;
    for (double w : v.witness) {
        sum += w;
        norm += w * w;
    }
    CHECK(std::abs(sum) <= 1e-12);
    CHECK(norm == doctest::Approx(1.0));
    CHECK(quadratic_form(d, v.witness) == doctest::Approx(2.0));
}

TEST_CASE("squared_euclidean_points examples") {
    std::mt19937_64 rng(5);
    for (unsigned d = 1; d <= 6; ++d) {
        std::uniform_real_distribution<double> u(0.1, 3.0);
        std::vector<double> a(d);
        for (auto& x : a) x = u(rng);
        const Hyperrectangle r(a);
        const auto p = squared_euclidean_points(r, FunctionSpec::identity());
        CHECK(p.metric() == Metric::l2);
        CHECK(p.size() == r.vertex_count());
        const auto sq = p.pairwise();
        const auto v = oracle::box_vertices(a);
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) {
                const double want = oracle::l1(v[i], v[j]);
                CHECK(std::abs(sq(i, j) - want) <= 1e-8 * std::max(1.0, want));
            }
    }

    const double l2 = std::log(2.0);
    const auto f = FunctionSpec::bernstein_mixture(0.0, {1.0}, {1.0});
    const auto p = squared_euclidean_points(Hyperrectangle({l2, l2}), f);
    // Coordinate chi = 3 carries sqrt(mu_3) / 2 with mu_3 = 0.125.
    CHECK(std::abs(p.coords()(0, 3)) == doctest::Approx(std::sqrt(0.125) / 2.0).epsilon(1e-12));
    const auto sq = p.pairwise();
    CHECK(sq(0, 1) == doctest::Approx(0.5));
    CHECK(sq(0, 3) == doctest::Approx(0.75));

    const auto zero = squared_euclidean_points(Hyperrectangle({1.0, 2.0}), FunctionSpec::constant(0.0));
    CHECK(zero.pairwise().max_abs() == 0.0);
}

TEST_CASE("squared_euclidean_points rejects non-Bernstein input") {
    const Hyperrectangle r({1.0, 1.0});
    try {
        squared_euclidean_points(r, FunctionSpec::polynomial({0.0, 0.0, 1.0}));
        FAIL("expected a precondition error");
    } catch (const BernsteinPreconditionError& e) {
        CHECK(e.witness().order == 2);
    }
    try {
        squared_euclidean_points(r, FunctionSpec::polynomial({0.0, 0.0, 1.0}), {.check_bernstein = false});
        FAIL("expected a negative-type violation");
    } catch (const NegativeTypeViolation& e) {
        CHECK(e.chi() == 3);
        CHECK(e.mu() == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(squared_euclidean_points(Hyperrectangle(std::vector<double>(13, 1.0)), FunctionSpec::identity()),
                    CapabilityError);
}

TEST_CASE("manhattan_transform examples") {
    std::mt19937_64 rng(6);
    const auto x = random_l1_points(7, 3, rng);
    const auto q = manhattan_transform(x, FunctionSpec::identity());
    CHECK(q.metric() == Metric::l1);
    const auto dx = x.pairwise(), dq = q.pairwise();
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) CHECK(std::abs(dq(i, j) - dx(i, j)) <= 1e-7 * std::max(1.0, dx(i, j)));

    const auto two = manhattan_transform(PointSet(Matrix{{0.0, 0.0}, {1.0, 3.0}}, Metric::l1), FunctionSpec::power(0.5));
    CHECK(two.pairwise()(0, 1) == doctest::Approx(2.0).epsilon(1e-7));

    const double l2 = std::log(2.0);
    const auto tri = manhattan_transform(PointSet(Matrix{{0.0}, {l2}, {2.0 * l2}}, Metric::l1),
                                         FunctionSpec::bernstein_mixture(0.0, {1.0}, {1.0}));
    const auto dt = tri.pairwise();
    CHECK(dt(0, 1) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(dt(1, 2) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(dt(0, 2) == doctest::Approx(0.75).epsilon(1e-7));

    const auto single = manhattan_transform(PointSet(Matrix{{1.0, 1.0}}, Metric::l1), FunctionSpec::identity());
    CHECK(single.size() == 1);
    CHECK(single.dimension() == 0);
}

TEST_CASE("round trip over Bernstein functions") {
    std::mt19937_64 rng(7);
    for (const auto& f : bernstein_sample()) {
        for (int trial = 0; trial < 4; ++trial) {
            const std::size_t n = 2 + (trial * 5) % 11, m = 1 + trial % 4;
            auto x = random_l1_points(n, m, rng, trial % 2 == 0);
            if (cut_embedding(x).dimension() > kMaxCubeDimension) continue;
            const auto q = manhattan_transform(x, f);
            const auto dq = q.pairwise();
            const auto r = rows_of(x);
            INFO(describe(f), " n=", n, " m=", m);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double want = eval(f, oracle::l1(r[i], r[j])) - eval(f, 0.0);
                    CHECK(std::abs(dq(i, j) - want) <= 1e-7 * std::max(1.0, std::abs(want)));
                }
            // l1 distances are of negative type.
            CHECK(negative_type_test(SymMatrix::from_upper(dq)).holds);
        }
    }
}

TEST_CASE("squared-Euclidean and Manhattan outputs agree on the vertices") {
    const std::vector<double> a{0.5, 1.5, 2.0};
    const Hyperrectangle r(a);
    for (const auto& f : bernstein_sample()) {
        const auto p = squared_euclidean_points(r, f).pairwise();
        const auto q = manhattan_transform(PointSet(vertices(r), Metric::l1), f).pairwise();
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(p(i, j) - q(i, j)) <= 1e-7 * std::max(1.0, p(i, j)));
    }
}

TEST_CASE("restriction to a subset commutes with the transform") {
    std::mt19937_64 rng(8);
    const auto f = FunctionSpec::power(0.5);
    const auto x = random_l1_points(9, 2, rng);
    const auto full = manhattan_transform(x, f).pairwise();
    const std::vector<std::size_t> keep{0, 3, 4, 8};
    Matrix sub(keep.size(), 2);
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j) sub(i, j) = x.coords()(keep[i], j);
    const auto part = manhattan_transform(PointSet(sub, Metric::l1), f).pairwise();
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            CHECK(std::abs(part(i, j) - full(keep[i], keep[j])) <= 1e-7 * std::max(1.0, full(keep[i], keep[j])));
}

TEST_CASE("x^2 and x^3 hit a negative-type violation on a box from the witness") {
    for (double s : {2.0, 3.0}) {
        const auto f = FunctionSpec::power(s);
        const auto v = bernstein_test(f);
        REQUIRE_FALSE(v.holds);
        // Offsets at the witness base point give a box; its vertices as a point set.
        const double side = v.witness->base_point > 0.0 ? v.witness->base_point : 1.0;
        const std::vector<double> a(static_cast<std::size_t>(v.witness->order), side);
        const PointSet x(vertices(Hyperrectangle(a)), Metric::l1);
        CHECK_THROWS_AS(manhattan_transform(x, f), BernsteinPreconditionError);
        CHECK_THROWS_AS(manhattan_transform(x, f, {.check_bernstein = false}), NegativeTypeViolation);
        const auto poly = FunctionSpec::polynomial(s == 2.0 ? std::vector<double>{0, 0, 1} : std::vector<double>{0, 0, 0, 1});
        CHECK_THROWS_AS(manhattan_transform(x, poly, {.check_bernstein = false}), NegativeTypeViolation);
    }
}

TEST_CASE("transform capability cap") {
    Matrix line(22, 1);
    for (std::size_t i = 0; i < 22; ++i) line(i, 0) = static_cast<double>(i);
    CHECK_THROWS_AS(manhattan_transform(PointSet(line, Metric::l1), FunctionSpec::identity()), CapabilityError);

    Matrix at_cap(21, 1);
    for (std::size_t i = 0; i < 21; ++i) at_cap(i, 0) = static_cast<double>(i * i);
    const PointSet x(at_cap, Metric::l1);
    const auto q = manhattan_transform(x, FunctionSpec::power(0.5)).pairwise();
    CHECK(q(0, 20) == doctest::Approx(20.0).epsilon(1e-7));
}
