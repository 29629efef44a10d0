// Acceptance runner. Each criterion prints one line:
//
//     criterion N PASS|FAIL <name>: <details>
//
// and the process exits non-zero if any selected criterion failed.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "hyperspec/errors.hpp"
#include "hyperspec/function_catalog.hpp"
#include "hyperspec/hyperrect_spectrum.hpp"
#include "hyperspec/l1_embeddings.hpp"
#include "hyperspec/linalg.hpp"
#include "hyperspec/manhattan_kernels.hpp"
#include "hyperspec/rank_lab.hpp"
#include "hyperspec/walsh_hadamard.hpp"

using namespace hyperspec;

namespace {

// Pinned tolerances.
constexpr double kDiagTol = 1e-8;
constexpr double kAgreeTol = 1e-8;
constexpr double kIntegralTol = 1e-6;
constexpr double kTransformTol = 1e-7;
constexpr double kLaplaceTol = 1e-9;
constexpr double kHalvingLow = 1.7;
constexpr double kHalvingHigh = 2.3;
constexpr double kEigsumTol = 1e-8;
constexpr double kDiagSeconds = 30.0;
constexpr double kTransformSeconds = 60.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double sides_draw(std::mt19937_64& rng, double hi) {
    // (0, hi]
    return hi * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

std::vector<double> random_sides(unsigned d, std::mt19937_64& rng, double hi) {
    std::vector<double> a(d);
    for (auto& x : a) x = sides_draw(rng, hi);
    return a;
}

/// Cycles through every catalog kind with random parameters.
FunctionSpec random_function(std::mt19937_64& rng, int which) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 2.0), rate(0.05, 1.5);
    switch (which % 7) {
    case 0: {
        std::vector<double> c(1 + rng() % 4);
        for (auto& x : c) x = u(rng);
        return FunctionSpec::polynomial(c);
    }
    case 1: {
        const std::size_t k = 1 + rng() % 3;
        std::vector<double> w(k), t(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = pos(rng), t[i] = rate(rng);
        return FunctionSpec::exp_mixture(w, t, rng() % 2 ? 0.0 : pos(rng));
    }
    case 2: {
        const std::size_t k = 1 + rng() % 3;
        std::vector<double> w(k), t(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = pos(rng), t[i] = rate(rng);
        return FunctionSpec::bernstein_mixture(pos(rng) - 0.1, w, t);
    }
    case 3:
        return FunctionSpec::power(std::uniform_real_distribution<double>(0.1, 2.5)(rng));
    case 4:
        return FunctionSpec::affine_of(FunctionSpec::exp_mixture({1.0}, {rate(rng)}), u(rng), u(rng), pos(rng));
    case 5:
        return FunctionSpec::sum_of({FunctionSpec::power(0.5), FunctionSpec::polynomial({u(rng), u(rng)})});
    default:
        return FunctionSpec::affine_of(FunctionSpec::power(pos(rng)), u(rng), 0.0);
    }
}

std::vector<FunctionSpec> bernstein_set() {
    return {
        FunctionSpec::identity(),
        FunctionSpec::power(0.5),
        FunctionSpec::bernstein_mixture(0.0, {1.0}, {1.0}),
        FunctionSpec::bernstein_mixture(0.3, {0.7}, {2.0}),
    };
}

std::vector<FunctionSpec> non_cm_suite() {
    return {
        FunctionSpec::polynomial({1.0, -2.0, 1.0}),
        FunctionSpec::polynomial({1.0, 0.0, -1.0}),
        FunctionSpec::identity(),
        FunctionSpec::polynomial({0.0, 0.0, 1.0}),
        FunctionSpec::polynomial({2.0, -1.0, 0.0, 0.25}),
        FunctionSpec::polynomial({1.0, -3.0, 2.0, -0.5}),
    };
}

// ---------------------------------------------------------------------------

Outcome diagonalization() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    int failures = 0;
    double worst_off = 0.0, worst_rec = 0.0;
    for (int c = 0; c < 100; ++c) {
        const unsigned d = 1 + rng() % 8;
        const Hyperrectangle r(random_sides(d, rng, 10.0));
        const auto f = random_function(rng, c);
        const auto chk = diagonalization_check(r, f);
        const double dmax = distance_matrix(r, f).max_abs();
        const bool ok = chk.max_offdiag <= kDiagTol * std::ldexp(dmax, static_cast<int>(d)) &&
                        chk.reconstruction_error <= kDiagTol * dmax;
        if (!ok) ++failures;
        if (dmax > 0) {
            worst_off = std::max(worst_off, chk.max_offdiag / std::ldexp(dmax, static_cast<int>(d)));
            worst_rec = std::max(worst_rec, chk.reconstruction_error / dmax);
        }
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && secs < kDiagSeconds,
            fmt("100 cases, %d failures, worst offdiag/(2^d max|D|)=%.2e, worst reconstruction/max|D|=%.2e, %.1fs",
                failures, worst_off, worst_rec, secs)};
}

Outcome three_way() {
    std::mt19937_64 rng(1001);
    int failures = 0;
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const unsigned d = 1 + rng() % 8;
        const Hyperrectangle r(random_sides(d, rng, 10.0));
        const auto f = random_function(rng, c);
        auto fw = spectrum(r, f).eigenvalues;
        auto ss = spectrum_by_subset_sums(r, f).eigenvalues;
        const auto de = dense_spectrum(r, f).eigenvalues;
        std::sort(fw.begin(), fw.end());
        std::sort(ss.begin(), ss.end());
        double scale = 0.0;
        for (double v : de) scale = std::max(scale, std::abs(v));
        double err = 0.0;
        for (std::size_t i = 0; i < de.size(); ++i)
            err = std::max({err, std::abs(fw[i] - de[i]), std::abs(ss[i] - de[i]), std::abs(fw[i] - ss[i])});
        const double rel = scale > 0 ? err / scale : err;
        worst = std::max(worst, rel);
        if (rel > kAgreeTol) ++failures;
    }
    auto warm = spectrum(Hyperrectangle({1.0, 2.0}), FunctionSpec::identity()).eigenvalues;
    std::sort(warm.begin(), warm.end());
    const bool exact = warm == std::vector<double>{-4.0, -2.0, 0.0, 6.0};
    return {failures == 0 && exact, fmt("100 cases, %d failures, worst relative spread=%.2e, warm-up multiset %s",
                                        failures, worst, exact ? "exact" : "WRONG")};
}

Outcome integral_form() {
    std::mt19937_64 rng(1003);
    const std::vector<FunctionSpec> smooth{
        FunctionSpec::identity(),
        FunctionSpec::polynomial({1.0, -2.0, 1.0}),
        FunctionSpec::polynomial({0.5, 0.0, -0.25, 0.1}),
        FunctionSpec::exp_mixture({1.0}, {1.0}),
        FunctionSpec::exp_mixture({0.3, 0.7}, {0.5, 2.0}),
        FunctionSpec::bernstein_mixture(0.3, {0.7}, {2.0}),
        FunctionSpec::power(3.0),
        FunctionSpec::sum_of({FunctionSpec::identity(), FunctionSpec::exp_mixture({2.0}, {0.25})}),
    };
    int checked = 0, failures = 0;
    double worst = 0.0;
    for (const auto& f : smooth) {
        for (unsigned d = 1; d <= 6; ++d) {
            const auto a = random_sides(d, rng, 2.0);
            const Hyperrectangle r(a);
            for (std::uint64_t chi = 1; chi < (std::uint64_t{1} << d); ++chi) {
                if (std::popcount(chi) > 3) continue;
                const auto b = bits(chi, d);
                const double want = spectrum_subset_sum(r, f, b);
                const double got = spectrum_integral(r, f, b);
                const double rel = std::abs(got - want) / std::max(std::abs(want), 1.0);
                worst = std::max(worst, rel);
                ++checked;
                if (rel > kIntegralTol) ++failures;
            }
        }
    }
    const Hyperrectangle r({1.0, 2.0});
    const auto sq = FunctionSpec::polynomial({0.0, 0.0, 1.0});
    const double by_sum = spectrum_subset_sum(r, sq, bits(3, 2));
    const double by_int = spectrum_integral(r, sq, bits(3, 2));
    const bool exact = by_sum == 4.0 && by_int == 4.0;
    return {failures == 0 && exact,
            fmt("%d characters, %d failures, worst relative=%.2e, x^2 on (1,2): sum=%.17g integral=%.17g", checked,
                failures, worst, by_sum, by_int)};
}

Outcome manhattan() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1004);
    const std::vector<FunctionSpec> fs{
        FunctionSpec::identity(),
        FunctionSpec::power(0.5),
        FunctionSpec::bernstein_mixture(0.0, {1.0}, {1.0}),
        FunctionSpec::bernstein_mixture(0.3, {0.7}, {2.0}),
    };
    double worst = 0.0;
    int failures = 0, sets = 0;
    for (int s = 0; s < 50; ++s) {
        const std::size_t m = 1 + rng() % 4;
        const std::size_t n = 2 + rng() % (std::min<std::size_t>(12, 20 / m) - 1);
        Matrix x(n, m);
        std::uniform_real_distribution<double> u(0.0, 5.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) x(i, j) = u(rng);
        const PointSet p(std::move(x), Metric::l1);
        const auto dist = p.pairwise();
        ++sets;
        for (const auto& f : fs) {
            const auto q = manhattan_transform(p, f).pairwise();
            double fmax = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) fmax = std::max(fmax, std::abs(eval(f, dist(i, j))));
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double want = eval(f, dist(i, j));
                    err = std::max(err, std::abs(q(i, j) - want) / std::max(std::abs(want), 1e-12 * fmax));
                }
            worst = std::max(worst, err);
            if (err > kTransformTol) ++failures;
        }
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && secs < kTransformSeconds,
            fmt("%d point sets x %zu functions, %d failures, worst relative=%.2e, %.1fs", sets, fs.size(), failures,
                worst, secs)};
}

Outcome negative_type() {
    const std::vector<std::pair<std::string, FunctionSpec>> bad{
        {"x^2", FunctionSpec::polynomial({0.0, 0.0, 1.0})},
        {"x^3", FunctionSpec::polynomial({0.0, 0.0, 0.0, 1.0})},
        {"(x-1)^2-1", FunctionSpec::polynomial({0.0, -2.0, 1.0})},
    };
    std::string found;
    bool all_found = true;
    for (const auto& [name, f] : bad) {
        std::mt19937_64 rng(1005);
        std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
        bool hit = false;
        for (unsigned d = 1; d <= 4 && !hit; ++d) {
            for (int s = 0; s < 50 && !hit; ++s) {
                std::vector<double> a(d);
                for (auto& x : a) x = std::exp(logu(rng));
                if (!negative_type_test(distance_matrix(Hyperrectangle(a), f)).holds) {
                    hit = true;
                    found += fmt(" %s@d=%u", name.c_str(), d);
                }
            }
        }
        if (!hit) {
            all_found = false;
            found += " " + name + "@none";
        }
    }
    std::mt19937_64 rng(1006);
    int violations = 0, boxes = 0;
    for (int s = 0; s < 100; ++s) {
        const unsigned d = 1 + rng() % 6;
        const Hyperrectangle r(random_sides(d, rng, 10.0));
        ++boxes;
        for (const auto& f : bernstein_set())
            if (!negative_type_test(distance_matrix(r, f)).holds) ++violations;
    }
    return {all_found && violations == 0,
            fmt("refuted:%s; Bernstein set on %d boxes: %d violations", found.c_str(), boxes, violations)};
}

Outcome kernels() {
    std::mt19937_64 rng(1007);
    const auto laplace = FunctionSpec::exp_mixture({1.0}, {1.0});
    double worst = 0.0;
    int failures = 0;
    for (int s = 0; s < 100; ++s) {
        const std::size_t n = 2 + rng() % 23, m = 1 + rng() % 5;
        Matrix x(n, m);
        std::uniform_real_distribution<double> u(0.0, 4.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) x(i, j) = u(rng);
        const auto k = kernel_matrix(PointSet(std::move(x), Metric::l1), laplace);
        const double scale = k.max_abs();
        const double lmin = sym_eigenvalues(k).front();
        worst = std::min(worst, lmin / (static_cast<double>(n) * scale));
        if (lmin < -kLaplaceTol * static_cast<double>(n) * scale) ++failures;
    }
    int certified = 0;
    const auto suite = non_cm_suite();
    for (const auto& f : suite) {
        const auto w = cm_witness_search(f, 4, 200, 0);
        if (!w || !w->dense_min_eigenvalue) continue;
        const double dense = sym_eigenvalues(kernel_matrix(w->points, f)).front();
        if (w->lambda < -w->tolerance && dense < 0.0 && dense <= w->lambda + 1e-9 * (1.0 + std::abs(w->lambda)))
            ++certified;
    }
    return {failures == 0 && certified == static_cast<int>(suite.size()),
            fmt("Laplace: 100 sets, %d failures, min lambda/(n scale)=%.2e; witnesses certified %d/%zu", failures,
                worst, certified, suite.size())};
}

Outcome rank_bound() {
    const auto rep = polynomial_bound_experiment(200, 1008);
    std::size_t worst_rank = 0;
    BigInt worst_bound = 0;
    for (const auto& t : rep.per_trial)
        if (!t.within_bound && t.rank > worst_rank) worst_rank = t.rank, worst_bound = t.bound;
    const bool example = poly_rank_bound(2, 2) == 4;
    return {rep.violations == 0 && example,
            fmt("200 trials, %u exceed the bound (largest: rank %zu vs bound %s), %u exceed the monomial count; "
                "bound(2,2)=%s",
                rep.violations, worst_rank, worst_bound.str().c_str(), rep.monomial_violations,
                poly_rank_bound(2, 2).str().c_str())};
}

Outcome converse() {
    const auto base = converse_experiment(FunctionSpec::identity(), 64, 50, 1009);
    const auto ex = converse_experiment(FunctionSpec::exp_mixture({1.0}, {1.0}), 64, 50, 1009);
    const auto quad = converse_experiment(FunctionSpec::polynomial({1.0, 1.0, 1.0}), 64, 50, 1009);
    std::size_t full = 0;
    for (const auto& t : ex.per_trial)
        if (t.rank_transformed == 64) ++full;
    const bool c1 = base.max_rank_base <= 7;
    const bool c2 = full >= 49;
    const bool c3 = quad.max_rank_transformed <= 14;
    return {c1 && c2 && c3, fmt("max rank M(a)=%zu (<=7 %s); e^-x full rank %zu/50 (%s); degree-2 max rank=%zu (<=14 %s)",
                                base.max_rank_base, c1 ? "ok" : "FAIL", full, c2 ? "ok" : "FAIL",
                                quad.max_rank_transformed, c3 ? "ok" : "FAIL")};
}

Outcome derivative_limit() {
    const std::vector<FunctionSpec> mixtures{
        FunctionSpec::exp_mixture({1.0}, {1.0}),
        FunctionSpec::exp_mixture({0.3, 0.7}, {0.5, 2.0}),
        FunctionSpec::exp_mixture({0.5, 0.5}, {1.0, 3.0}),
    };
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> side(0.5, 2.0);
    double lo = 1e9, hi = 0.0;
    int bad_ratios = 0;
    for (const auto& f : mixtures) {
        for (unsigned d = 1; d <= 4; ++d) {
            std::vector<double> a(d);
            double s = 0.0;
            for (auto& x : a) s += (x = side(rng));
            const double exact = derivative(f, static_cast<int>(d), s);
            double prev = -1.0;
            for (double eps : {1e-2, 5e-3, 2.5e-3}) {
                const double err = std::abs(dth_difference(f, a, eps) - exact);
                if (prev >= 0.0) {
                    const double ratio = prev / err;
                    lo = std::min(lo, ratio);
                    hi = std::max(hi, ratio);
                    if (ratio < kHalvingLow || ratio > kHalvingHigh) ++bad_ratios;
                }
                prev = err;
            }
        }
    }
    int eig_fail = 0;
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const unsigned d = 1 + rng() % 6;
        std::vector<double> a(d);
        for (auto& x : a) x = side(rng);
        const auto f = random_function(rng, c);
        const double eps = std::uniform_real_distribution<double>(1e-3, 0.5)(rng);
        const std::uint64_t i = rng() % (std::uint64_t{1} << d);
        const auto chk = eigsum_identity_check(f, a, eps, i);
        worst = std::max(worst, chk.error() / chk.scale);
        if (chk.error() > kEigsumTol * chk.scale) ++eig_fail;
    }
    return {bad_ratios == 0 && eig_fail == 0,
            fmt("halving factors in [%.3f, %.3f], %d outside [%.1f, %.1f]; eigsum 100 cases, %d failures, worst "
                "error/scale=%.2e",
                lo, hi, bad_ratios, kHalvingLow, kHalvingHigh, eig_fail, worst)};
}

Outcome determinism() {
    {
        std::ofstream("acc_points.csv") << "x,y\n0,0\n1,3\n2.5,0.5\n4,4\n";
    }
    const std::string sqrt_fn = R"({"kind":"power","s":0.5})";
    const std::string laplace = R"({"kind":"exp_mixture","w":[1],"t":[1]})";
    const std::string quad = R"({"kind":"polynomial","coeffs":[1,-2,1]})";
    const std::vector<std::vector<std::string>> invocations{
        {"spectrum", "--sides", "1,2,0.5", "--fn", laplace, "--seed", "3"},
        {"spectrum", "--sides", "1,2,0.5", "--fn", laplace, "--method", "dense"},
        {"check-bernstein", "--fn", sqrt_fn},
        {"check-cm", "--fn", quad},
        {"embed-cube", "--points", "acc_points.csv"},
        {"transform", "--points", "acc_points.csv", "--fn", sqrt_fn},
        {"diagcheck", "--sides", "1,2,3", "--fn", quad},
        {"negtype", "--sides", "1,1,2", "--fn", quad},
        {"kernel-psd", "--points", "acc_points.csv", "--fn", laplace},
        {"kernel-witness", "--fn", quad, "--samples", "40", "--seed", "11"},
        {"rank-bound", "--rank", "5", "--degree", "6"},
        {"rank-experiment", "--fn", sqrt_fn, "--n", "32", "--trials", "5", "--seed", "12"},
        {"rank-experiment", "--fn", quad, "--n", "16", "--trials", "3", "--seed", "13", "--variant", "abs_diff"},
        {"diff-limit", "--fn", laplace, "--sides", "0.5,0.7,1.1", "--eps", "1e-3", "--chi", "5"},
    };
    int mismatches = 0;
    std::string which;
    for (const auto& args : invocations) {
        std::ostringstream o1, e1, o2, e2;
        const int c1 = cli::run(args, o1, e1);
        const int c2 = cli::run(args, o2, e2);
        if (c1 != c2 || o1.str() != o2.str() || o1.str().empty()) {
            ++mismatches;
            which += " " + args.front();
        }
    }
    return {mismatches == 0,
            fmt("%zu invocations run twice, %d differ%s", invocations.size(), mismatches, which.c_str())};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspec acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run only this criterion (1-10)")->check(CLI::Range(0, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "diagonalization", diagonalization},
        {2, "three-way spectrum agreement", three_way},
        {3, "integral form", integral_form},
        {4, "Bernstein transform keeps Manhattan distances", manhattan},
        {5, "negative type", negative_type},
        {6, "kernel classification", kernels},
        {7, "polynomial rank bound", rank_bound},
        {8, "low-rank converse", converse},
        {9, "derivative limit", derivative_limit},
        {10, "CLI determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
