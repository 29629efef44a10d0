#include "hyperspec/rank_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "hyperspec/errors.hpp"
#include "hyperspec/parallel.hpp"
#include "hyperspec/walsh_hadamard.hpp"

namespace hyperspec {

namespace {

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// max over chi of |M h_chi - rho h_chi|_inf, rho the Rayleigh quotient.
double hadamard_residual(const SymMatrix& m) {
    const std::size_t n = m.size();
    Matrix mh = m.matrix();
    for (std::size_t i = 0; i < n; ++i) fwht_inplace(mh.row(i));
    double worst = 0.0;
    for (std::size_t chi = 0; chi < n; ++chi) {
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += hadamard_sign(i, chi) * mh(i, chi);
        rho /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(mh(i, chi) - rho * hadamard_sign(i, chi)));
    }
    return worst / (1.0 + m.max_abs());
}

}  // namespace

Matrix entrywise(const Matrix& m, const FunctionSpec& f) {
    Matrix out(m.rows(), m.cols());
    const bool real_line = polynomial_degree(f).has_value();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double x = m(i, j);
            if (!std::isfinite(x) || (!real_line && x < 0.0))
                throw InputError("entrywise: entry (" + std::to_string(i) + ", " + std::to_string(j) + ") = " +
                                 std::to_string(x) + " is outside the domain of " + describe(f));
            out(i, j) = eval_on_real_line(f, x);
        }
    return out;
}

BigInt poly_rank_bound(unsigned r, unsigned deg) {
    if (r < 1) throw InputError("poly_rank_bound: rank must be at least 1");
    const unsigned h = deg / 2;
    return 2 * binomial(r + h - 1, h);
}

BigInt monomial_rank_bound(unsigned r, unsigned deg) { return binomial(r + deg, deg); }

std::string to_string(WalshVariant v) { return v == WalshVariant::xor_bits ? "xor" : "abs_diff"; }

WalshVariant walsh_variant_from_string(const std::string& s) {
    if (s == "xor") return WalshVariant::xor_bits;
    if (s == "abs_diff") return WalshVariant::abs_diff;
    throw InputError("unknown variant '" + s + "' (expected xor or abs_diff)");
}

SymMatrix walsh_family(std::span<const double> a, WalshVariant variant) {
    if (a.empty()) throw InputError("walsh_family: need d >= 1");
    if (a.size() > kMaxWalshDimension)
        throw CapabilityError("dense_dimension_cap", "walsh_family: d = " + std::to_string(a.size()) + " exceeds " +
                                                         std::to_string(kMaxWalshDimension));
    for (double x : a)
        if (!std::isfinite(x)) throw InputError("walsh_family: non-finite side");
    const std::size_t n = std::size_t{1} << a.size();
    std::vector<double> len(n);
    for (std::size_t b = 0; b < n; ++b) len[b] = subset_length(a, b);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = variant == WalshVariant::xor_bits ? len[i ^ j] : len[i > j ? i - j : j - i];
    return SymMatrix(std::move(m));
}

double lambda_f(std::span<const double> a, const FunctionSpec& f, std::uint64_t i) {
    if (a.empty()) throw InputError("lambda_f: need d >= 1");
    if (a.size() < 64 && i >> a.size()) throw InputError("lambda_f: index out of range");
    return eigenvalues_for_sides(a, f)[i];
}

ZeroScanReport zero_eigenvalue_scan(const FunctionSpec& f, unsigned d, unsigned samples, std::uint64_t seed,
                                    double side_low, double side_high) {
    if (samples < 1) throw InputError("zero_eigenvalue_scan: need at least one sample");
    if (d < 1 || d > kMaxDenseDimension)
        throw InputError("zero_eigenvalue_scan: d must lie in 1.." + std::to_string(kMaxDenseDimension));
    if (!(side_low > 0.0) || !(side_high > side_low) || !std::isfinite(side_high))
        throw InputError("zero_eigenvalue_scan: need 0 < side_low < side_high");

    ZeroScanReport rep;
    rep.d = d;
    rep.samples = samples;
    rep.seed = seed;
    rep.side_low = side_low;
    rep.side_high = side_high;
    rep.evidence.assign(std::size_t{1} << d, 0.0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> side(side_low, side_high);
    std::vector<double> a(d);
    for (unsigned s = 0; s < samples; ++s) {
        for (auto& x : a) x = side(rng);
        std::vector<double> g = subset_values(a, f);
        double mass = 0.0;
        for (double v : g) mass += std::abs(v);
        fwht_inplace(g);
        for (std::size_t chi = 0; chi < g.size(); ++chi) {
            const double rel = mass > 0.0 ? std::abs(g[chi]) / mass : 0.0;
            rep.evidence[chi] = std::max(rep.evidence[chi], rel);
        }
    }
    for (std::size_t chi = 0; chi < rep.evidence.size(); ++chi)
        if (rep.evidence[chi] <= rep.threshold) rep.flagged.push_back(chi);
    if (!rep.flagged.empty()) rep.index_identically_zero = rep.flagged.back();
    return rep;
}

double dth_difference(const FunctionSpec& f, std::span<const double> a, double eps) {
    if (!std::isfinite(eps) || !(eps > 0.0)) throw InputError("dth_difference: eps must be positive");
    const auto d = static_cast<unsigned>(a.size());
    if (d < 1 || d > kMaxDifferenceOrder) throw InputError("dth_difference: d out of range");
    // The alternating sum cancels about d log2(1/eps) bits, so it is formed
    // in long double.
    long double s = 0.0L;
    for (double x : a) s += x;
    // Group the 2^d subsets by weight w: C(d, w) copies of f(s + w eps).
    long double acc = 0.0L;
    long double binom = 1.0L;
    for (unsigned w = 0; w <= d; ++w) {
        const long double term = binom * eval_extended(f, s + w * static_cast<long double>(eps));
        acc += (w % 2) ? -term : term;
        binom = binom * (d - w) / (w + 1);
    }
    const long double sign = (d % 2) ? -1.0L : 1.0L;
    return static_cast<double>(sign * acc / std::pow(static_cast<long double>(eps), static_cast<long double>(d)));
}

IdentityCheck eigsum_identity_check(const FunctionSpec& f, std::span<const double> a, double eps, std::uint64_t i) {
    const auto d = static_cast<unsigned>(a.size());
    if (d < 1 || d > 10) throw InputError("eigsum_identity_check: need 1 <= d <= 10");
    if (i >> d) throw InputError("eigsum_identity_check: index out of range");
    if (!std::isfinite(eps) || !(eps > 0.0)) throw InputError("eigsum_identity_check: eps must be positive");

    const std::size_t n = std::size_t{1} << d;
    IdentityCheck out;
    out.scale = 0.0;
    std::vector<double> shifted(d);
    for (std::size_t b1 = 0; b1 < n; ++b1) {
        for (unsigned j = 0; j < d; ++j) shifted[j] = a[j] + eps * bit_at(b1, d, j);
        std::vector<double> g = subset_values(shifted, f);
        double mass = 0.0;
        for (double v : g) mass += std::abs(v);
        out.scale = std::max(out.scale, mass);
        double lambda = 0.0;
        for (std::size_t b = 0; b < n; ++b) lambda += hadamard_sign(i, b) * g[b];
        out.lhs += (__builtin_popcountll(b1) & 1) ? -lambda : lambda;
    }

    double total = 0.0;
    for (double x : a) total += x;
    double rhs = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        const double v = eval(f, total + eps * __builtin_popcountll(b));
        rhs += (__builtin_popcountll(b) & 1) ? -v : v;
    }
    out.rhs = (__builtin_popcountll(i) & 1) ? -rhs : rhs;
    out.tolerance = 1e-8 * out.scale;
    return out;
}

RankExperimentReport converse_experiment(const FunctionSpec& f, std::size_t n, unsigned trials, std::uint64_t seed,
                                         WalshVariant variant, double rel_tol) {
    if (n < 2 || n > 256 || !is_power_of_two(n))
        throw InputError("converse_experiment: n must be a power of two in [2, 256]");
    if (trials < 1) throw InputError("converse_experiment: need at least one trial");

    RankExperimentReport rep;
    rep.n = n;
    rep.d = static_cast<unsigned>(std::countr_zero(n));
    rep.trials = trials;
    rep.seed = seed;
    rep.variant = variant;
    rep.rank_tolerance = rel_tol;
    rep.per_trial.resize(trials);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> side(0.5, 2.0);
    for (auto& t : rep.per_trial) {
        t.a.resize(rep.d);
        for (auto& x : t.a) x = side(rng);
    }

    parallel_for(trials, [&](std::size_t k) {
        RankTrial& t = rep.per_trial[k];
        const SymMatrix m = walsh_family(t.a, variant);
        t.rank_base = numeric_rank(m.matrix(), rep.rank_tolerance).rank;
        t.rank_transformed = numeric_rank(entrywise(m.matrix(), f), rep.rank_tolerance).rank;
        t.hadamard_residual = hadamard_residual(m);
    });

    std::size_t full = 0;
    for (const auto& t : rep.per_trial) {
        rep.max_rank_base = std::max(rep.max_rank_base, t.rank_base);
        rep.max_rank_transformed = std::max(rep.max_rank_transformed, t.rank_transformed);
        rep.max_hadamard_residual = std::max(rep.max_hadamard_residual, t.hadamard_residual);
        if (t.rank_transformed == n) ++full;
    }
    rep.full_rank_fraction = static_cast<double>(full) / trials;

    if (auto deg = polynomial_degree(f)) {
        rep.degree = *deg;
        rep.bound_from_fact = poly_rank_bound(rep.d + 1, static_cast<unsigned>(*deg));
        rep.bound_respected = BigInt(rep.max_rank_transformed) <= *rep.bound_from_fact;
    }
    return rep;
}

PolyBoundReport polynomial_bound_experiment(unsigned trials, std::uint64_t seed, unsigned r_max, std::size_t n_max,
                                            unsigned deg_max) {
    if (r_max < 1 || n_max < 2 * r_max || n_max > 512)
        throw InputError("polynomial_bound_experiment: need 1 <= r_max and 2 r_max <= n_max <= 512");

    PolyBoundReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.per_trial.resize(trials);

    struct Factors {
        Matrix u, v;
    };
    std::vector<Factors> factors(trials);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> lead(0.5, 1.0);
    for (unsigned k = 0; k < trials; ++k) {
        PolyBoundTrial& t = rep.per_trial[k];
        t.r = std::uniform_int_distribution<unsigned>(1, r_max)(rng);
        t.n = std::uniform_int_distribution<std::size_t>(2 * t.r, n_max)(rng);
        t.degree = std::uniform_int_distribution<unsigned>(0, deg_max)(rng);
        t.coeffs.resize(t.degree + 1);
        for (auto& c : t.coeffs) c = unit(rng);
        t.coeffs.back() = std::copysign(lead(rng), t.coeffs.back());
        factors[k].u = Matrix(t.n, t.r);
        factors[k].v = Matrix(t.n, t.r);
        for (std::size_t i = 0; i < t.n; ++i)
            for (unsigned j = 0; j < t.r; ++j) {
                factors[k].u(i, j) = unit(rng);
                factors[k].v(i, j) = unit(rng);
            }
    }

    parallel_for(trials, [&](std::size_t k) {
        PolyBoundTrial& t = rep.per_trial[k];
        const Matrix m = factors[k].u * factors[k].v.transposed();
        t.rank = numeric_rank(entrywise(m, FunctionSpec::polynomial(t.coeffs))).rank;
        t.bound = poly_rank_bound(t.r, t.degree);
        t.monomial_bound = monomial_rank_bound(t.r, t.degree);
        t.within_bound = BigInt(t.rank) <= t.bound;
    });

    for (const auto& t : rep.per_trial) {
        if (!t.within_bound) ++rep.violations;
        if (BigInt(t.rank) > std::min(BigInt(t.n), t.monomial_bound)) ++rep.monomial_violations;
    }
    return rep;
}

}  // namespace hyperspec
