#pragma once

// Rank experiments for entrywise function application: the polynomial-method
// bound, the M(a) family built from hyperrectangle distances, sampled
// zero-eigenvalue scans and the d-th difference limit.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperspec/function_catalog.hpp"
#include "hyperspec/hyperrect_spectrum.hpp"
#include "hyperspec/linalg.hpp"

namespace hyperspec {

using BigInt = boost::multiprecision::cpp_int;

/// M^f_ij = f(M_ij). Polynomial specs accept any real entry; other kinds
/// need entries >= 0 and throw InputError naming the first bad entry.
Matrix entrywise(const Matrix& m, const FunctionSpec& f);

/// 2 * C(r + floor(deg/2) - 1, floor(deg/2)). r >= 1.
BigInt poly_rank_bound(unsigned r, unsigned deg);

/// Number of monomials of degree <= deg in r variables, C(r + deg, deg).
BigInt monomial_rank_bound(unsigned r, unsigned deg);

enum class WalshVariant { xor_bits, abs_diff };

std::string to_string(WalshVariant v);
/// "xor" or "abs_diff".
WalshVariant walsh_variant_from_string(const std::string& s);

inline constexpr unsigned kMaxWalshDimension = 12;

/// xor: M_ij = <a, B(i xor j)>; abs_diff: M_ij = <a, B(|i - j|)>.
SymMatrix walsh_family(std::span<const double> a, WalshVariant variant);

/// Same code path as spectrum(): sum_b (-1)^<B(i), b> f(<b, a>).
double lambda_f(std::span<const double> a, const FunctionSpec& f, std::uint64_t i);

struct ZeroScanReport {
    unsigned d = 0;
    unsigned samples = 0;
    std::uint64_t seed = 0;
    double side_low = 0.5;
    double side_high = 2.0;
    double threshold = 1e-10;
    std::vector<double> evidence;        // per chi: max over samples of |lambda_chi| / sum|g|
    std::vector<std::uint64_t> flagged;  // chi with evidence <= threshold, ascending
    std::optional<std::uint64_t> index_identically_zero;  // largest flagged chi
};

/// Sides drawn uniformly from [side_low, side_high) with mt19937_64(seed).
ZeroScanReport zero_eigenvalue_scan(const FunctionSpec& f, unsigned d, unsigned samples, std::uint64_t seed = 0,
                                    double side_low = 0.5, double side_high = 2.0);

/// (-1)^d eps^-d sum_b (-1)^|b| f(<a + eps b, 1>).
double dth_difference(const FunctionSpec& f, std::span<const double> a, double eps);

/// lhs = sum_{b1} (-1)^|b1| lambda_i(a + eps b1),
/// rhs = (-1)^<B(i),1> sum_b (-1)^|b| f(<a + eps b, 1>).
/// scale = max over b1 of sum_b |f(<b, a + eps b1>)|, tolerance 1e-8 * scale.
IdentityCheck eigsum_identity_check(const FunctionSpec& f, std::span<const double> a, double eps, std::uint64_t i);

struct RankTrial {
    std::vector<double> a;
    std::size_t rank_base = 0;         // numeric rank of M(a)
    std::size_t rank_transformed = 0;  // numeric rank of f(M(a))
    double hadamard_residual = 0.0;    // max_chi |M h - (h'Mh/n) h|_inf / (1 + max|M|)
};

struct RankExperimentReport {
    std::size_t n = 0;
    unsigned d = 0;
    unsigned trials = 0;
    std::uint64_t seed = 0;
    WalshVariant variant = WalshVariant::xor_bits;
    double rank_tolerance = kDefaultRankTolerance;
    std::vector<RankTrial> per_trial;
    std::optional<int> degree;           // when f is a polynomial
    std::optional<BigInt> bound_from_fact;  // poly_rank_bound(d + 1, degree)
    std::optional<bool> bound_respected;
    std::size_t max_rank_base = 0;
    std::size_t max_rank_transformed = 0;
    double full_rank_fraction = 0.0;
    double max_hadamard_residual = 0.0;
};

/// n a power of two in [2, 256]; a ~ U(0.5, 2)^d per trial, all drawn up
/// front from mt19937_64(seed). Trials run in parallel.
RankExperimentReport converse_experiment(const FunctionSpec& f, std::size_t n, unsigned trials, std::uint64_t seed,
                                         WalshVariant variant = WalshVariant::xor_bits,
                                         double rel_tol = kDefaultRankTolerance);

struct PolyBoundTrial {
    unsigned r = 0;
    std::size_t n = 0;
    unsigned degree = 0;
    std::vector<double> coeffs;
    std::size_t rank = 0;
    BigInt bound;           // poly_rank_bound(r, degree)
    BigInt monomial_bound;  // C(r + degree, degree)
    bool within_bound = true;
};

struct PolyBoundReport {
    unsigned trials = 0;
    std::uint64_t seed = 0;
    std::vector<PolyBoundTrial> per_trial;
    unsigned violations = 0;           // rank > poly_rank_bound
    unsigned monomial_violations = 0;  // rank > min(n, monomial bound)
};

/// Random n x n products U V^T (entries U(-1, 1), rank r <= r_max,
/// 2r <= n <= n_max) pushed through random polynomials of degree <= deg_max
/// whose leading coefficient is at least 0.5 in magnitude.
PolyBoundReport polynomial_bound_experiment(unsigned trials, std::uint64_t seed, unsigned r_max = 5,
                                            std::size_t n_max = 64, unsigned deg_max = 6);

}  // namespace hyperspec
