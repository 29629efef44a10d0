#pragma once

// Distance matrices D[i][j] = f(<B(i) xor B(j), a>) on the vertices of an
// axis-aligned box and their spectra. Every such D is diagonalized by the
// Walsh-Hadamard matrix; eigenvalue chi is
//
//     lambda_chi = sum_b (-1)^<B(chi), b> f(<b, a>),
//
// computed here by FWHT, by brute-force subset sums, by a dense eigensolver,
// and (for |chi| <= 3) as integrals of f^(|chi|).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperspec/function_catalog.hpp"
#include "hyperspec/linalg.hpp"
#include "hyperspec/walsh_hadamard.hpp"

namespace hyperspec {

inline constexpr unsigned kMaxSpectrumDimension = 20;
inline constexpr unsigned kMaxDenseDimension = 12;
inline constexpr unsigned kMaxVertexDimension = 16;
inline constexpr unsigned kMaxIntegralOrder = 3;
inline constexpr unsigned kQuadratureNodes = 32;

class Hyperrectangle {
public:
    /// Throws InputError unless 1 <= d <= kMaxSpectrumDimension and every
    /// side is finite and strictly positive.
    explicit Hyperrectangle(std::vector<double> sides);

    unsigned dimension() const noexcept { return static_cast<unsigned>(sides_.size()); }
    std::size_t vertex_count() const noexcept { return std::size_t{1} << sides_.size(); }
    std::span<const double> sides() const noexcept { return sides_; }

private:
    std::vector<double> sides_;
};

enum class SpectrumMethod { fwht, subset_sum, dense_oracle, integral };

std::string to_string(SpectrumMethod m);

struct SpectrumResult {
    unsigned d = 0;
    std::vector<double> eigenvalues;  // by chi index for fwht/subset_sum, ascending for dense_oracle
    SpectrumMethod method = SpectrumMethod::fwht;
};

/// 2^d x d vertex coordinates; coordinate j is +a_j/2 when bit j of B(i) is
/// 0 and -a_j/2 otherwise. d is capped at kMaxVertexDimension.
Matrix vertices(const Hyperrectangle& r);

/// Dense D, capped at kMaxDenseDimension.
SymMatrix distance_matrix(const Hyperrectangle& r, const FunctionSpec& f);

/// g[b] = f(<B(b), a>) for all b; sides may be zero.
std::vector<double> subset_values(std::span<const double> a, const FunctionSpec& f);

/// fwht(subset_values(a, f)). Shared by spectrum() and the rank experiments.
std::vector<double> eigenvalues_for_sides(std::span<const double> a, const FunctionSpec& f);

SpectrumResult spectrum(const Hyperrectangle& r, const FunctionSpec& f);

/// Direct 2^d-term sum for a single character.
double spectrum_subset_sum(const Hyperrectangle& r, const FunctionSpec& f, const BitVector& chi);

/// All 2^d subset sums (O(4^d)); method = subset_sum.
SpectrumResult spectrum_by_subset_sums(const Hyperrectangle& r, const FunctionSpec& f);

/// Jacobi eigenvalues of distance_matrix, ascending; method = dense_oracle.
SpectrumResult dense_spectrum(const Hyperrectangle& r, const FunctionSpec& f);

struct DiagonalizationCheck {
    double max_offdiag = 0.0;           // max |Sigma_ij|, i != j, Sigma = H D H
    double reconstruction_error = 0.0;  // max |D - 4^-d H Sigma H|
    double offdiag_tolerance = 0.0;     // 1e-8 * 2^d * max|D|
    double reconstruction_tolerance = 0.0;  // 1e-8 * max|D|
    std::vector<double> diagonal;       // Sigma_ii = 2^d lambda_i

    bool passed() const noexcept {
        return max_offdiag <= offdiag_tolerance && reconstruction_error <= reconstruction_tolerance;
    }
};

/// Forms Sigma = H D H with two FWHT passes. d <= kMaxDenseDimension.
DiagonalizationCheck diagonalization_check(const Hyperrectangle& r, const FunctionSpec& f);

/// lambda_chi = sum_{T subset of the zero bits of chi} (-1)^k
///     int_{[0,a_q1] x ... x [0,a_qk]} f^(k)(S_T + s_1 + ... + s_k) ds
/// with k = |chi|, evaluated by tensor Gauss-Legendre quadrature.
/// CapabilityError unless 1 <= k <= kMaxIntegralOrder; InputError if f is
/// not smooth at zero.
double spectrum_integral(const Hyperrectangle& r, const FunctionSpec& f, const BitVector& chi);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(unsigned n);

/// Delta^k_eps(f, t) = sum over subsets S of eps of (-1)^|S| f(t + sum_S eps).
/// t >= 0, every offset > 0, k <= kMaxTesterOrder.
double delta_k(const FunctionSpec& f, double t, std::span<const double> eps);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 1.0;
    double tolerance = 0.0;

    double error() const noexcept { return lhs > rhs ? lhs - rhs : rhs - lhs; }
    bool holds() const noexcept { return error() <= tolerance; }
};

/// With a = (eps_1..eps_k, 2c/d, ..., 2c/d) and chi the first k bits:
///   lhs = lambda_chi,  rhs = sum_{s=0}^{d-k} C(d-k, s) Delta^k_eps(f, 2sc/d).
/// Tolerance 1e-8 * (1 + |lhs|). Requires 1 <= k <= d <= 16, c > 0.
IdentityCheck binom_eigenvalue_identity(const FunctionSpec& f, std::span<const double> eps, double c, unsigned d);

}  // namespace hyperspec
