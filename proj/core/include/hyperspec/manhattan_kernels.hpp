#pragma once

// Kernel matrices f(|x_i - x_j|_1) and both directions of the
// completely-monotone <=> positive-definite Manhattan kernel equivalence,
// checked on finite point sets.

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperspec/function_catalog.hpp"
#include "hyperspec/hyperrect_spectrum.hpp"
#include "hyperspec/l1_embeddings.hpp"
#include "hyperspec/linalg.hpp"

namespace hyperspec {

/// K_ij = f(|x_i - x_j|_1). Requires the l1 tag.
SymMatrix kernel_matrix(const PointSet& x, const FunctionSpec& f);

struct KernelVerdict {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    double tolerance = 0.0;
    PointSet witness_points;
    std::vector<double> witness_direction;  // eigenvector of min_eigenvalue
};

KernelVerdict psd_on_pointset(const PointSet& x, const FunctionSpec& f);

struct SimplexWitness {
    double sum_of_entries = 0.0;  // N (f(0) + (N - 1) f(t))
    double tolerance = 0.0;       // 1e-9 * N^2 * (1 + max(|f(0)|, |f(t)|))
    bool bound_holds = true;
};

inline constexpr std::size_t kMaxSimplexPoints = 4096;

/// Points x_i = (t/2) e_i, i < N, are pairwise at l1 distance t; the sum of
/// the kernel matrix entries is 1^T K 1, so a negative sum refutes PSD.
SimplexWitness simplex_witness(const FunctionSpec& f, double t, std::size_t n_points);

/// The point set used by simplex_witness.
PointSet simplex_points(double t, std::size_t n_points);

struct KernelWitness {
    unsigned d = 0;
    std::size_t sample = 0;
    std::vector<double> sides;
    std::uint64_t chi = 0;
    double lambda = 0.0;       // FWHT eigenvalue, < -tolerance
    double tolerance = 0.0;    // 1e-9 * sum_b |f(<b, a>)|
    double rayleigh_quotient = 0.0;     // h_chi' K h_chi / 2^d on the vertex kernel matrix
    std::optional<double> dense_min_eigenvalue;  // Jacobi re-check, d <= 8 only
    PointSet points;           // the 2^d vertices
};

inline constexpr unsigned kMaxWitnessDimension = 10;

/// For d = 1..d_max and `samples` boxes per d with sides log-uniform in
/// [1e-2, 1e2] (stream seeded from (seed, d, sample)), looks for
/// lambda_chi < -1e-9 * scale. Returns the hit with smallest d, then
/// smallest sample index, then most negative lambda.
std::optional<KernelWitness> cm_witness_search(const FunctionSpec& f, unsigned d_max, unsigned samples,
                                               std::uint64_t seed);

struct BernsteinLink {
    MonotoneVerdict verdict;  // bernstein_test on g(t) = f(0) - f(t)
    bool f_is_cm = false;     // cm_test(f)
    bool consistent = true;   // false only when f passes cm_test but g fails
};

BernsteinLink kernel_to_bernstein_link(const FunctionSpec& f);

}  // namespace hyperspec
