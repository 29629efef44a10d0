#pragma once

// l1 point sets on weighted hypercube corners, squared-Euclidean
// realizations built from spectra, and Bernstein transforms that map
// Manhattan distances to Manhattan distances with explicit output points.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperspec/errors.hpp"
#include "hyperspec/function_catalog.hpp"
#include "hyperspec/hyperrect_spectrum.hpp"
#include "hyperspec/linalg.hpp"

namespace hyperspec {

enum class Metric { l1, l2 };

std::string to_string(Metric m);
/// "l1" or "l2"; anything else is an InputError.
Metric metric_from_string(const std::string& s);

/// n >= 1 points (rows) with m >= 0 finite coordinates.
class PointSet {
public:
    PointSet(Matrix coords, Metric metric);

    std::size_t size() const noexcept { return coords_.rows(); }
    std::size_t dimension() const noexcept { return coords_.cols(); }
    const Matrix& coords() const noexcept { return coords_; }
    Metric metric() const noexcept { return metric_; }

    /// Pairwise distances in the tagged metric (l2 tag: squared Euclidean).
    Matrix pairwise() const;

private:
    Matrix coords_;
    Metric metric_;
};

double l1_distance(std::span<const double> x, std::span<const double> y);

struct CubeEmbedding {
    std::size_t n = 0;
    std::vector<double> sides;       // D axis weights
    std::vector<std::uint8_t> bits;  // n x D, row-major

    std::size_t dimension() const noexcept { return sides.size(); }
    std::uint8_t bit(std::size_t i, std::size_t t) const noexcept { return bits[i * sides.size() + t]; }
    /// Axis t is bit 0 = most significant in row_index.
    std::uint64_t row_index(std::size_t i) const;
    double distance(std::size_t i, std::size_t j) const;
};

/// Per coordinate, the sorted distinct values v_1 < ... < v_m give m - 1 axes
/// with sides v_{t+1} - v_t; a point's bit is 1 iff its coordinate > v_t.
/// Requires the l1 tag.
CubeEmbedding cut_embedding(const PointSet& x);

/// M = -1/2 Pi D Pi. D must have a zero diagonal (within 1e-12 (1 + max|D|)).
SymMatrix gram_from_squared_distances(const SymMatrix& d);

struct NegativeTypeVerdict {
    bool holds = true;
    double max_projected_eigenvalue = 0.0;  // largest eigenvalue of Pi D Pi
    double tolerance = 0.0;                 // 1e-9 * n * (1 + max|D|)
    std::vector<double> witness;            // unit, orthogonal to 1; empty when holds
};

NegativeTypeVerdict negative_type_test(const SymMatrix& d);

/// f failed the sampled Bernstein test that guards the transforms.
class BernsteinPreconditionError : public InputError {
public:
    explicit BernsteinPreconditionError(MonotoneWitness w);
    const MonotoneWitness& witness() const noexcept { return witness_; }

private:
    MonotoneWitness witness_;
};

/// A spectrum produced mu_chi = -lambda_chi / 2 below -1e-9 * sum|g|.
class NegativeTypeViolation : public std::runtime_error {
public:
    NegativeTypeViolation(std::uint64_t chi, unsigned d, double mu, double tolerance);
    std::uint64_t chi() const noexcept { return chi_; }
    unsigned dimension() const noexcept { return d_; }
    double mu() const noexcept { return mu_; }
    double tolerance() const noexcept { return tolerance_; }

private:
    std::uint64_t chi_;
    unsigned d_;
    double mu_;
    double tolerance_;
};

struct EmbeddingOptions {
    bool check_bernstein = true;  // run bernstein_test on the default grid first
};

/// 2^d points in R^(2^d): point i, coordinate chi is
/// (-1)^<B(i),B(chi)> sqrt(mu_chi) / 2^(d/2), mu_chi = -lambda_chi/2 (chi != 0),
/// mu_0 = 0. Squared distances equal f(|x_i - x_j|_1) - f(0) on the vertices.
/// d <= kMaxDenseDimension.
PointSet squared_euclidean_points(const Hyperrectangle& r, const FunctionSpec& f, EmbeddingOptions opt = {});

inline constexpr unsigned kMaxCubeDimension = 20;

/// l1 points q with |q_i - q_j|_1 = f(|x_i - x_j|_1). Cube axes whose bit
/// pattern over the input rows coincides (up to complement) are merged, and
/// constant or negligible axes dropped, so the output has at most
/// min(2^D, 2^(n-1)) columns. CapabilityError when D > kMaxCubeDimension.
PointSet manhattan_transform(const PointSet& x, const FunctionSpec& f, EmbeddingOptions opt = {});

}  // namespace hyperspec
