#include "hyperspec/hyperrect_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "hyperspec/errors.hpp"
#include "hyperspec/parallel.hpp"

namespace hyperspec {

namespace {

void require_dense(unsigned d, const char* op) {
    if (d > kMaxDenseDimension)
        throw CapabilityError("dense_dimension_cap", std::string(op) + ": d = " + std::to_string(d) +
                                                         " exceeds the dense limit " +
                                                         std::to_string(kMaxDenseDimension));
}

// Row-wise then column-wise FWHT of a square 2^d matrix: returns H A H.
Matrix hadamard_sandwich(Matrix a) {
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) fwht_inplace(a.row(i));
    Matrix t = a.transposed();
    for (std::size_t i = 0; i < n; ++i) fwht_inplace(t.row(i));
    return t.transposed();
}

}  // namespace

Hyperrectangle::Hyperrectangle(std::vector<double> sides) : sides_(std::move(sides)) {
    if (sides_.empty()) throw InputError("hyperrectangle: needs at least one side");
    if (sides_.size() > kMaxSpectrumDimension)
        throw CapabilityError("spectrum_dimension_cap", "hyperrectangle: d = " + std::to_string(sides_.size()) +
                                                            " exceeds " + std::to_string(kMaxSpectrumDimension));
    for (std::size_t j = 0; j < sides_.size(); ++j)
        if (!std::isfinite(sides_[j]) || !(sides_[j] > 0.0))
            throw InputError("hyperrectangle: side " + std::to_string(j) + " must be finite and positive");
}

std::string to_string(SpectrumMethod m) {
    switch (m) {
        case SpectrumMethod::fwht: return "fwht";
        case SpectrumMethod::subset_sum: return "subset_sum";
        case SpectrumMethod::dense_oracle: return "dense_oracle";
        case SpectrumMethod::integral: return "integral";
    }
    return "unknown";
}

Matrix vertices(const Hyperrectangle& r) {
    const unsigned d = r.dimension();
    if (d > kMaxVertexDimension)
        throw CapabilityError("vertex_dimension_cap",
                              "vertices: d = " + std::to_string(d) + " exceeds " + std::to_string(kMaxVertexDimension));
    Matrix v(r.vertex_count(), d);
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (unsigned j = 0; j < d; ++j) v(i, j) = bit_at(i, d, j) ? -0.5 * r.sides()[j] : 0.5 * r.sides()[j];
    return v;
}

SymMatrix distance_matrix(const Hyperrectangle& r, const FunctionSpec& f) {
    require_dense(r.dimension(), "distance_matrix");
    const std::vector<double> g = subset_values(r.sides(), f);
    const std::size_t n = r.vertex_count();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d(i, j) = g[i ^ j];
    return SymMatrix(std::move(d));
}

std::vector<double> subset_values(std::span<const double> a, const FunctionSpec& f) {
    if (a.size() > kMaxSpectrumDimension)
        throw CapabilityError("spectrum_dimension_cap",
                              "spectrum: d = " + std::to_string(a.size()) + " exceeds " +
                                  std::to_string(kMaxSpectrumDimension));
    for (double x : a)
        if (!std::isfinite(x) || x < 0.0) throw InputError("spectrum: sides must be finite and nonnegative");
    const std::size_t n = std::size_t{1} << a.size();
    std::vector<double> g(n);
    constexpr std::size_t chunk = 4096;
    parallel_for((n + chunk - 1) / chunk, [&](std::size_t c) {
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t b = c * chunk; b < end; ++b) g[b] = eval(f, subset_length(a, b));
    });
    return g;
}

std::vector<double> eigenvalues_for_sides(std::span<const double> a, const FunctionSpec& f) {
    std::vector<double> g = subset_values(a, f);
    fwht_inplace(g);
    return g;
}

SpectrumResult spectrum(const Hyperrectangle& r, const FunctionSpec& f) {
    return {r.dimension(), eigenvalues_for_sides(r.sides(), f), SpectrumMethod::fwht};
}

double spectrum_subset_sum(const Hyperrectangle& r, const FunctionSpec& f, const BitVector& chi) {
    const unsigned d = r.dimension();
    if (chi.size() != d) throw InputError("spectrum_subset_sum: character length must equal d");
    const std::uint64_t c = chi.to_index();
    double acc = 0.0;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b)
        acc += hadamard_sign(c, b) * eval(f, subset_length(r.sides(), b));
    return acc;
}

SpectrumResult spectrum_by_subset_sums(const Hyperrectangle& r, const FunctionSpec& f) {
    require_dense(r.dimension(), "spectrum_by_subset_sums");
    const std::vector<double> g = subset_values(r.sides(), f);
    const std::size_t n = g.size();
    std::vector<double> lambda(n);
    parallel_for(n, [&](std::size_t c) {
        double acc = 0.0;
        for (std::size_t b = 0; b < n; ++b) acc += hadamard_sign(c, b) * g[b];
        lambda[c] = acc;
    });
    return {r.dimension(), std::move(lambda), SpectrumMethod::subset_sum};
}

SpectrumResult dense_spectrum(const Hyperrectangle& r, const FunctionSpec& f) {
    return {r.dimension(), sym_eigenvalues(distance_matrix(r, f)), SpectrumMethod::dense_oracle};
}

DiagonalizationCheck diagonalization_check(const Hyperrectangle& r, const FunctionSpec& f) {
    require_dense(r.dimension(), "diagonalization_check");
    const SymMatrix d = distance_matrix(r, f);
    const std::size_t n = d.size();
    const double scale = d.max_abs();

    const Matrix sigma = hadamard_sandwich(d.matrix());
    DiagonalizationCheck out;
    out.diagonal.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.diagonal[i] = sigma(i, i);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.max_offdiag = std::max(out.max_offdiag, std::abs(sigma(i, j)));
    }

    const Matrix back = hadamard_sandwich(sigma);
    const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.reconstruction_error = std::max(out.reconstruction_error, std::abs(d(i, j) - inv * back(i, j)));

    out.offdiag_tolerance = 1e-8 * static_cast<double>(n) * scale;
    out.reconstruction_tolerance = 1e-8 * scale;
    return out;
}

QuadratureRule gauss_legendre(unsigned n) {
    if (n == 0) throw InputError("gauss_legendre: need at least one node");
    // P_n(x) and its derivative by the three-term recurrence, in extended
    // precision so the rounded rule reproduces its moments to the last bit.
    using Real = long double;
    auto legendre = [n](Real x) {
        Real p0 = 1.0L, p1 = x;
        for (unsigned k = 2; k <= n; ++k) {
            const Real p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0L)};
    };
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        Real x = std::cos(std::numbers::pi_v<Real> * (i + 0.75L) / (n + 0.5L));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(x);
            const Real dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        const Real dp = legendre(x).second;
        const auto w = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double spectrum_integral(const Hyperrectangle& r, const FunctionSpec& f, const BitVector& chi) {
    const unsigned d = r.dimension();
    if (chi.size() != d) throw InputError("spectrum_integral: character length must equal d");
    const auto k = static_cast<unsigned>(chi.weight());
    if (k == 0 || k > kMaxIntegralOrder)
        throw CapabilityError("integral_order_cap", "spectrum_integral: |chi| = " + std::to_string(k) +
                                                        " outside 1.." + std::to_string(kMaxIntegralOrder));
    if (!is_smooth_at_zero(f))
        throw InputError("spectrum_integral: " + describe(f) + " is not smooth at zero");

    std::vector<double> box;
    std::vector<unsigned> rest;
    for (unsigned j = 0; j < d; ++j) (chi[j] ? box.push_back(r.sides()[j]) : rest.push_back(j));

    static const QuadratureRule rule = gauss_legendre(kQuadratureNodes);
    const std::size_t q = rule.nodes.size();

    // Integral over the box of f^(k)(shift + sum s), for one shift.
    auto box_integral = [&](double shift) {
        long double total = 0.0L;
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            double arg = shift;
            long double w = 1.0L;
            for (unsigned t = 0; t < k; ++t) {
                const double half = 0.5 * box[t];
                arg += half * (rule.nodes[idx[t]] + 1.0);
                w *= static_cast<long double>(half) * rule.weights[idx[t]];
            }
            total += w * derivative(f, static_cast<int>(k), arg);
            unsigned t = 0;
            while (t < k && ++idx[t] == q) idx[t++] = 0;
            if (t == k) break;
        }
        return static_cast<double>(total);
    };

    const double sign = (k % 2) ? -1.0 : 1.0;
    const std::size_t subsets = std::size_t{1} << rest.size();
    double acc = 0.0;
    for (std::size_t m = 0; m < subsets; ++m) {
        double shift = 0.0;
        for (std::size_t t = 0; t < rest.size(); ++t)
            if (m >> t & 1u) shift += r.sides()[rest[t]];
        acc += sign * box_integral(shift);
    }
    return acc;
}

double delta_k(const FunctionSpec& f, double t, std::span<const double> eps) {
    if (!std::isfinite(t) || t < 0.0) throw InputError("delta_k: base point must be nonnegative");
    if (eps.size() > kMaxTesterOrder)
        throw CapabilityError("difference_order_cap",
                              "delta_k: k = " + std::to_string(eps.size()) + " exceeds " +
                                  std::to_string(kMaxTesterOrder));
    for (double e : eps)
        if (!std::isfinite(e) || !(e > 0.0)) throw InputError("delta_k: offsets must be positive");
    return alternating_difference(f, t, eps);
}

IdentityCheck binom_eigenvalue_identity(const FunctionSpec& f, std::span<const double> eps, double c, unsigned d) {
    const auto k = static_cast<unsigned>(eps.size());
    if (k < 1 || k > d || d > 16) throw InputError("binom_eigenvalue_identity: need 1 <= k <= d <= 16");
    if (!std::isfinite(c) || !(c > 0.0)) throw InputError("binom_eigenvalue_identity: c must be positive");

    std::vector<double> a(eps.begin(), eps.end());
    a.resize(d, 2.0 * c / d);
    const Hyperrectangle r(a);
    const std::uint64_t chi = ((std::uint64_t{1} << k) - 1) << (d - k);

    IdentityCheck out;
    out.lhs = spectrum(r, f).eigenvalues[chi];
    double binom = 1.0;
    for (unsigned s = 0; s <= d - k; ++s) {
        out.rhs += binom * delta_k(f, 2.0 * s * c / d, eps);
        binom = binom * (d - k - s) / (s + 1);
    }
    out.scale = 1.0 + std::abs(out.lhs);
    out.tolerance = 1e-8 * out.scale;
    return out;
}

}  // namespace hyperspec
