#include "hyperspec/l1_embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hyperspec/walsh_hadamard.hpp"

namespace hyperspec {

namespace {

void require_zero_diagonal(const SymMatrix& d, const char* op) {
    const double tol = 1e-12 * (1.0 + d.max_abs());
    for (std::size_t i = 0; i < d.size(); ++i)
        if (std::abs(d(i, i)) > tol)
            throw InputError(std::string(op) + ": diagonal entry " + std::to_string(i) + " is nonzero");
}

void require_bernstein(const FunctionSpec& f, const EmbeddingOptions& opt) {
    if (!opt.check_bernstein) return;
    auto verdict = bernstein_test(f);
    if (!verdict.holds) throw BernsteinPreconditionError(*verdict.witness);
}

double abs_sum(const std::vector<double>& g) {
    double s = 0.0;
    for (double v : g) s += std::abs(v);
    return s;
}

// mu_chi = -lambda_chi / 2 for chi != 0, mu_0 = 0, with small negatives
// clamped and large ones reported.
std::vector<double> transform_weights(std::span<const double> sides, const FunctionSpec& f) {
    std::vector<double> g = subset_values(sides, f);
    const double tol = 1e-9 * abs_sum(g);
    fwht_inplace(g);
    const auto d = static_cast<unsigned>(sides.size());
    g[0] = 0.0;
    for (std::size_t chi = 1; chi < g.size(); ++chi) {
        const double mu = -0.5 * g[chi];
        if (mu < -tol) throw NegativeTypeViolation(chi, d, mu, tol);
        g[chi] = std::max(mu, 0.0);
    }
    return g;
}

}  // namespace

std::string to_string(Metric m) { return m == Metric::l1 ? "l1" : "l2"; }

Metric metric_from_string(const std::string& s) {
    if (s == "l1") return Metric::l1;
    if (s == "l2") return Metric::l2;
    throw InputError("unknown metric '" + s + "' (expected l1 or l2)");
}

PointSet::PointSet(Matrix coords, Metric metric) : coords_(std::move(coords)), metric_(metric) {
    if (coords_.rows() == 0) throw InputError("point set: needs at least one point");
    if (!coords_.all_finite()) throw InputError("point set: non-finite coordinate");
}

double l1_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) s += std::abs(x[t] - y[t]);
    return s;
}

Matrix PointSet::pairwise() const {
    const std::size_t n = size();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = 0.0;
            if (metric_ == Metric::l1) {
                v = l1_distance(coords_.row(i), coords_.row(j));
            } else {
                for (std::size_t t = 0; t < dimension(); ++t) {
                    const double diff = coords_(i, t) - coords_(j, t);
                    v += diff * diff;
                }
            }
            out(i, j) = out(j, i) = v;
        }
    return out;
}

std::uint64_t CubeEmbedding::row_index(std::size_t i) const {
    const std::size_t d = dimension();
    if (d > kMaxBitDimension) throw CapabilityError("cube_dimension_cap", "row_index: cube dimension too large");
    std::uint64_t idx = 0;
    for (std::size_t t = 0; t < d; ++t) idx = (idx << 1) | bit(i, t);
    return idx;
}

double CubeEmbedding::distance(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t t = 0; t < dimension(); ++t)
        if (bit(i, t) != bit(j, t)) s += sides[t];
    return s;
}

CubeEmbedding cut_embedding(const PointSet& x) {
    if (x.metric() != Metric::l1) throw InputError("cut_embedding: point set must carry the l1 tag");
    const std::size_t n = x.size();
    const std::size_t m = x.dimension();

    CubeEmbedding out;
    out.n = n;
    std::vector<std::vector<std::uint8_t>> columns;
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = x.coords()(i, c);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t t = 0; t + 1 < values.size(); ++t) {
            out.sides.push_back(values[t + 1] - values[t]);
            std::vector<std::uint8_t> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = x.coords()(i, c) > values[t] ? 1 : 0;
            columns.push_back(std::move(col));
        }
    }
    const std::size_t d = out.sides.size();
    out.bits.resize(n * d);
    for (std::size_t t = 0; t < d; ++t)
        for (std::size_t i = 0; i < n; ++i) out.bits[i * d + t] = columns[t][i];
    return out;
}

SymMatrix gram_from_squared_distances(const SymMatrix& d) {
    require_zero_diagonal(d, "gram_from_squared_distances");
    const SymMatrix p = project_off_ones(d);
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) m(i, j) = -0.5 * p(i, j);
    return SymMatrix(std::move(m));
}

NegativeTypeVerdict negative_type_test(const SymMatrix& d) {
    require_zero_diagonal(d, "negative_type_test");
    const std::size_t n = d.size();
    const auto eig = sym_eigen(project_off_ones(d));

    NegativeTypeVerdict v;
    v.max_projected_eigenvalue = eig.values.back();
    v.tolerance = 1e-9 * static_cast<double>(n) * (1.0 + d.max_abs());
    v.holds = v.max_projected_eigenvalue <= v.tolerance;
    if (!v.holds) {
        v.witness.resize(n);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += (v.witness[i] = eig.vectors(i, n - 1));
        mean /= static_cast<double>(n);
        for (double& w : v.witness) w -= mean;
        const double norm = std::sqrt(dot(v.witness, v.witness));
        for (double& w : v.witness) w /= norm;
    }
    return v;
}

BernsteinPreconditionError::BernsteinPreconditionError(MonotoneWitness w)
    : InputError("function is not Bernstein on the sampled grid (" + to_string(w.kind) + " of order " +
                 std::to_string(w.order) + " at x = " + std::to_string(w.base_point) + ")"),
      witness_(std::move(w)) {}

NegativeTypeViolation::NegativeTypeViolation(std::uint64_t chi, unsigned d, double mu, double tolerance)
    : std::runtime_error("negative-type violation: mu = " + std::to_string(mu) + " < 0 at character " +
                         std::to_string(chi) + " (d = " + std::to_string(d) + ")"),
      chi_(chi),
      d_(d),
      mu_(mu),
      tolerance_(tolerance) {}

PointSet squared_euclidean_points(const Hyperrectangle& r, const FunctionSpec& f, EmbeddingOptions opt) {
    const unsigned d = r.dimension();
    if (d > kMaxDenseDimension)
        throw CapabilityError("dense_dimension_cap", "squared_euclidean_points: d = " + std::to_string(d) +
                                                         " exceeds " + std::to_string(kMaxDenseDimension));
    require_bernstein(f, opt);
    const std::vector<double> mu = transform_weights(r.sides(), f);
    const std::size_t n = mu.size();
    const double norm = std::sqrt(static_cast<double>(n));
    Matrix p(n, n);
    for (std::size_t chi = 0; chi < n; ++chi) {
        const double c = std::sqrt(mu[chi]) / norm;
        for (std::size_t i = 0; i < n; ++i) p(i, chi) = hadamard_sign(i, chi) * c;
    }
    return PointSet(std::move(p), Metric::l2);
}

PointSet manhattan_transform(const PointSet& x, const FunctionSpec& f, EmbeddingOptions opt) {
    require_bernstein(f, opt);
    const CubeEmbedding cube = cut_embedding(x);
    const std::size_t n = x.size();
    const std::size_t d = cube.dimension();
    if (d == 0) return PointSet(Matrix(n, 0), Metric::l1);
    if (d > kMaxCubeDimension)
        throw CapabilityError("cube_dimension_cap", "manhattan_transform: cube dimension " + std::to_string(d) +
                                                        " exceeds " + std::to_string(kMaxCubeDimension));

    const std::vector<double> mu = transform_weights(cube.sides, f);
    const double axis_scale = 4.0 / static_cast<double>(mu.size());

    std::vector<std::uint64_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = cube.row_index(i);

    // Axis chi separates the rows by parity(row & chi). Axes with the same
    // split (up to swapping sides) add up, so accumulate per split.
    const std::size_t words = (n + 63) / 64;
    std::map<std::vector<std::uint64_t>, double> axes;
    std::vector<std::uint64_t> key(words);
    for (std::size_t chi = 1; chi < mu.size(); ++chi) {
        if (mu[chi] <= 0.0) continue;
        std::fill(key.begin(), key.end(), 0);
        const bool flip = __builtin_popcountll(rows[0] & chi) & 1;
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool b = static_cast<bool>(__builtin_popcountll(rows[i] & chi) & 1) != flip;
            if (b) {
                key[i / 64] |= std::uint64_t{1} << (i % 64);
                any = true;
            }
        }
        if (!any) continue;
        axes[key] += axis_scale * mu[chi];
    }

    double largest = 0.0;
    for (const auto& [k, w] : axes) largest = std::max(largest, w);
    std::vector<std::pair<const std::vector<std::uint64_t>*, double>> kept;
    for (const auto& [k, w] : axes)
        if (w > 1e-24 * largest) kept.emplace_back(&k, w);

    Matrix q(n, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const auto& k = *kept[c].first;
        for (std::size_t i = 0; i < n; ++i)
            if (k[i / 64] >> (i % 64) & 1u) q(i, c) = kept[c].second;
    }
    return PointSet(std::move(q), Metric::l1);
}

}  // namespace hyperspec
