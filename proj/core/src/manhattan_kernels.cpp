#include "hyperspec/manhattan_kernels.hpp"

#include <cmath>
#include <random>

#include "hyperspec/errors.hpp"
#include "hyperspec/parallel.hpp"
#include "hyperspec/walsh_hadamard.hpp"

namespace hyperspec {

SymMatrix kernel_matrix(const PointSet& x, const FunctionSpec& f) {
    if (x.metric() != Metric::l1) throw InputError("kernel_matrix: point set must carry the l1 tag");
    const std::size_t n = x.size();
    Matrix k(n, n);
    const double f0 = eval(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = f0;
        for (std::size_t j = i + 1; j < n; ++j)
            k(i, j) = k(j, i) = eval(f, l1_distance(x.coords().row(i), x.coords().row(j)));
    }
    return SymMatrix(std::move(k));
}

KernelVerdict psd_on_pointset(const PointSet& x, const FunctionSpec& f) {
    const PsdVerdict v = psd_verdict(kernel_matrix(x, f));
    return {v.is_psd, v.min_eigenvalue, v.tolerance, x, v.witness};
}

PointSet simplex_points(double t, std::size_t n_points) {
    Matrix m(n_points, n_points);
    for (std::size_t i = 0; i < n_points; ++i) m(i, i) = 0.5 * t;
    return PointSet(std::move(m), Metric::l1);
}

SimplexWitness simplex_witness(const FunctionSpec& f, double t, std::size_t n_points) {
    if (!std::isfinite(t) || !(t > 0.0)) throw InputError("simplex_witness: t must be positive");
    if (n_points < 2) throw InputError("simplex_witness: need at least two points");
    if (n_points > kMaxSimplexPoints)
        throw CapabilityError("simplex_point_cap", "simplex_witness: N = " + std::to_string(n_points) +
                                                       " exceeds " + std::to_string(kMaxSimplexPoints));
    const double n = static_cast<double>(n_points);
    const double f0 = eval(f, 0.0);
    const double ft = eval(f, t);
    SimplexWitness w;
    w.sum_of_entries = n * (f0 + (n - 1.0) * ft);
    w.tolerance = 1e-9 * n * n * (1.0 + std::max(std::abs(f0), std::abs(ft)));
    w.bound_holds = w.sum_of_entries >= -w.tolerance;
    return w;
}

std::optional<KernelWitness> cm_witness_search(const FunctionSpec& f, unsigned d_max, unsigned samples,
                                               std::uint64_t seed) {
    if (d_max < 1 || d_max > kMaxWitnessDimension)
        throw CapabilityError("witness_dimension_cap", "cm_witness_search: d_max must lie in 1.." +
                                                           std::to_string(kMaxWitnessDimension));

    struct Hit {
        bool found = false;
        std::vector<double> sides;
        std::uint64_t chi = 0;
        double lambda = 0.0;
        double tolerance = 0.0;
    };

    for (unsigned d = 1; d <= d_max; ++d) {
        std::vector<Hit> hits(samples);
        parallel_for(samples, [&](std::size_t s) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(s)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> exponent(-2.0, 2.0);
            std::vector<double> sides(d);
            for (auto& a : sides) a = std::pow(10.0, exponent(rng));

            std::vector<double> g = subset_values(sides, f);
            double mass = 0.0;
            for (double v : g) mass += std::abs(v);
            const double tol = 1e-9 * mass;
            fwht_inplace(g);
            Hit& h = hits[s];
            for (std::size_t chi = 0; chi < g.size(); ++chi)
                if (g[chi] < -tol && (!h.found || g[chi] < h.lambda)) {
                    h.found = true;
                    h.chi = chi;
                    h.lambda = g[chi];
                }
            if (h.found) {
                h.sides = std::move(sides);
                h.tolerance = tol;
            }
        });

        for (std::size_t s = 0; s < hits.size(); ++s) {
            if (!hits[s].found) continue;
            const Hyperrectangle r(hits[s].sides);
            PointSet pts(vertices(r), Metric::l1);
            const SymMatrix k = kernel_matrix(pts, f);
            std::vector<double> h(k.size());
            for (std::size_t i = 0; i < h.size(); ++i) h[i] = hadamard_sign(i, hits[s].chi);
            KernelWitness w{d, s, hits[s].sides, hits[s].chi, hits[s].lambda, hits[s].tolerance,
                            quadratic_form(k, h) / static_cast<double>(k.size()), std::nullopt, pts};
            if (d <= 8) w.dense_min_eigenvalue = sym_eigenvalues(k).front();
            return w;
        }
    }
    return std::nullopt;
}

BernsteinLink kernel_to_bernstein_link(const FunctionSpec& f) {
    const double f0 = eval(f, 0.0);
    if (!std::isfinite(f0)) throw InputError("kernel_to_bernstein_link: f(0) must be finite");
    BernsteinLink link;
    link.verdict = bernstein_test(FunctionSpec::affine_of(f, -1.0, f0));
    link.f_is_cm = cm_test(f).holds;
    link.consistent = !(link.f_is_cm && !link.verdict.holds);
    return link;
}

}  // namespace hyperspec
