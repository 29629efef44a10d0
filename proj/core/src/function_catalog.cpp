#include "hyperspec/function_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperspec/errors.hpp"

namespace hyperspec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
}

void require_pairs(const std::vector<double>& w, const std::vector<double>& t, const char* kind) {
    if (w.size() != t.size())
        throw InputError(std::string(kind) + ": weights and rates must have equal length");
}

enum class Mode { strict, real_line, right_limit };

template <class Real>
Real eval_node(const FunctionSpec& f, Real x, Mode mode) {
    using std::exp, std::expm1, std::pow;
    return std::visit(
        overloaded{
            [&](const Polynomial& p) {
                Real acc = 0;
                for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
                return acc;
            },
            [&](const ExpMixture& e) {
                Real acc = 0;
                for (std::size_t i = 0; i < e.weights.size(); ++i) acc += e.weights[i] * exp(-e.rates[i] * x);
                if (x == 0 && mode != Mode::right_limit) acc += e.atom_at_zero;
                return acc;
            },
            [&](const BernsteinMixture& b) {
                Real acc = b.linear * x;
                for (std::size_t i = 0; i < b.weights.size(); ++i) acc -= b.weights[i] * expm1(-b.rates[i] * x);
                return acc;
            },
            [&](const Power& p) { return x == 0 ? Real(0) : pow(x, Real(p.exponent)); },
            [&](const AffineOf& a) { return a.scale * eval_node<Real>(*a.inner, a.arg_scale * x, mode) + a.shift; },
            [&](const SumOf& s) {
                Real acc = 0;
                for (const auto& term : s.terms) acc += eval_node<Real>(*term, x, mode);
                return acc;
            },
        },
        f.node());
}

double falling_factorial(double s, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (s - i);
    return r;
}

double derivative_node(const FunctionSpec& f, int k, double x) {
    return std::visit(
        overloaded{
            [&](const Polynomial& p) {
                double acc = 0.0;
                for (std::size_t i = p.coeffs.size(); i-- > static_cast<std::size_t>(k);)
                    acc = acc * x + p.coeffs[i] * falling_factorial(static_cast<double>(i), k);
                return acc;
            },
            [&](const ExpMixture& e) {
                double acc = 0.0;
                for (std::size_t i = 0; i < e.weights.size(); ++i)
                    acc += e.weights[i] * std::pow(-e.rates[i], k) * std::exp(-e.rates[i] * x);
                return acc;
            },
            [&](const BernsteinMixture& b) {
                double acc = k == 1 ? b.linear : 0.0;
                for (std::size_t i = 0; i < b.weights.size(); ++i)
                    acc -= b.weights[i] * std::pow(-b.rates[i], k) * std::exp(-b.rates[i] * x);
                return acc;
            },
            [&](const Power& p) { return falling_factorial(p.exponent, k) * std::pow(x, p.exponent - k); },
            [&](const AffineOf& a) {
                return a.scale * std::pow(a.arg_scale, k) * derivative_node(*a.inner, k, a.arg_scale * x);
            },
            [&](const SumOf& s) {
                double acc = 0.0;
                for (const auto& term : s.terms) acc += derivative_node(*term, k, x);
                return acc;
            },
        },
        f.node());
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

}  // namespace

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::polynomial: return "polynomial";
        case FunctionKind::exp_mixture: return "exp_mixture";
        case FunctionKind::bernstein_mixture: return "bernstein_mixture";
        case FunctionKind::power: return "power";
        case FunctionKind::affine_of: return "affine_of";
        case FunctionKind::sum_of: return "sum_of";
    }
    return "unknown";
}

FunctionSpec FunctionSpec::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw InputError("polynomial: needs at least one coefficient");
    for (double c : coeffs) require_finite(c, "polynomial coefficient");
    return FunctionSpec(Polynomial{std::move(coeffs)});
}

FunctionSpec FunctionSpec::exp_mixture(std::vector<double> weights, std::vector<double> rates, double atom_at_zero) {
    require_pairs(weights, rates, "exp_mixture");
    for (double w : weights) {
        require_finite(w, "exp_mixture weight");
        if (!(w > 0.0)) throw InputError("exp_mixture: weights must be positive");
    }
    for (double t : rates) {
        require_finite(t, "exp_mixture rate");
        if (t < 0.0) throw InputError("exp_mixture: rates must be nonnegative");
    }
    require_finite(atom_at_zero, "exp_mixture atom");
    if (atom_at_zero < 0.0) throw InputError("exp_mixture: atom at zero must be nonnegative");
    return FunctionSpec(ExpMixture{std::move(weights), std::move(rates), atom_at_zero});
}

FunctionSpec FunctionSpec::bernstein_mixture(double linear, std::vector<double> weights, std::vector<double> rates) {
    require_pairs(weights, rates, "bernstein_mixture");
    require_finite(linear, "bernstein_mixture linear term");
    if (linear < 0.0) throw InputError("bernstein_mixture: linear term must be nonnegative");
    for (double w : weights) {
        require_finite(w, "bernstein_mixture weight");
        if (!(w > 0.0)) throw InputError("bernstein_mixture: weights must be positive");
    }
    for (double t : rates) {
        require_finite(t, "bernstein_mixture rate");
        if (!(t > 0.0)) throw InputError("bernstein_mixture: rates must be positive");
    }
    return FunctionSpec(BernsteinMixture{linear, std::move(weights), std::move(rates)});
}

FunctionSpec FunctionSpec::power(double exponent) {
    require_finite(exponent, "power exponent");
    if (!(exponent > 0.0)) throw InputError("power: exponent must be positive");
    return FunctionSpec(Power{exponent});
}

FunctionSpec FunctionSpec::affine_of(FunctionSpec inner, double scale, double shift, double arg_scale) {
    require_finite(scale, "affine_of scale");
    require_finite(shift, "affine_of shift");
    require_finite(arg_scale, "affine_of arg_scale");
    if (!(arg_scale > 0.0)) throw InputError("affine_of: arg_scale must be positive");
    return FunctionSpec(AffineOf{std::make_shared<const FunctionSpec>(std::move(inner)), scale, shift, arg_scale});
}

FunctionSpec FunctionSpec::sum_of(std::vector<FunctionSpec> terms) {
    if (terms.empty()) throw InputError("sum_of: needs at least one term");
    SumOf s;
    s.terms.reserve(terms.size());
    for (auto& t : terms) s.terms.push_back(std::make_shared<const FunctionSpec>(std::move(t)));
    return FunctionSpec(std::move(s));
}

double eval(const FunctionSpec& f, double x) {
    if (!std::isfinite(x)) throw InputError("eval: argument must be finite");
    if (x < 0.0) throw InputError("eval: argument " + std::to_string(x) + " is negative");
    return eval_node(f, x, Mode::strict);
}

double eval_on_real_line(const FunctionSpec& f, double x) {
    if (!std::isfinite(x)) throw InputError("eval: argument must be finite");
    if (x < 0.0 && !polynomial_degree(f))
        throw InputError("eval: argument " + std::to_string(x) + " is negative and " + describe(f) +
                         " is only defined on [0, inf)");
    return eval_node(f, x, Mode::real_line);
}

double right_limit_at_zero(const FunctionSpec& f) { return eval_node(f, 0.0, Mode::right_limit); }

long double eval_extended(const FunctionSpec& f, long double x) {
    if (!std::isfinite(x)) throw InputError("eval: argument must be finite");
    if (x < 0 && !polynomial_degree(f))
        throw InputError("eval: negative argument and " + describe(f) + " is only defined on [0, inf)");
    return eval_node<long double>(f, x, Mode::real_line);
}

double derivative(const FunctionSpec& f, int k, double x) {
    if (k < 0) throw InputError("derivative: order must be nonnegative");
    if (k > kMaxDerivativeOrder)
        throw CapabilityError("derivative_order_cap",
                              "derivative: order " + std::to_string(k) + " exceeds " +
                                  std::to_string(kMaxDerivativeOrder));
    if (!std::isfinite(x) || !(x > 0.0)) throw InputError("derivative: argument must be positive");
    if (k == 0) return eval(f, x);
    return derivative_node(f, k, x);
}

std::optional<int> polynomial_degree(const FunctionSpec& f) {
    return std::visit(
        overloaded{
            [](const Polynomial& p) -> std::optional<int> {
                int deg = static_cast<int>(p.coeffs.size()) - 1;
                while (deg > 0 && p.coeffs[static_cast<std::size_t>(deg)] == 0.0) --deg;
                return deg;
            },
            [](const AffineOf& a) -> std::optional<int> {
                auto inner = polynomial_degree(*a.inner);
                if (!inner) return std::nullopt;
                return a.scale == 0.0 ? 0 : *inner;
            },
            [](const SumOf& s) -> std::optional<int> {
                int deg = 0;
                for (const auto& t : s.terms) {
                    auto d = polynomial_degree(*t);
                    if (!d) return std::nullopt;
                    deg = std::max(deg, *d);
                }
                return deg;
            },
            [](const auto&) -> std::optional<int> { return std::nullopt; },
        },
        f.node());
}

bool is_smooth_at_zero(const FunctionSpec& f) {
    return std::visit(overloaded{
                          [](const ExpMixture& e) { return e.atom_at_zero == 0.0; },
                          [](const Power& p) { return p.exponent == std::floor(p.exponent); },
                          [](const AffineOf& a) { return is_smooth_at_zero(*a.inner); },
                          [](const SumOf& s) {
                              return std::all_of(s.terms.begin(), s.terms.end(),
                                                 [](const FunctionPtr& t) { return is_smooth_at_zero(*t); });
                          },
                          [](const auto&) { return true; },
                      },
                      f.node());
}

std::optional<FunctionSpec> derivative_spec(const FunctionSpec& f) {
    return std::visit(
        overloaded{
            [](const Polynomial& p) -> std::optional<FunctionSpec> {
                if (p.coeffs.size() == 1) return FunctionSpec::constant(0.0);
                std::vector<double> c(p.coeffs.size() - 1);
                for (std::size_t i = 1; i < p.coeffs.size(); ++i) c[i - 1] = p.coeffs[i] * static_cast<double>(i);
                return FunctionSpec::polynomial(std::move(c));
            },
            [](const ExpMixture& e) -> std::optional<FunctionSpec> {
                std::vector<double> w, t;
                for (std::size_t i = 0; i < e.weights.size(); ++i) {
                    if (e.rates[i] == 0.0) continue;
                    w.push_back(e.weights[i] * e.rates[i]);
                    t.push_back(e.rates[i]);
                }
                if (w.empty()) return FunctionSpec::constant(0.0);
                return FunctionSpec::affine_of(FunctionSpec::exp_mixture(std::move(w), std::move(t)), -1.0, 0.0);
            },
            [](const BernsteinMixture& b) -> std::optional<FunctionSpec> {
                std::vector<double> w, t;
                if (b.linear > 0.0) {
                    w.push_back(b.linear);
                    t.push_back(0.0);
                }
                for (std::size_t i = 0; i < b.weights.size(); ++i) {
                    w.push_back(b.weights[i] * b.rates[i]);
                    t.push_back(b.rates[i]);
                }
                if (w.empty()) return FunctionSpec::constant(0.0);
                return FunctionSpec::exp_mixture(std::move(w), std::move(t));
            },
            [](const Power& p) -> std::optional<FunctionSpec> {
                if (p.exponent == 1.0) return FunctionSpec::constant(1.0);
                if (p.exponent < 1.0) return std::nullopt;
                return FunctionSpec::affine_of(FunctionSpec::power(p.exponent - 1.0), p.exponent, 0.0);
            },
            [](const AffineOf& a) -> std::optional<FunctionSpec> {
                auto inner = derivative_spec(*a.inner);
                if (!inner) return std::nullopt;
                return FunctionSpec::affine_of(std::move(*inner), a.scale * a.arg_scale, 0.0, a.arg_scale);
            },
            [](const SumOf& s) -> std::optional<FunctionSpec> {
                std::vector<FunctionSpec> terms;
                for (const auto& t : s.terms) {
                    auto d = derivative_spec(*t);
                    if (!d) return std::nullopt;
                    terms.push_back(std::move(*d));
                }
                return FunctionSpec::sum_of(std::move(terms));
            },
        },
        f.node());
}

double alternating_difference(const FunctionSpec& f, double x, std::span<const double> offsets) {
    const std::size_t n = offsets.size();
    if (n > kMaxDifferenceOrder)
        throw CapabilityError("difference_order_cap", "alternating_difference: more than " +
                                                          std::to_string(kMaxDifferenceOrder) + " offsets");
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double arg = x;
        for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1u) arg += offsets[j];
        const double v = eval(f, arg);
        acc += (__builtin_popcountll(mask) & 1) ? -v : v;
    }
    return acc;
}

std::string describe(const FunctionSpec& f) {
    return std::visit(
        overloaded{
            [](const Polynomial& p) { return "polynomial(coeffs=" + join(p.coeffs) + ")"; },
            [](const ExpMixture& e) {
                std::ostringstream os;
                os << "exp_mixture(w=" << join(e.weights) << ", t=" << join(e.rates) << ", c0=" << e.atom_at_zero
                   << ")";
                return os.str();
            },
            [](const BernsteinMixture& b) {
                std::ostringstream os;
                os << "bernstein_mixture(b=" << b.linear << ", w=" << join(b.weights) << ", t=" << join(b.rates)
                   << ")";
                return os.str();
            },
            [](const Power& p) {
                std::ostringstream os;
                os << "power(s=" << p.exponent << ")";
                return os.str();
            },
            [](const AffineOf& a) {
                std::ostringstream os;
                os << a.scale << "*" << describe(*a.inner) << "(" << a.arg_scale << "*x)+" << a.shift;
                return os.str();
            },
            [](const SumOf& s) {
                std::string out = "sum_of(";
                for (std::size_t i = 0; i < s.terms.size(); ++i) out += (i ? ", " : "") + describe(*s.terms[i]);
                return out + ")";
            },
        },
        f.node());
}

SampleGrid SampleGrid::defaults(bool include_zero) {
    SampleGrid g;
    for (int k = -3; k <= 6; ++k) g.base_points.push_back(std::ldexp(1.0, k) / 8.0);
    for (int k = -3; k <= 4; ++k) g.offsets.push_back(std::ldexp(1.0, k) / 8.0);
    g.include_zero = include_zero;
    return g;
}

std::string to_string(MonotoneWitness::Kind kind) {
    switch (kind) {
        case MonotoneWitness::Kind::value_at_zero: return "value_at_zero";
        case MonotoneWitness::Kind::right_limit_at_zero: return "right_limit_at_zero";
        case MonotoneWitness::Kind::negative_value: return "negative_value";
        case MonotoneWitness::Kind::derivative_sign: return "derivative_sign";
        case MonotoneWitness::Kind::alternating_difference: return "alternating_difference";
    }
    return "unknown";
}

double reevaluate(const FunctionSpec& f, const MonotoneWitness& w) {
    switch (w.kind) {
        case MonotoneWitness::Kind::value_at_zero:
        case MonotoneWitness::Kind::negative_value: return eval(f, w.base_point);
        case MonotoneWitness::Kind::right_limit_at_zero: return eval(f, 0.0) - right_limit_at_zero(f);
        case MonotoneWitness::Kind::derivative_sign:
            return (w.order % 2 ? -1.0 : 1.0) * derivative(f, w.order, w.base_point);
        case MonotoneWitness::Kind::alternating_difference: return alternating_difference(f, w.base_point, w.offsets);
    }
    return 0.0;
}

namespace {

void validate_grid(const SampleGrid& grid, int max_order) {
    if (max_order < 0 || max_order > kMaxTesterOrder)
        throw InputError("monotone tester: max_order must lie in [0, " + std::to_string(kMaxTesterOrder) + "]");
    for (double x : grid.base_points)
        if (!std::isfinite(x) || !(x > 0.0)) throw InputError("monotone tester: base points must be positive");
    for (double a : grid.offsets)
        if (!std::isfinite(a) || a < 0.0) throw InputError("monotone tester: offsets must be nonnegative");
}

// Calls visit(offsets) for every nondecreasing index tuple of length n; the
// alternating difference is symmetric in its offsets so multisets suffice.
// Stops early when visit returns true.
template <class Visit>
bool for_each_offset_multiset(const std::vector<double>& pool, int n, Visit&& visit) {
    if (pool.empty()) return false;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> offsets(static_cast<std::size_t>(n));
    while (true) {
        for (int i = 0; i < n; ++i) offsets[static_cast<std::size_t>(i)] = pool[idx[static_cast<std::size_t>(i)]];
        if (visit(std::span<const double>(offsets))) return true;
        int pos = n - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] + 1 == pool.size()) --pos;
        if (pos < 0) return false;
        const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
        for (int i = pos; i < n; ++i) idx[static_cast<std::size_t>(i)] = next;
    }
}

double max_abs_on_support(const FunctionSpec& f, double x, std::span<const double> offsets) {
    double total = x;
    for (double a : offsets) total += a;
    return std::max({std::abs(eval(f, x)), std::abs(eval(f, total)), std::abs(eval(f, 0.5 * (x + total)))});
}

MonotoneVerdict violation(MonotoneWitness w) {
    MonotoneVerdict v;
    v.holds = false;
    v.witness = std::move(w);
    return v;
}

}  // namespace

MonotoneVerdict cm_test(const FunctionSpec& f, const SampleGrid& grid, int max_order) {
    validate_grid(grid, max_order);
    using Kind = MonotoneWitness::Kind;

    std::vector<double> points = grid.base_points;
    if (grid.include_zero) points.insert(points.begin(), 0.0);

    for (double x : points) {
        const double v = eval(f, x);
        const double tol = 1e-9 * (1.0 + std::abs(v));
        if (v < -tol) return violation({Kind::negative_value, 0, {}, x, v, tol});
    }

    const double f0 = eval(f, 0.0);
    const double lim = right_limit_at_zero(f);
    const double lim_tol = 1e-9 * (1.0 + std::abs(lim));
    if (f0 - lim < -lim_tol) return violation({Kind::right_limit_at_zero, 0, {}, 0.0, f0 - lim, lim_tol});

    const int deriv_max = std::min(max_order, 6);
    for (int k = 1; k <= deriv_max; ++k) {
        for (double x : grid.base_points) {
            const double v = (k % 2 ? -1.0 : 1.0) * derivative(f, k, x);
            const double tol = 1e-9 * (1.0 + std::abs(v));
            if (v < -tol) return violation({Kind::derivative_sign, k, {}, x, v, tol});
        }
    }

    for (int n = 1; n <= max_order; ++n) {
        for (double x : points) {
            const double tol = 1e-9 * (1.0 + std::abs(eval(f, x)));
            std::optional<MonotoneWitness> found;
            for_each_offset_multiset(grid.offsets, n, [&](std::span<const double> offsets) {
                const double v = alternating_difference(f, x, offsets);
                if (v < -tol) {
                    found = MonotoneWitness{Kind::alternating_difference, n, {offsets.begin(), offsets.end()}, x, v, tol};
                    return true;
                }
                return false;
            });
            if (found) return violation(std::move(*found));
        }
    }
    return {};
}

MonotoneVerdict bernstein_test(const FunctionSpec& f, const SampleGrid& grid, int max_order) {
    validate_grid(grid, max_order);
    using Kind = MonotoneWitness::Kind;

    const double f0 = eval(f, 0.0);
    if (std::abs(f0) > 1e-12) return violation({Kind::value_at_zero, 0, {}, 0.0, f0, 1e-12});

    std::vector<double> points = grid.base_points;
    if (grid.include_zero) points.insert(points.begin(), 0.0);

    for (double x : points) {
        const double v = eval(f, x);
        if (v < -1e-12) return violation({Kind::negative_value, 0, {}, x, v, 1e-12});
    }

    const int deriv_max = std::min(max_order, 6);
    for (int k = 1; k <= deriv_max; ++k) {
        for (double x : grid.base_points) {
            const double v = (k % 2 ? -1.0 : 1.0) * derivative(f, k, x);
            const double tol = 1e-9 * (1.0 + std::abs(v));
            if (v > tol) return violation({Kind::derivative_sign, k, {}, x, v, tol});
        }
    }

    for (int n = 1; n <= max_order; ++n) {
        for (double x : points) {
            std::optional<MonotoneWitness> found;
            for_each_offset_multiset(grid.offsets, n, [&](std::span<const double> offsets) {
                const double v = alternating_difference(f, x, offsets);
                const double tol = 1e-9 * (1.0 + max_abs_on_support(f, x, offsets));
                if (v > tol) {
                    found = MonotoneWitness{Kind::alternating_difference, n, {offsets.begin(), offsets.end()}, x, v, tol};
                    return true;
                }
                return false;
            });
            if (found) return violation(std::move(*found));
        }
    }
    return {};
}

}  // namespace hyperspec
