#pragma once

// Closed catalog of analytic functions on [0, inf) with exact derivatives, and
// sampled testers for complete monotonicity and the Bernstein property based
// on alternating finite differences.
//
// The testers are samplers, not decision procedures: a reported violation is
// a genuine counterexample (re-evaluable from the witness), while `holds`
// only means no violation was found on the grid.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hyperspec {

class FunctionSpec;
using FunctionPtr = std::shared_ptr<const FunctionSpec>;

/// c[0] + c[1] x + c[2] x^2 + ...
struct Polynomial {
    std::vector<double> coeffs;
};

/// sum_i w_i exp(-t_i x) for x > 0, plus an atom c0 >= 0 added at x = 0 only.
struct ExpMixture {
    std::vector<double> weights;
    std::vector<double> rates;
    double atom_at_zero = 0.0;
};

/// b x + sum_i w_i (1 - exp(-t_i x)).
struct BernsteinMixture {
    double linear = 0.0;
    std::vector<double> weights;
    std::vector<double> rates;
};

/// x^s, s > 0.
struct Power {
    double exponent = 1.0;
};

/// scale * inner(arg_scale * x) + shift.
struct AffineOf {
    FunctionPtr inner;
    double scale = 1.0;
    double shift = 0.0;
    double arg_scale = 1.0;
};

struct SumOf {
    std::vector<FunctionPtr> terms;
};

enum class FunctionKind { polynomial, exp_mixture, bernstein_mixture, power, affine_of, sum_of };

std::string to_string(FunctionKind kind);

/// Immutable function description. Factories validate parameters and throw
/// InputError on anything non-finite or out of range.
class FunctionSpec {
public:
    using Node = std::variant<Polynomial, ExpMixture, BernsteinMixture, Power, AffineOf, SumOf>;

    static FunctionSpec polynomial(std::vector<double> coeffs);
    static FunctionSpec exp_mixture(std::vector<double> weights, std::vector<double> rates,
                                    double atom_at_zero = 0.0);
    static FunctionSpec bernstein_mixture(double linear, std::vector<double> weights,
                                          std::vector<double> rates);
    static FunctionSpec power(double exponent);
    static FunctionSpec affine_of(FunctionSpec inner, double scale, double shift, double arg_scale = 1.0);
    static FunctionSpec sum_of(std::vector<FunctionSpec> terms);

    static FunctionSpec identity() { return polynomial({0.0, 1.0}); }
    static FunctionSpec constant(double c) { return polynomial({c}); }

    FunctionKind kind() const noexcept { return static_cast<FunctionKind>(node_.index()); }
    const Node& node() const noexcept { return node_; }

private:
    explicit FunctionSpec(Node node) : node_(std::move(node)) {}
    Node node_;
};

inline constexpr int kMaxDerivativeOrder = 12;
inline constexpr int kMaxTesterOrder = 10;
inline constexpr int kDefaultTesterOrder = 6;
inline constexpr std::size_t kMaxDifferenceOrder = 20;

/// f(x) for x >= 0. Throws InputError for negative or non-finite x.
double eval(const FunctionSpec& f, double x);

/// Like eval, but polynomial-only specs also accept negative x.
double eval_on_real_line(const FunctionSpec& f, double x);

/// eval_on_real_line carried out in long double.
long double eval_extended(const FunctionSpec& f, long double x);

/// lim_{x -> 0+} f(x); differs from f(0) only through exp_mixture atoms.
double right_limit_at_zero(const FunctionSpec& f);

/// Exact k-th derivative at x > 0. k = 0 returns eval(f, x).
/// Throws CapabilityError for k > kMaxDerivativeOrder.
double derivative(const FunctionSpec& f, int k, double x);

/// Degree when f is a polynomial expression (polynomials under affine_of and
/// sum_of), otherwise nullopt. Trailing zero coefficients are ignored.
std::optional<int> polynomial_degree(const FunctionSpec& f);

/// True when every derivative is continuous on [0, inf): no atom at zero and
/// no non-integer power.
bool is_smooth_at_zero(const FunctionSpec& f);

/// Closed-form f' as a catalog member on (0, inf), when one exists.
std::optional<FunctionSpec> derivative_spec(const FunctionSpec& f);

/// sum over subsets S of offsets of (-1)^|S| f(x + sum_S offsets). This is
/// (-1)^n (D_{a_1} ... D_{a_n} f)(x) with (D_a f)(x) = f(x + a) - f(x).
double alternating_difference(const FunctionSpec& f, double x, std::span<const double> offsets);

std::string describe(const FunctionSpec& f);

struct SampleGrid {
    std::vector<double> base_points;  // > 0
    std::vector<double> offsets;      // >= 0
    bool include_zero = false;        // also sample x = 0

    /// Base points {2^k/8 : k = -3..6}, offsets {2^k/8 : k = -3..4}.
    static SampleGrid defaults(bool include_zero);
    static SampleGrid cm_defaults() { return defaults(false); }
    static SampleGrid bernstein_defaults() { return defaults(true); }
};

struct MonotoneWitness {
    enum class Kind {
        value_at_zero,          // Bernstein: f(0) != 0
        right_limit_at_zero,    // CM: f(0) < lim_{x->0+} f(x)
        negative_value,         // f(x) < 0
        derivative_sign,        // (-1)^k f^(k)(x) has the wrong sign
        alternating_difference  // (-1)^n prod D_{a_i} f(x) has the wrong sign
    };
    Kind kind = Kind::alternating_difference;
    int order = 0;
    std::vector<double> offsets;
    double base_point = 0.0;
    double value = 0.0;  // the signed quantity that violated the criterion
    double tolerance = 0.0;
};

std::string to_string(MonotoneWitness::Kind kind);

struct MonotoneVerdict {
    bool holds = true;
    std::optional<MonotoneWitness> witness;
};

/// Recomputes the quantity recorded in `w` from scratch.
double reevaluate(const FunctionSpec& f, const MonotoneWitness& w);

/// Samples (-1)^n (prod D_{a_i} f)(x) >= 0 for n <= max_order, plus the
/// derivative signs (-1)^k f^(k)(x) >= 0 for k <= min(max_order, 6),
/// nonnegativity, and f(0) >= lim_{x->0+} f(x).
MonotoneVerdict cm_test(const FunctionSpec& f, const SampleGrid& grid = SampleGrid::cm_defaults(),
                        int max_order = kDefaultTesterOrder);

/// Samples f(0) = 0, f >= 0, (-1)^k f^(k)(x) <= 0 for 1 <= k <= min(max_order, 6)
/// and (-1)^n (prod D_{a_i} f)(x) <= 0 for 1 <= n <= max_order.
MonotoneVerdict bernstein_test(const FunctionSpec& f, const SampleGrid& grid = SampleGrid::bernstein_defaults(),
                               int max_order = kDefaultTesterOrder);

}  // namespace hyperspec
