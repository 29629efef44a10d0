#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hyperspec/errors.hpp"
#include "hyperspec/function_json.hpp"
#include "hyperspec/hyperrect_spectrum.hpp"
#include "hyperspec/l1_embeddings.hpp"
#include "hyperspec/manhattan_kernels.hpp"
#include "hyperspec/point_io.hpp"
#include "hyperspec/rank_lab.hpp"

#ifndef HYPERSPEC_VERSION
#define HYPERSPEC_VERSION "0.0.0"
#endif

namespace hyperspec::cli {

namespace {

using nlohmann::json;

inline constexpr std::size_t kMaxTransformInput = 20;  // n * m

struct Config {
    std::vector<double> sides;
    std::string fn;
    std::string points;
    std::uint64_t seed = 0;
    unsigned trials = 20;
    unsigned d = 4;
    std::size_t n = 64;
    double eps = 1e-3;
    std::optional<double> tol;
    std::string out;
    std::string variant = "xor";
    std::string method = "fwht";
    unsigned rank = 2;
    unsigned degree = 2;
    unsigned samples = 200;
    int max_order = kDefaultTesterOrder;
    std::optional<std::uint64_t> chi;
};

struct Outcome {
    int code = kExitOk;
    std::string tag;
    json config = json::object();
    json tolerances = json::object();
    json result = json::object();
};

class Refuted : public std::runtime_error {
public:
    Refuted(std::string tag, json config, json result)
        : std::runtime_error("refuted"), tag_(std::move(tag)), config_(std::move(config)), result_(std::move(result)) {}
    std::string tag_;
    json config_;
    json result_;
};

FunctionSpec load_function(const std::string& text) {
    if (text.empty()) throw InputError("--fn is required");
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_function(text);
    return parse_function(read_text_file(text));
}

json witness_json(const MonotoneWitness& w) {
    return {{"kind", to_string(w.kind)}, {"order", w.order},       {"offsets", w.offsets},
            {"base_point", w.base_point}, {"value", w.value},       {"tolerance", w.tolerance}};
}

json verdict_json(const FunctionSpec& f, const MonotoneVerdict& v) {
    json out = {{"holds", v.holds}};
    if (v.witness) {
        out["witness"] = witness_json(*v.witness);
        out["witness"]["reevaluated"] = reevaluate(f, *v.witness);
    }
    return out;
}

SymMatrix transformed_distances(const PointSet& x, const FunctionSpec& f) {
    const Matrix d = x.pairwise();
    Matrix out(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) out(i, j) = eval(f, d(i, j));
    return SymMatrix(std::move(out));
}

Outcome cmd_spectrum(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    const Hyperrectangle r(c.sides);
    SpectrumResult s;
    if (c.method == "fwht") {
        s = spectrum(r, f);
    } else if (c.method == "subset_sum") {
        s = spectrum_by_subset_sums(r, f);
    } else if (c.method == "dense") {
        s = dense_spectrum(r, f);
    } else {
        throw InputError("--method must be fwht, subset_sum or dense");
    }
    Outcome o;
    o.tag = "hadamard-eigenvalue-formula";
    o.config = {{"sides", c.sides}, {"fn", to_json(f)}, {"method", c.method}};
    o.result = {{"d", s.d},
                {"method", to_string(s.method)},
                {"indexing", s.method == SpectrumMethod::dense_oracle ? "ascending" : "character"},
                {"eigenvalues", s.eigenvalues},
                {"min", *std::min_element(s.eigenvalues.begin(), s.eigenvalues.end())},
                {"max", *std::max_element(s.eigenvalues.begin(), s.eigenvalues.end())}};
    return o;
}

Outcome cmd_diagcheck(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    const auto chk = diagonalization_check(Hyperrectangle(c.sides), f);
    Outcome o;
    o.tag = "hadamard-diagonalization";
    o.config = {{"sides", c.sides}, {"fn", to_json(f)}};
    o.tolerances = {{"offdiag", chk.offdiag_tolerance}, {"reconstruction", chk.reconstruction_tolerance}};
    o.result = {{"max_offdiag", chk.max_offdiag},
                {"reconstruction_error", chk.reconstruction_error},
                {"diagonal", chk.diagonal},
                {"passed", chk.passed()}};
    o.code = chk.passed() ? kExitOk : kExitRefuted;
    return o;
}

Outcome cmd_check(const Config& c, bool bernstein) {
    const FunctionSpec f = load_function(c.fn);
    const SampleGrid grid = bernstein ? SampleGrid::bernstein_defaults() : SampleGrid::cm_defaults();
    const MonotoneVerdict v = bernstein ? bernstein_test(f, grid, c.max_order) : cm_test(f, grid, c.max_order);
    Outcome o;
    o.tag = bernstein ? "bernstein-finite-differences" : "completely-monotone-finite-differences";
    o.config = {{"fn", to_json(f)},
                {"max_order", c.max_order},
                {"grid", {{"base_points", grid.base_points}, {"offsets", grid.offsets}, {"include_zero", grid.include_zero}}}};
    if (bernstein) {
        o.tolerances = {{"value_at_zero", 1e-12}, {"negative_value", 1e-12}, {"difference_relative", 1e-9}};
    } else {
        o.tolerances = {{"relative", 1e-9}};
    }
    o.result = verdict_json(f, v);
    o.code = v.holds ? kExitOk : kExitRefuted;
    return o;
}

Outcome cmd_embed_cube(const Config& c) {
    const PointSet x = read_points(c.points);
    const CubeEmbedding cube = cut_embedding(x);
    const Matrix orig = x.pairwise();
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            worst = std::max(worst, std::abs(cube.distance(i, j) - orig(i, j)) / std::max(1.0, orig(i, j)));
    json bits = json::array();
    for (std::size_t i = 0; i < cube.n; ++i) {
        std::vector<int> row(cube.dimension());
        for (std::size_t t = 0; t < cube.dimension(); ++t) row[t] = cube.bit(i, t);
        bits.push_back(row);
    }
    Outcome o;
    o.tag = "cut-cone-embedding";
    o.config = {{"points", c.points}, {"n", x.size()}, {"m", x.dimension()}, {"metric", to_string(x.metric())}};
    o.result = {{"dimension", cube.dimension()},
                {"sides", cube.sides},
                {"bits", bits},
                {"max_relative_distance_error", worst}};
    return o;
}

Outcome cmd_transform(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    const PointSet x = read_points(c.points);
    if (x.size() * x.dimension() > kMaxTransformInput)
        throw CapabilityError("transform_size_cap", "transform: n*m = " + std::to_string(x.size() * x.dimension()) +
                                                        " exceeds " + std::to_string(kMaxTransformInput) +
                                                        " (output width grows like 2^(n*m))");
    json config = {{"points", c.points}, {"fn", to_json(f)}, {"n", x.size()}, {"m", x.dimension()}};
    try {
        const PointSet q = manhattan_transform(x, f);
        const Matrix din = x.pairwise();
        const Matrix dout = q.pairwise();
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                const double want = eval(f, din(i, j));
                worst = std::max(worst, std::abs(dout(i, j) - want) / std::max(std::abs(want), 1e-300));
            }
        Outcome o;
        o.tag = "bernstein-manhattan-transform";
        o.config = config;
        o.tolerances = {{"negative_mu_relative", 1e-9}, {"axis_drop_relative", 1e-24}};
        o.result = {{"output_dimension", q.dimension()},
                    {"points", points_to_json(q)},
                    {"max_relative_distance_error", worst}};
        return o;
    } catch (const BernsteinPreconditionError& e) {
        throw Refuted("bernstein-manhattan-transform", config,
                      {{"reason", "not_bernstein"}, {"message", e.what()}, {"witness", witness_json(e.witness())}});
    } catch (const NegativeTypeViolation& e) {
        throw Refuted("bernstein-manhattan-transform", config,
                      {{"reason", "negative_type_violation"},
                       {"message", e.what()},
                       {"chi", e.chi()},
                       {"cube_dimension", e.dimension()},
                       {"mu", e.mu()},
                       {"tolerance", e.tolerance()}});
    }
}

Outcome cmd_negtype(const Config& c) {
    const FunctionSpec f = c.fn.empty() ? FunctionSpec::identity() : load_function(c.fn);
    Outcome o;
    o.tag = "negative-type-test";
    std::optional<PointSet> x;
    if (!c.points.empty()) {
        x.emplace(read_points(c.points));
        o.config = {{"points", c.points}, {"metric", to_string(x->metric())}};
    } else if (!c.sides.empty()) {
        x.emplace(vertices(Hyperrectangle(c.sides)), Metric::l1);
        o.config = {{"sides", c.sides}};
    } else {
        throw InputError("negtype needs --points or --sides");
    }
    o.config["fn"] = to_json(f);
    const NegativeTypeVerdict v = negative_type_test(transformed_distances(*x, f));
    o.tolerances = {{"max_projected_eigenvalue", v.tolerance}};
    o.result = {{"holds", v.holds}, {"max_projected_eigenvalue", v.max_projected_eigenvalue}};
    if (!v.holds) o.result["witness"] = v.witness;
    o.code = v.holds ? kExitOk : kExitRefuted;
    return o;
}

Outcome cmd_kernel_psd(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    const PointSet x = read_points(c.points);
    const SymMatrix k = kernel_matrix(x, f);
    const PsdVerdict v = psd_verdict(k, c.tol);
    Outcome o;
    o.tag = "manhattan-kernel-psd";
    o.config = {{"points", c.points}, {"fn", to_json(f)}, {"n", x.size()}, {"m", x.dimension()}};
    o.tolerances = {{"min_eigenvalue", v.tolerance}};
    o.result = {{"is_psd", v.is_psd}, {"min_eigenvalue", v.min_eigenvalue}, {"witness_direction", v.witness}};
    o.code = v.is_psd ? kExitOk : kExitRefuted;
    return o;
}

Outcome cmd_kernel_witness(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    const auto w = cm_witness_search(f, c.d, c.samples, c.seed);
    Outcome o;
    o.tag = "kernel-witness-search";
    o.config = {{"fn", to_json(f)}, {"d_max", c.d}, {"samples", c.samples}, {"side_range", {1e-2, 1e2}}};
    o.tolerances = {{"lambda_relative", 1e-9}};
    o.result = {{"found", w.has_value()}};
    if (w) {
        o.result["witness"] = {{"d", w->d},
                               {"sample", w->sample},
                               {"sides", w->sides},
                               {"chi", w->chi},
                               {"lambda", w->lambda},
                               {"tolerance", w->tolerance},
                               {"rayleigh_quotient", w->rayleigh_quotient},
                               {"points", points_to_json(w->points)}};
        if (w->dense_min_eigenvalue) o.result["witness"]["dense_min_eigenvalue"] = *w->dense_min_eigenvalue;
        o.code = kExitRefuted;
    }
    return o;
}

Outcome cmd_rank_bound(const Config& c, bool run_trials) {
    Outcome o;
    o.tag = "polynomial-method-rank-bound";
    o.config = {{"rank", c.rank}, {"degree", c.degree}};
    o.result = {{"bound", poly_rank_bound(c.rank, c.degree).str()},
                {"monomial_bound", monomial_rank_bound(c.rank, c.degree).str()}};
    if (run_trials) {
        const PolyBoundReport rep = polynomial_bound_experiment(c.trials, c.seed);
        o.config["trials"] = c.trials;
        o.config["experiment"] = {{"r_max", 5}, {"n_max", 64}, {"degree_max", 6}};
        o.tolerances = {{"rank_relative", kDefaultRankTolerance}};
        json trials = json::array();
        for (const auto& t : rep.per_trial)
            trials.push_back({{"r", t.r},
                              {"n", t.n},
                              {"degree", t.degree},
                              {"coeffs", t.coeffs},
                              {"rank", t.rank},
                              {"bound", t.bound.str()},
                              {"monomial_bound", t.monomial_bound.str()},
                              {"within_bound", t.within_bound}});
        o.result["experiment"] = {
            {"violations", rep.violations}, {"monomial_violations", rep.monomial_violations}, {"trials", trials}};
        o.code = rep.violations == 0 ? kExitOk : kExitRefuted;
    }
    return o;
}

Outcome cmd_rank_experiment(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    const WalshVariant variant = walsh_variant_from_string(c.variant);
    const double rel_tol = c.tol.value_or(kDefaultRankTolerance);
    const RankExperimentReport rep = converse_experiment(f, c.n, c.trials, c.seed, variant, rel_tol);
    const ZeroScanReport scan = zero_eigenvalue_scan(f, rep.d, c.samples, c.seed);

    Outcome o;
    o.tag = "entrywise-rank-converse";
    o.config = {{"fn", to_json(f)}, {"n", c.n},         {"trials", c.trials},
                {"variant", c.variant}, {"samples", c.samples}, {"side_range", {0.5, 2.0}}};
    o.tolerances = {{"rank_relative", rel_tol}, {"zero_eigenvalue_relative", scan.threshold}};
    json trials = json::array();
    for (const auto& t : rep.per_trial)
        trials.push_back({{"a", t.a},
                          {"rank_base", t.rank_base},
                          {"rank_transformed", t.rank_transformed},
                          {"hadamard_residual", t.hadamard_residual}});
    o.result = {{"d", rep.d},
                {"max_rank_base", rep.max_rank_base},
                {"max_rank_transformed", rep.max_rank_transformed},
                {"full_rank_fraction", rep.full_rank_fraction},
                {"max_hadamard_residual", rep.max_hadamard_residual},
                {"trials", trials}};
    if (rep.degree) {
        o.result["degree"] = *rep.degree;
        o.result["bound_from_fact"] = rep.bound_from_fact->str();
        o.result["bound_respected"] = *rep.bound_respected;
        if (!*rep.bound_respected) o.code = kExitRefuted;
    }
    json zero = {{"flagged", scan.flagged}, {"evidence", scan.evidence}};
    zero["index_identically_zero"] =
        scan.index_identically_zero ? json(*scan.index_identically_zero) : json(nullptr);
    o.result["zero_eigenvalue_scan"] = zero;
    return o;
}

Outcome cmd_diff_limit(const Config& c) {
    const FunctionSpec f = load_function(c.fn);
    if (c.sides.empty()) throw InputError("diff-limit needs --sides (the base vector a)");
    const auto d = static_cast<int>(c.sides.size());
    double s = 0.0;
    for (double x : c.sides) s += x;

    Outcome o;
    o.tag = "dth-difference-limit";
    o.config = {{"fn", to_json(f)}, {"a", c.sides}, {"eps", c.eps}};
    o.result = {{"d", d}, {"dth_difference", dth_difference(f, c.sides, c.eps)}, {"point", s}};
    if (s > 0.0 && d <= kMaxDerivativeOrder) {
        const double exact = derivative(f, d, s);
        o.result["derivative"] = exact;
        o.result["abs_error"] = std::abs(o.result["dth_difference"].get<double>() - exact);
    }
    if (c.chi) {
        const IdentityCheck chk = eigsum_identity_check(f, c.sides, c.eps, *c.chi);
        o.config["chi"] = *c.chi;
        o.tolerances = {{"eigsum", chk.tolerance}};
        o.result["eigsum"] = {{"lhs", chk.lhs}, {"rhs", chk.rhs}, {"scale", chk.scale}, {"holds", chk.holds()}};
        if (!chk.holds()) o.code = kExitRefuted;
    }
    return o;
}

json envelope(const std::string& command, const std::string& tag, const Config& c, json config, json tolerances,
              json result, const char* status) {
    config["seed"] = c.seed;
    return {{"schema", "hyperspec/1"},
            {"tool", "hyperspec"},
            {"version", HYPERSPEC_VERSION},
            {"command", command},
            {"result_tag", tag},
            {"config", std::move(config)},
            {"tolerances", std::move(tolerances)},
            {"result", std::move(result)},
            {"status", status}};
}

int emit(const json& report, const Config& c, std::ostream& out, std::ostream& err) {
    const std::string text = report.dump(2) + "\n";
    if (c.out.empty()) {
        out << text;
        return 0;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        err << "hyperspec: cannot write '" << c.out << "'\n";
        return 1;
    }
    f << text;
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Hadamard spectra of hyperrectangle distance matrices, Manhattan transforms and kernels",
                 "hyperspec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", HYPERSPEC_VERSION);

    auto add_fn = [&](CLI::App* s, bool required = true) {
        auto* o = s->add_option("--fn", c.fn, "function spec: inline JSON object or path to a JSON file");
        if (required) o->required();
    };
    auto add_sides = [&](CLI::App* s, bool required = true) {
        auto* o = s->add_option("--sides", c.sides, "comma-separated side lengths")->delimiter(',');
        if (required) o->required();
    };
    auto add_points = [&](CLI::App* s, bool required = true) {
        auto* o = s->add_option("--points", c.points, "point set (CSV or JSON; sidecar <path>.meta.json)");
        if (required) o->required();
    };
    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", c.out, "write the JSON report here instead of stdout");
        s->add_option("--seed", c.seed, "64-bit seed");
    };

    std::map<std::string, std::function<Outcome()>> handlers;
    auto sub = [&](const std::string& name, const std::string& desc, std::function<Outcome()> h) {
        auto* s = app.add_subcommand(name, desc);
        add_common(s);
        handlers[name] = std::move(h);
        return s;
    };

    auto* sp = sub("spectrum", "eigenvalues lambda_chi of a hyperrectangle distance matrix",
                   [&] { return cmd_spectrum(c); });
    add_sides(sp);
    add_fn(sp);
    sp->add_option("--method", c.method, "fwht | subset_sum | dense");

    auto* dc = sub("diagcheck", "check that H D H is diagonal", [&] { return cmd_diagcheck(c); });
    add_sides(dc);
    add_fn(dc);

    auto* cm = sub("check-cm", "sampled complete-monotonicity test", [&] { return cmd_check(c, false); });
    add_fn(cm);
    cm->add_option("--max-order", c.max_order, "highest difference order (<= 10)");

    auto* bt = sub("check-bernstein", "sampled Bernstein-function test", [&] { return cmd_check(c, true); });
    add_fn(bt);
    bt->add_option("--max-order", c.max_order, "highest difference order (<= 10)");

    auto* ec = sub("embed-cube", "embed an l1 point set on weighted hypercube corners",
                   [&] { return cmd_embed_cube(c); });
    add_points(ec);

    auto* tr = sub("transform", "Manhattan-to-Manhattan transform by a Bernstein function",
                   [&] { return cmd_transform(c); });
    add_points(tr);
    add_fn(tr);

    auto* nt = sub("negtype", "negative-type test of f(distances)", [&] { return cmd_negtype(c); });
    add_points(nt, false);
    add_sides(nt, false);
    add_fn(nt, false);

    auto* kp = sub("kernel-psd", "is the Manhattan kernel matrix PSD on a point set",
                   [&] { return cmd_kernel_psd(c); });
    add_points(kp);
    add_fn(kp);
    kp->add_option("--tol", c.tol, "absolute eigenvalue tolerance");

    auto* kw = sub("kernel-witness", "search hyperrectangles for a non-PSD kernel matrix",
                   [&] { return cmd_kernel_witness(c); });
    add_fn(kw);
    kw->add_option("--d", c.d, "largest dimension searched (<= 10)");
    kw->add_option("--samples", c.samples, "boxes per dimension");

    bool run_trials = false;
    auto* rb = sub("rank-bound", "polynomial-method rank bound", [&] { return cmd_rank_bound(c, run_trials); });
    rb->add_option("--rank", c.rank, "rank r of the input matrix");
    rb->add_option("--degree", c.degree, "polynomial degree");
    rb->add_option("--trials", c.trials, "also run this many random low-rank trials")->each([&](const std::string&) {
        run_trials = true;
    });

    auto* re = sub("rank-experiment", "rank of f applied entrywise to the M(a) family",
                   [&] { return cmd_rank_experiment(c); });
    add_fn(re);
    re->add_option("--n", c.n, "matrix size, a power of two <= 256");
    re->add_option("--trials", c.trials, "number of random side vectors");
    re->add_option("--variant", c.variant, "xor | abs_diff");
    re->add_option("--tol", c.tol, "relative rank tolerance");
    re->add_option("--samples", c.samples, "samples for the zero-eigenvalue scan");

    auto* dl = sub("diff-limit", "d-th finite difference against the exact derivative",
                   [&] { return cmd_diff_limit(c); });
    add_fn(dl);
    add_sides(dl);
    dl->add_option("--eps", c.eps, "step size");
    dl->add_option("--chi", c.chi, "also check the eigenvalue-sum identity for this character");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    json report;
    int code = kExitOk;
    try {
        Outcome o = handlers.at(command)();
        code = o.code;
        report = envelope(command, o.tag, c, std::move(o.config), std::move(o.tolerances), std::move(o.result),
                          code == kExitOk ? "ok" : "refuted");
    } catch (const Refuted& r) {
        code = kExitRefuted;
        report = envelope(command, r.tag_, c, r.config_, json::object(), r.result_, "refuted");
    } catch (const std::exception& e) {
        json error = {{"message", e.what()}};
        if (auto* p = dynamic_cast<const ParseError*>(&e)) {
            error["type"] = "parse";
            error["line"] = p->line();
            error["column"] = p->column();
        } else if (auto* fe = dynamic_cast<const FunctionSpecError*>(&e)) {
            error["type"] = "function_spec";
            error["code"] = fe->code();
        } else if (auto* ce = dynamic_cast<const CapabilityError*>(&e)) {
            error["type"] = "capability";
            error["limit"] = ce->limit();
        } else if (dynamic_cast<const InputError*>(&e)) {
            error["type"] = "input";
        } else {
            error["type"] = "internal";
        }
        err << "hyperspec " << command << ": " << e.what() << "\n";
        code = kExitError;
        report = envelope(command, "", c, json::object(), json::object(), {{"error", error}}, "error");
    }
    if (emit(report, c, out, err) != 0) return kExitError;
    return code;
}

}  // namespace hyperspec::cli
