// Command-line front end: parse curve/family specs, run the pipeline, emit
// exact results as text, JSON or CSV.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectral/invariants.hpp"
#include "spectral/io.hpp"

using namespace spectral;

namespace {

struct Options {
    std::string spec_path;
    std::string format = "text";
    std::string family_param;
    int g = 0, n = 1;
    int order = 0;   // 0: from spec
    int kmax = -1;   // -1: smallest cap covering (g,n)
    std::string basis = "flat";
    int workers = 1;  // accepted for interface compatibility; the schedule is
                      // single-threaded and deterministic for any value
};

CurveSpec load_spec(const Options& opt) {
    SpecFile f = SpecFile::load(opt.spec_path);
    if (!opt.family_param.empty()) f.kv["c0"] = {opt.family_param};
    CurveSpec s = CurveSpec::from(f);
    if (opt.order > 0) s.order = opt.order;
    return s;
}

std::string key_of(const std::vector<BIdx>& t) {
    std::string k;
    for (const BIdx& s : t)
        k += "(" + std::to_string(s.i) + "," + std::to_string(s.k) + ")";
    return k.empty() ? "()" : k;
}

json mat_json(const TowerCtx& ctx, const Mat<Scalar>& m) {
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const Scalar& v : row) r.push_back(scalar_json(ctx, v));
        out.push_back(std::move(r));
    }
    return out;
}

json conventions_json() {
    return json{{"type1_weight", "x-over-lead"},
                {"kernel_denominator", "omega01(p) - omega01(sigma p)"},
                {"v_basis", "V_{k+1} = d(V_k/dx)"},
                {"sqrt_branch", "tower-canonical"},
                {"string_sign", "unit insertion equals minus the k-lowering sum"}};
}

void emit(const Options& opt, const json& doc) {
    if (opt.format == "json") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    if (opt.format == "csv") {
        std::function<void(const std::string&, const json&)> walk =
            [&](const std::string& prefix, const json& v) {
                if (v.is_object()) {
                    for (auto& [k, sub] : v.items())
                        walk(prefix.empty() ? k : prefix + "." + k, sub);
                } else if (v.is_array()) {
                    for (std::size_t i = 0; i < v.size(); ++i)
                        walk(prefix + "[" + std::to_string(i) + "]", v[i]);
                } else {
                    std::cout << prefix << ","
                              << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
                }
            };
        walk("", doc);
        return;
    }
    std::function<void(const std::string&, const json&, int)> walk =
        [&](const std::string& name, const json& v, int indent) {
            std::string pad(std::size_t(indent), ' ');
            if (v.is_object()) {
                if (!name.empty()) std::cout << pad << name << ":\n";
                for (auto& [k, sub] : v.items()) walk(k, sub, indent + (name.empty() ? 0 : 2));
            } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
                std::cout << pad << name << ":\n";
                for (std::size_t i = 0; i < v.size(); ++i)
                    walk("[" + std::to_string(i) + "]", v[i], indent + 2);
            } else {
                std::cout << pad << name << " = "
                          << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        };
    walk("", doc, 0);
}

struct Pipeline {
    TowerCtx ctx;
    CurveSpec spec;
    Curve<Scalar> curve;

    explicit Pipeline(const CurveSpec& s, int min_order = 0)
        : spec(s),
          curve(Curve<Scalar>::analyze(s.base_x(), s.base_dy(),
                                       std::max(s.order, min_order), ctx)) {}
};

json table_json(const TowerCtx& ctx, const std::map<std::vector<BIdx>, Scalar>& c) {
    json out = json::object();
    for (const auto& [t, v] : c) out[key_of(t)] = scalar_json(ctx, v);
    return out;
}

int basis_of(const std::string& s, InvBasis& out) {
    if (s == "flat") out = InvBasis::flat;
    else if (s == "dual") out = InvBasis::dual;
    else if (s == "canonical") out = InvBasis::canonical;
    else return -1;
    return 0;
}

// deterministic non-critical, non-pole sample points
std::vector<Scalar> sample_points(const Curve<Scalar>& c, std::size_t count) {
    std::vector<Scalar> out;
    RatFun<Scalar> xp = c.x.derivative();
    for (long z = 2; out.size() < count && z < 1000; ++z) {
        Scalar s{Rat(z)};
        if (c.x.den().eval(s).is_zero() || c.dy.den().eval(s).is_zero()) continue;
        if (xp.num().eval(s).is_zero()) continue;
        out.push_back(s);
    }
    return out;
}

int cmd_analyze(const Options& opt) {
    Pipeline p(load_spec(opt));
    json doc;
    doc["curve"] = json::object();
    json branches = json::array();
    for (const auto& b : p.curve.branches)
        branches.push_back(json{{"location", b.loc.str()},
                                {"u", scalar_json(p.ctx, b.u)},
                                {"dy_value", scalar_json(p.ctx, b.dy_value)}});
    doc["curve"]["branches"] = std::move(branches);
    json poles = json::array();
    for (const auto& q : p.curve.poles)
        poles.push_back(json{{"location", q.loc.str()}, {"mu", q.mu}});
    doc["curve"]["poles"] = std::move(poles);
    json cts = json::array();
    for (const Contour& C : contours(p.curve)) cts.push_back(C.str());
    doc["contours"] = std::move(cts);
    doc["dominant"] = p.curve.dominance();
    doc["compatible"] = p.curve.compatibility(8).ok;
    doc["conventions"] = conventions_json();
    doc["tower"] = tower_json(p.ctx);
    emit(opt, doc);
    return 0;
}

int cmd_correlators(const Options& opt) {
    if (3 * opt.g - 3 + opt.n < 0 || opt.n < 1)
        throw admissibility_error("unstable (g,n) requested");
    int kcap = std::max(opt.kmax, 3 * opt.g - 2 + opt.n);
    Pipeline p(load_spec(opt), 72);
    Recursion<Scalar> rec(p.curve, kcap, std::max(24, 6 * kcap + 4));
    const Correlator<Scalar>& w = rec.omega(opt.g, opt.n);
    json doc;
    doc["g"] = opt.g;
    doc["n"] = opt.n;
    doc["basis"] = "dxi";
    doc["coefficients"] = table_json(p.ctx, w.c);
    doc["conventions"] = conventions_json();
    doc["tower"] = tower_json(p.ctx);
    emit(opt, doc);
    return 0;
}

int cmd_invariants(const Options& opt) {
    InvBasis basis;
    if (basis_of(opt.basis, basis) != 0) throw parse_error("unknown basis: " + opt.basis);
    if (3 * opt.g - 3 + opt.n < 0 || opt.n < 1)
        throw admissibility_error("unstable (g,n) requested");
    int kcap = std::max(opt.kmax, 3 * opt.g - 2 + opt.n);
    Pipeline p(load_spec(opt), 72);
    Recursion<Scalar> rec(p.curve, kcap, std::max(24, 6 * kcap + 4));
    FrobeniusPoint<Scalar> F = frobenius_point(p.curve);
    Invariants<Scalar> inv(rec, F);
    InvariantTable<Scalar> t = inv.ancestors(opt.g, opt.n, basis);
    json doc;
    doc["g"] = opt.g;
    doc["n"] = opt.n;
    doc["basis"] = opt.basis;
    doc["ambiguous"] = t.ambiguous;
    doc["values"] = table_json(p.ctx, t.c);
    doc["conventions"] = conventions_json();
    doc["tower"] = tower_json(p.ctx);
    emit(opt, doc);
    return 0;
}

int cmd_rmatrix(const Options& opt) {
    int K = opt.kmax < 0 ? 6 : opt.kmax;
    Pipeline p(load_spec(opt));
    RhatData<Scalar> R = rhat(p.curve, K);
    json doc;
    doc["order"] = K;
    json rh = json::array(), ri = json::array();
    for (int k = 0; k <= K; ++k) {
        rh.push_back(mat_json(p.ctx, R.rhat.m[std::size_t(k)]));
        ri.push_back(mat_json(p.ctx, R.rinv.m[std::size_t(k)]));
    }
    doc["rhat"] = std::move(rh);
    doc["rhat_inverse"] = std::move(ri);
    doc["symplectic"] = symplectic_check(R.rhat);
    doc["conventions"] = conventions_json();
    doc["tower"] = tower_json(p.ctx);
    emit(opt, doc);
    return 0;
}

int cmd_frobenius(const Options& opt) {
    Pipeline p(load_spec(opt));
    FrobeniusPoint<Scalar> F = frobenius_point(p.curve);
    TowerCtx& ctx = p.ctx;
    json doc;
    json u = json::array(), ec = json::array();
    for (const Scalar& v : F.u) u.push_back(scalar_json(ctx, v));
    for (const Scalar& v : F.eta_canonical) ec.push_back(scalar_json(ctx, v));
    doc["u"] = std::move(u);
    doc["eta_canonical"] = std::move(ec);
    doc["beta"] = mat_json(ctx, F.beta);
    doc["psi"] = mat_json(ctx, F.psi);
    doc["eta_flat"] = mat_json(ctx, F.eta_flat);
    json cts = json::array();
    for (const Contour& C : F.cont) cts.push_back(C.str());
    doc["contours"] = std::move(cts);
    json t = json::array();
    for (const auto& v : F.t)
        t.push_back(json{{"value", scalar_json(ctx, v.value)}, {"ambiguous", v.ambiguous}});
    doc["flat_coordinates"] = std::move(t);
    doc["dy_in_span"] = F.dy_in_span;
    if (F.dy_in_span) {
        json l = json::array();
        for (const Scalar& v : F.lambda) l.push_back(scalar_json(ctx, v));
        doc["dy_decomposition"] = std::move(l);
    }
    doc["conventions"] = conventions_json();
    doc["tower"] = tower_json(p.ctx);
    emit(opt, doc);
    return 0;
}

int cmd_verify(const Options& opt) {
    CurveSpec spec = load_spec(opt);
    json checks = json::array();
    bool all = true;
    auto add = [&](const std::string& name, bool pass) {
        checks.push_back(json{{"name", name}, {"pass", pass}});
        all = all && pass;
    };
    if (spec.is_family) {
        TowerCtx ctx;
        auto fam =
            CurveFamily<Scalar>::analyze(spec.x, spec.dy, std::max(spec.order, 24), ctx);
        std::vector<Scalar> pts = sample_points(fam.base, 3);
        if (pts.size() < 3) throw degeneracy_error("could not find sample points");
        add("rauch", rauch_check(fam, pts[0], pts[1]).ok &&
                         rauch_check(fam, pts[1], pts[2]).ok);
        add("vardy", vardy_check(fam, pts[0]).ok && vardy_check(fam, pts[1]).ok);
        bool flat = true;
        int N = fam.base.num_branches();
        for (int a = 0; a < N; ++a)
            for (int b = a; b < N; ++b) flat = flat && flatness_check(fam, a, b).ok;
        add("flatness", flat);
        add("rmatrix_ode", rmatrix_ode_check(fam, 3).ok);
        add("lg_deformation", lg_deformation_check(fam, ctx).ok);
    } else {
        Pipeline p(spec, 72);
        add("dominance", p.curve.dominance());
        add("compatibility", p.curve.compatibility(8).ok);
        Recursion<Scalar> rec(p.curve, 3, 24);
        {
            const Correlator<Scalar>& w = rec.omega(0, 3);
            add("omega03_two_route", w.c == rec.omega03_direct().c);
        }
        add("string_dilaton_03", rec.string_dilaton_check(0, 3));
        add("string_dilaton_11", rec.string_dilaton_check(1, 1));
        FrobeniusPoint<Scalar> F = frobenius_point(p.curve);  // throws if routes split
        add("metric_two_route", true);
        RhatData<Scalar> R = rhat(p.curve, 6);
        add("rhat_symplectic", symplectic_check(R.rhat));
        add("rhat_factorization", factorization_check(p.curve, R, 4));
        Invariants<Scalar> inv(rec, F);
        add("biorthogonality", inv.biorthogonal());
        {
            bool eq = true;
            for (auto [g, n] : {std::pair{0, 3}, {1, 1}, {1, 2}})
                eq = eq && inv.ancestors(g, n, InvBasis::flat).c ==
                               inv.ancestors_from_tensor(g, n, InvBasis::flat).c;
            add("ancestor_two_route", eq);
        }
        {
            bool tp = true;
            InvariantTable<Scalar> p03 = inv.primary(0, 3, InvBasis::flat);
            int N = p.curve.num_branches();
            for (int a = 0; a < N; ++a)
                for (int b = a; b < N; ++b)
                    for (int g = b; g < N; ++g)
                        tp = tp && p03.coeff({{a, 0}, {b, 0}, {g, 0}}) ==
                                       three_point(p.curve, F, a, b, g);
            add("three_point_pairing", tp);
        }
        if (F.dy_in_span) add("string_tables", inv.string_check(0, 3));
    }
    json doc;
    doc["checks"] = std::move(checks);
    doc["all_passed"] = all;
    emit(opt, doc);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact topological recursion and Frobenius-manifold pipeline"};
    app.require_subcommand(1);
    Options opt;

    auto common = [&](CLI::App* c) {
        c->add_option("spec", opt.spec_path, "curve or family spec file")->required();
        c->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "text", "csv"}));
        c->add_option("--order", opt.order, "truncation order override");
        c->add_option("--family-param", opt.family_param, "family base point c0 override");
        c->add_option("--workers", opt.workers, "worker count (deterministic schedule)")
            ->check(CLI::PositiveNumber);
    };
    auto gn = [&](CLI::App* c) {
        c->add_option("--g", opt.g, "genus")->required();
        c->add_option("--n", opt.n, "number of points")->required();
        c->add_option("--kmax", opt.kmax, "psi-power cap");
    };

    CLI::App* an = app.add_subcommand("analyze", "curve analysis report");
    common(an);
    CLI::App* co = app.add_subcommand("correlators", "correlator coefficient table");
    common(co);
    gn(co);
    CLI::App* in = app.add_subcommand("invariants", "primary/ancestor invariant table");
    common(in);
    gn(in);
    in->add_option("--basis", opt.basis, "flat, dual or canonical")
        ->check(CLI::IsMember({"flat", "dual", "canonical"}));
    CLI::App* rm = app.add_subcommand("rmatrix", "R-matrix series");
    common(rm);
    rm->add_option("--kmax", opt.kmax, "series order");
    CLI::App* fr = app.add_subcommand("frobenius", "Frobenius-manifold data");
    common(fr);
    CLI::App* ve = app.add_subcommand("verify", "identity verification suite");
    common(ve);

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed()) return cmd_analyze(opt);
        if (co->parsed()) return cmd_correlators(opt);
        if (in->parsed()) return cmd_invariants(opt);
        if (rm->parsed()) return cmd_rmatrix(opt);
        if (fr->parsed()) return cmd_frobenius(opt);
        if (ve->parsed()) return cmd_verify(opt);
    } catch (const parse_error& e) {
        std::cerr << json{{"error", {{"type", "parse"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    } catch (const error_base& e) {
        std::cerr << json{{"error", {{"type", "computation"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"type", "unexpected"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 4;
    }
    return 4;
}
