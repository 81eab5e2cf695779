#ifndef SPECTRAL_IO_HPP
#define SPECTRAL_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "family.hpp"

namespace spectral {

// Plain-text structured spec: "key = tokens", '#' comments.  A token is a
// rational or a comma-separated list of rationals (a polynomial in the family
// parameter, ascending degree).
struct SpecFile {
    std::map<std::string, std::vector<std::string>> kv;

    static SpecFile parse(std::istream& in) {
        SpecFile f;
        std::string line;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            std::string eq;
            if (!(ls >> eq) || eq != "=")
                throw parse_error("spec line " + std::to_string(ln) + ": expected 'key = values'");
            std::vector<std::string> vals;
            std::string tok;
            while (ls >> tok) vals.push_back(tok);
            if (vals.empty())
                throw parse_error("spec line " + std::to_string(ln) + ": empty value for '" +
                                  key + "'");
            if (f.kv.count(key))
                throw parse_error("spec line " + std::to_string(ln) + ": duplicate key '" + key +
                                  "'");
            f.kv[key] = std::move(vals);
        }
        return f;
    }

    static SpecFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw parse_error("cannot open spec file: " + path);
        return parse(in);
    }

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    const std::vector<std::string>& at(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) throw parse_error("spec is missing required key '" + k + "'");
        return it->second;
    }
};

namespace detail {

inline Rat parse_rat(const std::string& s, const std::string& where) {
    Rat q;
    if (s.empty() || q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0)
        throw parse_error("bad rational '" + s + "' in " + where);
    q.canonicalize();
    return q;
}

// "a,b,c" as a polynomial in the family parameter, evaluated at c0 + eps
inline JScalar parse_coeff(const std::string& tok, const Rat& c0, const std::string& where) {
    std::vector<Rat> cs;
    std::string cur;
    std::istringstream ts(tok);
    while (std::getline(ts, cur, ',')) cs.push_back(parse_rat(cur, where));
    if (cs.empty()) throw parse_error("empty coefficient in " + where);
    Rat v(0), d(0), pw(1);
    for (std::size_t e = 0; e < cs.size(); ++e) {
        v += cs[e] * pw;
        if (e + 1 < cs.size()) d += Rat(long(e + 1)) * cs[e + 1] * pw;
        pw *= c0;
    }
    return JScalar(Scalar(v), Scalar(d));
}

inline Poly<JScalar> parse_poly(const std::vector<std::string>& toks, const Rat& c0,
                                const std::string& where) {
    std::vector<JScalar> c;
    for (const std::string& t : toks) c.push_back(parse_coeff(t, c0, where));
    return Poly<JScalar>(std::move(c));
}

}  // namespace detail

// Curve or family spec: x and dy as rational functions of z whose coefficients
// may be polynomials in the family parameter c; the presence of "c0" makes it
// a family.
struct CurveSpec {
    RatFun<JScalar> x, dy;
    bool is_family = false;
    Rat c0 = 0;
    int order = 48;

    static CurveSpec from(const SpecFile& f) {
        CurveSpec s;
        if (f.has("c0")) {
            if (f.at("c0").size() != 1) throw parse_error("c0 must be a single rational");
            s.c0 = detail::parse_rat(f.at("c0")[0], "c0");
            s.is_family = true;
        }
        auto poly = [&](const char* key, bool required, const char* dflt) {
            if (!f.has(key)) {
                if (required) throw parse_error(std::string("spec is missing '") + key + "'");
                return detail::parse_poly({dflt}, s.c0, key);
            }
            return detail::parse_poly(f.at(key), s.c0, key);
        };
        Poly<JScalar> xn = poly("x_num", true, "");
        Poly<JScalar> xd = poly("x_den", false, "1");
        Poly<JScalar> dn = poly("dy_num", false, "1");
        Poly<JScalar> dd = poly("dy_den", false, "1");
        if (xd.is_zero() || dd.is_zero()) throw parse_error("zero denominator in spec");
        s.x = RatFun<JScalar>(std::move(xn), std::move(xd));
        s.dy = RatFun<JScalar>(std::move(dn), std::move(dd));
        if (f.has("order")) {
            Rat o = detail::parse_rat(f.at("order")[0], "order");
            if (o.get_den() != 1 || o < 4 || o > 512) throw parse_error("order out of range");
            s.order = int(o.get_num().get_si());
        }
        return s;
    }

    RatFun<Scalar> base_x() const { return jet_value(x); }
    RatFun<Scalar> base_dy() const { return jet_value(dy); }
};

// ---- lossless JSON serialization of tower scalars ---------------------------

using json = nlohmann::ordered_json;

// radicand coefficient vectors of each tower level, shallowest first
inline json tower_json(const TowerCtx& ctx) {
    json out = json::array();
    for (const auto& level : ctx.description()) {
        json l = json::array();
        for (const std::string& r : level) l.push_back(r);
        out.push_back(std::move(l));
    }
    return out;
}

// a rational serializes as its string; a tower element as the coefficient
// vector over the document's tower
inline json scalar_json(const TowerCtx& ctx, const Scalar& s) {
    if (s.is_rational()) return rat_str(s.to_rational());
    Scalar l = ctx.lift(s);
    json out = json::array();
    for (const Rat& q : l.coeffs()) out.push_back(rat_str(q));
    return out;
}

inline TowerPtr tower_from_json(const json& levels) {
    TowerPtr t;
    for (const auto& level : levels) {
        auto n = std::make_shared<Tower>();
        n->parent = t;
        n->depth = tower_depth(t.get()) + 1;
        for (const auto& r : level)
            n->rad.push_back(detail::parse_rat(r.get<std::string>(), "tower radicand"));
        if (n->rad.size() != (std::size_t(1) << (n->depth - 1)))
            throw parse_error("tower level has wrong radicand size");
        t = n;
    }
    return t;
}

inline Scalar scalar_from_json(const json& v, const TowerPtr& tower) {
    if (v.is_string()) return Scalar(detail::parse_rat(v.get<std::string>(), "scalar"));
    std::vector<Rat> c;
    for (const auto& q : v) c.push_back(detail::parse_rat(q.get<std::string>(), "scalar"));
    TowerPtr t = tower;
    while (t && (std::size_t(1) << t->depth) > c.size()) t = t->parent;
    if ((std::size_t(1) << tower_depth(t.get())) != c.size())
        throw parse_error("scalar coefficient vector does not fit the tower");
    return Scalar(t, std::move(c));
}

}

#endif
