#pragma once

// JSON forms of the public value types. Rationals travel as "p/q" strings so
// nothing is lost in transit; doubles go as plain numbers.

#include <json.hpp>

#include <string>

#include "curvclass/b_tensor.hpp"
#include "curvclass/metric_catalog.hpp"
#include "curvclass/structure_checks.hpp"
#include "curvclass/tensor.hpp"

namespace curvclass {

using nlohmann::json;

inline json to_json(const Tensor<double>& t) {
    return json{{"dim", t.dim()}, {"valence", {t.contra(), t.cov()}}, {"data", t.data()}};
}

inline json to_json(const Tensor<Rational>& t) {
    std::vector<std::string> data;
    data.reserve(t.size());
    for (const auto& v : t.data()) data.push_back(v.str());
    return json{{"dim", t.dim()}, {"valence", {t.contra(), t.cov()}}, {"data", data}};
}

inline json to_json(const BCoefficients& c) {
    std::vector<std::string> a;
    for (const auto& v : c.a) a.push_back(v.str());
    return json{{"n", c.n}, {"a", a}};
}

inline BCoefficients coefficients_from_json(const json& j) {
    int n = j.at("n").get<int>();
    const auto& arr = j.at("a");
    if (arr.size() != 11) throw std::invalid_argument("coefficients: 'a' must have 11 entries");
    std::array<Rational, 11> a;
    for (int i = 0; i < 11; ++i) {
        if (arr[i].is_string()) a[i] = Rational::parse(arr[i].get<std::string>());
        else a[i] = Rational(arr[i].get<long long>());
    }
    return BCoefficients(n, a);
}

inline json to_json(const ContractionProfile& pr) {
    json p = json::object(), q = json::object(), r = json::object();
    for (int i = 0; i < 6; ++i) {
        p[ContractionProfile::pair_names[i]] = pr.p[i].str();
        q[ContractionProfile::pair_names[i]] = pr.q[i].str();
    }
    r["12=34"] = pr.rcoef[0].str();
    r["13=24"] = pr.rcoef[1].str();
    r["14=23"] = pr.rcoef[2].str();
    return json{{"p", p}, {"q", q}, {"r", r}};
}

inline json classification_to_json(const BCoefficients& c) {
    Classification cl = classify(c);
    RelationsReport rel = class_relations_check(c);
    json j;
    j["class"] = static_cast<int>(cl.value);
    j["profile"] = to_json(cl.profile);
    j["relations"] = {{"class1", rel.class1_relations},
                      {"class2", rel.class2_relations},
                      {"class3", rel.class3_relations},
                      {"via_relations", static_cast<int>(rel.via_relations)},
                      {"agrees", rel.agrees}};
    j["gct"] = is_gct(c);
    j["proper_gct"] = is_proper_gct(c);
    j["skew_endomorphism"] = is_skew_endomorphism(c);
    if (is_gct(c)) {
        GctCanonicalForm f = gct_canonical_form(c);
        j["canonical_form"] = {{"b0", f.b0.str()}, {"b1", f.b1.str()}, {"b2", f.b2.str()}};
    }
    return j;
}

inline json to_json(const ConditionReport& rep) {
    json pts = json::array();
    for (const auto& p : rep.points) {
        json jp{{"coords", p.point}, {"residual", p.residual}};
        if (!p.unknowns.empty()) {
            json u = json::object();
            for (const auto& [k, v] : p.unknowns) u[k] = v;
            jp["unknowns"] = u;
        }
        if (p.degenerate) jp["degenerate"] = true;
        if (!p.note.empty()) jp["note"] = p.note;
        pts.push_back(std::move(jp));
    }
    return json{{"condition", rep.condition}, {"metric", rep.metric_name},
                {"tensor", rep.tensor_name},  {"points", pts},
                {"verdict", verdict_name(rep.verdict)}, {"tolerance", rep.tolerance}};
}

// Metric spec files: {"kind": "builtin", "spec": "sphere:3:1"} or
// {"kind": "polynomial", "name": ..., "dim": n,
//  "entries": [{"i":0,"j":1,"terms":[{"c":0.05,"exp":[1,0,0]}]}]}
// Polynomial entries are symmetrized; unlisted components are
// delta_ij (identity background).
inline CatalogMetric metric_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "builtin") return metric_from_spec(j.at("spec").get<std::string>());
    if (kind != "polynomial") throw std::invalid_argument("metric json: kind must be builtin or polynomial");

    const int n = j.at("dim").get<int>();
    struct Term {
        int i, j;
        double c;
        std::vector<int> exps;
    };
    auto terms = std::make_shared<std::vector<Term>>();
    for (const auto& e : j.at("entries")) {
        int i = e.at("i").get<int>(), jj = e.at("j").get<int>();
        for (const auto& t : e.at("terms")) {
            std::vector<int> exps = t.at("exp").get<std::vector<int>>();
            if (static_cast<int>(exps.size()) != n)
                throw std::invalid_argument("metric json: exponent tuple length != dim");
            terms->push_back({i, jj, t.at("c").get<double>(), std::move(exps)});
        }
    }
    CatalogMetric cm;
    cm.name = j.value("name", std::string("polynomial"));
    cm.field.dim = n;
    cm.field.components = [n, terms](const std::vector<double>& p, int order) {
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        for (int i = 0; i < n; ++i) g(i, i) = Jet::constant(1.0, n, order);
        std::vector<Jet> vars;
        for (int v = 0; v < n; ++v) vars.push_back(Jet::variable(v, p[v], n, order));
        for (const auto& t : *terms) {
            Jet term = Jet::constant(t.c, n, order);
            for (int v = 0; v < n; ++v)
                for (int e = 0; e < t.exps[v]; ++e) term = term * vars[v];
            g(t.i, t.j) = g(t.i, t.j) + term;
            if (t.i != t.j) g(t.j, t.i) = g(t.j, t.i) + term;
        }
        return g;
    };
    cm.sample = detail::box_sampler(std::vector<double>(n, -0.5), std::vector<double>(n, 0.5),
                                    [](const std::vector<double>&) { return true; });
    return cm;
}

} // namespace curvclass
