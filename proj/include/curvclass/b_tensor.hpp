#pragma once

// Exact-rational coefficient algebra of the extended curvature tensor
//
//   B[i,j,k,l] = a0 R[i,j,k,l] + a1 R[i,k,j,l]
//              + a2 S[j,k]g[i,l] + a3 S[i,k]g[j,l] + a4 S[i,j]g[k,l]
//              + a5 S[i,l]g[j,k] + a6 S[j,l]g[i,k] + a7 S[k,l]g[i,j]
//              + r ( a8 g[i,l]g[j,k] + a9 g[i,k]g[j,l] + a10 g[i,j]g[k,l] )
//
// with the named-tensor catalog, the six contraction pairs ^ijS = p S + q r g,
// their traces, and the four-class contraction classifier. All arithmetic is
// exact at a fixed dimension n >= 3.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvclass/metric_field.hpp"
#include "curvclass/rational.hpp"
#include "curvclass/tensor.hpp"

namespace curvclass {

struct BCoefficients {
    int n = 3;
    std::array<Rational, 11> a{};

    BCoefficients() = default;
    BCoefficients(int dim, std::array<Rational, 11> coeffs) : n(dim), a(std::move(coeffs)) {
        if (n < 3) throw std::invalid_argument("b-coefficients: dimension must be >= 3");
        bool all_zero = true;
        for (const auto& v : a)
            if (!v.is_zero()) { all_zero = false; break; }
        if (all_zero) throw std::invalid_argument("b-coefficients: the zero tensor is not a valid B-tensor");
    }
};

enum class ClassId : int { class1 = 1, class2 = 2, class3 = 3, class4 = 4 };

// Pair order used everywhere: (1,2) (1,3) (1,4) (2,3) (2,4) (3,4), 1-based names.
struct ContractionProfile {
    std::array<Rational, 6> p{};
    std::array<Rational, 6> q{};
    std::array<Rational, 3> rcoef{}; // traces: {12}={34}, {13}={24}, {14}={23}
    static constexpr const char* pair_names[6] = {"12", "13", "14", "23", "24", "34"};
};

inline ContractionProfile contraction_profile(const BCoefficients& c) {
    const Rational n(c.n);
    const auto& a = c.a;
    ContractionProfile pr;
    pr.p[0] = -a[1] + a[2] + a[3] + a[5] + a[6] + n * a[7];          // ^12p
    pr.p[1] = -a[0] + a[2] + a[4] + a[5] + n * a[6] + a[7];          // ^13p
    pr.p[2] = a[0] + a[1] + n * a[2] + a[3] + a[4] + a[6] + a[7];    // ^14p
    pr.p[3] = a[0] + a[1] + a[3] + a[4] + n * a[5] + a[6] + a[7];    // ^23p
    pr.p[4] = -a[0] + a[2] + n * a[3] + a[4] + a[5] + a[7];          // ^24p
    pr.p[5] = -a[1] + a[2] + a[3] + n * a[4] + a[5] + a[6];          // ^34p
    pr.q[0] = a[4] + a[8] + a[9] + n * a[10];                        // ^12q
    pr.q[1] = a[3] + a[8] + n * a[9] + a[10];                        // ^13q
    pr.q[2] = a[5] + n * a[8] + a[9] + a[10];                        // ^14q
    pr.q[3] = a[2] + n * a[8] + a[9] + a[10];                        // ^23q
    pr.q[4] = a[6] + a[8] + n * a[9] + a[10];                        // ^24q
    pr.q[5] = a[7] + a[8] + a[9] + n * a[10];                        // ^34q
    pr.rcoef[0] = pr.p[0] + n * pr.q[0];
    pr.rcoef[1] = pr.p[1] + n * pr.q[1];
    pr.rcoef[2] = pr.p[2] + n * pr.q[2];
    return pr;
}

struct Classification {
    ClassId value = ClassId::class4;
    ContractionProfile profile;
    bool all_p_zero = false;
    bool all_q_zero = false;
    bool all_r_zero = false;
};

inline ClassId class_of_profile(const ContractionProfile& pr) {
    bool pz = true, qz = true, rz = true;
    for (const auto& v : pr.p) pz = pz && v.is_zero();
    for (const auto& v : pr.q) qz = qz && v.is_zero();
    for (const auto& v : pr.rcoef) rz = rz && v.is_zero();
    if (pz && qz) return ClassId::class1;
    if (pz) return ClassId::class2;
    if (rz) return ClassId::class3;
    return ClassId::class4;
}

inline Classification classify(const BCoefficients& c) {
    Classification cl;
    cl.profile = contraction_profile(c);
    cl.all_p_zero = cl.all_q_zero = cl.all_r_zero = true;
    for (const auto& v : cl.profile.p) cl.all_p_zero = cl.all_p_zero && v.is_zero();
    for (const auto& v : cl.profile.q) cl.all_q_zero = cl.all_q_zero && v.is_zero();
    for (const auto& v : cl.profile.rcoef) cl.all_r_zero = cl.all_r_zero && v.is_zero();
    cl.value = class_of_profile(cl.profile);
    return cl;
}

// ---------------------------------------------------------------------------
// Class dependency relations (the explicit coefficient conditions of the four
// classes) as a cross-check on the profile classifier. The class-3 relation
// for a10 is the solved form of the three trace equations; the printed version
// carries a stray factor n in the numerator.

struct RelationsReport {
    bool class1_relations = false; // a_i dependency of class 1
    bool class2_relations = false; // a_i dependency of class 2 (implied by class 1's)
    bool class3_relations = false; // trace-free dependency
    ClassId via_relations = ClassId::class4;
    ClassId via_profile = ClassId::class4;
    bool agrees = false;
};

inline RelationsReport class_relations_check(const BCoefficients& c) {
    const Rational n(c.n);
    const Rational n1 = n - Rational(1);
    const Rational n2 = n - Rational(2);
    const auto& a = c.a;
    RelationsReport rep;

    rep.class1_relations =
        a[0] == -a[9] * n1 * n2 &&
        a[1] == a[7] * n2 &&
        a[2] == -a[7] + n1 * a[9] &&
        a[5] == -a[7] + n1 * a[9] &&
        a[3] == -n1 * a[9] &&
        a[6] == -n1 * a[9] &&
        a[4] == a[7] &&
        a[8] == -a[9] + a[7] / n1 &&
        a[10] == -(a[7] / n1);

    rep.class2_relations =
        a[0] == a[6] * n2 &&
        a[1] == a[7] * n2 &&
        a[2] == -a[6] - a[7] &&
        a[5] == -a[6] - a[7] &&
        a[3] == a[6] &&
        a[4] == a[7];

    rep.class3_relations =
        a[0] == n1 * (a[3] + a[6] + n * a[9]) &&
        a[8] == -(a[1] + n1 * (a[2] + a[3] + a[5] + a[6] + n * a[9])) / (n * n1) &&
        a[10] == (a[1] - n1 * (a[4] + a[7])) / (n * n1);

    rep.via_relations = rep.class1_relations ? ClassId::class1
                      : rep.class2_relations ? ClassId::class2
                      : rep.class3_relations ? ClassId::class3
                                             : ClassId::class4;
    rep.via_profile = classify(c).value;
    rep.agrees = rep.via_relations == rep.via_profile;
    return rep;
}

// ---------------------------------------------------------------------------
// Generalized-curvature predicates and the canonical form
// B = b0 R + b1 g^S + b2 r g^g.

inline bool is_gct(const BCoefficients& c) {
    const auto& a = c.a;
    return a[1].is_zero() && a[4].is_zero() && a[7].is_zero() && a[10].is_zero() &&
           a[2] == -a[3] && a[2] == a[5] && a[5] == -a[6] && a[8] == -a[9];
}

inline bool is_skew_endomorphism(const BCoefficients& c) {
    const auto& a = c.a;
    return a[1].is_zero() && a[4].is_zero() && a[7].is_zero() && a[10].is_zero() &&
           a[2] == -a[6] && a[3] == -a[5] && a[8] == -a[9];
}

struct GctCanonicalForm {
    Rational b0, b1, b2;
};

inline GctCanonicalForm gct_canonical_form(const BCoefficients& c) {
    if (!is_gct(c)) throw std::domain_error("gct_canonical_form: not a generalized curvature tensor");
    // g^S contributes (+b1,-b1,+b1,-b1) to (a2,a3,a5,a6); r g^g contributes
    // (2*b2, -2*b2) to (a8,a9). Hence b1 = a5 and b2 = a8/2.
    return GctCanonicalForm{c.a[0], c.a[5], c.a[8] / Rational(2)};
}

inline bool is_proper_gct(const BCoefficients& c) {
    if (!is_gct(c)) return false;
    GctCanonicalForm f = gct_canonical_form(c);
    return f.b1.is_zero() && f.b2.is_zero();
}

// ---------------------------------------------------------------------------
// Catalog of named tensors (Table rows evaluated at dimension n).

using CatalogParams = std::map<std::string, Rational>;

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "R", "C", "P", "W", "K", "C*", "C'", "P*", "W*", "W~", "M",
        "W0", "W0*", "W1", "W1*", "W2", "W2*", "W3", "W3*", "W4", "W4*",
        "W5", "W5*", "W6", "W6*", "W7", "W7*", "W8", "W8*", "W9", "W9*", "T"};
    return names;
}

inline std::string catalog_canonical_name(std::string name) {
    static const std::map<std::string, std::string> aliases = {
        {"Cstar", "C*"}, {"Cprime", "C'"}, {"Pstar", "P*"}, {"Wstar", "W*"},
        {"Wtilde", "W~"}, {"Wt", "W~"}, {"tau", "T"},
        {"W0star", "W0*"}, {"W1star", "W1*"}, {"W2star", "W2*"}, {"W3star", "W3*"},
        {"W4star", "W4*"}, {"W5star", "W5*"}, {"W6star", "W6*"}, {"W7star", "W7*"},
        {"W8star", "W8*"}, {"W9star", "W9*"}};
    auto it = aliases.find(name);
    return it != aliases.end() ? it->second : name;
}

inline std::vector<std::string> catalog_required_params(const std::string& raw) {
    const std::string name = catalog_canonical_name(raw);
    if (name == "C*" || name == "P*") return {"a0", "a2"};
    if (name == "C'") return {"a0", "a2", "a8"};
    if (name == "W*") return {"a0", "b"};
    if (name == "W~") return {"a0", "a2", "a5"};
    if (name == "T") return {"a0", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"};
    return {};
}

// Non-empty for rows whose printed table entry needed a judgment call.
inline std::string catalog_note(const std::string& raw) {
    if (catalog_canonical_name(raw) == "W*")
        return "table row prints the same sign for a8 and a9; stored with a8 = -a9 "
               "so that the class statement (class 3 iff b = 0) and the reduction "
               "to the concircular tensor at b = -a0/(n-1) hold";
    return {};
}

inline BCoefficients catalog(const std::string& raw_name, int n, const CatalogParams& params = {}) {
    if (n < 3) throw std::invalid_argument("catalog: dimension must be >= 3");
    const std::string name = catalog_canonical_name(raw_name);
    const Rational one(1), zero(0);
    const Rational rn(n), n1(n - 1), n2(n - 2);

    auto need = [&](const char* key) -> Rational {
        auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("catalog: tensor '" + name + "' requires parameter '" + key + "'");
        return it->second;
    };
    auto require_param_count = [&](size_t expected) {
        if (params.size() != expected)
            throw std::invalid_argument("catalog: tensor '" + name + "' takes " + std::to_string(expected) +
                                        " parameter(s)");
    };
    auto fixed_row = [&](std::array<Rational, 11> a) {
        require_param_count(0);
        return BCoefficients(n, std::move(a));
    };

    const Rational c1 = one / n1;          // 1/(n-1)
    const Rational c2v = one / n2;         // 1/(n-2)
    const Rational c12 = one / (n1 * n2);  // 1/((n-1)(n-2))
    const Rational cw = one / (rn * n1);   // 1/(n(n-1))
    const Rational cm = one / (Rational(2) * n1);

    if (name == "R") return fixed_row({one, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    if (name == "C") return fixed_row({one, 0, -c2v, c2v, 0, -c2v, c2v, 0, c12, -c12, 0});
    if (name == "P") return fixed_row({one, 0, -c1, c1, 0, 0, 0, 0, 0, 0, 0});
    if (name == "W") return fixed_row({one, 0, 0, 0, 0, 0, 0, 0, -cw, cw, 0});
    if (name == "K") return fixed_row({one, 0, -c2v, c2v, 0, -c2v, c2v, 0, 0, 0, 0});
    if (name == "M") return fixed_row({one, 0, -cm, cm, 0, -cm, cm, 0, 0, 0, 0});

    if (name == "C*") {
        require_param_count(2);
        Rational a0 = need("a0"), a2 = need("a2");
        Rational t = (a0 / n1 + Rational(2) * a2) / rn;
        return BCoefficients(n, {a0, 0, a2, -a2, 0, a2, -a2, 0, -t, t, 0});
    }
    if (name == "C'") {
        require_param_count(3);
        Rational a0 = need("a0"), a2 = need("a2"), a8 = need("a8");
        return BCoefficients(n, {a0, 0, a2, -a2, 0, a2, -a2, 0, a8, -a8, 0});
    }
    if (name == "P*") {
        require_param_count(2);
        Rational a0 = need("a0"), a2 = need("a2");
        Rational t = (a0 / n1 + a2) / rn;
        return BCoefficients(n, {a0, 0, a2, -a2, 0, 0, 0, 0, -t, t, 0});
    }
    if (name == "W*") {
        require_param_count(2);
        Rational a0 = need("a0"), b = need("b");
        Rational t = (a0 / n1 + Rational(2) * b) / rn;
        return BCoefficients(n, {a0, 0, 0, 0, 0, 0, 0, 0, -t, t, 0});
    }
    if (name == "W~") {
        require_param_count(3);
        Rational a0 = need("a0"), a2 = need("a2"), a5 = need("a5");
        Rational t = (a0 + n1 * (a2 + a5)) / (rn * n1);
        return BCoefficients(n, {a0, 0, a2, -a2, 0, a5, -a5, 0, -t, t, 0});
    }
    if (name == "T") {
        require_param_count(9);
        return BCoefficients(n, {need("a0"), 0, need("a2"), need("a3"), need("a4"),
                                 need("a5"), need("a6"), need("a7"), need("a8"), need("a9"), 0});
    }

    // the W_i / W_i* family: a0 = 1 plus a (+-1/(n-1), -+1/(n-1)) pair
    auto wpair = [&](int slot_neg, int slot_pos, bool star) {
        std::array<Rational, 11> a{};
        a[0] = one;
        a[star ? slot_pos : slot_neg] = -c1;
        a[star ? slot_neg : slot_pos] = c1;
        require_param_count(0);
        return BCoefficients(n, std::move(a));
    };
    if (name == "W0") return wpair(2, 6, false);
    if (name == "W0*") return wpair(2, 6, true);
    if (name == "W1") return wpair(2, 3, false);
    if (name == "W1*") return wpair(2, 3, true);
    if (name == "W2") return wpair(5, 6, false);
    if (name == "W2*") return wpair(5, 6, true);
    if (name == "W3") return wpair(3, 5, false);
    if (name == "W3*") return wpair(3, 5, true);
    if (name == "W4") return wpair(6, 7, false);
    if (name == "W4*") return wpair(6, 7, true);
    if (name == "W5") return wpair(3, 6, false);
    if (name == "W5*") return wpair(3, 6, true);
    if (name == "W6") return wpair(2, 7, false);
    if (name == "W6*") return wpair(2, 7, true);
    if (name == "W7") return wpair(2, 5, false);
    if (name == "W7*") return wpair(2, 5, true);
    if (name == "W8") return wpair(2, 4, false);
    if (name == "W8*") return wpair(2, 4, true);
    if (name == "W9") return wpair(4, 5, false);
    if (name == "W9*") return wpair(4, 5, true);

    throw std::invalid_argument("catalog: unknown tensor name '" + raw_name + "'");
}

// ---------------------------------------------------------------------------
// Pointwise evaluation.

inline std::array<double, 11> to_doubles(const BCoefficients& c) {
    std::array<double, 11> a;
    for (int i = 0; i < 11; ++i) a[i] = c.a[i].to_double();
    return a;
}

// The full 11-term sum, generic over the scalar type (double values or jets).
template <class T>
Tensor<T> assemble_b(const std::array<double, 11>& a, const Tensor<T>& R,
                     const Tensor<T>& S, const T& r, const Tensor<T>& g) {
    const int n = R.dim();
    const T zero = r - r;
    Tensor<T> B(n, 0, 4, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    T v = R(i, j, k, l) * a[0] + R(i, k, j, l) * a[1];
                    v = v + S(j, k) * g(i, l) * a[2] + S(i, k) * g(j, l) * a[3] + S(i, j) * g(k, l) * a[4];
                    v = v + S(i, l) * g(j, k) * a[5] + S(j, l) * g(i, k) * a[6] + S(k, l) * g(i, j) * a[7];
                    v = v + r * (g(i, l) * g(j, k) * a[8] + g(i, k) * g(j, l) * a[9] + g(i, j) * g(k, l) * a[10]);
                    B(i, j, k, l) = v;
                }
    return B;
}

inline Tensor<double> build_tensor(const BCoefficients& c, const CurvaturePackage& pkg) {
    if (c.n != pkg.dim) throw std::invalid_argument("build_tensor: coefficient/package dimension mismatch");
    return assemble_b(to_doubles(c), pkg.R, pkg.S, pkg.r, pkg.metric.g);
}

// Natural magnitude of the ingredients of B on this package; zero-tensor
// checks are taken relative to it.
inline double b_ingredient_scale(const CurvaturePackage& pkg) {
    double gm = max_abs(pkg.metric.g);
    return std::max({max_abs(pkg.R), max_abs(pkg.S) * gm, std::abs(pkg.r) * gm * gm, 1e-30});
}

// ---------------------------------------------------------------------------
// Class identities: the residual that vanishes for a member of the class.
//   class 1: B - (a0 C + a1 C')                                    == 0
//   class 2: B - (a0 K + a1 K') - r(a8 gg + a9 gg + a10 gg)        == 0
//   class 3: B - (a0 W + a1 W') - [S-terms] + (r/n)[paired gg]     == 0
// where X' denotes the (2,3)-slot permutation of X.

namespace detail {

template <class T>
Tensor<T> swap23(const Tensor<T>& t) {
    return permute(t, std::vector<int>{0, 2, 1, 3});
}

// arrangement 0: g[i,l]h[j,k]; 1: g[i,k]h[j,l]; 2: g[i,j]h[k,l]
inline Tensor<double> pair_arrangement(const Tensor<double>& g, const Tensor<double>& h, int which) {
    const int n = g.dim();
    return Tensor<double>::generate(n, 0, 4, [&](const std::array<int, kMaxRank>& ix) {
        int i = ix[0], j = ix[1], k = ix[2], l = ix[3];
        switch (which) {
            case 0: return g(i, l) * h(j, k);
            case 1: return g(i, k) * h(j, l);
            default: return g(i, j) * h(k, l);
        }
    });
}

// the six S,g arrangements keyed by their coefficient index 2..7
inline Tensor<double> sg_arrangement(const Tensor<double>& S, const Tensor<double>& g, int ai) {
    const int n = g.dim();
    return Tensor<double>::generate(n, 0, 4, [&](const std::array<int, kMaxRank>& ix) {
        int i = ix[0], j = ix[1], k = ix[2], l = ix[3];
        switch (ai) {
            case 2: return S(j, k) * g(i, l);
            case 3: return S(i, k) * g(j, l);
            case 4: return S(i, j) * g(k, l);
            case 5: return S(i, l) * g(j, k);
            case 6: return S(j, l) * g(i, k);
            default: return S(k, l) * g(i, j);
        }
    });
}

} // namespace detail

// Returns the identity residual tensor for classes 1-3; class 4 has no
// algebraic identity of this form (its flatness statement goes through S = 0).
inline std::optional<Tensor<double>> class_identity_residual(const BCoefficients& c,
                                                             const CurvaturePackage& pkg) {
    const ClassId cls = classify(c).value;
    if (cls == ClassId::class4) return std::nullopt;
    const auto a = to_doubles(c);
    const Tensor<double> B = build_tensor(c, pkg);
    const Tensor<double>& g = pkg.metric.g;

    auto rep_pair = [&](const char* rep_name) {
        Tensor<double> rep = build_tensor(catalog(rep_name, c.n), pkg);
        return add(scale(rep, a[0]), scale(detail::swap23(rep), a[1]));
    };

    if (cls == ClassId::class1) return sub(B, rep_pair("C"));

    if (cls == ClassId::class2) {
        Tensor<double> resid = sub(B, rep_pair("K"));
        for (int w = 0; w < 3; ++w)
            resid = sub(resid, scale(detail::pair_arrangement(g, g, w), pkg.r * a[8 + w]));
        return resid;
    }

    // class 3
    Tensor<double> resid = sub(B, rep_pair("W"));
    for (int ai = 2; ai <= 7; ++ai)
        resid = sub(resid, scale(detail::sg_arrangement(pkg.S, g, ai), a[ai]));
    const double rn = pkg.r / pkg.dim;
    resid = add(resid, scale(detail::pair_arrangement(g, g, 0), rn * (a[2] + a[5])));
    resid = add(resid, scale(detail::pair_arrangement(g, g, 1), rn * (a[3] + a[6])));
    resid = add(resid, scale(detail::pair_arrangement(g, g, 2), rn * (a[4] + a[7])));
    return resid;
}

// ---------------------------------------------------------------------------
// Linear combinations (the combination theorem).
//
// For pairs of classes 1-3 the predicted class follows the theorem's case
// table, with the boundary conditions evaluated as "all combined q vanish"
// (two class-2 members) and "all combined p vanish" (two class-3 members).
// Any pair involving class 4 is predicted from the combined contraction
// profile, which is linear in (mu, eta); the theorem's blanket "class 4"
// claim admits degenerate cancellations.

struct CombineResult {
    BCoefficients combined;
    ClassId predicted;
    std::string rule;
};

inline CombineResult combine(const BCoefficients& c1, const BCoefficients& c2,
                             const Rational& mu, const Rational& eta) {
    if (c1.n != c2.n) throw std::invalid_argument("combine: dimension mismatch");
    if (mu.is_zero() && eta.is_zero()) throw std::invalid_argument("combine: (mu, eta) = (0, 0)");

    std::array<Rational, 11> a{};
    bool all_zero = true;
    for (int i = 0; i < 11; ++i) {
        a[i] = mu * c1.a[i] + eta * c2.a[i];
        all_zero = all_zero && a[i].is_zero();
    }
    if (all_zero) throw std::domain_error("combine: zero result tensor");
    BCoefficients combined(c1.n, a);

    const Rational n(c1.n);
    const ContractionProfile p1 = contraction_profile(c1);
    const ContractionProfile p2 = contraction_profile(c2);
    ContractionProfile pc;
    for (int i = 0; i < 6; ++i) {
        pc.p[i] = mu * p1.p[i] + eta * p2.p[i];
        pc.q[i] = mu * p1.q[i] + eta * p2.q[i];
    }
    for (int i = 0; i < 3; ++i) pc.rcoef[i] = pc.p[i] + n * pc.q[i];

    auto all_zero_of = [](const std::array<Rational, 6>& v) {
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    };

    CombineResult res{std::move(combined), ClassId::class4, ""};
    if (mu.is_zero()) {
        res.predicted = classify(c2).value;
        res.rule = "scaled single member";
        return res;
    }
    if (eta.is_zero()) {
        res.predicted = classify(c1).value;
        res.rule = "scaled single member";
        return res;
    }

    const ClassId k1 = classify(c1).value;
    const ClassId k2 = classify(c2).value;
    auto ik = [](ClassId k) { return static_cast<int>(k); };

    if (k1 == ClassId::class1 && k2 == ClassId::class1) {
        res.predicted = ClassId::class1;
        res.rule = "class1 + class1";
    } else if (k1 == ClassId::class1 || k2 == ClassId::class1) {
        res.predicted = (k1 == ClassId::class1) ? k2 : k1;
        res.rule = "class1 + other";
    } else if (k1 == ClassId::class2 && k2 == ClassId::class2) {
        res.predicted = all_zero_of(pc.q) ? ClassId::class1 : ClassId::class2;
        res.rule = "class2 pair, boundary condition on combined q";
    } else if (k1 == ClassId::class3 && k2 == ClassId::class3) {
        res.predicted = all_zero_of(pc.p) ? ClassId::class1 : ClassId::class3;
        res.rule = "class3 pair, boundary condition on combined p";
    } else if ((ik(k1) == 2 && ik(k2) == 3) || (ik(k1) == 3 && ik(k2) == 2)) {
        res.predicted = ClassId::class4;
        res.rule = "class2 + class3";
    } else {
        res.predicted = class_of_profile(pc);
        res.rule = "class4 involved, combined profile";
    }
    return res;
}

} // namespace curvclass
