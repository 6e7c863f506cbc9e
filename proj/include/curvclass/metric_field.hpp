#pragma once

// Curvature engine: from a metric field, Christoffel symbols, Riemann/Ricci/
// scalar curvature and first/second covariant derivatives at sample points,
// all via truncated-Taylor jets. Depth d needs jets of order d+2.
//
// Conventions (locked by the unit-sphere sign test r = n(n-1)):
//   R[a,b,c,d] = g( R(e_a,e_b) e_c, e_d ),  R(X,Y) = [nabla_X,nabla_Y] - nabla_[X,Y]
//   S[j,k]    = g^{ab} R[a,j,k,b]   (contraction over slots 1 and 4)
//   (nabla T)[i_1..i_k, x] = partial_x T - sum_m Gamma^a_{x i_m} T[..a..]
//   second derivatives append direction slots outward:
//   (nabla^2 T)[.., x, y] = nabla_y (nabla T)(.., x)

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "curvclass/jet.hpp"
#include "curvclass/tensor.hpp"

namespace curvclass {

struct MetricField {
    int dim = 0;
    // symmetric (0,2) jet matrix of the metric components at p
    std::function<Tensor<Jet>(const std::vector<double>& p, int order)> components;
    std::function<bool(const std::vector<double>& p)> admissible = [](const std::vector<double>&) { return true; };
};

struct CurvaturePackage {
    std::vector<double> point;
    int dim = 0;
    int depth = 0;
    Metric<double> metric;
    Tensor<double> gamma; // (1,2)
    Tensor<double> R;     // (0,4)
    Tensor<double> S;     // (0,2)
    double r = 0.0;
    std::optional<Tensor<double>> nabla_R;  // (0,5)
    std::optional<Tensor<double>> nabla_S;  // (0,3)
    std::optional<Tensor<double>> nabla_r;  // (0,1)
    std::optional<Tensor<double>> nabla2_R; // (0,6)
};

namespace detail {

inline Jet jzero(int n, int q) { return Jet::constant(0.0, n, q); }

inline Tensor<Jet> jet_metric_inverse(const Tensor<Jet>& g) {
    const int n = g.dim();
    const int q = g.data()[0].order();
    return invert_matrix(g, jzero(n, q), Jet::constant(1.0, n, q));
}

} // namespace detail

// Gamma^a_{bc} as jets of order (order(g) - 1)
inline Tensor<Jet> christoffel_jets(const Tensor<Jet>& g, const Tensor<Jet>& ginv) {
    const int n = g.dim();
    const int q = g.data()[0].order();
    Tensor<Jet> gamma(n, 1, 2, detail::jzero(n, q - 1));
    // cache first partials of g
    std::vector<Tensor<Jet>> dg;
    dg.reserve(n);
    for (int d = 0; d < n; ++d)
        dg.push_back(Tensor<Jet>::generate(n, 0, 2,
            [&](const std::array<int, kMaxRank>& ix) { return g(ix[0], ix[1]).partial_jet(d); },
            detail::jzero(n, q - 1)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = b; c < n; ++c) {
                Jet sum = detail::jzero(n, q - 1);
                for (int d = 0; d < n; ++d)
                    sum = sum + ginv(a, d) * (dg[b](d, c) + dg[c](b, d) - dg[d](b, c));
                gamma(a, b, c) = sum * 0.5;
                gamma(a, c, b) = gamma(a, b, c);
            }
    return gamma;
}

// R[a,b,c,d] as jets of order (order(g) - 2)
inline Tensor<Jet> riemann_jets(const Tensor<Jet>& g, const Tensor<Jet>& gamma) {
    const int n = g.dim();
    const int qg = gamma.data()[0].order();
    // scratch[e, c, a, b] = d_a Gamma^e_{bc} - d_b Gamma^e_{ac} + G^e_{af}G^f_{bc} - G^e_{bf}G^f_{ac}
    Tensor<Jet> scratch(n, 0, 4, detail::jzero(n, qg - 1));
    for (int e = 0; e < n; ++e)
        for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    Jet v = gamma(e, b, c).partial_jet(a) - gamma(e, a, c).partial_jet(b);
                    for (int f = 0; f < n; ++f)
                        v = v + gamma(e, a, f) * gamma(f, b, c) - gamma(e, b, f) * gamma(f, a, c);
                    scratch(e, c, a, b) = v;
                }
    Tensor<Jet> R(n, 0, 4, detail::jzero(n, qg - 1));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    Jet v = detail::jzero(n, qg - 1);
                    for (int e = 0; e < n; ++e) v = v + g(e, d) * scratch(e, c, a, b);
                    R(a, b, c, d) = v;
                }
    return R;
}

// (nabla T)[i_1..i_k, x], jets one order below T
inline Tensor<Jet> covariant_derivative_jets(const Tensor<Jet>& t, const Tensor<Jet>& gamma) {
    if (t.contra() != 0) throw std::invalid_argument("covariant_derivative: expected (0,k) tensor");
    const int n = t.dim();
    const int k = t.cov();
    const int qt = t.data()[0].order();
    Tensor<Jet> out(n, 0, k + 1, detail::jzero(n, qt - 1));
    detail::IndexIter it(n, k + 1);
    std::array<int, kMaxRank> tidx{};
    do {
        const int x = it.idx[k];
        for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
        Jet v = t.at(tidx).partial_jet(x);
        for (int mslot = 0; mslot < k; ++mslot) {
            const int im = it.idx[mslot];
            for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
            for (int a = 0; a < n; ++a) {
                tidx[mslot] = a;
                v = v - gamma(a, x, im) * t.at(tidx);
            }
        }
        out.at(it.idx) = v;
    } while (it.next());
    return out;
}

inline Tensor<double> jet_values(const Tensor<Jet>& t) {
    Tensor<double> out(t.dim(), t.contra(), t.cov());
    for (std::size_t i = 0; i < t.size(); ++i) out.data()[i] = t.data()[i].value();
    return out;
}

// Everything the engine knows at one point, as jets.
struct JetCurvature {
    int n = 0;
    int order = 0; // order of the metric jets
    Tensor<Jet> g, ginv;  // (0,2), order q
    Tensor<Jet> gamma;    // (1,2), order q-1
    Tensor<Jet> R;        // (0,4), order q-2
    Tensor<Jet> S;        // (0,2), order q-2
    Jet r;                //        order q-2
};

inline JetCurvature jet_curvature(const MetricField& m, const std::vector<double>& p, int order) {
    if (static_cast<int>(p.size()) != m.dim) throw std::invalid_argument("jet_curvature: point/dim mismatch");
    if (!m.admissible(p)) throw std::domain_error("jet_curvature: point not admissible");
    if (order < 2) throw std::invalid_argument("jet_curvature: metric jets of order >= 2 required");
    JetCurvature jc;
    jc.n = m.dim;
    jc.order = order;
    jc.g = m.components(p, order);
    jc.ginv = detail::jet_metric_inverse(jc.g);
    jc.gamma = christoffel_jets(jc.g, jc.ginv);
    jc.R = riemann_jets(jc.g, jc.gamma);
    const int n = jc.n;
    jc.S = Tensor<Jet>(n, 0, 2, detail::jzero(n, order - 2));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Jet v = detail::jzero(n, order - 2);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) v = v + jc.ginv(a, b) * jc.R(a, j, k, b);
            jc.S(j, k) = v;
        }
    jc.r = detail::jzero(n, order - 2);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) jc.r = jc.r + jc.ginv(j, k) * jc.S(j, k);
    return jc;
}

inline Tensor<double> christoffel(const MetricField& m, const std::vector<double>& p) {
    JetCurvature jc = jet_curvature(m, p, 2);
    return jet_values(jc.gamma);
}

inline CurvaturePackage curvature_package(const MetricField& m, const std::vector<double>& p, int depth = 0) {
    if (depth < 0 || depth > 2) throw std::invalid_argument("curvature_package: depth must be 0, 1 or 2");
    JetCurvature jc = jet_curvature(m, p, depth + 2);
    CurvaturePackage pkg;
    pkg.point = p;
    pkg.dim = m.dim;
    pkg.depth = depth;
    pkg.metric = Metric<double>(jet_values(jc.g));
    pkg.gamma = jet_values(jc.gamma);
    pkg.R = jet_values(jc.R);
    pkg.S = jet_values(jc.S);
    pkg.r = jc.r.value();
    if (depth >= 1) {
        Tensor<Jet> dR = covariant_derivative_jets(jc.R, jc.gamma);
        pkg.nabla_R = jet_values(dR);
        pkg.nabla_S = jet_values(covariant_derivative_jets(jc.S, jc.gamma));
        Tensor<Jet> rt(jc.n, 0, 0, jc.r);
        pkg.nabla_r = jet_values(covariant_derivative_jets(rt, jc.gamma));
        if (depth >= 2) pkg.nabla2_R = jet_values(covariant_derivative_jets(dR, jc.gamma));
    }
    return pkg;
}

// nabla of an arbitrary jet-valued (0,k) field at p
inline Tensor<double> covariant_derivative(
    const MetricField& m, const std::vector<double>& p,
    const std::function<Tensor<Jet>(const std::vector<double>&, int)>& field, int jet_order = 3) {
    JetCurvature jc = jet_curvature(m, p, jet_order);
    return jet_values(covariant_derivative_jets(field(p, jet_order), jc.gamma));
}

// max-norm of the cyclic sum of nabla R over the two curvature slots and the
// derivative slot; ~0 for every Levi-Civita curvature (proper GCT).
inline double bianchi2_residual(const CurvaturePackage& pkg) {
    if (!pkg.nabla_R) throw std::invalid_argument("bianchi2_residual: package depth must be >= 1");
    const Tensor<double>& dR = *pkg.nabla_R;
    const int n = pkg.dim;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int x = 0; x < n; ++x) {
                        double c = dR(i, j, k, l, x) + dR(j, x, k, l, i) + dR(x, i, k, l, j);
                        worst = std::max(worst, std::abs(c));
                    }
    return worst;
}

} // namespace curvclass
