#pragma once

// Residual evaluators and pointwise fitters for the curvature restrictions:
// flatness, symmetry, recurrency and its generalized/hyper/weakly/quasi/super
// variants, Chaki pseudosymmetry, the three weak-symmetry types, semisymmetry
// and pseudosymmetry operators, and the order-2 symmetric/recurrent families.
//
// All fits are pointwise, independent, and use componentwise least squares
// (the metric-induced pairing can vanish on nonzero tensors in indefinite
// signature -- pp-wave curvature has <R,R> = 0 -- so it is not used to fit).
// Underdetermined or vacuous systems are reported degenerate, never guessed.

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvclass/b_tensor.hpp"
#include "curvclass/metric_catalog.hpp"
#include "curvclass/metric_field.hpp"
#include "curvclass/tensor.hpp"

namespace curvclass {

enum class Verdict { holds, fails, degenerate };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        default: return "degenerate";
    }
}

struct PointFit {
    std::vector<double> point;
    double residual = 0.0;
    std::map<std::string, std::vector<double>> unknowns;
    bool degenerate = false;
    std::string note;
};

struct ConditionReport {
    std::string condition;
    std::string metric_name;
    std::string tensor_name;
    double tolerance = 0.0;
    std::vector<PointFit> points;
    Verdict verdict = Verdict::holds;
};

// default tolerances: depth-1 conditions 1e-7, depth-2 1e-6 (error
// accumulation through higher-order jets); both overridable per call
constexpr double kTolDepth1 = 1e-7;
constexpr double kTolDepth2 = 1e-6;

namespace detail {

inline Verdict fold_verdict(const std::vector<PointFit>& pts, double tol) {
    bool any_degenerate = false, any_fail = false;
    for (const auto& p : pts) {
        any_degenerate = any_degenerate || p.degenerate;
        any_fail = any_fail || (!p.degenerate && p.residual > tol);
    }
    if (any_degenerate) return Verdict::degenerate;
    return any_fail ? Verdict::fails : Verdict::holds;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Which tensor field a condition is applied to.

struct TensorFieldSpec {
    std::string name;
    bool is_metric = false;
    std::optional<BCoefficients> coeffs;

    static TensorFieldSpec metric() { return {"g", true, std::nullopt}; }
    static TensorFieldSpec named(const std::string& nm, int n, const CatalogParams& params = {}) {
        return {nm, false, catalog(nm, n, params)};
    }
    static TensorFieldSpec from_coeffs(BCoefficients c, std::string nm = "B") {
        return {std::move(nm), false, std::move(c)};
    }

    Tensor<Jet> jets(const JetCurvature& jc) const {
        if (is_metric) return jc.g;
        return assemble_b(to_doubles(*coeffs), jc.R, jc.S, jc.r, jc.g);
    }
};

// ---------------------------------------------------------------------------
// Generic pointwise linear least squares: minimize |fixed + A u| over the
// unknown components u, blocks of columns belonging to one named unknown.

struct LinearCondition {
    Tensor<double> fixed;
    struct Block {
        std::string label;
        std::vector<Tensor<double>> columns;
    };
    std::vector<Block> blocks;
};

struct FitOutcome {
    double residual = 0.0; // relative to the condition's own scale
    std::map<std::string, std::vector<double>> unknowns;
    bool degenerate = false;
    std::string note;
};

inline FitOutcome fit_linear_condition(const LinearCondition& cond) {
    if (cond.blocks.empty()) throw std::invalid_argument("fit_linear_condition: empty basis");
    const std::size_t rows = cond.fixed.size();
    std::size_t cols = 0;
    for (const auto& b : cond.blocks) cols += b.columns.size();

    double scale = max_abs(cond.fixed);
    FitOutcome out;

    Eigen::MatrixXd A(rows, cols);
    std::size_t c = 0;
    for (const auto& b : cond.blocks) {
        double block_mag = 0.0;
        for (const auto& col : b.columns) {
            if (col.size() != rows) throw std::invalid_argument("fit_linear_condition: column shape mismatch");
            for (std::size_t r = 0; r < rows; ++r) A(r, c) = col.data()[r];
            block_mag = std::max(block_mag, max_abs(col));
            ++c;
        }
        scale = std::max(scale, block_mag);
        if (block_mag <= 1e-14 * std::max(scale, 1.0)) {
            out.degenerate = true;
            out.note += (out.note.empty() ? "" : "; ") + ("basis of unknown '" + b.label + "' vanishes");
        }
    }

    Eigen::VectorXd bvec(rows);
    for (std::size_t r = 0; r < rows; ++r) bvec(r) = -cond.fixed.data()[r];

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    Eigen::VectorXd u = cod.solve(bvec); // minimum-norm least squares, deterministic
    Eigen::VectorXd resid = A * u - bvec;

    if (static_cast<std::size_t>(cod.rank()) >= rows) {
        out.degenerate = true;
        out.note += (out.note.empty() ? "" : "; ");
        out.note += "system is vacuously solvable (rank = equation count)";
    }

    out.residual = resid.lpNorm<Eigen::Infinity>() / std::max(scale, 1e-300);
    c = 0;
    for (const auto& b : cond.blocks) {
        std::vector<double> vals(b.columns.size());
        for (std::size_t i = 0; i < b.columns.size(); ++i) vals[i] = u(c++);
        out.unknowns[b.label] = std::move(vals);
    }
    return out;
}

// homogeneous variant: nontrivial u minimizing |A u| / (|u| scale) via the
// smallest singular direction; vacuous (any u works) when all columns ~ 0
struct HomogeneousFit {
    double residual = 0.0; // sigma_min / sigma_max
    std::vector<double> direction;
    bool vacuous = false;
};

// zero_floor: column magnitudes at or below it mean the whole basis already
// vanishes at the condition's own scale, so any coefficients solve it
inline HomogeneousFit fit_homogeneous(const std::vector<Tensor<double>>& columns, double zero_floor = 1e-300) {
    const std::size_t rows = columns.at(0).size();
    Eigen::MatrixXd A(rows, columns.size());
    double mag = 0.0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        for (std::size_t r = 0; r < rows; ++r) A(r, c) = columns[c].data()[r];
        mag = std::max(mag, max_abs(columns[c]));
    }
    HomogeneousFit out;
    if (mag <= zero_floor) {
        out.vacuous = true;
        out.direction.assign(columns.size(), 0.0);
        if (!out.direction.empty()) out.direction[0] = 1.0;
        return out;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    out.residual = sv(sv.size() - 1) / sv(0);
    Eigen::VectorXd v = svd.matrixV().col(sv.size() - 1);
    out.direction.assign(v.data(), v.data() + v.size());
    return out;
}

// ---------------------------------------------------------------------------
// Shared per-point evaluation state.

namespace detail {

struct PointState {
    JetCurvature jc;
    CurvaturePackage pkg;
    Tensor<double> T;        // target values
    Tensor<double> nabla_T;  // (0,k+1)
    double t_scale = 0.0;
};

inline PointState eval_point(const MetricField& mf, const TensorFieldSpec& field,
                             const std::vector<double>& p, int depth) {
    PointState st;
    st.jc = jet_curvature(mf, p, depth + 2);
    st.pkg.point = p;
    st.pkg.dim = mf.dim;
    st.pkg.depth = depth;
    st.pkg.metric = Metric<double>(jet_values(st.jc.g));
    st.pkg.gamma = jet_values(st.jc.gamma);
    st.pkg.R = jet_values(st.jc.R);
    st.pkg.S = jet_values(st.jc.S);
    st.pkg.r = st.jc.r.value();
    Tensor<Jet> tj = field.jets(st.jc);
    st.T = jet_values(tj);
    if (depth >= 1) st.nabla_T = jet_values(covariant_derivative_jets(tj, st.jc.gamma));
    st.t_scale = std::max(max_abs(st.T), field.is_metric ? 0.0 : b_ingredient_scale(st.pkg));
    return st;
}

// column block of a 1-form unknown hitting the derivative slot:
// term  u[x] * base[idx]  placed at [idx, x]; condition carries -u(X) (x) base
inline LinearCondition::Block oneform_times_base(const std::string& label,
                                                 const Tensor<double>& base) {
    const int n = base.dim();
    const int k = base.cov();
    LinearCondition::Block blk{label, {}};
    for (int a = 0; a < n; ++a) {
        Tensor<double> col(n, 0, k + 1);
        curvclass::detail::IndexIter it(n, k);
        std::array<int, kMaxRank> oidx{};
        do {
            for (int s = 0; s < k; ++s) oidx[s] = it.idx[s];
            oidx[k] = a;
            col.at(oidx) = -base.at(it.idx);
        } while (it.next());
        blk.columns.push_back(std::move(col));
    }
    return blk;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Flatness

inline ConditionReport check_flat(const CatalogMetric& cm, const TensorFieldSpec& field,
                                  const std::vector<std::vector<double>>& pts,
                                  double tol = 1e-9) {
    ConditionReport rep{"flat", cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 0);
        PointFit pf;
        pf.point = p;
        pf.residual = rel_residual(st.T, st.t_scale > 0 ? st.t_scale : 1.0);
        if (field.is_metric) pf.residual = 1.0; // g itself never vanishes
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// plain zero check against an explicit ingredient scale
inline bool is_zero_tensor(const Tensor<double>& t, double scale, double tol = 1e-9) {
    return rel_residual(t, scale) <= tol;
}

// ---------------------------------------------------------------------------
// Symmetry: nabla T = 0

inline ConditionReport check_symmetric(const CatalogMetric& cm, const TensorFieldSpec& field,
                                       const std::vector<std::vector<double>>& pts,
                                       double tol = kTolDepth1) {
    ConditionReport rep{"symmetric", cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 1);
        PointFit pf;
        pf.point = p;
        pf.residual = rel_residual(st.nabla_T, std::max(st.t_scale, max_abs(st.nabla_T) > 0 ? 0.0 : 1.0));
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Recurrency: nabla T = Pi (x) T, closed-form componentwise projection

inline ConditionReport fit_recurrence(const CatalogMetric& cm, const TensorFieldSpec& field,
                                      const std::vector<std::vector<double>>& pts,
                                      double tol = kTolDepth1) {
    ConditionReport rep{"recurrent", cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 1);
        PointFit pf;
        pf.point = p;
        const int n = st.T.dim();
        const int k = st.T.cov();
        const double tt = frobenius_dot(st.T, st.T);
        if (tt <= 1e-28 * std::max(1.0, st.t_scale * st.t_scale)) {
            pf.degenerate = true;
            pf.note = "T vanishes at this point";
            rep.points.push_back(std::move(pf));
            continue;
        }
        std::vector<double> pi(n, 0.0);
        Tensor<double> resid = st.nabla_T;
        curvclass::detail::IndexIter it(n, k);
        for (int x = 0; x < n; ++x) {
            double num = 0.0;
            it = curvclass::detail::IndexIter(n, k);
            std::array<int, kMaxRank> idx{};
            do {
                idx = it.idx;
                idx[k] = x;
                num += st.nabla_T.at(idx) * st.T.at(it.idx);
            } while (it.next());
            pi[x] = num / tt;
            it = curvclass::detail::IndexIter(n, k);
            do {
                idx = it.idx;
                idx[k] = x;
                resid.at(idx) -= pi[x] * st.T.at(it.idx);
            } while (it.next());
        }
        pf.residual = rel_residual(resid, std::max(max_abs(st.nabla_T), st.t_scale));
        pf.unknowns["Pi"] = pi;
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// same condition through the generic least-squares path (cross-oracle)
inline ConditionReport fit_recurrence_via_linear(const CatalogMetric& cm, const TensorFieldSpec& field,
                                                 const std::vector<std::vector<double>>& pts,
                                                 double tol = kTolDepth1) {
    ConditionReport rep{"recurrent(linear-condition)", cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 1);
        LinearCondition cond{st.nabla_T, {detail::oneform_times_base("Pi", st.T)}};
        FitOutcome fo = fit_linear_condition(cond);
        PointFit pf;
        pf.point = p;
        pf.residual = fo.residual;
        pf.unknowns = std::move(fo.unknowns);
        pf.degenerate = fo.degenerate;
        pf.note = std::move(fo.note);
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Generalized recurrency family

enum class RecurrentVariant { generalized, hyper, weakly_generalized, quasi, super };

inline const char* variant_name(RecurrentVariant v) {
    switch (v) {
        case RecurrentVariant::generalized: return "generalized-recurrent";
        case RecurrentVariant::hyper: return "hyper-generalized-recurrent";
        case RecurrentVariant::weakly_generalized: return "weakly-generalized-recurrent";
        case RecurrentVariant::quasi: return "quasi-generalized-recurrent";
        default: return "super-generalized-recurrent";
    }
}

inline ConditionReport check_generalized_recurrent_family(
    const CatalogMetric& cm, const TensorFieldSpec& field,
    const std::vector<std::vector<double>>& pts, RecurrentVariant variant,
    double tol = kTolDepth1, const std::vector<double>* psi = nullptr) {
    ConditionReport rep{variant_name(variant), cm.name, field.name, tol, {}, Verdict::holds};
    if (variant == RecurrentVariant::quasi && psi == nullptr)
        throw std::invalid_argument("quasi-generalized recurrency needs the caller-supplied 1-form Psi");
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 1);
        const Tensor<double>& g = st.pkg.metric.g;
        Tensor<double> G = wedge_half_gg(st.pkg.metric);
        LinearCondition cond{st.nabla_T, {}};
        cond.blocks.push_back(detail::oneform_times_base("Pi", st.T));
        switch (variant) {
            case RecurrentVariant::generalized:
                cond.blocks.push_back(detail::oneform_times_base("Phi", G));
                break;
            case RecurrentVariant::hyper:
                cond.blocks.push_back(detail::oneform_times_base("Phi", kulkarni_nomizu(g, st.pkg.S)));
                break;
            case RecurrentVariant::weakly_generalized:
                cond.blocks.push_back(detail::oneform_times_base("Phi", kulkarni_nomizu(st.pkg.S, st.pkg.S)));
                break;
            case RecurrentVariant::quasi: {
                Tensor<double> pp(st.T.dim(), 0, 2);
                for (int i = 0; i < st.T.dim(); ++i)
                    for (int j = 0; j < st.T.dim(); ++j) pp(i, j) = (*psi)[i] * (*psi)[j];
                cond.blocks.push_back(detail::oneform_times_base("Phi", kulkarni_nomizu(g, add(g, pp))));
                break;
            }
            case RecurrentVariant::super:
                cond.blocks.push_back(detail::oneform_times_base("Phi", G));
                cond.blocks.push_back(detail::oneform_times_base("Psi", kulkarni_nomizu(g, st.pkg.S)));
                cond.blocks.push_back(detail::oneform_times_base("Theta", kulkarni_nomizu(st.pkg.S, st.pkg.S)));
                break;
        }
        FitOutcome fo = fit_linear_condition(cond);
        PointFit pf;
        pf.point = p;
        pf.residual = fo.residual;
        pf.unknowns = std::move(fo.unknowns);
        pf.degenerate = fo.degenerate;
        pf.note = std::move(fo.note);
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Chaki pseudosymmetry: nabla_X T - 2 Pi(X)(x)T + Pi_X T = 0

inline ConditionReport check_chaki_pseudosymmetric(const CatalogMetric& cm, const TensorFieldSpec& field,
                                                   const std::vector<std::vector<double>>& pts,
                                                   double tol = kTolDepth1) {
    ConditionReport rep{"chaki-pseudosymmetric", cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 1);
        const int n = st.T.dim();
        const int k = st.T.cov();
        LinearCondition::Block blk{"Pi", {}};
        for (int a = 0; a < n; ++a) {
            Tensor<double> col(n, 0, k + 1);
            curvclass::detail::IndexIter it(n, k + 1);
            std::array<int, kMaxRank> tidx{};
            do {
                const int x = it.idx[k];
                double v = 0.0;
                if (x == a) {
                    for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
                    v -= 2.0 * st.T.at(tidx);
                }
                // +(Pi_X T): -sum_m delta_{i_m,a} T[.. x at m ..]
                for (int mslot = 0; mslot < k; ++mslot) {
                    if (it.idx[mslot] != a) continue;
                    for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
                    tidx[mslot] = x;
                    v -= st.T.at(tidx);
                }
                col.at(it.idx) = v;
            } while (it.next());
            blk.columns.push_back(std::move(col));
        }
        LinearCondition cond{st.nabla_T, {std::move(blk)}};
        FitOutcome fo = fit_linear_condition(cond);
        PointFit pf;
        pf.point = p;
        pf.residual = fo.residual;
        pf.unknowns = std::move(fo.unknowns);
        pf.degenerate = fo.degenerate;
        pf.note = std::move(fo.note);
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Weak symmetry, types I-III

inline ConditionReport check_weak_symmetry(const CatalogMetric& cm, const TensorFieldSpec& field,
                                           const std::vector<std::vector<double>>& pts, int type,
                                           double tol = kTolDepth1) {
    if (type < 1 || type > 3) throw std::invalid_argument("check_weak_symmetry: type must be 1, 2 or 3");
    ConditionReport rep{"weak-symmetry-" + std::to_string(type), cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, field, p, 1);
        const int n = st.T.dim();
        const int k = st.T.cov();
        LinearCondition cond{st.nabla_T, {}};

        if (type == 1) {
            // one 1-form per permutation of the k+1 condition slots:
            // term Pi_sigma(arg_{sigma(0)}) T(arg_{sigma(1)}, ..., arg_{sigma(k)})
            std::vector<int> perm(k + 1);
            for (int i = 0; i <= k; ++i) perm[i] = i;
            do {
                std::string label = "Pi_";
                for (int v : perm) label += std::to_string(v);
                LinearCondition::Block blk{label, {}};
                for (int a = 0; a < n; ++a) {
                    Tensor<double> col(n, 0, k + 1);
                    curvclass::detail::IndexIter it(n, k + 1);
                    std::array<int, kMaxRank> tidx{};
                    do {
                        if (it.idx[perm[0]] == a) {
                            for (int s = 0; s < k; ++s) tidx[s] = it.idx[perm[s + 1]];
                            col.at(it.idx) = -st.T.at(tidx);
                        }
                    } while (it.next());
                    blk.columns.push_back(std::move(col));
                }
                cond.blocks.push_back(std::move(blk));
            } while (std::next_permutation(perm.begin(), perm.end()));
        } else if (type == 2) {
            cond.blocks.push_back(detail::oneform_times_base("Phi", st.T));
            for (int slot = 0; slot < k; ++slot) {
                LinearCondition::Block blk{"Pi_" + std::to_string(slot + 1), {}};
                for (int a = 0; a < n; ++a) {
                    Tensor<double> col(n, 0, k + 1);
                    curvclass::detail::IndexIter it(n, k + 1);
                    std::array<int, kMaxRank> tidx{};
                    do {
                        if (it.idx[slot] == a) {
                            for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
                            tidx[slot] = it.idx[k];
                            col.at(it.idx) = -st.T.at(tidx);
                        }
                    } while (it.next());
                    blk.columns.push_back(std::move(col));
                }
                cond.blocks.push_back(std::move(blk));
            }
        } else {
            cond.blocks.push_back(detail::oneform_times_base("Phi", st.T));
            LinearCondition::Block blk{"pi", {}};
            for (int a = 0; a < n; ++a) {
                Tensor<double> col(n, 0, k + 1);
                curvclass::detail::IndexIter it(n, k + 1);
                std::array<int, kMaxRank> tidx{};
                do {
                    const int x = it.idx[k];
                    double v = 0.0;
                    for (int mslot = 0; mslot < k; ++mslot) {
                        if (it.idx[mslot] != a) continue;
                        for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
                        tidx[mslot] = x;
                        v -= st.T.at(tidx); // +pi_X T carries the action's minus sign
                    }
                    col.at(it.idx) = v;
                } while (it.next());
                blk.columns.push_back(std::move(col));
            }
            cond.blocks.push_back(std::move(blk));
        }

        FitOutcome fo = fit_linear_condition(cond);
        PointFit pf;
        pf.point = p;
        pf.residual = fo.residual;
        pf.unknowns = std::move(fo.unknowns);
        pf.degenerate = fo.degenerate;
        pf.note = std::move(fo.note);
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Semisymmetry type: D . T = 0

inline double operator_scale(const Tensor<double>& D, const Tensor<double>& T,
                             const Metric<double>& m) {
    return std::max(max_abs(D) * max_abs(m.g_inv) * max_abs(T) * T.cov() * T.dim(), 1e-30);
}

inline ConditionReport check_semisymmetric_type(const CatalogMetric& cm, const TensorFieldSpec& Dspec,
                                                const TensorFieldSpec& Tspec,
                                                const std::vector<std::vector<double>>& pts,
                                                double tol = kTolDepth1) {
    ConditionReport rep{"semisymmetric-type", cm.name, Dspec.name + "." + Tspec.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, Tspec, p, 0);
        Tensor<double> D = jet_values(Dspec.jets(st.jc));
        Tensor<double> DT = curvature_dot(D, st.T, st.pkg.metric);
        PointFit pf;
        pf.point = p;
        pf.residual = rel_residual(DT, operator_scale(D, st.T, st.pkg.metric));
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// pseudosymmetric type with unknown scalars: (sum_i c_i D_i) . T = 0
inline ConditionReport fit_pseudosymmetric_type(const CatalogMetric& cm,
                                                const std::vector<TensorFieldSpec>& Dspecs,
                                                const TensorFieldSpec& Tspec,
                                                const std::vector<std::vector<double>>& pts,
                                                double tol = kTolDepth1) {
    ConditionReport rep{"pseudosymmetric-type", cm.name, Tspec.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, Tspec, p, 0);
        std::vector<Tensor<double>> cols;
        double ref = 1e-30;
        for (const auto& ds : Dspecs) {
            Tensor<double> D = jet_values(ds.jets(st.jc));
            ref = std::max(ref, operator_scale(D, st.T, st.pkg.metric));
            cols.push_back(curvature_dot(D, st.T, st.pkg.metric));
        }
        HomogeneousFit hf = fit_homogeneous(cols, tol * ref);
        PointFit pf;
        pf.point = p;
        pf.residual = hf.residual;
        if (hf.vacuous) pf.note = "all operator actions already vanish; any scalars work";
        pf.unknowns["c"] = hf.direction;
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Deszcz / Ricci-generalized pseudosymmetry: D.T = L Q(A,T), pointwise L

enum class DeszczKind { deszcz /*A = g*/, ricci_generalized /*A = S*/ };

inline ConditionReport fit_deszcz_L(const CatalogMetric& cm, const TensorFieldSpec& Dspec,
                                    const TensorFieldSpec& Tspec,
                                    const std::vector<std::vector<double>>& pts,
                                    DeszczKind kind = DeszczKind::deszcz,
                                    double tol = kTolDepth1) {
    const char* label = kind == DeszczKind::deszcz ? "deszcz-pseudosymmetric" : "ricci-generalized-pseudosymmetric";
    ConditionReport rep{label, cm.name, Dspec.name + "." + Tspec.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto st = detail::eval_point(cm.field, Tspec, p, 0);
        Tensor<double> D = jet_values(Dspec.jets(st.jc));
        Tensor<double> DT = curvature_dot(D, st.T, st.pkg.metric);
        const Tensor<double>& A = kind == DeszczKind::deszcz ? st.pkg.metric.g : st.pkg.S;
        Tensor<double> Q = q_operator(A, st.T);
        PointFit pf;
        pf.point = p;
        const double qq = frobenius_dot(Q, Q);
        const double qscale = operator_scale(D, st.T, st.pkg.metric);
        if (qq <= 1e-28 * qscale * qscale) {
            pf.degenerate = true;
            pf.note = "Q(A,T) vanishes at this point";
            rep.points.push_back(std::move(pf));
            continue;
        }
        const double L = frobenius_dot(DT, Q) / qq;
        Tensor<double> resid = sub(DT, scale(Q, L));
        pf.residual = rel_residual(resid, std::max(qscale, std::abs(L) * max_abs(Q)));
        pf.unknowns["L"] = {L};
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Order-2 symmetric / recurrent families. Second derivative slots follow the
// engine convention: (nabla^2 T)[.., x, y] = nabla_y nabla_x -type ordering,
// so the two operator orderings are [.., x, y] and [.., y, x].

enum class Order2Kind { symmetric, recurrent };

namespace detail {

struct SecondDerivState {
    PointState st;
    Tensor<double> n2; // (0,k+2)
};

inline SecondDerivState eval_second(const MetricField& mf, const TensorFieldSpec& field,
                                    const std::vector<double>& p) {
    SecondDerivState s{eval_point(mf, field, p, 2), {}};
    Tensor<Jet> tj = field.jets(s.st.jc);
    Tensor<Jet> d1 = covariant_derivative_jets(tj, s.st.jc.gamma);
    s.n2 = jet_values(covariant_derivative_jets(d1, s.st.jc.gamma));
    return s;
}

inline Tensor<double> swap_last_two(const Tensor<double>& t) {
    const int k = t.cov();
    std::vector<int> sigma(k);
    for (int i = 0; i < k; ++i) sigma[i] = i;
    std::swap(sigma[k - 1], sigma[k - 2]);
    return permute(t, sigma);
}

} // namespace detail

// commutator of second covariant derivatives vs the curvature action:
// nabla^2 T[.., y, x] - nabla^2 T[.., x, y]  ==  (R . T)[.., x, y]
inline double ricci_commutator_residual(const CatalogMetric& cm, const TensorFieldSpec& field,
                                        const std::vector<double>& p) {
    auto s = detail::eval_second(cm.field, field, p);
    Tensor<double> comm = sub(detail::swap_last_two(s.n2), s.n2);
    Tensor<double> RT = curvature_dot(s.st.pkg.R, s.st.T, s.st.pkg.metric);
    Tensor<double> resid = sub(comm, RT);
    return rel_residual(resid, std::max(max_abs(s.n2), max_abs(RT)));
}

inline ConditionReport check_order2_family(const CatalogMetric& cm, const TensorFieldSpec& field,
                                           const std::vector<std::vector<double>>& pts, Order2Kind kind,
                                           double tol = kTolDepth2) {
    ConditionReport rep{kind == Order2Kind::symmetric ? "symmetric-type-order-2" : "recurrent-type-order-2",
                        cm.name, field.name, tol, {}, Verdict::holds};
    for (const auto& p : pts) {
        auto s = detail::eval_second(cm.field, field, p);
        const int n = s.st.T.dim();
        const int k = s.st.T.cov();
        std::vector<Tensor<double>> cols;
        std::vector<std::string> labels;
        cols.push_back(s.n2);
        labels.push_back("alpha_xy");
        cols.push_back(detail::swap_last_two(s.n2));
        labels.push_back("alpha_yx");
        if (kind == Order2Kind::recurrent) {
            // Pi1 terms: u[a] * delta(x=a or y=a) nabla T at the other slot
            Tensor<double> dT_xy(n, 0, k + 2), dT_yx(n, 0, k + 2);
            curvclass::detail::IndexIter it(n, k + 2);
            std::array<int, kMaxRank> didx{};
            do {
                for (int s2 = 0; s2 < k; ++s2) didx[s2] = it.idx[s2];
                didx[k] = it.idx[k + 1];
                dT_yx.at(it.idx) = s.st.nabla_T.at(didx); // depends on y via derivative
                didx[k] = it.idx[k];
                dT_xy.at(it.idx) = s.st.nabla_T.at(didx);
            } while (it.next());
            for (int ordering = 0; ordering < 2; ++ordering) {
                for (int a = 0; a < n; ++a) {
                    Tensor<double> col(n, 0, k + 2);
                    it = curvclass::detail::IndexIter(n, k + 2);
                    do {
                        const int first = ordering == 0 ? it.idx[k] : it.idx[k + 1];
                        if (first == a) col.at(it.idx) = (ordering == 0 ? dT_yx : dT_xy).at(it.idx);
                    } while (it.next());
                    cols.push_back(std::move(col));
                    labels.push_back("Pi1_" + std::string(ordering == 0 ? "xy" : "yx") + "_" + std::to_string(a));
                }
            }
            // Pi2 terms: u[a,b] * delta((x,y)=(a,b)) T
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    Tensor<double> col(n, 0, k + 2);
                    it = curvclass::detail::IndexIter(n, k + 2);
                    std::array<int, kMaxRank> tidx{};
                    do {
                        if (it.idx[k] == a && it.idx[k + 1] == b) {
                            for (int s2 = 0; s2 < k; ++s2) tidx[s2] = it.idx[s2];
                            col.at(it.idx) = s.st.T.at(tidx);
                        }
                    } while (it.next());
                    cols.push_back(std::move(col));
                    labels.push_back("Pi2_" + std::to_string(a) + std::to_string(b));
                }
        }
        double ref = std::max({s.st.t_scale, max_abs(s.st.nabla_T), max_abs(s.n2)});
        HomogeneousFit hf = fit_homogeneous(cols, tol * ref);
        PointFit pf;
        pf.point = p;
        pf.residual = hf.residual;
        if (hf.vacuous) pf.note = "all basis tensors already vanish; any coefficients work";
        for (std::size_t i = 0; i < labels.size(); ++i) pf.unknowns[labels[i]] = {hf.direction[i]};
        rep.points.push_back(std::move(pf));
    }
    rep.verdict = detail::fold_verdict(rep.points, tol);
    return rep;
}

} // namespace curvclass
