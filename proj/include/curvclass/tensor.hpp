#pragma once

// Dense pointwise tensor values and the algebraic curvature operators
// (Kulkarni-Nomizu product, curvature-operator action D.T, Tachibana
// operator Q(A,T), 1-form action), independent of any metric field.
//
// Tensors are immutable values in spirit: every operation allocates its
// result, so values can be shared freely across threads.
//
// Scalar type T is generic: double, Rational (exact mode) and Jet all work.
// Slots are 0-based throughout.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "curvclass/rational.hpp"

namespace curvclass {

constexpr int kMaxRank = 8;

namespace detail {

inline std::size_t pow_int(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

// Odometer over index tuples of length `rank`, each digit in [0, dim).
struct IndexIter {
    explicit IndexIter(int dim, int rank) : dim(dim), rank(rank) { idx.fill(0); done = (rank < 0); }
    bool next() {
        for (int s = rank - 1; s >= 0; --s) {
            if (++idx[s] < dim) return true;
            idx[s] = 0;
        }
        return false;
    }
    int dim, rank;
    std::array<int, kMaxRank> idx{};
    bool done;
};

} // namespace detail

template <class T>
class Tensor {
public:
    Tensor() : dim_(0), contra_(0), cov_(0) {}

    Tensor(int dim, int contra, int cov, const T& init = T{})
        : dim_(dim), contra_(contra), cov_(cov),
          data_(detail::pow_int(dim, contra + cov), init) {
        if (dim < 1) throw std::invalid_argument("tensor: dim must be >= 1");
        if (contra < 0 || contra > 1) throw std::invalid_argument("tensor: contravariant valence must be 0 or 1");
        if (contra + cov > kMaxRank) throw std::invalid_argument("tensor: rank too large");
    }

    template <class Fn>
    static Tensor generate(int dim, int contra, int cov, Fn&& fn, const T& init = T{}) {
        Tensor t(dim, contra, cov, init);
        detail::IndexIter it(dim, contra + cov);
        if (t.rank() == 0) { t.data_[0] = fn(it.idx); return t; }
        do { t.data_[t.flat(it.idx)] = fn(it.idx); } while (it.next());
        return t;
    }

    int dim() const { return dim_; }
    int contra() const { return contra_; }
    int cov() const { return cov_; }
    int rank() const { return contra_ + cov_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    std::size_t flat(const std::array<int, kMaxRank>& idx) const {
        std::size_t f = 0;
        for (int s = 0; s < rank(); ++s) f = f * dim_ + static_cast<std::size_t>(idx[s]);
        return f;
    }

    const T& at(const std::array<int, kMaxRank>& idx) const { return data_[flat(idx)]; }
    T& at(const std::array<int, kMaxRank>& idx) { return data_[flat(idx)]; }

    template <class... I>
    const T& operator()(I... is) const {
        static_assert(sizeof...(I) <= kMaxRank);
        std::array<int, kMaxRank> idx{static_cast<int>(is)...};
        return data_[flat(idx)];
    }
    template <class... I>
    T& operator()(I... is) {
        static_assert(sizeof...(I) <= kMaxRank);
        std::array<int, kMaxRank> idx{static_cast<int>(is)...};
        return data_[flat(idx)];
    }

    bool same_shape(const Tensor& o) const {
        return dim_ == o.dim_ && contra_ == o.contra_ && cov_ == o.cov_;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.same_shape(b) && a.data_ == b.data_;
    }
    friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }

private:
    int dim_, contra_, cov_;
    std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Metric at a point: g and its inverse (stored (0,2)-shaped, raised semantics).

namespace detail {

// magnitude used only for pivot selection; exactness is unaffected
inline double pivot_mag(double x) { return std::abs(x); }
inline double pivot_mag(const Rational& x) { return std::abs(x.to_double()); }
template <class T>
double pivot_mag(const T& x) { return x.pivot_magnitude(); }

template <class T>
Tensor<T> invert_matrix(const Tensor<T>& g, const T& zero, const T& one) {
    const int n = g.dim();
    std::vector<std::vector<T>> a(n, std::vector<T>(2 * n, zero));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = g(i, j);
        a[i][n + i] = one;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        double best = 0.0;
        for (int row = col; row < n; ++row) {
            double m = pivot_mag(a[row][col]);
            if (m > best) { best = m; piv = row; }
        }
        if (piv < 0 || best == 0.0) throw std::domain_error("metric: singular matrix");
        std::swap(a[col], a[piv]);
        T inv_p = one / a[col][col];
        for (int j = 0; j < 2 * n; ++j) a[col][j] = a[col][j] * inv_p;
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            T f = a[row][col];
            if (f == zero) continue;
            for (int j = col; j < 2 * n; ++j) a[row][j] = a[row][j] - f * a[col][j];
        }
    }
    Tensor<T> inv(n, 0, 2, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = a[i][n + j];
    return inv;
}

} // namespace detail

template <class T>
struct Metric {
    Tensor<T> g;
    Tensor<T> g_inv;

    Metric() = default;

    explicit Metric(Tensor<T> metric, const T& zero = T{}, const T& one = T{1})
        : g(std::move(metric)) {
        if (g.contra() != 0 || g.cov() != 2) throw std::invalid_argument("metric: expected a (0,2) tensor");
        for (int i = 0; i < g.dim(); ++i)
            for (int j = i + 1; j < g.dim(); ++j)
                if (!(g(i, j) == g(j, i))) throw std::invalid_argument("metric: not symmetric");
        g_inv = detail::invert_matrix(g, zero, one);
    }

    int dim() const { return g.dim(); }
};

// ---------------------------------------------------------------------------
// Operations

namespace detail {
template <class T>
void require_cov(const Tensor<T>& t, const char* who) {
    if (t.contra() != 0) throw std::invalid_argument(std::string(who) + ": expected a purely covariant tensor");
}
template <class T>
void require_same(const Tensor<T>& a, const Tensor<T>& b, const char* who) {
    if (a.dim() != b.dim()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
} // namespace detail

// out.slot[sigma[s]] = in.slot[s]; sigma is a bijection on {0..k-1}.
template <class T>
Tensor<T> permute(const Tensor<T>& t, const std::vector<int>& sigma) {
    detail::require_cov(t, "permute");
    const int k = t.cov();
    if (static_cast<int>(sigma.size()) != k) throw std::invalid_argument("permute: sigma length != rank");
    std::vector<bool> seen(k, false);
    for (int s : sigma) {
        if (s < 0 || s >= k || seen[s]) throw std::invalid_argument("permute: sigma is not a bijection");
        seen[s] = true;
    }
    Tensor<T> out(t.dim(), 0, k, t.data()[0]);
    detail::IndexIter it(t.dim(), k);
    std::array<int, kMaxRank> oidx{};
    do {
        for (int s = 0; s < k; ++s) oidx[sigma[s]] = it.idx[s];
        out.at(oidx) = t.at(it.idx);
    } while (it.next());
    return out;
}

template <class T, class S>
Tensor<T> linear_combine(const std::vector<std::pair<S, Tensor<T>>>& terms) {
    if (terms.empty()) throw std::invalid_argument("linear_combine: empty term list");
    for (const auto& [c, t] : terms)
        if (!t.same_shape(terms.front().second))
            throw std::invalid_argument("linear_combine: mismatched shapes");
    Tensor<T> out = terms.front().second;
    auto& d = out.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = d[i] * terms.front().first;
    for (std::size_t t = 1; t < terms.size(); ++t) {
        const auto& src = terms[t].second.data();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = d[i] + src[i] * terms[t].first;
    }
    return out;
}

template <class T, class S>
Tensor<T> scale(const Tensor<T>& t, const S& c) {
    Tensor<T> out = t;
    for (auto& v : out.data()) v = v * c;
    return out;
}

template <class T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("add: mismatched shapes");
    Tensor<T> out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = out.data()[i] + b.data()[i];
    return out;
}

template <class T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("sub: mismatched shapes");
    Tensor<T> out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = out.data()[i] - b.data()[i];
    return out;
}

// g^{ab} T[.. a at slot_i .. b at slot_j ..]  ->  (0, k-2)
template <class T>
Tensor<T> metric_contract(const Tensor<T>& t, int slot_i, int slot_j, const Metric<T>& m) {
    detail::require_cov(t, "metric_contract");
    detail::require_same(t, m.g, "metric_contract");
    const int k = t.cov();
    if (k < 2) throw std::invalid_argument("metric_contract: rank must be >= 2");
    if (slot_i < 0 || slot_j < 0 || slot_i >= k || slot_j >= k || slot_i == slot_j)
        throw std::invalid_argument("metric_contract: slot out of range");
    if (slot_i > slot_j) std::swap(slot_i, slot_j);
    const int n = t.dim();
    const T zero = t.data()[0] - t.data()[0];
    Tensor<T> out(n, 0, k - 2, zero);
    detail::IndexIter it(n, k - 2);
    std::array<int, kMaxRank> full{};
    do {
        T sum = zero;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                int f = 0;
                for (int s = 0; s < k; ++s) {
                    if (s == slot_i) full[s] = a;
                    else if (s == slot_j) full[s] = b;
                    else full[s] = it.idx[f++];
                }
                sum = sum + m.g_inv(a, b) * t.at(full);
            }
        }
        out.at(it.idx) = sum;
    } while (it.next());
    return out;
}

// (A ^ E)[i,j,k,l] = A[i,l]E[j,k] + A[j,k]E[i,l] - A[i,k]E[j,l] - A[j,l]E[i,k]
template <class T>
Tensor<T> kulkarni_nomizu(const Tensor<T>& A, const Tensor<T>& E) {
    detail::require_same(A, E, "kulkarni_nomizu");
    if (A.cov() != 2 || E.cov() != 2 || A.contra() != 0 || E.contra() != 0)
        throw std::invalid_argument("kulkarni_nomizu: expected (0,2) tensors");
    const int n = A.dim();
    Tensor<T> out(n, 0, 4, A.data()[0] - A.data()[0]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    out(i, j, k, l) = A(i, l) * E(j, k) + A(j, k) * E(i, l)
                                    - A(i, k) * E(j, l) - A(j, l) * E(i, k);
    return out;
}

// G := (1/2) g ^ g, the normalization that makes Q(g,T) = G.T hold.
template <class T>
Tensor<T> wedge_half_gg(const Metric<T>& m) {
    const int n = m.dim();
    Tensor<T> out(n, 0, 4, m.g.data()[0] - m.g.data()[0]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    out(i, j, k, l) = m.g(i, l) * m.g(j, k) - m.g(i, k) * m.g(j, l);
    return out;
}

// (D.T)[i_1..i_k, x, y] = -sum_m g^{ab} D[x,y,i_m,b] T[.. a at slot m ..]
// The endomorphism is D with its last slot raised: (D(X,Y)Z)^a = g^{ab} D[X,Y,Z,b].
template <class T>
Tensor<T> curvature_dot(const Tensor<T>& D, const Tensor<T>& t, const Metric<T>& m) {
    detail::require_same(D, t, "curvature_dot");
    detail::require_same(D, m.g, "curvature_dot");
    if (D.cov() != 4 || D.contra() != 0) throw std::invalid_argument("curvature_dot: D must be (0,4)");
    detail::require_cov(t, "curvature_dot");
    const int n = D.dim();
    const int k = t.cov();
    if (k < 1) throw std::invalid_argument("curvature_dot: T must have rank >= 1");
    const T zero = D.data()[0] - D.data()[0];

    // Dhat[x,y,z,a] = g^{ab} D[x,y,z,b]
    Tensor<T> Dhat(n, 0, 4, zero);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int a = 0; a < n; ++a) {
                    T s = zero;
                    for (int b = 0; b < n; ++b) s = s + m.g_inv(a, b) * D(x, y, z, b);
                    Dhat(x, y, z, a) = s;
                }

    Tensor<T> out(n, 0, k + 2, zero);
    detail::IndexIter it(n, k + 2);
    std::array<int, kMaxRank> tidx{};
    do {
        const int x = it.idx[k];
        const int y = it.idx[k + 1];
        T sum = zero;
        for (int mslot = 0; mslot < k; ++mslot) {
            for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
            const int im = it.idx[mslot];
            for (int a = 0; a < n; ++a) {
                tidx[mslot] = a;
                sum = sum + Dhat(x, y, im, a) * t.at(tidx);
            }
        }
        out.at(it.idx) = zero - sum;
    } while (it.next());
    return out;
}

// Q(A,T)[i_1..i_k, x, y] = sum_m ( A[x,i_m] T[.. y at m ..] - A[y,i_m] T[.. x at m ..] )
template <class T>
Tensor<T> q_operator(const Tensor<T>& A, const Tensor<T>& t) {
    detail::require_same(A, t, "q_operator");
    if (A.cov() != 2 || A.contra() != 0) throw std::invalid_argument("q_operator: A must be (0,2)");
    detail::require_cov(t, "q_operator");
    const int n = A.dim();
    const int k = t.cov();
    const T zero = A.data()[0] - A.data()[0];
    Tensor<T> out(n, 0, k + 2, zero);
    detail::IndexIter it(n, k + 2);
    std::array<int, kMaxRank> tidx{};
    do {
        const int x = it.idx[k];
        const int y = it.idx[k + 1];
        T sum = zero;
        for (int mslot = 0; mslot < k; ++mslot) {
            for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
            const int im = it.idx[mslot];
            tidx[mslot] = y;
            sum = sum + A(x, im) * t.at(tidx);
            tidx[mslot] = x;
            sum = sum - A(y, im) * t.at(tidx);
        }
        out.at(it.idx) = sum;
    } while (it.next());
    return out;
}

// (Pi_X T)[i_1..i_k, x] = -sum_m Pi[i_m] T[.. x at m ..]
template <class T>
Tensor<T> oneform_action(const Tensor<T>& pi, const Tensor<T>& t) {
    detail::require_same(pi, t, "oneform_action");
    if (pi.cov() != 1 || pi.contra() != 0) throw std::invalid_argument("oneform_action: Pi must be (0,1)");
    detail::require_cov(t, "oneform_action");
    const int n = pi.dim();
    const int k = t.cov();
    const T zero = pi.data()[0] - pi.data()[0];
    Tensor<T> out(n, 0, k + 1, zero);
    detail::IndexIter it(n, k + 1);
    std::array<int, kMaxRank> tidx{};
    do {
        const int x = it.idx[k];
        T sum = zero;
        for (int mslot = 0; mslot < k; ++mslot) {
            for (int s = 0; s < k; ++s) tidx[s] = it.idx[s];
            const int im = it.idx[mslot];
            tidx[mslot] = x;
            sum = sum + pi(im) * t.at(tidx);
        }
        out.at(it.idx) = zero - sum;
    } while (it.next());
    return out;
}

// ---------------------------------------------------------------------------
// Norms and pairings (float tensors)

inline double max_abs(const Tensor<double>& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

// Componentwise (Frobenius) pairing; this is what the pointwise fits use.
inline double frobenius_dot(const Tensor<double>& a, const Tensor<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

// Metric-induced pairing <T,U> = g^{i1 j1}...g^{ik jk} T U. In indefinite
// signature it can vanish on nonzero tensors (e.g. pp-wave curvature), so it
// is for diagnostics, not for fitting.
inline double metric_pairing(const Tensor<double>& a, const Tensor<double>& b, const Metric<double>& m) {
    if (!a.same_shape(b)) throw std::invalid_argument("metric_pairing: mismatched shapes");
    const int k = a.cov();
    const int n = a.dim();
    double total = 0.0;
    detail::IndexIter it(n, k);
    detail::IndexIter jt(n, k);
    do {
        jt = detail::IndexIter(n, k);
        do {
            double w = 1.0;
            for (int s = 0; s < k; ++s) w *= m.g_inv(it.idx[s], jt.idx[s]);
            if (w != 0.0) total += w * a.at(it.idx) * b.at(jt.idx);
        } while (jt.next());
    } while (it.next());
    return total;
}

inline double rel_residual(const Tensor<double>& resid, double scale) {
    return max_abs(resid) / std::max(scale, 1e-300);
}

} // namespace curvclass
