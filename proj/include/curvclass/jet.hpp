#pragma once

// Forward-mode truncated Taylor expansion of a scalar field at a point.
// Coefficients are stored in monomial convention: f(x0 + h) = sum c_alpha h^alpha,
// so c_alpha = (partial^alpha f)(x0) / alpha!.
//
// Binary operations truncate to the smaller order of the two operands, which
// is exactly the order bookkeeping the curvature engine needs (each partial
// derivative costs one order).

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace curvclass {

namespace detail {

struct MonomialTable {
    int nvars = 0;
    int order = 0;
    std::vector<std::vector<int>> exps;     // graded order, exps[0] = constant
    std::vector<int> degree;                // total degree per monomial
    std::vector<std::vector<int>> product;  // product[i][j] = index of exps[i]+exps[j], -1 if beyond order
    std::vector<std::vector<int>> shift;    // shift[i][v] = index of exps[i]+e_v, -1 if beyond order

    static std::shared_ptr<const MonomialTable> get(int nvars, int order) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(nvars, order);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto t = std::make_shared<MonomialTable>();
        t->nvars = nvars;
        t->order = order;
        // enumerate exponent tuples of total degree 0..order, graded
        std::vector<int> cur(nvars, 0);
        for (int d = 0; d <= order; ++d) enumerate(*t, cur, 0, d, d);
        std::map<std::vector<int>, int> index;
        for (std::size_t i = 0; i < t->exps.size(); ++i) index[t->exps[i]] = static_cast<int>(i);
        const int m = static_cast<int>(t->exps.size());
        t->product.assign(m, std::vector<int>(m, -1));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (t->degree[i] + t->degree[j] > order) continue;
                std::vector<int> s(nvars);
                for (int v = 0; v < nvars; ++v) s[v] = t->exps[i][v] + t->exps[j][v];
                t->product[i][j] = index.at(s);
            }
        t->shift.assign(m, std::vector<int>(nvars, -1));
        for (int i = 0; i < m; ++i)
            for (int v = 0; v < nvars; ++v) {
                if (t->degree[i] + 1 > order) continue;
                std::vector<int> s = t->exps[i];
                s[v] += 1;
                t->shift[i][v] = index.at(s);
            }
        cache[key] = t;
        return t;
    }

private:
    static void enumerate(MonomialTable& t, std::vector<int>& cur, int var, int remaining, int total) {
        if (var == t.nvars) {
            if (remaining == 0) {
                t.exps.push_back(cur);
                t.degree.push_back(total);
            }
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[var] = e;
            enumerate(t, cur, var + 1, remaining - e, total);
        }
        cur[var] = 0;
    }
};

} // namespace detail

class Jet {
public:
    static constexpr int kMaxOrder = 4;

    Jet() = default;

    static Jet constant(double v, int nvars, int order) {
        Jet j(nvars, order);
        j.c_[0] = v;
        return j;
    }

    static Jet variable(int i, double value, int nvars, int order) {
        if (i < 0 || i >= nvars) throw std::invalid_argument("jet: variable index out of range");
        Jet j(nvars, order);
        j.c_[0] = value;
        if (order >= 1) j.c_[1 + i] = 1.0; // graded order: monomials of degree 1 follow the constant
        return j;
    }

    int nvars() const { return table_ ? table_->nvars : 0; }
    int order() const { return table_ ? table_->order : 0; }
    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    double pivot_magnitude() const { return std::abs(value()); }

    // first partial at the base point
    double partial(int i) const {
        if (order() < 1) throw std::logic_error("jet: order too low for a first partial");
        return c_[1 + i];
    }

    // second partial at the base point (undoes the 1/alpha! convention)
    double partial2(int i, int j) const {
        if (order() < 2) throw std::logic_error("jet: order too low for a second partial");
        std::vector<int> e(nvars(), 0);
        e[i] += 1;
        e[j] += 1;
        int idx = index_of(e);
        return (i == j) ? 2.0 * c_[idx] : c_[idx];
    }

    // derivative as a jet of one lower order
    Jet partial_jet(int v) const {
        if (order() < 1) throw std::logic_error("jet: order too low to differentiate");
        Jet out(nvars(), order() - 1);
        for (std::size_t i = 0; i < out.c_.size(); ++i) {
            // same graded enumeration prefix: monomial i of the smaller table
            const auto& e = out.table_->exps[i];
            std::vector<int> s = e;
            s[v] += 1;
            int src = index_of(s);
            out.c_[i] = c_[src] * static_cast<double>(e[v] + 1);
        }
        return out;
    }

    Jet truncated(int new_order) const {
        if (new_order >= order()) return *this;
        Jet out(nvars(), new_order);
        for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = c_[i];
        return out;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        auto [x, y] = aligned(a, b);
        for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
        return x;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        auto [x, y] = aligned(a, b);
        for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
        return x;
    }
    Jet operator-() const {
        Jet out = *this;
        for (auto& v : out.c_) v = -v;
        return out;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        auto [x, y] = aligned(a, b);
        Jet out(x.nvars(), x.order());
        const auto& prod = out.table_->product;
        for (std::size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i] == 0.0) continue;
            for (std::size_t j = 0; j < y.c_.size(); ++j) {
                int k = prod[i][j];
                if (k >= 0) out.c_[k] += x.c_[i] * y.c_[j];
            }
        }
        return out;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

    friend Jet operator+(const Jet& a, double s) { Jet o = a; o.c_[0] += s; return o; }
    friend Jet operator+(double s, const Jet& a) { return a + s; }
    friend Jet operator-(const Jet& a, double s) { return a + (-s); }
    friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(const Jet& a, double s) {
        Jet o = a;
        for (auto& v : o.c_) v *= s;
        return o;
    }
    friend Jet operator*(double s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
    friend Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

    friend bool operator==(const Jet& a, const Jet& b) {
        return a.nvars() == b.nvars() && a.order() == b.order() && a.c_ == b.c_;
    }

    // result = sum_j taylor[j] * (u - u0)^j, taylor[j] = f^(j)(u0)/j!
    static Jet compose(const Jet& u, const std::vector<double>& taylor) {
        Jet h = u;
        h.c_[0] = 0.0;
        Jet r = Jet::constant(taylor.back(), u.nvars(), u.order());
        for (int j = static_cast<int>(taylor.size()) - 2; j >= 0; --j)
            r = r * h + taylor[j];
        return r;
    }

    friend Jet exp(const Jet& u) {
        const double e0 = std::exp(u.value());
        std::vector<double> t(u.order() + 1);
        double f = 1.0;
        for (int j = 0; j <= u.order(); ++j) {
            t[j] = e0 / f;
            f *= (j + 1);
        }
        return compose(u, t);
    }
    friend Jet log(const Jet& u) {
        const double c = u.value();
        if (c <= 0.0) throw std::domain_error("jet: log requires positive value");
        std::vector<double> t(u.order() + 1);
        t[0] = std::log(c);
        for (int j = 1; j <= u.order(); ++j)
            t[j] = ((j % 2 == 1) ? 1.0 : -1.0) / (j * std::pow(c, j));
        return compose(u, t);
    }
    friend Jet sin(const Jet& u) {
        const double s = std::sin(u.value()), c = std::cos(u.value());
        static const double cycle_sign[4] = {1.0, 1.0, -1.0, -1.0}; // sin, cos, -sin, -cos
        std::vector<double> t(u.order() + 1);
        double f = 1.0;
        for (int j = 0; j <= u.order(); ++j) {
            t[j] = cycle_sign[j % 4] * ((j % 2 == 0) ? s : c) / f;
            f *= (j + 1);
        }
        return compose(u, t);
    }
    friend Jet cos(const Jet& u) {
        const double s = std::sin(u.value()), c = std::cos(u.value());
        static const double cycle_sign[4] = {1.0, -1.0, -1.0, 1.0}; // cos, -sin, -cos, sin
        std::vector<double> t(u.order() + 1);
        double f = 1.0;
        for (int j = 0; j <= u.order(); ++j) {
            t[j] = cycle_sign[j % 4] * ((j % 2 == 0) ? c : s) / f;
            f *= (j + 1);
        }
        return compose(u, t);
    }
    friend Jet pow(const Jet& u, double p) {
        const double c = u.value();
        if (c == 0.0) throw std::domain_error("jet: pow at zero value");
        std::vector<double> t(u.order() + 1);
        double coef = std::pow(c, p);
        double f = 1.0;
        for (int j = 0; j <= u.order(); ++j) {
            t[j] = coef / f;
            coef *= (p - j) / c;
            f *= (j + 1);
        }
        return compose(u, t);
    }
    friend Jet sqrt(const Jet& u) { return pow(u, 0.5); }

    static Jet reciprocal(const Jet& u) {
        const double c = u.value();
        if (c == 0.0) throw std::domain_error("jet: division by a jet with zero value");
        std::vector<double> t(u.order() + 1);
        double coef = 1.0 / c;
        for (int j = 0; j <= u.order(); ++j) {
            t[j] = coef;
            coef = -coef / c;
        }
        return compose(u, t);
    }

private:
    Jet(int nvars, int order) {
        if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet: order out of range");
        table_ = detail::MonomialTable::get(nvars, order);
        c_.assign(table_->exps.size(), 0.0);
    }

    int index_of(const std::vector<int>& e) const {
        // linear scan is fine: tables are tiny and this is off the hot path
        for (std::size_t i = 0; i < table_->exps.size(); ++i)
            if (table_->exps[i] == e) return static_cast<int>(i);
        throw std::logic_error("jet: monomial not in table");
    }

    static std::pair<Jet, Jet> aligned(const Jet& a, const Jet& b) {
        if (a.nvars() != b.nvars()) throw std::invalid_argument("jet: mixed variable counts");
        const int o = std::min(a.order(), b.order());
        return {a.truncated(o), b.truncated(o)};
    }

    std::shared_ptr<const detail::MonomialTable> table_;
    std::vector<double> c_;
};

} // namespace curvclass
