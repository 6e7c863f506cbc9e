#pragma once

// Built-in metrics with known curvature properties; the ground-truth fixtures
// for the verification suites. Every expected property is checked by the
// engine in the self-test suite.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvclass/metric_field.hpp"
#include "curvclass/rng.hpp"

namespace curvclass {

struct ExpectedProperties {
    bool flat = false;
    bool ricci_flat = false;
    bool constant_curvature = false;
    bool conformally_flat = false;   // ||C|| ~ 0
    bool locally_symmetric = false;  // ||nabla R|| ~ 0
    // recurrence 1-form of nabla R = Pi (x) R where known (pp-waves)
    std::function<std::vector<double>(const std::vector<double>&)> recurrence_form;
};

struct CatalogMetric {
    std::string name;
    MetricField field;
    // `count` admissible quasi-random points, reproducible from `seed`
    std::function<std::vector<std::vector<double>>(int count, std::uint64_t seed)> sample;
    ExpectedProperties expected;
};

namespace detail {

inline std::function<std::vector<std::vector<double>>(int, std::uint64_t)>
box_sampler(std::vector<double> lo, std::vector<double> hi,
            std::function<bool(const std::vector<double>&)> admissible) {
    return [lo = std::move(lo), hi = std::move(hi), admissible = std::move(admissible)](
               int count, std::uint64_t seed) {
        SplitMix64 rng(seed ^ 0x5bf03635f0a5b217ull);
        std::vector<std::vector<double>> pts;
        int guard = 0;
        while (static_cast<int>(pts.size()) < count) {
            if (++guard > 1000 * count) throw std::runtime_error("sampler: cannot find admissible points");
            std::vector<double> p = rng.point_in_box(lo, hi);
            if (admissible(p)) pts.push_back(std::move(p));
        }
        return pts;
    };
}

inline Jet poly1(const std::vector<double>& coeffs, const Jet& t) {
    Jet r = Jet::constant(coeffs.empty() ? 0.0 : coeffs.back(), t.nvars(), t.order());
    for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i) r = r * t + coeffs[i];
    return r;
}

inline double poly1_val(const std::vector<double>& coeffs, double t) {
    double r = coeffs.empty() ? 0.0 : coeffs.back();
    for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i) r = r * t + coeffs[i];
    return r;
}

inline double poly1_deriv_val(const std::vector<double>& coeffs, double t) {
    double r = 0.0;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) r = r * t + k * coeffs[k];
    return r;
}

} // namespace detail

inline CatalogMetric metric_flat_euclidean(int n) {
    CatalogMetric cm;
    cm.name = "flat-euclidean:" + std::to_string(n);
    cm.field.dim = n;
    cm.field.components = [n](const std::vector<double>&, int order) {
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        for (int i = 0; i < n; ++i) g(i, i) = Jet::constant(1.0, n, order);
        return g;
    };
    cm.sample = detail::box_sampler(std::vector<double>(n, -0.5), std::vector<double>(n, 0.5),
                                    [](const std::vector<double>&) { return true; });
    cm.expected.flat = cm.expected.ricci_flat = cm.expected.constant_curvature = true;
    cm.expected.conformally_flat = cm.expected.locally_symmetric = true;
    return cm;
}

inline CatalogMetric metric_minkowski(int n) {
    CatalogMetric cm = metric_flat_euclidean(n);
    cm.name = "minkowski:" + std::to_string(n);
    cm.field.components = [n](const std::vector<double>&, int order) {
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        g(0, 0) = Jet::constant(-1.0, n, order);
        for (int i = 1; i < n; ++i) g(i, i) = Jet::constant(1.0, n, order);
        return g;
    };
    return cm;
}

// round sphere of radius rho in nested polar coordinates:
// g_kk = rho^2 prod_{j<k} sin^2(theta_j)
inline CatalogMetric metric_sphere(int n, double rho = 1.0) {
    CatalogMetric cm;
    cm.name = "sphere:" + std::to_string(n);
    cm.field.dim = n;
    cm.field.components = [n, rho](const std::vector<double>& p, int order) {
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        Jet acc = Jet::constant(rho * rho, n, order);
        for (int k = 0; k < n; ++k) {
            g(k, k) = acc;
            if (k + 1 < n) {
                Jet s = sin(Jet::variable(k, p[k], n, order));
                acc = acc * s * s;
            }
        }
        return g;
    };
    auto admissible = [n](const std::vector<double>& p) {
        for (int j = 0; j + 1 < n; ++j)
            if (p[j] < 0.3 || p[j] > M_PI - 0.3) return false;
        return true;
    };
    cm.field.admissible = admissible;
    std::vector<double> lo(n, 0.5), hi(n, M_PI - 0.5);
    lo[n - 1] = 0.0;
    hi[n - 1] = 1.0;
    cm.sample = detail::box_sampler(lo, hi, admissible);
    cm.expected.constant_curvature = true;
    cm.expected.conformally_flat = true;
    cm.expected.locally_symmetric = true;
    return cm;
}

// upper half-space model, curvature -1/rho^2; last coordinate is the height
inline CatalogMetric metric_hyperbolic(int n, double rho = 1.0) {
    CatalogMetric cm;
    cm.name = "hyperbolic:" + std::to_string(n);
    cm.field.dim = n;
    cm.field.components = [n, rho](const std::vector<double>& p, int order) {
        Jet h = Jet::variable(n - 1, p[n - 1], n, order);
        Jet conf = Jet::constant(rho * rho, n, order) / (h * h);
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        for (int i = 0; i < n; ++i) g(i, i) = conf;
        return g;
    };
    auto admissible = [n](const std::vector<double>& p) { return p[n - 1] > 0.5; };
    cm.field.admissible = admissible;
    std::vector<double> lo(n, -0.5), hi(n, 0.5);
    lo[n - 1] = 0.7;
    hi[n - 1] = 1.5;
    cm.sample = detail::box_sampler(lo, hi, admissible);
    cm.expected.constant_curvature = true;
    cm.expected.conformally_flat = true;
    cm.expected.locally_symmetric = true;
    return cm;
}

// (t, r, theta, phi), mass m
inline CatalogMetric metric_schwarzschild(double mass = 1.0) {
    const int n = 4;
    CatalogMetric cm;
    cm.name = "schwarzschild";
    cm.field.dim = n;
    cm.field.components = [mass](const std::vector<double>& p, int order) {
        Jet r = Jet::variable(1, p[1], n, order);
        Jet th = Jet::variable(2, p[2], n, order);
        Jet f = 1.0 - (2.0 * mass) / r;
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        g(0, 0) = -f;
        g(1, 1) = 1.0 / f;
        g(2, 2) = r * r;
        Jet s = sin(th);
        g(3, 3) = r * r * s * s;
        return g;
    };
    auto admissible = [mass](const std::vector<double>& p) {
        return p[1] > 2.0 * mass * 1.25 && p[2] > 0.3 && p[2] < M_PI - 0.3;
    };
    cm.field.admissible = admissible;
    cm.sample = detail::box_sampler({0.0, 2.7 * mass, 0.7, 0.0}, {1.0, 4.4 * mass, 2.4, 1.0}, admissible);
    cm.expected.ricci_flat = true;
    return cm;
}

// g = -dt^2 + a(t)^2 (dx^2 + ...), a a polynomial
inline CatalogMetric metric_flrw(std::vector<double> scale_coeffs = {1.0, 0.2, 0.05}) {
    const int n = 4;
    CatalogMetric cm;
    cm.name = "flrw";
    cm.field.dim = n;
    cm.field.components = [coeffs = scale_coeffs](const std::vector<double>& p, int order) {
        Jet t = Jet::variable(0, p[0], n, order);
        Jet a = detail::poly1(coeffs, t);
        Jet a2 = a * a;
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        g(0, 0) = Jet::constant(-1.0, n, order);
        for (int i = 1; i < n; ++i) g(i, i) = a2;
        return g;
    };
    auto admissible = [coeffs = scale_coeffs](const std::vector<double>& p) {
        return detail::poly1_val(coeffs, p[0]) > 0.1;
    };
    cm.field.admissible = admissible;
    cm.sample = detail::box_sampler(std::vector<double>(n, -0.4), std::vector<double>(n, 0.4), admissible);
    cm.expected.conformally_flat = true;
    return cm;
}

// g = 2 du dv + f(u)(x^2 - y^2) du^2 + dx^2 + dy^2, coordinates (u, v, x, y).
// The canonical recurrent, non-symmetric, Ricci-flat fixture; for f = e^u the
// recurrence form is exactly du.
inline CatalogMetric metric_pp_wave(const std::string& fspec = "exp",
                                    std::vector<double> fcoeffs = {}) {
    const int n = 4;
    const bool is_exp = fspec == "exp";
    if (!is_exp && fspec != "poly") throw std::invalid_argument("pp-wave: f-spec must be 'exp' or 'poly'");
    CatalogMetric cm;
    cm.name = "pp-wave:" + fspec;
    cm.field.dim = n;
    cm.field.components = [is_exp, fcoeffs](const std::vector<double>& p, int order) {
        Jet u = Jet::variable(0, p[0], n, order);
        Jet x = Jet::variable(2, p[2], n, order);
        Jet y = Jet::variable(3, p[3], n, order);
        Jet f = is_exp ? exp(u) : detail::poly1(fcoeffs, u);
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        g(0, 0) = f * (x * x - y * y);
        g(0, 1) = Jet::constant(1.0, n, order);
        g(1, 0) = g(0, 1);
        g(2, 2) = Jet::constant(1.0, n, order);
        g(3, 3) = Jet::constant(1.0, n, order);
        return g;
    };
    cm.sample = detail::box_sampler(std::vector<double>(n, -0.5), std::vector<double>(n, 0.5),
                                    [](const std::vector<double>&) { return true; });
    cm.expected.ricci_flat = true;
    cm.expected.recurrence_form = [is_exp, fcoeffs](const std::vector<double>& p) {
        double ratio = is_exp ? 1.0
                              : detail::poly1_deriv_val(fcoeffs, p[0]) / detail::poly1_val(fcoeffs, p[0]);
        return std::vector<double>{ratio, 0.0, 0.0, 0.0};
    };
    return cm;
}

// identity plus a seeded polynomial perturbation, |h_ij| <= amplitude on the
// sample cube [-0.5, 0.5]^n; byte-reproducible for a fixed seed
inline CatalogMetric metric_random_polynomial(int n, std::uint64_t seed, int degree = 3,
                                              double amplitude = 0.1) {
    struct Term {
        int i, j;
        double coeff;
        std::vector<int> exps;
    };
    // enumerate monomials 1 <= |beta| <= degree
    std::vector<std::vector<int>> monoms;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> enumerate = [&](int var, int remaining) {
        if (var == n) {
            if (remaining == 0) monoms.push_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[var] = e;
            enumerate(var + 1, remaining - e);
        }
        cur[var] = 0;
    };
    for (int d = 1; d <= degree; ++d) enumerate(0, d);

    SplitMix64 rng(seed ^ 0x9d1f29a3cd1ull);
    const double per_term = amplitude / static_cast<double>(monoms.size());
    auto terms = std::make_shared<std::vector<Term>>();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (const auto& m : monoms)
                terms->push_back({i, j, rng.uniform(-per_term, per_term), m});

    CatalogMetric cm;
    cm.name = "random-polynomial:" + std::to_string(n) + ":" + std::to_string(seed);
    cm.field.dim = n;
    cm.field.components = [n, terms](const std::vector<double>& p, int order) {
        Tensor<Jet> g(n, 0, 2, Jet::constant(0.0, n, order));
        for (int i = 0; i < n; ++i) g(i, i) = Jet::constant(1.0, n, order);
        std::vector<Jet> vars;
        vars.reserve(n);
        for (int v = 0; v < n; ++v) vars.push_back(Jet::variable(v, p[v], n, order));
        for (const auto& t : *terms) {
            Jet term = Jet::constant(t.coeff, n, order);
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

// ---------------------------------------------------------------------------
// Name-based access, colon-separated arguments: sphere:3:1, schwarzschild:1,
// pp-wave:exp, pp-wave:poly:1,0.5, flrw:1,0.2,0.05, random-polynomial:3:42:3:0.1

inline std::vector<std::string> metric_catalog_list() {
    return {"flat-euclidean:<n>",
            "minkowski:<n>",
            "sphere:<n>[:<radius>]",
            "hyperbolic:<n>[:<radius>]",
            "schwarzschild[:<mass>]",
            "flrw[:<a0,a1,...>]",
            "pp-wave[:exp|poly:<c0,c1,...>]",
            "random-polynomial:<n>:<seed>[:<degree>[:<amplitude>]]"};
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else cur.push_back(ch);
    }
    out.push_back(cur);
    return out;
}

inline std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(std::stod(tok));
    return out;
}

} // namespace detail

inline CatalogMetric metric_from_spec(const std::string& spec) {
    auto parts = detail::split(spec, ':');
    const std::string& name = parts[0];
    auto argc = parts.size() - 1;
    auto arg = [&](size_t i) -> const std::string& { return parts[i + 1]; };
    try {
        if (name == "flat-euclidean") return metric_flat_euclidean(argc >= 1 ? std::stoi(arg(0)) : 4);
        if (name == "minkowski") return metric_minkowski(argc >= 1 ? std::stoi(arg(0)) : 4);
        if (name == "sphere")
            return metric_sphere(argc >= 1 ? std::stoi(arg(0)) : 3, argc >= 2 ? std::stod(arg(1)) : 1.0);
        if (name == "hyperbolic")
            return metric_hyperbolic(argc >= 1 ? std::stoi(arg(0)) : 3, argc >= 2 ? std::stod(arg(1)) : 1.0);
        if (name == "schwarzschild") return metric_schwarzschild(argc >= 1 ? std::stod(arg(0)) : 1.0);
        if (name == "flrw")
            return metric_flrw(argc >= 1 ? detail::parse_doubles(arg(0)) : std::vector<double>{1.0, 0.2, 0.05});
        if (name == "pp-wave") {
            if (argc == 0 || arg(0) == "exp") return metric_pp_wave("exp");
            return metric_pp_wave("poly", argc >= 2 ? detail::parse_doubles(arg(1)) : std::vector<double>{1.0, 0.5});
        }
        if (name == "random-polynomial") {
            if (argc < 2) throw std::invalid_argument("random-polynomial needs <n>:<seed>");
            return metric_random_polynomial(std::stoi(arg(0)), std::stoull(arg(1)),
                                            argc >= 3 ? std::stoi(arg(2)) : 3,
                                            argc >= 4 ? std::stod(arg(3)) : 0.1);
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument("metric spec '" + spec + "': " + e.what());
    }
    throw std::invalid_argument("unknown metric '" + name + "'");
}

} // namespace curvclass
