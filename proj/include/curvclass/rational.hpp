#pragma once

// Exact rational scalar for the coefficient algebra. Kept deliberately small:
// int64 numerator/denominator, always normalized (gcd 1, denominator > 0),
// __int128 intermediates with an overflow check on the way back down.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvclass {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(long long n, long long d) { assign(n, d); }

    // Accepts "p", "-p/q", with optional surrounding whitespace.
    static Rational parse(std::string_view s) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        if (b == std::string_view::npos) throw std::invalid_argument("rational: empty string");
        s = s.substr(b, e - b + 1);
        size_t slash = s.find('/');
        try {
            if (slash == std::string_view::npos)
                return Rational(std::stoll(std::string(s)));
            long long n = std::stoll(std::string(s.substr(0, slash)));
            long long d = std::stoll(std::string(s.substr(slash + 1)));
            return Rational(n, d);
        } catch (const std::exception&) {
            throw std::invalid_argument("rational: cannot parse '" + std::string(s) + "'");
        }
    }

    long long num() const { return num_; }
    long long den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational abs(const Rational& a) { return a.num_ < 0 ? -a : a; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using i128 = __int128;

    void assign(long long n, long long d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    static Rational make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 an = n < 0 ? -n : n;
        i128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lim = i128(INT64_MAX);
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("rational: 64-bit overflow after reduction");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    long long num_;
    long long den_;
};

} // namespace curvclass
