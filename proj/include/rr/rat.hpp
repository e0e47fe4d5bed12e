#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rr {

/// Exact rational on int64 storage with __int128 intermediates.
///
/// Covers every enumeration-scale quantity in this library: masses are
/// multiples of 1/n! with n <= 8 and head sums stay far below 2^63.
/// Construction and arithmetic throw on overflow instead of wrapping.
class Rat64 {
public:
    Rat64() : num_(0), den_(1) {}
    Rat64(std::int64_t n) : num_(n), den_(1) {}
    Rat64(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::domain_error("Rat64: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num_ = g ? num / g : num;
        den_ = g ? den / g : den;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    bool is_zero() const { return num_ == 0; }

    friend Rat64 operator+(const Rat64& a, const Rat64& b) {
        const __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        const __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rat64 operator-(const Rat64& a, const Rat64& b) {
        const __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        const __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rat64 operator*(const Rat64& a, const Rat64& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat64 operator/(const Rat64& a, const Rat64& b) {
        if (b.num_ == 0) throw std::domain_error("Rat64: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat64 operator-() const { return Rat64(-num_, den_); }
    Rat64& operator+=(const Rat64& o) { return *this = *this + o; }
    Rat64& operator-=(const Rat64& o) { return *this = *this - o; }
    Rat64& operator*=(const Rat64& o) { return *this = *this * o; }
    Rat64& operator/=(const Rat64& o) { return *this = *this / o; }

    friend bool operator==(const Rat64& a, const Rat64& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat64& a, const Rat64& b) { return !(a == b); }
    friend bool operator<(const Rat64& a, const Rat64& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rat64& a, const Rat64& b) { return b < a; }
    friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }
    friend bool operator>=(const Rat64& a, const Rat64& b) { return !(a < b); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static Rat64 make(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        const __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rat64: value exceeds 64-bit rational range");
        Rat64 r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

/// n! as int64; valid for n <= 20.
inline std::int64_t factorial64(int n) {
    if (n < 0 || n > 20) throw std::domain_error("factorial64: n out of [0,20]");
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace rr
