#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace brwre {

/// Exact rational arithmetic on checked 64-bit numerator/denominator.
///
/// The model layer works in rationals end to end so that probability sums,
/// certificate inequalities and d<=2 hull tests are decided with zero
/// tolerance. Intermediates go through __int128; anything that would leave
/// the 64-bit range after normalization throws std::overflow_error instead
/// of wrapping.
class Rat {
public:
    constexpr Rat() : num_(0), den_(1) {}
    Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    /// Integer power with sign-aware exponent; overflow-checked like the rest.
    Rat pow(int e) const {
        if (e == 0) return Rat(1);
        Rat base = *this;
        if (e < 0) {
            base = Rat(1) / base;
            e = -e;
        }
        Rat acc(1);
        for (int i = 0; i < e; ++i) acc *= base;
        return acc;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p/q" or "p". Throws std::invalid_argument on malformed input,
    /// including a zero denominator.
    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                size_t pos = 0;
                std::int64_t n = std::stoll(s, &pos);
                if (pos != s.size()) throw std::invalid_argument(s);
                return Rat(n);
            }
            size_t pn = 0, pd = 0;
            std::int64_t n = std::stoll(s.substr(0, slash), &pn);
            std::int64_t d = std::stoll(s.substr(slash + 1), &pd);
            if (pn != slash || pd != s.size() - slash - 1 || d == 0)
                throw std::invalid_argument(s);
            return Rat(n, d);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("malformed rational: '" + s + "'");
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("rational out of range: '" + s + "'");
        }
    }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        Rat r = from_i128(i128(n), i128(d));
        num_ = r.num_;
        den_ = r.den_;
    }

    static Rat from_i128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lo = static_cast<__int128>(INT64_MIN);
        constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational overflow");
        Rat r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace brwre
