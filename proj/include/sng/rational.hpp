#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sng {

// Exact rational arithmetic on 64-bit numerator/denominator pairs.
// Values are kept canonical: gcd(num, den) == 1 and den > 0.
// Intermediates are computed in 128 bits; results that do not fit back
// into 64 bits throw std::overflow_error instead of wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        normalize(static_cast<__int128>(n), static_cast<__int128>(d));
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                    i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                    i128(a.den_) * b.den_);
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
        r.num_ = -num_;  // canonical values are > INT64_MIN, safe to negate
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

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

    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    // Canonical form, always with an explicit denominator: "3/1", "-7/10".
    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    // Human form: integers print without the "/1".
    std::string pretty() const {
        if (den_ == 1) return std::to_string(num_);
        return str();
    }

    // Accepts "3", "-3", "3/5", "-3/5". Anything else (decimals included) throws.
    static Rational parse(std::string_view s) {
        std::size_t slash = s.find('/');
        if (slash == std::string_view::npos)
            return Rational(parse_int(s));
        return Rational(parse_int(s.substr(0, slash)),
                        parse_int(s.substr(slash + 1)));
    }

private:
    using i128 = __int128;

    std::int64_t num_;
    std::int64_t den_;

    static i128 gcd128(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize(i128 n, i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            return;
        }
        i128 g = gcd128(n, d);
        n /= g;
        d /= g;
        if (n < INT64_MIN || n > INT64_MAX || d > INT64_MAX)
            throw std::overflow_error("rational: value out of 64-bit range");
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    }

    static Rational make(i128 n, i128 d) {
        Rational r;
        r.normalize(n, d);
        return r;
    }

    static std::int64_t parse_int(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("rational: empty number");
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
            if (i == s.size()) throw std::invalid_argument("rational: bare sign");
        }
        i128 v = 0;
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c < '0' || c > '9')
                throw std::invalid_argument(std::string("rational: bad character in \"") +
                                            std::string(s) + "\"");
            v = v * 10 + (c - '0');
            if (v > i128(INT64_MAX) + 1)
                throw std::overflow_error("rational: literal out of range");
        }
        if (neg) v = -v;
        if (v < INT64_MIN || v > INT64_MAX)
            throw std::overflow_error("rational: literal out of range");
        return static_cast<std::int64_t>(v);
    }
};

}  // namespace sng
