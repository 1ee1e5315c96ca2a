#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "psb/errors.hpp"

namespace psb {

// Small exact rational on 64-bit words. Covers decimal exponents like c = 1.5
// (= 3/2) and the nu0 table values; magnitudes here never approach overflow.
struct rat {
    long long num = 0;
    long long den = 1;

    rat() = default;
    rat(long long n) : num(n), den(1) {}
    rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return double(num) / double(den); }

    long long floor_value() const {
        if (num >= 0) return num / den;
        return -((-num + den - 1) / den);
    }
    bool is_integer() const { return den == 1; }

    friend rat operator+(rat a, rat b) { return rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend rat operator-(rat a, rat b) { return rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend rat operator*(rat a, rat b) { return rat(a.num * b.num, a.den * b.den); }
    friend rat operator/(rat a, rat b) {
        if (b.num == 0) throw domain_error("rational division by zero");
        return rat(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(const rat& a, const rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const rat& a, const rat& b) { return !(a == b); }
    // Safe at the magnitudes used here (|num|, den < 2^31 in every table).
    friend bool operator<(const rat& a, const rat& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const rat& a, const rat& b) { return !(b < a); }
    friend bool operator>(const rat& a, const rat& b) { return b < a; }
    friend bool operator>=(const rat& a, const rat& b) { return !(a < b); }
};

// Parses a plain decimal string ("1.5", "2", "1.05") into an exact rational.
// Experiments carry c as a decimal string so that reruns are bit-for-bit.
inline rat parse_decimal(const std::string& s) {
    if (s.empty()) throw domain_error("empty decimal string");
    size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') { neg = s[pos] == '-'; ++pos; }
    long long ip = 0, fp = 0, scale = 1;
    bool any = false;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        ip = ip * 10 + (s[pos] - '0');
        ++pos;
        any = true;
        if (ip > (1LL << 56)) throw domain_error("decimal string too large: " + s);
    }
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            fp = fp * 10 + (s[pos] - '0');
            scale *= 10;
            ++pos;
            any = true;
            if (scale > 1000000000000000LL) throw domain_error("too many decimal digits: " + s);
        }
    }
    if (!any || pos != s.size()) throw domain_error("malformed decimal string: " + s);
    rat r(ip * scale + fp, scale);
    if (neg) r.num = -r.num;
    return r;
}

inline std::string decimal_string(const rat& r) {
    // Exact only when den is a product of 2s and 5s; that is the parse image.
    long long d = r.den;
    int e2 = 0, e5 = 0;
    while (d % 2 == 0) { d /= 2; ++e2; }
    while (d % 5 == 0) { d /= 5; ++e5; }
    if (d != 1) throw domain_error("rational has no finite decimal form");
    int digits = e2 > e5 ? e2 : e5;
    __int128 num = r.num;
    for (int i = 0; i < digits; ++i) num *= 10;
    num /= r.den;
    bool neg = num < 0;
    unsigned long long mag = (unsigned long long)(neg ? -num : num);
    std::string body = std::to_string(mag);
    while ((int)body.size() <= digits) body.insert(body.begin(), '0');
    if (digits > 0) body.insert(body.end() - digits, '.');
    return (neg ? "-" : "") + body;
}

} // namespace psb
