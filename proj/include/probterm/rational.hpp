// Exact integer/rational arithmetic kernel (arbitrary precision).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace probterm {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_pow(const Rat& base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rat_pow: zero to a negative power");
        return 1 / rat_pow(base, -exp);
    }
    Rat result = 1;
    Rat acc = base;
    for (long e = exp; e > 0; e >>= 1) {
        if (e & 1) result *= acc;
        acc *= acc;
    }
    return result;
}

// Parses "3", "-3", "3/4", "0.25" into an exact rational.
inline Rat parse_rational(const std::string& text) {
    auto bad = [&] { throw std::invalid_argument("not a rational literal: '" + text + "'"); };
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) bad();
    auto slash = s.find('/');
    Rat value;
    if (slash != std::string::npos) {
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        if (a.empty() || b.empty()) bad();
        for (char c : a + b)
            if (!isdigit(static_cast<unsigned char>(c))) bad();
        Int den(b);
        if (den == 0) bad();
        value = Rat(Int(a), den);
    } else {
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            for (char c : s)
                if (!isdigit(static_cast<unsigned char>(c))) bad();
            value = Rat(Int(s));
        } else {
            std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
            if (ip.empty() && fp.empty()) bad();
            for (char c : ip + fp)
                if (!isdigit(static_cast<unsigned char>(c))) bad();
            Int scale = 1;
            for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
            value = Rat(Int(ip.empty() ? "0" : ip) * scale + Int(fp.empty() ? "0" : fp), scale);
        }
    }
    return neg ? Rat(-value) : value;
}

} // namespace probterm
