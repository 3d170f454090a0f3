#pragma once

// Exact rational scalar type and small parsing/conversion helpers.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace teich {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

// Accepts "p", "-p", "p/q", "-p/q" with decimal digits only.
inline std::optional<Rat> parse_rat(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '-' || text[pos] == '+') {
        negative = (text[pos] == '-');
        ++pos;
    }
    auto read_digits = [&](BigInt& out) -> bool {
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return false;
        out = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            out = out * 10 + (text[pos] - '0');
            ++pos;
        }
        return true;
    };
    BigInt num;
    if (!read_digits(num)) return std::nullopt;
    BigInt den = 1;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!read_digits(den)) return std::nullopt;
        if (den == 0) return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;
    Rat value(num, den);
    return negative ? Rat(-value) : value;
}

inline std::optional<BigInt> exact_sqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt root = boost::multiprecision::sqrt(n);
    if (root * root != n) return std::nullopt;
    return root;
}

// Rational square root when one exists (both numerator and denominator perfect squares).
inline std::optional<Rat> exact_sqrt(const Rat& r) {
    auto num = exact_sqrt(numerator(r));
    if (!num) return std::nullopt;
    auto den = exact_sqrt(denominator(r));
    if (!den) return std::nullopt;
    return Rat(*num, *den);
}

inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

}  // namespace teich
