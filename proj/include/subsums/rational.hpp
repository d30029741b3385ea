#pragma once

/// Exact arithmetic used everywhere in the library: arbitrary-precision
/// integers and rationals (Boost.Multiprecision), strict parsing of the
/// `[-]digits[/digits]` rational format, and decimal rendering helpers.

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "subsums/errors.hpp"

namespace subsums {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

inline Int int_pow(const Int& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

inline Int pow10(unsigned exp) { return int_pow(Int(10), exp); }

inline bool is_integer(const Rat& value) { return denominator(value) == 1; }

inline Rat rat_abs(const Rat& value) { return value < 0 ? Rat(-value) : value; }

// Strict format: optional leading '-', then digits, then optionally
// '/' and more digits (denominator > 0 by construction, but "x/0" is
// rejected explicitly). No whitespace, no '+', no exponents.
inline std::optional<Rat> parse_rational(std::string_view text) {
    std::size_t pos = 0;
    const bool negative = !text.empty() && text[0] == '-';
    if (negative) pos = 1;

    const auto take_digits = [&](std::string& out) {
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            out.push_back(text[pos]);
            ++pos;
        }
        return pos > start;
    };

    std::string num_digits;
    if (!take_digits(num_digits)) return std::nullopt;

    std::string den_digits = "1";
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den_digits.clear();
        if (!take_digits(den_digits)) return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    Int num(num_digits);
    Int den(den_digits);
    if (den == 0) return std::nullopt;
    if (negative) num = -num;
    return Rat(num, den);
}

inline Rat parse_rational_or_throw(std::string_view text, std::string_view context) {
    auto parsed = parse_rational(text);
    if (!parsed) {
        throw validation_error(std::string(context) + ": cannot parse rational '" +
                               std::string(text) + "' (expected [-]digits[/digits], denominator > 0)");
    }
    return *parsed;
}

// Canonical text form: "n" for integers, "n/d" otherwise (d > 0).
inline std::string format_rational(const Rat& value) {
    std::string out = numerator(value).str();
    if (!is_integer(value)) {
        out += '/';
        out += denominator(value).str();
    }
    return out;
}

namespace detail {

inline std::size_t digit_count(const Int& nonneg) { return nonneg.str().size(); }

}  // namespace detail

// Decimal rendering with `sig_digits` significant digits (round half away
// from zero), fixed-point notation, trailing zeros stripped. Values in this
// library are bounded by small multiples of L/(s-1), so fixed point stays
// compact.
inline std::string decimal_string(const Rat& value, unsigned sig_digits = 15) {
    if (sig_digits == 0) sig_digits = 1;
    if (value == 0) return "0";

    const bool negative = value < 0;
    Int a = numerator(value);
    if (negative) a = -a;
    const Int q = denominator(value);

    // Decimal exponent e with |value| in [10^e, 10^{e+1}).
    std::int64_t e = 0;
    if (a >= q) {
        e = static_cast<std::int64_t>(detail::digit_count(a / q)) - 1;
    } else {
        Int shifted = a;
        while (shifted < q) {
            shifted *= 10;
            --e;
        }
    }

    // Round a/q to sig_digits significant digits: n0 ~ (a/q)*10^k.
    const std::int64_t k = static_cast<std::int64_t>(sig_digits) - 1 - e;
    Int scaled_num = a;
    Int scaled_den = q;
    if (k >= 0) {
        scaled_num *= pow10(static_cast<unsigned>(k));
    } else {
        scaled_den *= pow10(static_cast<unsigned>(-k));
    }
    Int n0 = (2 * scaled_num + scaled_den) / (2 * scaled_den);
    std::string digits = n0.str();
    if (digits.size() > sig_digits) {
        // Rounding overflowed to the next power of ten (e.g. 0.999... -> 1.0).
        digits.resize(sig_digits);
        ++e;
    }

    std::string out;
    if (e >= 0) {
        const auto int_len = static_cast<std::size_t>(e) + 1;
        if (int_len >= digits.size()) {
            out = digits + std::string(int_len - digits.size(), '0');
        } else {
            out = digits.substr(0, int_len) + "." + digits.substr(int_len);
        }
    } else {
        out = "0." + std::string(static_cast<std::size_t>(-e) - 1, '0') + digits;
    }

    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    if (negative) out.insert(out.begin(), '-');
    return out;
}

// Enclosure [lo, hi] of sqrt(x), x >= 0, with hi - lo <= 10^-digits.
inline std::pair<Rat, Rat> sqrt_enclosure(const Rat& x, unsigned digits) {
    if (x < 0) throw invariant_error("sqrt_enclosure: negative argument");
    if (x == 0) return {Rat(0), Rat(0)};
    const Int p = numerator(x);
    const Int q = denominator(x);
    const Int g = pow10(digits);
    // sqrt(p/q) = sqrt(p*q)/q, bracketed by the integer square root.
    const Int radicand = p * q * g * g;
    const Int t = boost::multiprecision::sqrt(radicand);
    const Int qg = q * g;
    return {Rat(t, qg), Rat(t + 1, qg)};
}

}  // namespace subsums
