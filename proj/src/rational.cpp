#include "gkz/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "gkz/error.hpp"

namespace gkz {

double to_double(const Rat &r) noexcept
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t floor(const Rat &r) noexcept
{
    const auto n = r.numerator();
    const auto d = r.denominator();
    auto q = n / d;
    if (n % d != 0 && n < 0) {
        --q;
    }
    return q;
}

Rat mod(const Rat &r, const Rat &m)
{
    if (m <= 0) {
        throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    }
    const Rat q = r / m;
    return r - m * Rat(floor(q));
}

bool is_integer(const Rat &r) noexcept { return r.denominator() == 1; }

std::int64_t lcm_of_denominators(const RatVec &values)
{
    std::int64_t l = 1;
    for (const auto &v : values) {
        l = std::lcm(l, v.denominator());
    }
    return l;
}

namespace {

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    const auto *first = s.data();
    const auto *last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty()) {
        throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

Rat parse_rational(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        throw Error(ErrorKind::ParseError, "empty number");
    }
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto den = parse_int(text.substr(slash + 1));
        if (den == 0) {
            throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
        }
        return Rat(parse_int(text.substr(0, slash)), den);
    }

    // Decimal with optional exponent.
    std::int64_t exponent = 0;
    std::string_view mantissa = text;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        exponent = parse_int(text.substr(e + 1));
        mantissa = text.substr(0, e);
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    std::int64_t frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) {
                throw Error(ErrorKind::ParseError, "malformed number '" + std::string(text) + "'");
            }
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) {
                ++frac_digits;
            }
        } else {
            throw Error(ErrorKind::ParseError, "malformed number '" + std::string(text) + "'");
        }
    }
    if (digits.empty()) {
        throw Error(ErrorKind::ParseError, "malformed number '" + std::string(text) + "'");
    }
    while (digits.size() > 1 && digits.front() == '0') {
        digits.erase(digits.begin());
    }
    if (digits.size() > 18) {
        throw Error(ErrorKind::ParseError, "too many digits for an exact value: '" + std::string(text) + "'");
    }
    std::int64_t num = parse_int(digits);
    std::int64_t scale = exponent - frac_digits;
    if (scale > 18 || scale < -18) {
        throw Error(ErrorKind::ParseError, "exponent out of exact range: '" + std::string(text) + "'");
    }
    std::int64_t pow10 = 1;
    for (std::int64_t i = 0; i < (scale < 0 ? -scale : scale); ++i) {
        pow10 *= 10;
    }
    Rat r = scale >= 0 ? Rat(num) * Rat(pow10) : Rat(num, pow10);
    return negative ? -r : r;
}

std::string to_string(const Rat &r)
{
    if (r.denominator() == 1) {
        return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_string(const HybridReal &h)
{
    if (h.is_exact()) {
        return to_string(h.exact);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", h.value());
    return buf;
}

} // namespace gkz
