#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace gkz {

using Rat = boost::rational<std::int64_t>;
using RatVec = std::vector<Rat>;

// Boost 1.74's mixed rational/int operator== recurses forever under C++20
// rewritten comparisons; these exact matches take precedence.
inline bool operator==(const Rat &a, int b) { return a == Rat(b); }
inline bool operator==(int a, const Rat &b) { return b == Rat(a); }

double to_double(const Rat &r) noexcept;
std::int64_t floor(const Rat &r) noexcept;
// Representative of r modulo m in [0, m).
Rat mod(const Rat &r, const Rat &m);
bool is_integer(const Rat &r) noexcept;
std::int64_t lcm_of_denominators(const RatVec &values);

// Accepts "p", "p/q", and plain decimals ("0.25", "-1.5e-1") whose value is
// exactly representable with a 64-bit numerator; throws ParseError otherwise.
Rat parse_rational(std::string_view text);
std::string to_string(const Rat &r);

// A real number held as an exact rational part plus a floating remainder.
// Arguments are carried in units of π this way so that membership tests at
// exact half-integers stay exact.
struct HybridReal {
    Rat exact{0};
    double rest = 0.0;

    HybridReal() = default;
    HybridReal(Rat q) : exact(q) {}
    HybridReal(Rat q, double r) : exact(q), rest(r) {}
    static HybridReal from_double(double v) { return {Rat(0), v}; }

    double value() const noexcept { return to_double(exact) + rest; }
    bool is_exact() const noexcept { return rest == 0.0; }

    friend HybridReal operator+(const HybridReal &a, const HybridReal &b)
    {
        return {a.exact + b.exact, a.rest + b.rest};
    }
    friend HybridReal operator-(const HybridReal &a, const HybridReal &b)
    {
        return {a.exact - b.exact, a.rest - b.rest};
    }
    friend HybridReal operator*(const Rat &s, const HybridReal &a)
    {
        return {s * a.exact, to_double(s) * a.rest};
    }
    friend bool operator==(const HybridReal &a, const HybridReal &b)
    {
        return a.exact == b.exact && a.rest == b.rest;
    }
};

std::string to_string(const HybridReal &h);

} // namespace gkz
