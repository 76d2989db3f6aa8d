#ifndef ELNET_ANGLE_HPP
#define ELNET_ANGLE_HPP

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace elnet {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance for all angle-equality checks, modulo 2*pi.
inline constexpr double kAngleTol = 1e-9;

/// Normalize an angle to [0, 2*pi).
inline double mod_two_pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;  // fmod can round up to 2*pi
    return r;
}

/// Counterclockwise angle from direction a to direction b, in [0, 2*pi).
inline double ccw_angle(double a, double b) { return mod_two_pi(b - a); }

/// Signed difference wrapped to (-pi, pi].
inline double wrap_pi(double a) {
    double r = mod_two_pi(a);
    if (r > kPi) r -= kTwoPi;
    return r;
}

/// True when a == b modulo 2*pi within tol.
inline bool angle_eq(double a, double b, double tol = kAngleTol) {
    return std::abs(wrap_pi(a - b)) <= tol;
}

namespace detail {
inline long long parse_int(const std::string& s, std::size_t& i) {
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("expected integer in angle expression");
    long long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        v = 10 * v + (s[i++] - '0');
    return neg ? -v : v;
}
}  // namespace detail

/// Parse an angle expression of the form "k*pi/n" ("pi", "-pi/3", "3*pi/2", "0",
/// or a plain decimal). Exact rational multiples of pi are evaluated as
/// k * pi / n in one rounding step.
inline double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty angle expression");

    const std::size_t pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("malformed angle: " + text);
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite angle: " + text);
        return v;
    }

    long long num = 1, den = 1;
    std::size_t i = 0;
    if (pi_pos > 0) {
        if (s[0] == '-' && pi_pos == 1) {
            num = -1;
            i = 1;
        } else {
            num = detail::parse_int(s, i);
            if (i < s.size() && s[i] == '*') ++i;
            if (i != pi_pos) throw std::invalid_argument("malformed angle: " + text);
        }
    }
    i = pi_pos + 2;
    if (i < s.size()) {
        if (s[i] != '/') throw std::invalid_argument("malformed angle: " + text);
        ++i;
        den = detail::parse_int(s, i);
        if (i != s.size() || den == 0) throw std::invalid_argument("malformed angle: " + text);
    }
    return static_cast<double>(num) * kPi / static_cast<double>(den);
}

}  // namespace elnet

#endif
