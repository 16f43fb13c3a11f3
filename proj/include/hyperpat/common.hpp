// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/rational.hpp>
#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace hyperpat {

inline constexpr double kPi = std::numbers::pi;

using Json = nlohmann::json;
using Rational = boost::rational<std::int64_t>;

// Every failure carries a module-level error name and a witness object.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message, Json witness = Json::object())
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)), witness_(std::move(witness)) {}

    const std::string& kind() const { return kind_; }
    const Json& witness() const { return witness_; }

private:
    std::string kind_;
    Json witness_;
};

// An angle in radians, optionally known exactly as a rational multiple of pi.
struct Angle {
    double value = 0.0;
    std::optional<Rational> pi_multiple;

    static Angle exact(Rational q) {
        return {boost::rational_cast<double>(q) * kPi, q};
    }
    static Angle radians(double v) { return {v, std::nullopt}; }

    bool is_exact() const { return pi_multiple.has_value(); }

    Angle operator+(const Angle& o) const {
        if (is_exact() && o.is_exact()) return exact(*pi_multiple + *o.pi_multiple);
        return radians(value + o.value);
    }
    Angle operator-(const Angle& o) const {
        if (is_exact() && o.is_exact()) return exact(*pi_multiple - *o.pi_multiple);
        return radians(value - o.value);
    }
    Angle operator*(std::int64_t k) const {
        if (is_exact()) return exact(*pi_multiple * Rational(k));
        return radians(value * static_cast<double>(k));
    }
    Angle half() const {
        if (is_exact()) return exact(*pi_multiple / Rational(2));
        return radians(value / 2.0);
    }
};

inline Angle pi_times(std::int64_t p, std::int64_t q = 1) { return Angle::exact(Rational(p, q)); }

// Three-way comparison with exact arithmetic when both sides are exact,
// absolute tolerance otherwise.
inline int compare(const Angle& a, const Angle& b, double tol) {
    if (a.is_exact() && b.is_exact()) {
        if (*a.pi_multiple < *b.pi_multiple) return -1;
        if (*b.pi_multiple < *a.pi_multiple) return 1;
        return 0;
    }
    double d = a.value - b.value;
    if (d < -tol) return -1;
    if (d > tol) return 1;
    return 0;
}

namespace detail {

inline std::string strip(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool parse_integer(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    out = std::stoll(s);
    return true;
}

}  // namespace detail

// Accepts "pi*p/q", "p*pi/q", "p/q*pi", "pi/q", "-pi", plain decimals, and
// products/quotients of integers with at most one pi factor.
inline Angle parse_angle(const std::string& text) {
    std::string s = detail::strip(text);
    if (s.empty()) throw Error("ParseError", "empty angle string");
    Rational q(1);
    bool has_pi = false;
    bool exact = true;
    double approx = 1.0;
    char op = '*';
    std::size_t pos = 0;
    if (s[0] == '-') {
        q = -q;
        approx = -1.0;
        pos = 1;
    }
    while (pos <= s.size()) {
        std::size_t next = s.find_first_of("*/", pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.empty()) throw Error("ParseError", "malformed angle '" + text + "'");
        std::int64_t k = 0;
        if (tok == "pi") {
            if (has_pi || op == '/') throw Error("ParseError", "pi must appear once as a factor in '" + text + "'");
            has_pi = true;
        } else if (detail::parse_integer(tok, k)) {
            if (op == '*') {
                q *= Rational(k);
                approx *= static_cast<double>(k);
            } else {
                if (k == 0) throw Error("ParseError", "division by zero in '" + text + "'");
                q /= Rational(k);
                approx /= static_cast<double>(k);
            }
        } else {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw Error("ParseError", "unrecognised token '" + tok + "' in '" + text + "'");
            }
            if (used != tok.size()) throw Error("ParseError", "unrecognised token '" + tok + "' in '" + text + "'");
            exact = false;
            approx = op == '*' ? approx * v : approx / v;
        }
        if (next == std::string::npos) break;
        op = s[next];
        pos = next + 1;
    }
    if (has_pi && exact) return Angle::exact(q);
    return Angle::radians(has_pi ? approx * kPi : approx);
}

inline Angle angle_from_json(const Json& j) {
    if (j.is_number()) return Angle::radians(j.get<double>());
    if (j.is_string()) return parse_angle(j.get<std::string>());
    throw Error("ParseError", "angle must be a number or string", {{"value", j}});
}

inline Json angle_to_json(const Angle& a) {
    if (a.is_exact()) {
        const Rational& q = *a.pi_multiple;
        return "pi*" + std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
    }
    return a.value;
}

}  // namespace hyperpat
