#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

namespace cdmn {

/// Exact rational number over 64-bit integers. Always normalized: den > 0 and
/// gcd(num, den) == 1. Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_integer() const noexcept { return den_ == 1; }

    /// Parses "12", "-3", "0.25", "1.50"; returns nullopt on anything else.
    static std::optional<Rational> parse(std::string_view text);

    /// Decimal form when the denominator is 2^a*5^b, "n/d" otherwise.
    std::string to_string() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    /// Precondition: b != 0.
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a);

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& out, const Rational& r);

/// A domain value: either a number or a named atom (string domain element or
/// one of the boolean literals Yes/No).
class Value {
public:
    Value() : data_(Rational{}) {}
    Value(Rational number) : data_(number) {}  // NOLINT(implicit)
    Value(std::int64_t number) : data_(Rational(number)) {}  // NOLINT(implicit)
    Value(int number) : data_(Rational(number)) {}  // NOLINT(implicit)
    static Value atom(std::string name) { Value v; v.data_ = std::move(name); return v; }
    static Value yes() { return atom("Yes"); }
    static Value no() { return atom("No"); }
    static Value boolean(bool b) { return b ? yes() : no(); }

    bool is_number() const noexcept { return std::holds_alternative<Rational>(data_); }
    bool is_atom() const noexcept { return std::holds_alternative<std::string>(data_); }
    const Rational& number() const { return std::get<Rational>(data_); }
    const std::string& name() const { return std::get<std::string>(data_); }
    bool is_yes() const noexcept { return is_atom() && name() == "Yes"; }

    std::string to_string() const;

    friend bool operator==(const Value&, const Value&) = default;
    /// Total order: numbers (by value) before atoms (lexicographic).
    friend std::strong_ordering operator<=>(const Value& a, const Value& b);

private:
    std::variant<Rational, std::string> data_;
};

std::ostream& operator<<(std::ostream& out, const Value& v);

/// Canonical boolean literal for "Yes"/"No"/"TRUE"/"FALSE" (any case); nullopt otherwise.
std::optional<Value> parse_boolean_literal(std::string_view text);

}  // namespace cdmn
