#include "cdmn/value.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace cdmn {

namespace {

__extension__ typedef __int128 Wide;

std::int64_t narrow(Wide v) {
    if (v > static_cast<Wide>(INT64_MAX) || v < static_cast<Wide>(INT64_MIN)) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(Wide num, Wide den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = narrow(-static_cast<Wide>(num));
        den = narrow(-static_cast<Wide>(den));
    }
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

std::optional<Rational> Rational::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        ++i;
    }
    if (i >= text.size()) return std::nullopt;
    Wide num = 0;
    Wide den = 1;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_point) return std::nullopt;
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (seen_point) den *= 10;
        if (num > static_cast<Wide>(INT64_MAX) || den > static_cast<Wide>(INT64_MAX)) {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;
    return make(negative ? -num : num, den);
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    std::int64_t d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    int digits = std::max(twos, fives);
    Wide scale = 1;
    for (int k = 0; k < digits; ++k) scale *= 10;
    Wide scaled = static_cast<Wide>(num_) * (scale / den_);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    Wide whole = scaled / scale;
    Wide frac = scaled % scale;
    std::string frac_text;
    for (int k = 0; k < digits; ++k) {
        frac_text.insert(frac_text.begin(), static_cast<char>('0' + static_cast<int>(frac % 10)));
        frac /= 10;
    }
    return (negative ? "-" : "") + std::to_string(static_cast<std::int64_t>(whole)) + "." + frac_text;
}

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero");
    return make(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_);
}

Rational operator-(const Rational& a) { return make(-static_cast<Wide>(a.num_), a.den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    Wide lhs = static_cast<Wide>(a.num_) * b.den_;
    Wide rhs = static_cast<Wide>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& out, const Rational& r) { return out << r.to_string(); }

std::string Value::to_string() const { return is_number() ? number().to_string() : name(); }

std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.is_number() != b.is_number()) {
        return a.is_number() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.is_number()) return a.number() <=> b.number();
    int c = a.name().compare(b.name());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& out, const Value& v) { return out << v.to_string(); }

std::optional<Value> parse_boolean_literal(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "yes" || lower == "true") return Value::yes();
    if (lower == "no" || lower == "false") return Value::no();
    return std::nullopt;
}

}  // namespace cdmn
