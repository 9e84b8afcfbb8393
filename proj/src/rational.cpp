#include "detwalk/rational.hpp"

#include <cctype>
#include <cstdio>
#include <vector>

namespace detwalk {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

mpz_class parse_integer(const std::string& s) {
    mpz_class z;
    // mpz_set_str does not accept a leading '+'.
    const char* p = s.c_str();
    if (*p == '+') ++p;
    z.set_str(p, 10);
    return z;
}

}  // namespace

Rational::Rational(long numerator, long denominator) : Rational(mpz_class(numerator), mpz_class(denominator)) {}

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator) {
    if (denominator == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const std::string s = trim(text);
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_literal(s)) throw std::invalid_argument("not a rational literal: '" + s + "'");
        return Rational(parse_integer(s), mpz_class(1));
    }
    const std::string num = trim(std::string_view(s).substr(0, slash));
    const std::string den = trim(std::string_view(s).substr(slash + 1));
    if (!is_integer_literal(num) || !is_integer_literal(den))
        throw std::invalid_argument("not a rational literal: '" + s + "'");
    const mpz_class d = parse_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(parse_integer(num), d);
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1) / value_);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
}

std::string Rational::str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int significant_digits) const {
    mpf_class f(value_, 512);
    std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
    gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant_digits, f.get_mpf_t());
    return std::string(buf.data());
}

std::size_t Rational::hash() const {
    return std::hash<std::string>{}(str());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace detwalk
