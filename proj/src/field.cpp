#include "conerisk/field.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace conerisk {

namespace {

bool is_integer_literal(std::string_view s)
{
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Decimal only: the integer constructor reads a leading 0 as octal.
Integer decimal_integer(std::string digits)
{
    bool neg = !digits.empty() && digits[0] == '-';
    std::size_t i = (neg || (!digits.empty() && digits[0] == '+')) ? 1 : 0;
    while (i + 1 < digits.size() && digits[i] == '0') ++i;
    Integer out(digits.substr(i));
    return neg ? Integer(-out) : out;
}

}   // namespace

Rational parse_rational(std::string_view text)
{
    std::string s = trim(text);
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational literal '" + std::string(text) + "'");
    Integer n = decimal_integer(num), d = decimal_integer(den);
    if (d.is_zero())
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
}

Rational parse_decimal(std::string_view text)
{
    std::string s = trim(text);
    std::string mant = s, expo = "0";
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        expo = s.substr(e + 1);
    }
    std::string digits = mant;
    long long scale = 0;
    if (auto dot = mant.find('.'); dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        scale = static_cast<long long>(mant.size() - dot - 1);
    }
    if (digits == "-" || digits == "+" || digits.empty() || !is_integer_literal(digits) || !is_integer_literal(expo))
        throw ParseError("malformed decimal literal '" + std::string(text) + "'");
    long long shift = std::stoll(expo) - scale;
    Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
    Rational r{decimal_integer(digits)};
    return shift < 0 ? Rational(r / Rational(ten_pow)) : Rational(r * Rational(ten_pow));
}

std::string format_rational(const Rational& x)
{
    Integer n = boost::multiprecision::numerator(x);
    Integer d = boost::multiprecision::denominator(x);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

std::string format_scalar(const Rational& x) { return format_rational(x); }

std::string format_scalar(const Quad2& x)
{
    if (x.b().is_zero()) return format_rational(x.a());
    std::string b = format_rational(x.b()) + "*sqrt2";
    if (x.a().is_zero()) return b;
    std::string a = format_rational(x.a());
    if (x.b().sign() > 0) return a + "+" + b;
    return a + b;
}

std::string to_decimal(const Rational& x, int digits)
{
    using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<60>>;
    Dec n(boost::multiprecision::numerator(x).str());
    Dec d(boost::multiprecision::denominator(x).str());
    std::ostringstream os;
    os.precision(digits);
    os << Dec(n / d);
    return os.str();
}

std::string to_decimal(const Quad2& x, int digits)
{
    using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<60>>;
    auto conv = [](const Rational& r) {
        return Dec(boost::multiprecision::numerator(r).str())
             / Dec(boost::multiprecision::denominator(r).str());
    };
    Dec v = conv(x.a()) + conv(x.b()) * boost::multiprecision::sqrt(Dec(2));
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Quad2& x) { return os << format_scalar(x); }

}   // namespace conerisk
