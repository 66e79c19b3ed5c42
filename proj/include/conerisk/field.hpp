/**
 * Exact ordered-field scalars.
 *
 * Two scalar kinds run through the whole library: `Rational` (GMP-backed
 * arbitrary precision rationals) and `Quad2`, the quadratic extension
 * Q(sqrt 2) whose elements are a + b*sqrt(2) with rational a, b.  Every
 * algorithm in the library is a template over one of these two types; no
 * floating point value ever enters a decision.
 */
#ifndef CONERISK_FIELD_HPP
#define CONERISK_FIELD_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

namespace conerisk {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/** Thrown for malformed scalar text and other input errors. */
class ParseError : public std::runtime_error
{
    public:
        explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * An element a + b*sqrt(2) of Q(sqrt 2).
 *
 * Equality is componentwise (sqrt 2 is irrational, so the representation is
 * unique).  The order is the one induced by the real embedding and is decided
 * exactly from the signs of a, b and a comparison of a^2 with 2 b^2.
 */
class Quad2
{
    public:
        Quad2() = default;
        Quad2(const Rational& a) : a_(a) {}                 // NOLINT: implicit embedding
        Quad2(long long a) : a_(a) {}                       // NOLINT
        Quad2(int a) : a_(a) {}                             // NOLINT
        Quad2(const Rational& a, const Rational& b) : a_(a), b_(b) {}

        const Rational& a() const { return a_; }
        const Rational& b() const { return b_; }
        bool is_rational() const { return b_.is_zero(); }

        Quad2& operator+=(const Quad2& o) { a_ += o.a_; b_ += o.b_; return *this; }
        Quad2& operator-=(const Quad2& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
        Quad2& operator*=(const Quad2& o)
        {
            Rational a = a_ * o.a_ + 2 * b_ * o.b_;
            Rational b = a_ * o.b_ + b_ * o.a_;
            a_ = std::move(a);
            b_ = std::move(b);
            return *this;
        }
        Quad2& operator/=(const Quad2& o)
        {
            // (a + b r)^{-1} = (a - b r) / (a^2 - 2 b^2); the norm vanishes only at 0.
            Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
            if (norm.is_zero())
                throw std::domain_error("Quad2: division by zero");
            Quad2 inv(o.a_ / norm, -o.b_ / norm);
            return *this *= inv;
        }

        friend Quad2 operator+(Quad2 x, const Quad2& y) { return x += y; }
        friend Quad2 operator-(Quad2 x, const Quad2& y) { return x -= y; }
        friend Quad2 operator*(Quad2 x, const Quad2& y) { return x *= y; }
        friend Quad2 operator/(Quad2 x, const Quad2& y) { return x /= y; }
        friend Quad2 operator-(const Quad2& x) { return Quad2(-x.a_, -x.b_); }
        friend Quad2 operator+(const Quad2& x) { return x; }

        friend bool operator==(const Quad2& x, const Quad2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
        friend bool operator!=(const Quad2& x, const Quad2& y) { return !(x == y); }
        friend bool operator<(const Quad2& x, const Quad2& y) { return (x - y).sign() < 0; }
        friend bool operator>(const Quad2& x, const Quad2& y) { return (x - y).sign() > 0; }
        friend bool operator<=(const Quad2& x, const Quad2& y) { return (x - y).sign() <= 0; }
        friend bool operator>=(const Quad2& x, const Quad2& y) { return (x - y).sign() >= 0; }

        /** Exact sign of a + b*sqrt(2): -1, 0 or 1. */
        int sign() const
        {
            int sa = a_.sign();
            int sb = b_.sign();
            if (sb == 0) return sa;
            if (sa == 0) return sb;
            if (sa == sb) return sa;
            // Opposite signs: |a| vs |b| sqrt 2, i.e. a^2 vs 2 b^2.
            int c = (a_ * a_).compare(2 * b_ * b_);
            return c == 0 ? 0 : (c > 0 ? sa : sb);
        }

    private:
        Rational a_{0};
        Rational b_{0};
};

inline Quad2 abs(const Quad2& x) { return x.sign() < 0 ? -x : x; }

std::ostream& operator<<(std::ostream& os, const Quad2& x);

enum class Ordering { LT, EQ, GT };

inline int sign(const Rational& x) { return x.sign(); }
inline int sign(const Quad2& x) { return x.sign(); }

template <typename F>
Ordering scalar_cmp(const F& x, const F& y)
{
    int s = sign(F(x - y));
    return s < 0 ? Ordering::LT : (s > 0 ? Ordering::GT : Ordering::EQ);
}

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const Quad2& x) { return x.a().is_zero() && x.b().is_zero(); }

/** Parses "p/q" or "p" (optionally signed).  Throws ParseError. */
Rational parse_rational(std::string_view text);

/** Parses a decimal such as "-0.3186" or "1.5e-3" exactly.  Throws ParseError. */
Rational parse_decimal(std::string_view text);

/** Canonical text: "p" for integers, "p/q" otherwise, lowest terms. */
std::string format_rational(const Rational& x);

/** Text used in reports: "a", "a+b*sqrt2", "b*sqrt2". */
std::string format_scalar(const Rational& x);
std::string format_scalar(const Quad2& x);

/** Decimal approximation with `digits` significant digits; display only. */
std::string to_decimal(const Rational& x, int digits = 20);
std::string to_decimal(const Quad2& x, int digits = 20);

/** Name of the field kind as used in scenario files. */
template <typename F> constexpr std::string_view field_name();
template <> constexpr std::string_view field_name<Rational>() { return "rational"; }
template <> constexpr std::string_view field_name<Quad2>() { return "quad2"; }

}   // namespace conerisk

namespace Eigen {

template <>
struct NumTraits<conerisk::Quad2> : GenericNumTraits<conerisk::Quad2>
{
    typedef conerisk::Quad2 Real;
    typedef conerisk::Quad2 NonInteger;
    typedef conerisk::Quad2 Nested;
    typedef conerisk::Quad2 Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 20,
        MulCost = 60
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
    static inline Real highest() { throw std::logic_error("Quad2 has no highest value"); }
    static inline Real lowest() { throw std::logic_error("Quad2 has no lowest value"); }
};

}   // namespace Eigen

#endif
