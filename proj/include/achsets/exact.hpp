#pragma once

// Exact arithmetic substrate: arbitrary-precision rationals and quadratic
// surds a + b*sqrt(d) over a fixed square-free d, with a decidable total
// order.  No floating point is involved in any comparison.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace achsets {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct FieldMismatchError : std::runtime_error {
    FieldMismatchError() : std::runtime_error("field mismatch") {}
};

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    long completed_depth;
    ResourceError(const std::string& what, long depth)
        : std::runtime_error(what), completed_depth(depth) {}
};

// Rational or quadratic surd a + b*sqrt(d).  Canonical form: b == 0 implies
// d == 0 (plain rational); rationals are stored in lowest terms with a
// positive denominator (cpp_rational guarantees this).
class Exact {
  public:
    Exact() : a_(0), b_(0), d_(0) {}
    Exact(long v) : a_(v), b_(0), d_(0) {}           // NOLINT(google-explicit-constructor)
    Exact(const BigInt& v) : a_(v), b_(0), d_(0) {}  // NOLINT(google-explicit-constructor)
    Exact(const BigRat& v) : a_(v), b_(0), d_(0) {}  // NOLINT(google-explicit-constructor)
    Exact(long num, long den) : a_(BigRat(num, den)), b_(0), d_(0) {
        if (den == 0) throw ParameterError("zero denominator");
    }

    static Exact surd(const BigRat& a, const BigRat& b, long d) {
        if (d <= 0) throw ParameterError("surd radicand must be positive");
        Exact x;
        x.a_ = a;
        x.b_ = b;
        x.d_ = (b == 0) ? 0 : d;
        return x;
    }

    static Exact sqrt_of(long d) { return surd(0, 1, d); }

    bool is_rational() const { return d_ == 0; }
    const BigRat& rational_part() const { return a_; }
    const BigRat& surd_coeff() const { return b_; }
    long radicand() const { return d_; }

    // As a rational; throws if the value is irrational.
    const BigRat& as_rational() const {
        if (!is_rational()) throw ParameterError("value is not rational");
        return a_;
    }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_integer() const { return is_rational() && denominator(a_) == 1; }

    // Sign of a + b*sqrt(d), by case analysis on signs of a, b and one
    // comparison of a^2 against b^2*d.
    int sign() const {
        int sa = a_.sign(), sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Opposite signs: |a| vs |b|*sqrt(d)  <=>  a^2 vs b^2*d.
        BigRat lhs = a_ * a_;
        BigRat rhs = b_ * b_ * d_;
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sa : sb;
    }

    friend Exact operator+(const Exact& x, const Exact& y) {
        long d = joint_field(x, y);
        return surd_or_rat(x.a_ + y.a_, x.b_ + y.b_, d);
    }
    friend Exact operator-(const Exact& x, const Exact& y) {
        long d = joint_field(x, y);
        return surd_or_rat(x.a_ - y.a_, x.b_ - y.b_, d);
    }
    friend Exact operator-(const Exact& x) { return surd_or_rat(-x.a_, -x.b_, x.d_); }
    friend Exact operator*(const Exact& x, const Exact& y) {
        long d = joint_field(x, y);
        return surd_or_rat(x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, d);
    }
    friend Exact operator/(const Exact& x, const Exact& y) {
        long d = joint_field(x, y);
        if (y.is_zero()) throw ParameterError("division by zero");
        // Multiply by the conjugate; the norm a^2 - b^2 d is a nonzero rational.
        BigRat norm = y.a_ * y.a_ - y.b_ * y.b_ * d;
        return surd_or_rat((x.a_ * y.a_ - x.b_ * y.b_ * d) / norm,
                           (x.b_ * y.a_ - x.a_ * y.b_) / norm, d);
    }

    Exact& operator+=(const Exact& y) { return *this = *this + y; }
    Exact& operator-=(const Exact& y) { return *this = *this - y; }
    Exact& operator*=(const Exact& y) { return *this = *this * y; }
    Exact& operator/=(const Exact& y) { return *this = *this / y; }

    friend bool operator==(const Exact& x, const Exact& y) {
        long d = joint_field(x, y);
        (void)d;
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const Exact& x, const Exact& y) { return !(x == y); }
    friend bool operator<(const Exact& x, const Exact& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Exact& x, const Exact& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Exact& x, const Exact& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Exact& x, const Exact& y) { return (x - y).sign() >= 0; }

    Exact abs() const { return sign() < 0 ? -*this : *this; }

    Exact pow(long e) const {
        if (e < 0) return Exact(1) / pow(-e);
        Exact r(1), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    double to_double() const {
        double v = a_.convert_to<double>();
        if (d_ != 0) v += b_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
        return v;
    }

    // Textual form "p/q" or "p/q+r/s*sqrt(d)" (with "-r/s" when the surd
    // coefficient is negative).  Round-trips exactly through parse().
    std::string str() const {
        std::string s = rat_str(a_);
        if (d_ != 0) {
            BigRat b = b_;
            if (b < 0) {
                s += "-";
                b = -b;
            } else {
                s += "+";
            }
            s += rat_str(b) + "*sqrt(" + std::to_string(d_) + ")";
        }
        return s;
    }

    static Exact parse(std::string_view text);

  private:
    static std::string rat_str(const BigRat& r) {
        return numerator(r).str() + "/" + denominator(r).str();
    }

    static Exact surd_or_rat(BigRat a, BigRat b, long d) {
        Exact x;
        x.a_ = std::move(a);
        x.b_ = std::move(b);
        x.d_ = (x.b_ == 0) ? 0 : d;
        return x;
    }

    // The common radicand, or a throw when both operands carry distinct ones.
    static long joint_field(const Exact& x, const Exact& y) {
        if (x.d_ == 0) return y.d_;
        if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
        throw FieldMismatchError();
    }

    BigRat a_;
    BigRat b_;
    long d_;
};

enum class Ordering { Less, Equal, Greater };

inline Ordering compare(const Exact& x, const Exact& y) {
    int s = (x - y).sign();
    return s < 0 ? Ordering::Less : (s == 0 ? Ordering::Equal : Ordering::Greater);
}

inline Exact Exact::parse(std::string_view text) {
    auto fail = [&]() -> Exact {
        throw ParameterError("cannot parse exact number: '" + std::string(text) + "'");
    };
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto read_rat = [&]() -> std::optional<BigRat> {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits) {
            pos = start;
            return std::nullopt;
        }
        BigInt num(std::string(text.substr(start, pos - start)));
        BigInt den = 1;
        if (pos < text.size() && text[pos] == '/') {
            ++pos;
            size_t ds = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == ds) return std::nullopt;
            den = BigInt(std::string(text.substr(ds, pos - ds)));
            if (den == 0) return std::nullopt;
        }
        return BigRat(num, den);
    };

    skip_ws();
    bool leading_sqrt = text.substr(pos).starts_with("sqrt");
    std::optional<BigRat> first;
    if (!leading_sqrt) {
        first = read_rat();
        if (!first) return fail();
    }
    skip_ws();
    // Optional surd tail: [*]sqrt(d) directly, or +/- coeff*sqrt(d).
    BigRat coeff = 0;
    long d = 0;
    auto read_sqrt = [&]() -> bool {
        skip_ws();
        if (!text.substr(pos).starts_with("sqrt(")) return false;
        pos += 5;
        size_t ds = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == ds || pos >= text.size() || text[pos] != ')') return false;
        d = std::stol(std::string(text.substr(ds, pos - ds)));
        ++pos;
        return true;
    };

    if (pos < text.size() && text[pos] == '*') {
        // "r/s*sqrt(d)" with no rational part.
        ++pos;
        if (!read_sqrt()) return fail();
        coeff = *first;
        first = BigRat(0);
    } else if (leading_sqrt) {
        if (!read_sqrt()) return fail();
        coeff = 1;
        first = BigRat(0);
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        int sg = text[pos] == '-' ? -1 : 1;
        ++pos;
        auto c = read_rat();
        if (!c) {
            // bare "+sqrt(d)" / "-sqrt(d)"
            if (!read_sqrt()) return fail();
            coeff = sg;
        } else {
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                if (!read_sqrt()) return fail();
                coeff = sg * *c;
            } else {
                return fail();
            }
        }
    }
    skip_ws();
    if (pos != text.size()) return fail();
    if (d == 0 && coeff != 0) return fail();
    if (d != 0 && coeff != 0) return Exact::surd(*first, coeff, d);
    return Exact(*first);
}

// Closed form of the geometric tail sum_{i>n} c*q^i = c*q^(n+1)/(1-q).
inline Exact geometric_tail(const Exact& c, const Exact& q, long n) {
    if (q.sign() <= 0 || q >= Exact(1)) throw ParameterError("not summable");
    if (n < 0) throw ParameterError("negative tail index");
    return c * q.pow(n + 1) / (Exact(1) - q);
}

}  // namespace achsets
