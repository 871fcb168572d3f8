#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace tropdiv {

// Arbitrary-precision rational with eager arithmetic.  gmpxx expression
// templates are folded away here so the type composes with Eigen.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<long>(n)) {}
    Rational(long long n) : v_(from_ll(n)) {}
    Rational(long long num, long long den) : v_(from_ll(num)) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_ /= from_ll(den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational parse(const std::string& text);

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_integer() const { return v_.get_den() == 1; }
    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    // Exact conversion; throws when the value is not an integer or overflows.
    long long to_integer() const;
    Rational floor() const;

    std::string str() const;

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    static mpz_class from_ll(long long n) {
        // mpz_class has no long long constructor on LP64-unsafe paths; go via string
        // only when the value exceeds long range.
        if (n >= static_cast<long long>(std::numeric_limits<long>::min()) &&
            n <= static_cast<long long>(std::numeric_limits<long>::max()))
            return mpz_class(static_cast<long>(n));
        return mpz_class(std::to_string(n));
    }
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// lcm of the denominators of a range of Rationals; 1 for an empty range.
template <typename It>
mpz_class denominator_lcm(It first, It last) {
    mpz_class acc = 1;
    for (; first != last; ++first) {
        mpz_class d = first->den();
        mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), d.get_mpz_t());
    }
    return acc;
}

}  // namespace tropdiv

#include <Eigen/Core>

namespace Eigen {

template <>
struct NumTraits<tropdiv::Rational> {
    using Self = tropdiv::Rational;
    using Real = Self;
    using NonInteger = Self;
    using Nested = Self;
    using Literal = long long;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 40,
        MulCost = 40,
    };

    static inline Self epsilon() { return Self(0); }
    static inline Self dummy_precision() { return Self(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
