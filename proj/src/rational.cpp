#include "tropdiv/rational.hpp"

#include <limits>
#include <ostream>

namespace tropdiv {

Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
    // Accept "p" and "p/q" with optional leading '-'.
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("Rational::parse: bad rational '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("Rational::parse: zero denominator in '" + text + "'");
    q.canonicalize();
    return Rational(q);
}

long long Rational::to_integer() const {
    if (!is_integer()) throw std::domain_error("Rational::to_integer: not an integer: " + str());
    mpz_class n = v_.get_num();
    if (!n.fits_slong_p()) throw std::overflow_error("Rational::to_integer: overflow: " + str());
    return n.get_si();
}

Rational Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return Rational(mpq_class(q));
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace tropdiv
