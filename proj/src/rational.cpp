#include "clopen/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace clopen {

Rational rat(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational pow2(int e) {
    Rational q;
    if (e >= 0) {
        mpz_ui_pow_ui(q.get_num_mpz_t(), 2, static_cast<unsigned long>(e));
    } else {
        q = 1;
        mpz_ui_pow_ui(q.get_den_mpz_t(), 2, static_cast<unsigned long>(-e));
    }
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    Integer num, den;
    try {
        if (slash == std::string::npos) {
            num = Integer(text);
            den = 1;
        } else {
            num = Integer(text.substr(0, slash));
            den = Integer(text.substr(slash + 1));
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational: '" + text + "'");
    }
    if (den <= 0) throw std::invalid_argument("rational denominator must be positive: '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer parse_integer(const std::string& text) {
    try {
        return Integer(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed integer: '" + text + "'");
    }
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

bool divides(const Integer& d, const Integer& m) {
    if (d == 0) return m == 0;
    return mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t()) != 0;
}

std::vector<Rational> sorted_unique(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

}  // namespace clopen
