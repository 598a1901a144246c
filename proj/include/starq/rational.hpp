#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace starq {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parse "p/q" or "p" (sign on the numerator). Throws std::invalid_argument.
inline Rational rational_from_string(const std::string& s)
{
    mpq_class q;
    if (s.empty() || mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
        throw std::invalid_argument("zero denominator in rational: '" + s + "'");
    q.canonicalize();
    return q;
}

/// Canonical form: "p" when the denominator is 1, otherwise "p/q", q > 0.
inline std::string rational_to_string(const Rational& q)
{
    return q.get_str();
}

inline Integer factorial(unsigned n)
{
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(unsigned n, unsigned k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

} // namespace starq
