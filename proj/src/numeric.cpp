#include <cqc/numeric.hpp>

#include <stdexcept>

namespace cqc {

std::string to_string(const Rational& v)
{
    auto num = boost::multiprecision::numerator(v);
    auto den = boost::multiprecision::denominator(v);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(BigInt(s));
        BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0)
            throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    }
    catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational '" + s + "'");
    }
}

BigInt power(const BigInt& base, unsigned exp)
{
    BigInt r = 1;
    for (unsigned i = 0; i < exp; ++i)
        r *= base;
    return r;
}

BigInt binomial(unsigned n, unsigned k)
{
    if (k > n)
        return 0;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

BigInt factorial(unsigned n)
{
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i)
        r *= i;
    return r;
}

}  // namespace cqc
