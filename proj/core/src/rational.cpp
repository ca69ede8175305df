#include <quadlift/rational.hpp>

#include <cctype>
#include <limits>
#include <stdexcept>

namespace quadlift {

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_decimal(std::string_view text)
{
    std::size_t i = 0;
    mpz_class mantissa = 0;
    long frac_digits = 0;
    bool any = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mantissa = mantissa * 10 + (text[i] - '0');
        ++i;
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            mantissa = mantissa * 10 + (text[i] - '0');
            ++frac_digits;
            ++i;
            any = true;
        }
    }
    if (!any) {
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            negative = text[i] == '-';
            ++i;
        }
        if (i == text.size()) {
            throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
        }
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 4096) {
                throw std::invalid_argument("exponent too large in '" + std::string(text) + "'");
            }
            ++i;
        }
        if (negative) {
            exponent = -exponent;
        }
    }
    if (i != text.size()) {
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    Rational result(mantissa);
    result *= pow(Rational(10), exponent - frac_digits);
    result.canonicalize();
    return result;
}

bool is_integer(const Rational& q)
{
    return q.get_den() == 1;
}

int to_int(const Rational& q)
{
    if (!is_integer(q) || !q.get_num().fits_sint_p()) {
        throw std::overflow_error("rational " + to_string(q) + " is not a machine integer");
    }
    return static_cast<int>(q.get_num().get_si());
}

double to_double(const Rational& q)
{
    return q.get_d();
}

Rational gcd(const Rational& a, const Rational& b)
{
    mpz_class num;
    mpz_class den;
    mpz_gcd(num.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    if (num == 0) {
        return Rational(0);
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational pow(const Rational& q, long n)
{
    if (n == 0) {
        return Rational(1);
    }
    if (n < 0 && q == 0) {
        throw std::domain_error("zero raised to a negative power");
    }
    const unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
    Rational r = n < 0 ? Rational(den, num) : Rational(num, den);
    r.canonicalize();
    return r;
}

} // namespace quadlift
