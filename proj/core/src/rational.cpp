#include "idc/rational.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>

#include "idc/errors.hpp"

namespace idc {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return BigInt(0);
    BigInt result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

BigInt falling_factorial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return BigInt(0);
    BigInt result(1);
    for (std::uint64_t t = 0; t < k; ++t) result *= BigInt(n - t);
    return result;
}

BigInt int_pow(std::uint64_t base, std::uint64_t exp) {
    BigInt b(static_cast<unsigned long>(base));
    BigInt result;
    mpz_pow_ui(result.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(exp));
    return result;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw InvalidParameter("make_rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

std::string decimal_string(const Rational& q, int significant_digits) {
    if (significant_digits < 1) throw InvalidParameter("decimal_string: need at least one digit");
    if (q == 0) return "0";
    // 4 bits per decimal digit comfortably covers the requested precision.
    mpf_class f(q, static_cast<unsigned>(significant_digits) * 4 + 64);
    mp_exp_t exp10 = 0;
    std::string digits = f.get_str(exp10, 10, static_cast<std::size_t>(significant_digits));
    bool negative = !digits.empty() && digits[0] == '-';
    if (negative) digits.erase(digits.begin());
    while (static_cast<int>(digits.size()) < significant_digits) digits.push_back('0');

    std::string out;
    if (exp10 >= 1 && exp10 <= significant_digits) {
        out = digits.substr(0, static_cast<std::size_t>(exp10));
        std::string frac = digits.substr(static_cast<std::size_t>(exp10));
        if (!frac.empty()) out += "." + frac;
    } else if (exp10 <= 0 && exp10 > -6) {
        out = "0." + std::string(static_cast<std::size_t>(-exp10), '0') + digits;
    } else {
        // Scientific form for very small or very large magnitudes.
        out = digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(exp10 - 1);
    }
    return negative ? "-" + out : out;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw InvalidParameter("parse_rational: empty string");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            return make_rational(num, den);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) {
            return Rational(BigInt(text));
        }
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        for (char c : frac)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw InvalidParameter("parse_rational: bad fraction digits in '" + text + "'");
        bool negative = !whole.empty() && whole[0] == '-';
        BigInt scale = int_pow(10, frac.size());
        BigInt num = BigInt(whole.empty() || whole == "-" ? "0" : whole) * scale;
        BigInt fpart = frac.empty() ? BigInt(0) : BigInt(frac);
        num += negative ? -fpart : fpart;
        return make_rational(num, scale);
    } catch (const std::invalid_argument&) {
        throw InvalidParameter("parse_rational: cannot parse '" + text + "'");
    }
}

}  // namespace idc
