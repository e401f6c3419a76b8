#include "proxycause/rational.hpp"

#include "proxycause/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace proxycause {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Rational pow10(long exponent) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    return exponent < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw FormatError("empty number");

    bool negative = false;
    std::string_view body = s;
    if (body.front() == '-' || body.front() == '+') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw FormatError("malformed fraction '" + std::string(text) + "'");
        }
        mpz_class d{std::string(den), 10};
        if (d == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
        Rational r(mpz_class(std::string(num), 10), d);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }

    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
        auto exp_text = body.substr(e + 1);
        auto [ptr, ec] = std::from_chars(exp_text.data() + (exp_text.starts_with('+') ? 1 : 0),
                                         exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
            throw FormatError("malformed exponent in '" + std::string(text) + "'");
        }
        body = body.substr(0, e);
    }

    std::string digits;
    long fraction_len = 0;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto int_part = body.substr(0, dot);
        auto frac_part = body.substr(dot + 1);
        if ((!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part)) ||
            (int_part.empty() && frac_part.empty())) {
            throw FormatError("malformed decimal '" + std::string(text) + "'");
        }
        digits = std::string(int_part) + std::string(frac_part);
        fraction_len = static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(body)) throw FormatError("malformed number '" + std::string(text) + "'");
        digits = std::string(body);
    }

    Rational r{mpz_class(digits, 10)};
    r *= pow10(exponent - fraction_len);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string to_fraction_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_str();
}

std::string to_decimal_string(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), ptr);
}

double to_double(const Rational& value) {
    const std::string exact = to_exact_decimal(value);
    if (!exact.empty()) return std::strtod(exact.c_str(), nullptr);
    // Long division to 40 significant digits, then a correctly rounded parse.
    mpz_class num = abs(value.get_num());
    const mpz_class& den = value.get_den();
    mpz_class whole = num / den;
    mpz_class rem = num % den;
    std::string text = (value < 0 ? "-" : "") + whole.get_str() + ".";
    for (int i = 0; i < 40; ++i) {
        rem *= 10;
        text += static_cast<char>('0' + mpz_class(rem / den).get_si());
        rem %= den;
    }
    return std::strtod(text.c_str(), nullptr);
}

std::string to_decimal_string(const Rational& value) { return to_decimal_string(to_double(value)); }

std::string to_exact_decimal(const Rational& value) {
    mpz_class den = value.get_den();
    long twos = 0;
    long fives = 0;
    while (den % 2 == 0) { den /= 2; ++twos; }
    while (den % 5 == 0) { den /= 5; ++fives; }
    if (den != 1) return {};
    const long places = std::max(twos, fives);
    mpz_class scaled = value.get_num() * pow10(places).get_num() / value.get_den();
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (places > 0) {
        if (static_cast<long>(digits.size()) <= places) {
            digits.insert(0, static_cast<std::size_t>(places - static_cast<long>(digits.size()) + 1), '0');
        }
        digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    return negative ? "-" + digits : digits;
}

}  // namespace proxycause
