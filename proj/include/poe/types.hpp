#pragma once

// Scalar backends, error types and small shared utilities.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace poe {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
/// 100 decimal digits; used where double conditioning is insufficient (lumped Prony).
using HighPrec = boost::multiprecision::mpfr_float_100;

enum class Backend { rational, floating };

template <class T>
struct is_exact : std::false_type {};
template <>
struct is_exact<Rational> : std::true_type {};
template <class T>
inline constexpr bool is_exact_v = is_exact<T>::value;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

#define POE_DEFINE_ERROR(Name)                 \
    class Name : public Error {                \
       public:                                 \
        explicit Name(const std::string& what) \
            : Error(#Name ": " + what) {}      \
    };

POE_DEFINE_ERROR(InvalidArgument)
POE_DEFINE_ERROR(TrivialModel)
POE_DEFINE_ERROR(InfeasibleXY)
POE_DEFINE_ERROR(MissingMoment)
POE_DEFINE_ERROR(IndexOutOfRange)
POE_DEFINE_ERROR(InterlacingViolation)
POE_DEFINE_ERROR(BackendMismatch)
POE_DEFINE_ERROR(NonExactDivision)
POE_DEFINE_ERROR(UncertifiableMultiplicity)
POE_DEFINE_ERROR(SingularLeadingBlock)
POE_DEFINE_ERROR(ConstantPolynomialInFamily)
POE_DEFINE_ERROR(EpsilonCascadeFailure)
POE_DEFINE_ERROR(SingularAtChosenPoint)
POE_DEFINE_ERROR(NoConvergence)
POE_DEFINE_ERROR(InfeasibleRoot)
POE_DEFINE_ERROR(RankNotDeficient)
POE_DEFINE_ERROR(DimensionMismatch)
POE_DEFINE_ERROR(Cancelled)

#undef POE_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Conversions

inline double to_double(double v) { return v; }
inline double to_double(long double v) { return static_cast<double>(v); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(const HighPrec& v) { return v.convert_to<double>(); }
template <class Tag, class A1, class A2, class A3, class A4>
double to_double(const boost::multiprecision::detail::expression<Tag, A1, A2, A3, A4>& e) {
    using result = typename boost::multiprecision::detail::expression<Tag, A1, A2, A3, A4>::result_type;
    return to_double(result(e));
}

template <class T>
T from_double(double v) {
    if constexpr (std::is_same_v<T, Rational>) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite value cannot be made exact");
        return Rational(v);  // mpq_set_d is exact
    } else {
        return T(v);
    }
}

/// Converts between backends. Rational -> float rounds; float -> Rational is exact.
template <class To, class From>
To convert(const From& v) {
    if constexpr (std::is_same_v<To, From>) {
        return v;
    } else if constexpr (std::is_same_v<To, double>) {
        return to_double(v);
    } else if constexpr (std::is_same_v<To, Rational>) {
        return from_double<Rational>(to_double(v));
    } else {
        return To(v);
    }
}

inline std::string to_string(const Rational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1.5e-3") exactly.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    };
    trim(s);
    if (s.empty()) throw InvalidArgument("empty rational literal");
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            BigInt p(s.substr(0, slash));
            BigInt q(s.substr(slash + 1));
            if (q == 0) throw InvalidArgument("zero denominator in '" + s + "'");
            return Rational(p, q);
        }
        std::string mant = s;
        long exp10 = 0;
        if (auto e = mant.find_first_of("eE"); e != std::string::npos) {
            exp10 = std::stol(mant.substr(e + 1));
            mant = mant.substr(0, e);
        }
        bool neg = false;
        if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
            neg = mant[0] == '-';
            mant.erase(mant.begin());
        }
        if (auto dot = mant.find('.'); dot != std::string::npos) {
            exp10 -= static_cast<long>(mant.size() - dot - 1);
            mant.erase(dot, 1);
        }
        if (mant.empty() || mant.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidArgument("malformed rational literal '" + s + "'");
        Rational r{BigInt(mant)};
        BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exp10)));
        r = exp10 >= 0 ? Rational(r * ten_pow) : Rational(r / ten_pow);
        return neg ? Rational(-r) : r;
    } catch (const InvalidArgument&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidArgument("malformed rational literal '" + s + "'");
    }
}

/// Exact k-th root of a nonnegative rational when it is a perfect power.
inline std::optional<Rational> exact_root(const Rational& v, unsigned k) {
    if (v < 0 || k == 0) return std::nullopt;
    if (k == 1) return v;
    auto iroot = [k](const BigInt& n) -> std::optional<BigInt> {
        BigInt r;
        if (mpz_root(r.backend().data(), n.backend().data(), k) == 0) return std::nullopt;
        return r;
    };
    auto p = iroot(numerator(v));
    auto q = iroot(denominator(v));
    if (!p || !q) return std::nullopt;
    return Rational(*p, *q);
}

// ---------------------------------------------------------------------------
// Cooperative cancellation for long-running certifications.

struct Deadline {
    std::optional<std::chrono::steady_clock::time_point> until;

    static Deadline none() { return {}; }
    static Deadline in(std::chrono::milliseconds ms) { return {std::chrono::steady_clock::now() + ms}; }

    void check() const {
        if (until && std::chrono::steady_clock::now() > *until) throw Cancelled("deadline exceeded");
    }
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poe
