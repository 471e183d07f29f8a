#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wisc {

// Exact nonnegative rational vertex weight, kept in canonical form
// (gcd(num, den) = 1, den > 0) by gmp.
using Weight = mpq_class;
using Int = mpz_class;

inline Weight make_weight(long num, long den = 1) {
    Weight w(num, den);
    w.canonicalize();
    return w;
}

// Parses "p" or "p/q". Rejects negatives and malformed strings.
inline Weight parse_weight(const std::string& s) {
    Weight w;
    if (s.empty() || w.set_str(s, 10) != 0)
        throw std::invalid_argument("cannot parse rational '" + s + "'");
    if (sgn(w.get_den()) == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    w.canonicalize();
    if (w < 0) throw std::invalid_argument("negative weight '" + s + "'");
    return w;
}

inline std::string weight_str(const Weight& w) { return w.get_str(); }

inline Weight weight_pow(const Weight& w, unsigned long k) {
    Weight r;
    mpz_pow_ui(r.get_num().get_mpz_t(), w.get_num().get_mpz_t(), k);
    mpz_pow_ui(r.get_den().get_mpz_t(), w.get_den().get_mpz_t(), k);
    return r;  // powers of a canonical rational stay canonical
}

inline Int int_pow(const Int& b, unsigned long k) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), k);
    return r;
}

inline Int ceil_to_int(const Weight& w) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), w.get_num().get_mpz_t(), w.get_den().get_mpz_t());
    return q;
}

inline Int factorial(unsigned long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

// Builds 2^log2x as an exact rational; used to lift chain estimates that
// would overflow double back into Weight space.
inline Weight weight_from_log2(double log2x) {
    long e = static_cast<long>(log2x) - 40;
    double frac = log2x - static_cast<double>(e);  // in [40, 42)
    double scaled = std::exp2(frac);               // fits comfortably in double
    Weight m(scaled);                              // exact binary rational
    Weight p(1);
    if (e >= 0) {
        mpz_ui_pow_ui(p.get_num().get_mpz_t(), 2, static_cast<unsigned long>(e));
    } else {
        mpz_ui_pow_ui(p.get_den().get_mpz_t(), 2, static_cast<unsigned long>(-e));
    }
    Weight r = m * p;
    r.canonicalize();
    return r;
}

enum class EngineKind { exact, mcmc };

inline const char* engine_name(EngineKind k) {
    return k == EngineKind::exact ? "exact" : "mcmc";
}

// A counting result with its accuracy contract. Exact-engine results carry
// eps = 0. Results tagged mcmc satisfy Pr(|value/W - 1| <= eps) >= 3/4.
struct Estimate {
    Weight value;
    double eps = 0.0;
    EngineKind engine = EngineKind::exact;
};

// The input graph fell outside the class the driver handles; the pipeline
// halts rather than risk a wrong count.
struct NotInClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The chain estimator did not converge within its step budget.
struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A desk-scale cap (oracle or exact permanent) was exceeded.
struct CapExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accuracy-label composition for derived estimates. Exact inputs carry 0 and
// compose to 0; randomized inputs compose to a conservative bound.
inline double eps_mul(double a, double b) { return a + b + a * b; }

inline double eps_div(double a, double b) {
    if (b >= 0.5) return 8.0;  // label saturates; value itself is still reported
    return (a + b) / (1.0 - b);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace wisc
