// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's number theory; only GMP primitives.
#ifndef ECMAP_TESTS_ORACLES_HPP
#define ECMAP_TESTS_ORACLES_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

namespace oracle {

inline bool squarefree(std::int64_t n)
{
    n = std::llabs(n);
    if (n == 0)
        return false;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0)
                return false;
        }
    }
    return true;
}

/// Fundamental discriminant test for disc < 0 straight from the definition.
inline bool fundamental(std::int64_t disc)
{
    std::int64_t r = ((disc % 4) + 4) % 4;
    if (r == 1)
        return squarefree(disc);
    if (r != 0)
        return false;
    std::int64_t m = disc / 4;
    std::int64_t rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && squarefree(m);
}

/// (a | n) via GMP.
inline int kronecker(std::int64_t a, std::int64_t n)
{
    mpz_class A(static_cast<long>(a));
    return mpz_kronecker_si(A.get_mpz_t(), static_cast<long>(n));
}

/// h(-D) for fundamental -D from the character sum
///   h = -(w / 2D) sum_{n=1}^{D} chi(n) n   (D = 3, 4),
///   h = (2 - chi(2))^(-1) sum_{n < D/2} chi(n)   (D > 4).
inline std::int64_t class_number_fundamental(std::int64_t D)
{
    if (D == 3 || D == 4) {
        std::int64_t w = D == 3 ? 6 : 4;
        std::int64_t s = 0;
        for (std::int64_t n = 1; n <= D; ++n)
            s += kronecker(-D, n) * n;
        return -w * s / (2 * D);
    }
    std::int64_t s = 0;
    for (std::int64_t n = 1; 2 * n < D; ++n)
        s += kronecker(-D, n);
    return s / (2 - kronecker(-D, 2));
}

/// Same sum with chi evaluated on primes only and extended multiplicatively.
/// `spf` is a smallest-prime-factor table covering [0, D/2].
inline std::int64_t class_number_fundamental_fast(std::int64_t D,
                                                  std::vector<std::uint32_t> const & spf)
{
    if (D <= 4)
        return class_number_fundamental(D);
    std::int64_t half = (D - 1) / 2;
    std::vector<signed char> chi(static_cast<std::size_t>(half) + 1, 0);
    chi[1] = 1;
    std::int64_t s = 1;
    mpz_class A(static_cast<long>(-D));
    for (std::int64_t n = 2; n <= half; ++n) {
        std::uint32_t p = spf[static_cast<std::size_t>(n)];
        if (p == n)
            chi[static_cast<std::size_t>(n)] =
                    static_cast<signed char>(mpz_kronecker_si(A.get_mpz_t(), static_cast<long>(p)));
        else
            chi[static_cast<std::size_t>(n)] = static_cast<signed char>(
                    chi[p] * chi[static_cast<std::size_t>(n / p)]);
        s += chi[static_cast<std::size_t>(n)];
    }
    return s / (2 - mpz_kronecker_si(A.get_mpz_t(), 2));
}

inline std::vector<std::uint32_t> smallest_prime_factors(std::size_t limit)
{
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::size_t i = 2; i <= limit; ++i)
        if (spf[i] == 0)
            for (std::size_t j = i; j <= limit; j += i)
                if (spf[j] == 0)
                    spf[j] = static_cast<std::uint32_t>(i);
    return spf;
}

/// h(-D) for any D > 0 with -D = 0, 1 mod 4, via the conductor formula
///   h(-D0 f^2) = h(-D0) f / [O_K^* : O^*] prod_{p | f} (1 - chi(p)/p).
inline std::int64_t class_number_any(std::int64_t D)
{
    std::int64_t f = 1, D0 = D;
    for (std::int64_t k = 1; k * k <= D; ++k)
        if (D % (k * k) == 0 && fundamental(-(D / (k * k)))) {
            f = k;
            D0 = D / (k * k);
        }
    std::int64_t h0 = class_number_fundamental(D0);
    // h = h0 * f / units * prod (1 - chi(p)/p), computed exactly
    mpq_class h(h0 * f);
    std::int64_t g = f;
    for (std::int64_t p = 2; p <= g; ++p) {
        if (g % p)
            continue;
        while (g % p == 0)
            g /= p;
        h *= mpq_class(p - kronecker(-D0, p), p);
    }
    std::int64_t units = f == 1 ? 1 : (D0 == 3 ? 3 : D0 == 4 ? 2 : 1);
    h /= units;
    h.canonicalize();
    return h.get_num().get_si();
}

/// Brute-force h(-D): count reduced primitive (a, b, c) by direct loops.
inline std::int64_t class_number_brute(std::int64_t D)
{
    std::int64_t h = 0;
    for (std::int64_t a = 1; 3 * a * a <= D; ++a)
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b + D;
            if (num % (4 * a))
                continue;
            std::int64_t c = num / (4 * a);
            if (c < a || (c == a && b < 0))
                continue;
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1)
                continue;
            ++h;
        }
    return h;
}

struct Form
{
    mpz_class a, b, c;
};

/// Gauss reduction written out independently.
inline Form reduce(Form f)
{
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            // b -> b - 2ka into (-a, a]
            mpz_class two_a = 2 * f.a;
            mpz_class k;
            mpz_class num = f.a - f.b;
            mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), two_a.get_mpz_t());
            mpz_class nb = f.b + 2 * k * f.a;
            f.c = f.c + k * f.b + k * k * f.a;
            f.b = nb;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        if (f.b > f.a || f.b <= -f.a)
            continue;
        return f;
    }
}

/// Composition by brute search: move g to an equivalent form whose first
/// coefficient is coprime to f's, then solve the Dirichlet congruences for B
/// by scanning [0, 2 a1 a2).
inline Form compose(Form const & f, Form g)
{
    mpz_class disc = f.b * f.b - 4 * f.a * f.c;
    // values g(x, y) for small coprime (x, y) give equivalent forms
    if (gcd(f.a, g.a) != 1) {
        bool found = false;
        for (long x = -12; x <= 12 && !found; ++x)
            for (long y = -12; y <= 12 && !found; ++y) {
                if (std::gcd(std::labs(x), std::labs(y)) != 1)
                    continue;
                mpz_class val = g.a * x * x + g.b * x * y + g.c * y * y;
                if (gcd(val, f.a) != 1)
                    continue;
                // complete (x, y) to a matrix [[x, r], [y, s]] with xs - ry = 1
                mpz_class gg, s, t, X(x), Y(y);
                mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), X.get_mpz_t(),
                           Y.get_mpz_t());
                // x s - y (-t) = 1  ->  r = -t
                mpz_class r = -t;
                mpz_class na = val;
                mpz_class nb = 2 * g.a * X * r + g.b * (X * s + r * Y) + 2 * g.c * Y * s;
                mpz_class nc = g.a * r * r + g.b * r * s + g.c * s * s;
                g = Form{na, nb, nc};
                found = true;
            }
        if (!found)
            std::abort();
    }
    mpz_class A = f.a * g.a;
    mpz_class lim = 2 * A;
    for (mpz_class B = 0; B < lim; ++B) {
        mpz_class d1 = B - f.b, d2 = B - g.b, d3 = B * B - disc;
        if (mpz_divisible_p(d1.get_mpz_t(), mpz_class(2 * f.a).get_mpz_t()) &&
            mpz_divisible_p(d2.get_mpz_t(), mpz_class(2 * g.a).get_mpz_t()) &&
            mpz_divisible_p(d3.get_mpz_t(), mpz_class(4 * A).get_mpz_t())) {
            mpz_class C = d3 / (4 * A);
            return reduce(Form{A, B, C});
        }
    }
    std::abort();
}

/// Naive Weil height log max(|num|, |den|) in double.
inline double log_height(mpq_class const & x)
{
    mpz_class n = abs(x.get_num()), d = x.get_den();
    mpz_class const & m = n > d ? n : d;
    if (m == 0)
        return 0.0;
    long e = 0;
    double mant = mpz_get_d_2exp(&e, m.get_mpz_t());
    return std::log(mant) + static_cast<double>(e) * std::log(2.0);
}

/// x-coordinate doubling on y^2 = x^3 + a4 x + a6 with exact rationals:
/// x(2P) = (x^4 - 2 a4 x^2 - 8 a6 x + a4^2) / (4 (x^3 + a4 x + a6)).
inline mpq_class double_x(mpq_class const & x, mpz_class const & a4, mpz_class const & a6)
{
    mpq_class x2 = x * x;
    mpq_class num = x2 * x2 - 2 * a4 * x2 - 8 * a6 * x + a4 * a4;
    mpq_class den = 4 * (x2 * x + a4 * x + a6);
    mpq_class r = num / den;
    r.canonicalize();
    return r;
}

/// 1/2 h(x(2^k P)) / 4^k.
inline double height_by_doubling(mpq_class x, mpz_class const & a4, mpz_class const & a6, int k)
{
    for (int i = 0; i < k; ++i)
        x = double_x(x, a4, a6);
    return 0.5 * log_height(x) / std::pow(4.0, k);
}

} // namespace oracle

#endif
