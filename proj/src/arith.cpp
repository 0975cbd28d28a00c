#include "ecmap/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecmap {

char const * to_string(Tri t)
{
    switch (t) {
    case Tri::False:
        return "false";
    case Tri::True:
        return "true";
    default:
        return "unknown";
    }
}

Int parse_int(std::string_view s)
{
    std::string str(s);
    while (!str.empty() && (str.front() == ' ' || str.front() == '+'))
        str.erase(str.begin());
    while (!str.empty() && str.back() == ' ')
        str.pop_back();
    Int r;
    if (str.empty() || r.set_str(str, 10) != 0)
        throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
    return r;
}

Rational parse_rational(std::string_view s)
{
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Int gcd(Int const & a, Int const & b)
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm(Int const & a, Int const & b)
{
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Int abs(Int const & a)
{
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

Int isqrt(Int const & n)
{
    if (n < 0)
        throw std::invalid_argument("isqrt of negative integer");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(Int const & n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Bezout ext_gcd(Int const & a, Int const & b)
{
    Bezout r;
    mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    return r;
}

Int inverse_mod(Int const & a, Int const & m)
{
    if (m <= 0)
        throw DomainError("modulus", "inverse_mod: modulus must be positive");
    if (m == 1)
        return 0;
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DomainError("not-invertible",
                          "inverse_mod: " + a.get_str() + " is not invertible modulo " +
                                  m.get_str());
    return fmod(r, m);
}

Int fdiv(Int const & a, Int const & m)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return q;
}

Int fmod(Int const & a, Int const & m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool fits_int64(Int const & n)
{
    static Int const lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
    static Int const hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
    return n >= lo && n <= hi;
}

std::int64_t to_int64(Int const & n)
{
    if (!fits_int64(n))
        throw std::overflow_error("integer does not fit in 64 bits: " + n.get_str());
    // mpz_get_si covers long, which is 64-bit on the supported platforms
    static_assert(sizeof(long) == 8);
    return mpz_get_si(n.get_mpz_t());
}

std::vector<std::uint32_t> const & small_primes()
{
    static std::vector<std::uint32_t> const primes = [] {
        constexpr std::uint32_t limit = 1u << 22;
        std::vector<bool> composite(limit, false);
        std::vector<std::uint32_t> ps;
        ps.reserve(300000);
        for (std::uint32_t i = 2; i < limit; ++i) {
            if (composite[i])
                continue;
            ps.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j < limit; j += i)
                composite[j] = true;
        }
        return ps;
    }();
    return primes;
}

std::optional<std::vector<std::pair<Int, unsigned>>> factor_trial(Int n,
                                                                   std::uint64_t bound)
{
    std::vector<std::pair<Int, unsigned>> out;
    n = abs(n);
    if (n == 0)
        return std::nullopt;
    bound = std::min<std::uint64_t>(bound, 1u << 22);
    bool sqrt_reached = false;
    for (std::uint32_t p : small_primes()) {
        if (p >= bound)
            break;
        if (Int(p) * p > n) {
            sqrt_reached = true;
            break;
        }
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            out.emplace_back(Int(p), e);
        }
    }
    if (n > 1) {
        // without reaching sqrt(n), only n < bound^2 certifies a prime cofactor
        Int b(static_cast<unsigned long>(bound));
        if (!sqrt_reached && n >= b * b)
            return std::nullopt;
        out.emplace_back(n, 1u);
    }
    return out;
}

} // namespace ecmap

namespace ecmap {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (static_cast<unsigned __int128>(r) * r > n)
        --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

} // namespace

Tri squarefree_status_u64(std::uint64_t n)
{
    if (n == 0)
        return Tri::False;
    for (std::uint32_t p : small_primes()) {
        auto p3 = static_cast<unsigned __int128>(p) * p * p;
        if (p3 > n)
            break;
        if (n % p == 0) {
            n /= p;
            if (n % p == 0)
                return Tri::False;
        }
    }
    // n has no prime factor below the cube root of n: 1, p, pq or p^2
    if (n > 1) {
        std::uint64_t r = isqrt_u64(n);
        if (r * r == n)
            return Tri::False;
    }
    return Tri::True;
}

Tri squarefree_status(Int const & n_in)
{
    Int n = abs(n_in);
    if (n == 0)
        return Tri::False;
    if (mpz_fits_ulong_p(n.get_mpz_t()))
        return squarefree_status_u64(mpz_get_ui(n.get_mpz_t()));
    std::uint32_t last = 2;
    for (std::uint32_t p : small_primes()) {
        last = p;
        if (Int(p) * p * p > n)
            break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            if (mpz_divisible_ui_p(n.get_mpz_t(), p))
                return Tri::False;
        }
    }
    if (n == 1)
        return Tri::True;
    if (is_perfect_square(n))
        return Tri::False;
    Int l(last);
    if (l * l * l > n)
        return Tri::True;
    return Tri::Unknown;
}

} // namespace ecmap
