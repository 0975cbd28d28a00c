#ifndef ECMAP_ARITH_HPP
#define ECMAP_ARITH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ecmap {

using Int = mpz_class;
using Rational = mpq_class;

/// Error raised when an input violates a mathematical precondition.
/// `kind` is a short machine-readable tag carried into CLI error objects.
class DomainError : public std::runtime_error
{
    std::string kind_;

  public:
    DomainError(std::string kind, std::string const & what)
        : std::runtime_error(what), kind_(std::move(kind))
    {
    }
    std::string const & kind() const noexcept { return kind_; }
};

/// Three-valued answer for predicates evaluated in interval arithmetic or
/// under a factorization budget.
enum class Tri { False, True, Unknown };

inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }
char const * to_string(Tri t);

Int parse_int(std::string_view s);
Rational parse_rational(std::string_view s);

Int gcd(Int const & a, Int const & b);
Int lcm(Int const & a, Int const & b);
Int abs(Int const & a);
Int isqrt(Int const & n);
bool is_perfect_square(Int const & n);

/// Extended gcd with gmp's canonical cofactors: s*a + t*b = g, g >= 0.
struct Bezout
{
    Int g, s, t;
};
Bezout ext_gcd(Int const & a, Int const & b);

/// Least non-negative inverse of `a` modulo `m` (m >= 1). Returns 0 for m = 1.
/// Throws DomainError when gcd(a, m) != 1.
Int inverse_mod(Int const & a, Int const & m);

/// Floor division and modulo with a non-negative remainder for positive m.
Int fdiv(Int const & a, Int const & m);
Int fmod(Int const & a, Int const & m);

bool fits_int64(Int const & n);
std::int64_t to_int64(Int const & n);

/// Prime factorization by trial division. Returns nullopt when the cofactor
/// left after dividing out primes below `bound` is neither 1 nor provably
/// prime (cofactor < bound^2).
std::optional<std::vector<std::pair<Int, unsigned>>>
factor_trial(Int n, std::uint64_t bound = 1u << 22);

/// Square-freeness by trial division up to the cube root of the unfactored
/// part (primes below 2^22) plus a perfect-square test of the cofactor.
/// Exact for every n < 2^66; larger inputs may come back Unknown.  1 is
/// square-free; 0 is not.
Tri squarefree_status(Int const & n);
Tri squarefree_status_u64(std::uint64_t n);

/// Primes below 2^22, sieved once on first use.
std::vector<std::uint32_t> const & small_primes();

} // namespace ecmap

#endif
