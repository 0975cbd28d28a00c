#ifndef ECMAP_SIEVE_HPP
#define ECMAP_SIEVE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecmap/bounds.hpp"
#include "ecmap/classmap.hpp"

namespace ecmap {

/// Square-free test for n >= 1 (|n| is used otherwise; 0 is not square-free).
/// Exact when |n| factors by trial division below 2^22 with a cofactor that is
/// 1, prime, or a checkable square below 2^64; Unknown otherwise.
Tri is_squarefree(Int const & n);

/// G_n(x, y) = d_E(x + n y, y).
Int shifted_form(Curve const & E, Int const & n, Int const & x, Int const & y);
/// Coefficients of G_n(x, y) / y as a cubic in (x, y): x^3, x^2 y, x y^2, y^3.
std::array<Int, 4> shifted_cubic(Curve const & E, Int const & n);
/// All four cubic coefficients positive (then every box pair is map-suitable).
bool shifted_coefficients_positive(Curve const & E, Int const & n);

/// Which of the two admissible congruence conditions (M, a0, b0) meets.
///   power-of-two: M = 2^k with k >= 2, a0, b0 odd, G_n(a0, b0) != 0 (mod 4)
///   unit:         a0, b0 and G_n(a0, b0) are units modulo M
struct CongruenceCheck
{
    bool power_of_two = false, unit = false;
    std::string failure; // empty when either condition holds
    bool ok() const { return power_of_two || unit; }
};
CongruenceCheck check_congruence(Curve const & E, Int const & n, std::int64_t M, std::int64_t a0,
                                 std::int64_t b0);

/// Least n >= n_min with every G_n coefficient positive and
/// G_n(a0, b0) = 1 or 2 (mod 4), so -4 G_n(a, b) is fundamental whenever
/// G_n(a, b) is square-free and (a, b) = (a0, b0) mod 4.  Searches n_min .. n_min + 4K.
std::optional<Int> congruence_shift(Curve const & E, std::int64_t a0, std::int64_t b0,
                                    Int const & n_min = 1, unsigned window = 4096);

/// Box-to-X calibration: 0 < x, y < lambda X^(1/4) forces D = 4 G_n(x, y) < X.
/// lambda = (4 S)^(-1/4) with S the sum of |coefficients| of G_n.
double box_lambda(Curve const & E, Int const & n);

struct BoxCount
{
    std::int64_t count = 0;
    std::int64_t unknown = 0; // values whose square-freeness was undecided
    double density = 0;
};

/// #{(a, b) in (0, Y]^2 : a = a0, b = b0 (mod M), G_n(a, b) square-free}.
/// Throws DomainError("congruence-condition") naming the failed condition.
/// threads <= 0 uses the OpenMP default.
BoxCount count_squarefree_box(Curve const & E, Int const & n, std::int64_t Y, std::int64_t M,
                              std::int64_t a0, std::int64_t b0, int threads = 0);

struct Census
{
    std::int64_t pairs = 0;
    std::int64_t map_fail = 0, kernel_fail = 0, lower_fail = 0, upper_fail = 0;
    std::int64_t any_fail = 0;
    double failure_fraction() const { return pairs ? double(any_fail) / double(pairs) : 0.0; }
};

/// Failure counts over 0 < x, y < Y for the pairs (x + n y, y).  Bound
/// suitability is tested at both eps and eps + alpha; a pair fails a half
/// when either level is not certified.  Bound checks on map-unsuitable pairs
/// count as failures.
Census suitability_census(Curve const & E, PointSetSummary const & pts, Int const & n,
                          std::int64_t Y, double eps, double alpha, int threads = 0);

struct SearchConfig
{
    Curve curve{Int(0), Int(1)};
    std::vector<RationalPoint> points;
    std::int64_t G_order = 0; // 0: use the torsion subgroup order
    Int n{1};
    std::int64_t Y = 0; // box 0 < x, y < Y
    double epsilon = 0.1, alpha = 0.0;
    std::int64_t M = 1, a0 = 0, b0 = 0; // M = 1 disables the congruence filter
    std::optional<Int> conductor;
    std::optional<int> sign_epsilon;
    bool parity_filter = false; // keep only twist sign +1 (needs conductor and sign)
    bool require_bound = true;  // the eps and (eps + alpha) bound filters
    bool require_twist = true;  // twist point of infinite order
    bool require_embedding = true; // injective torsion embedding
    Int h_limit{1000000};       // exact class number attached for D <= h_limit
    double height_tol = 1e-12;
    int threads = 0;

    /// Throws DomainError("search-config") when an invariant fails.
    void validate() const;
};

struct PsiRecord
{
    Int u, v, D;
    bool map_suitable = false, kernel_suitable = false;
    Tri eps_bound = Tri::False, eps_alpha_bound = Tri::False;
    bool twist_infinite = false, torsion_embeds = false;
    BoundReport bound_report;
    std::optional<std::int64_t> h;
    std::optional<int> twist_sign;
    std::size_t fiber = 1; // number of box pairs that produced this D
};

struct SearchResult
{
    std::vector<PsiRecord> records; // sorted by D; one per D
    std::size_t raw_hits = 0;       // before deduplication
    bool fibers_within_bound = true; // every fiber <= 3 tau(D)
    double lambda = 0;
    std::int64_t G_order = 0;
    bool conductor_divides_coefficients = false; // 4 N | a4 and 4 N | a6
};

SearchResult search_psi(SearchConfig const & cfg);

/// kronecker(-d, -N) * eps.  Throws DomainError("character-undefined")
/// unless gcd(d, 4N) = 1.
int twist_sign(Int const & d, Int const & N, int eps);

/// Number of positive divisors; nullopt when |n| does not factor by trial division.
std::optional<Int> divisor_count(Int const & n);

namespace serial {
// Single-threaded references with identical results.
BoxCount count_squarefree_box(Curve const & E, Int const & n, std::int64_t Y, std::int64_t M,
                              std::int64_t a0, std::int64_t b0);
Census suitability_census(Curve const & E, PointSetSummary const & pts, Int const & n,
                          std::int64_t Y, double eps, double alpha);
SearchResult search_psi(SearchConfig const & cfg);
} // namespace serial

} // namespace ecmap

#endif
