#ifndef ECMAP_BOUNDS_HPP
#define ECMAP_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ecmap/elliptic.hpp"
#include "ecmap/interval.hpp"

namespace ecmap {

/// delta(E) = h_W(j)/8 + h_W(Delta)/12 + 5/3
Interval delta_E(Curve const & E);

/// Volume of the unit ball in R^r.
Interval unit_ball_volume(unsigned r);

/// |G| Omega_r / sqrt(R).  Throws DomainError("independence") when r > 0 and
/// the regulator enclosure is not certainly positive.
Interval c_constant(std::int64_t G_order, Interval const & regulator, unsigned r);
Interval c_constant(std::int64_t G_order, std::vector<RationalPoint> const & pts, Curve const & E,
                    double tol = 1e-12);

/// T_E(u, v, eps) = log(4 d^(1-eps) / (uv + v^2))/8 - delta(E)/4.
/// Throws DomainError when d_E(u, v) <= 0.
Interval t_bound(Curve const & E, Int const & u, Int const & v, double eps);
Interval t_bound(Curve const & E, Int const & u, Int const & v, Interval const & eps);

/// Height data of a point set that the bound formulas consume.
struct PointSetSummary
{
    unsigned rank = 0;
    Interval regulator{1L};
    Interval diameter{0L};
};
PointSetSummary summarize_points(Curve const & E, std::vector<RationalPoint> const & pts,
                                 double tol = 1e-12);

/// c (T^(r/2) - r sqrt(diam) T^((r-1)/2)), clamped below at 0.  Requires T > 0.
Interval point_count_bound(Interval const & c, Interval const & T, Interval const & diam, unsigned r);

struct BoundReport
{
    std::size_t d_bits = 0;
    Interval T, c, lower_bound;
    /// Lower-bound formula applies: T > diam/4 certified.
    Tri t_above_threshold = Tri::False;
    /// T > alpha/8 log d + diam/4.
    Tri alpha_check = Tri::False;
    std::optional<Interval> gz_bound; // nullopt when D cannot be factored
    std::string note;
};

/// Class-number lower bound at (u, v).  The formula is total; flags record
/// whether its hypotheses are certified.  `with_gz` adds the classical bound
/// (trial-division factorization of D, may be slow for huge D).
BoundReport class_number_lower_bound(Curve const & E, PointSetSummary const & pts,
                                     std::int64_t G_order, Int const & u, Int const & v,
                                     double eps, double alpha, bool with_gz = true);

/// log(D)/7000 * prod over primes p | D, p != D of (1 - floor(2 sqrt p)/(p + 1)).
Interval gross_zagier_bound(Int const & D, std::vector<std::pair<Int, unsigned>> const & factors);
/// Factors D by trial division; nullopt when that fails.
std::optional<Interval> gross_zagier_bound(Int const & D);

/// Integer polynomial, coefficient of t^k at index k.
using Poly = std::vector<Int>;

struct FamilyPoint
{
    Poly r, s; // x = r(t)/s(t)
};

struct FamilyDescriptor
{
    Poly a4, a6;
    std::vector<FamilyPoint> points;
    std::int64_t torsion_order = 1;

    /// {"a4": [...], "a6": [...], "points": [{"r": [...], "s": [...]}, ...],
    ///  "torsion_order": n}; integers as JSON numbers or decimal strings.
    static FamilyDescriptor from_json_text(std::string const & text);
    /// The same keys in TOML: a4/a6/torsion_order at top level and one
    /// [[points]] table per point.
    static FamilyDescriptor from_toml_text(std::string const & text);
};

/// Bound H(q(t)) <= c (|t| + m)^n for polynomial values.
struct PolyEnvelope
{
    unsigned n = 0;
    Int c{1};
    Int m{1};
};
/// Envelope of max(|r(t)|, |s(t)|).
PolyEnvelope poly_envelope(Poly const & r, Poly const & s);

struct FamilyCmin
{
    Interval coefficient; // |G| Omega_r (prod slope_i)^(-1/2)
    Rational exponent;    // -r'/2, r' = number of points with positive slope
    Int m;
    Interval mu;
    std::vector<PolyEnvelope> point_envelopes;
    PolyEnvelope j_envelope, disc_envelope;
    std::vector<Interval> slope, intercept; // hhat(P_i) <= intercept + slope log(|t| + m)

    /// Upper envelope of hhat(P_i) on the member at parameter t.
    Interval height_upper(std::size_t i, Int const & t) const;
    /// coefficient * (log(|t| + m) + mu)^exponent
    Interval value(Int const & t) const;
};

FamilyCmin family_cmin(FamilyDescriptor const & F);

/// Evaluate an integer polynomial.
Int poly_eval(Poly const & p, Int const & t);

} // namespace ecmap

#endif
