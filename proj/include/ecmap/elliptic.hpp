#ifndef ECMAP_ELLIPTIC_HPP
#define ECMAP_ELLIPTIC_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecmap/arith.hpp"
#include "ecmap/interval.hpp"

namespace ecmap {

/// Short Weierstrass curve y^2 = x^3 + a4 x + a6 with integer coefficients.
struct Curve
{
    Int a4, a6;

    Curve() = default;
    /// Throws DomainError("singular-curve") when 4 a4^3 + 27 a6^2 = 0.
    Curve(Int a4_, Int a6_);

    /// 4 a4^3 + 27 a6^2
    Int disc_core() const { return 4 * a4 * a4 * a4 + 27 * a6 * a6; }
    /// Delta(E) = -16 (4 a4^3 + 27 a6^2)
    Int discriminant() const { return -16 * disc_core(); }
    /// j(E) = 6912 a4^3 / (4 a4^3 + 27 a6^2), in lowest terms.
    Rational j_invariant() const;
    /// x^3 + a4 x + a6
    Rational rhs(Rational const & x) const;

    std::string str() const; // "a4,a6"
    static Curve parse(std::string_view s);
    bool operator==(Curve const &) const = default;
};

struct RationalPoint
{
    bool infinity = true;
    Rational x, y;

    static RationalPoint at_infinity() { return {}; }
    static RationalPoint affine(Rational x, Rational y) { return {false, std::move(x), std::move(y)}; }

    std::string str() const; // "x,y" with rational coordinates, or "inf"
    /// "x,y" with each coordinate an integer or p/q; "inf" or "O" for infinity.
    static RationalPoint parse(std::string_view s);
    bool operator==(RationalPoint const &) const = default;
};

bool on_curve(Curve const & E, RationalPoint const & P);
/// Throws DomainError("not-on-curve") unless P lies on E.
void require_on_curve(Curve const & E, RationalPoint const & P);

RationalPoint negate(RationalPoint const & P);
RationalPoint add(Curve const & E, RationalPoint const & P, RationalPoint const & Q);
RationalPoint scalar_mul(Curve const & E, Int k, RationalPoint const & P);

/// x = A / C^2, y = B / C^3 with gcd(A, C) = gcd(B, C) = 1 and C > 0.
struct CanonicalRep
{
    Int A, B, C;
    bool operator==(CanonicalRep const &) const = default;
};
CanonicalRep canonical_rep(RationalPoint const & P);

/// log max(|num|, |den|) of a rational in lowest terms (0 for x = 0).
Interval rational_height(Rational const & x);
/// Weil height log H(x(P)); 0 at infinity.
Interval weil_height(RationalPoint const & P);

/// Rigorous enclosure of a real quantity: value = midpoint, error = radius.
struct HeightValue
{
    Interval range;

    Interval value() const { return range.midpoint(); }
    Interval error() const { return range.radius(); }
    double value_double() const { return range.mid_double(); }
    double error_double() const { return range.radius_upper(); }
};

/// Raised by canonical_height when tol cannot be met under the doubling cap;
/// carries the best enclosure obtained.
class HeightError : public DomainError
{
    HeightValue best_;

  public:
    HeightError(std::string const & what, HeightValue best)
        : DomainError("height-tolerance", what), best_(std::move(best))
    {
    }
    HeightValue const & best() const { return best_; }
};

/// Constants of the height-difference envelope:
/// -lower <= hhat(P) - h_W(P)/2 <= upper.
struct HeightEnvelope
{
    Interval lower, upper;
};
HeightEnvelope height_envelope(Curve const & E);

/// Maximum number of doublings canonical_height will perform.
inline constexpr int max_height_doublings = 60;

/// Canonical height hhat = 1/2 lim h_W([n]P)/n^2 with error <= tol.
HeightValue canonical_height(Curve const & E, RationalPoint const & P, double tol = 1e-12);

/// <P, Q> = (hhat(P + Q) - hhat(P) - hhat(Q)) / 2.
HeightValue neron_tate_pairing(Curve const & E, RationalPoint const & P, RationalPoint const & Q,
                               double tol = 1e-12);

/// Gram matrix of the pairing (symmetric, intervals).
std::vector<std::vector<Interval>> height_gram(Curve const & E,
                                               std::vector<RationalPoint> const & pts,
                                               double tol = 1e-12);
/// Determinant of the Gram matrix; 1 for the empty set.
HeightValue regulator(Curve const & E, std::vector<RationalPoint> const & pts,
                      double tol = 1e-12);
/// max over delta in {0, +-1}^r of 2 hhat(sum delta_i P_i); 0 for the empty set.
HeightValue diameter(Curve const & E, std::vector<RationalPoint> const & pts,
                     double tol = 1e-12);

/// Order of P if it is torsion (order <= 12 by Mazur), otherwise nullopt.
std::optional<int> torsion_order(Curve const & E, RationalPoint const & P);

struct TorsionInfo
{
    std::vector<RationalPoint> points; // includes infinity, sorted
    std::string structure;             // "trivial", "Z/n" or "Z/2xZ/2m"
    std::vector<int> invariants;       // elementary divisors, empty when trivial
    /// Largest numerator A over affine torsion points; nullopt if there are none.
    std::optional<Int> A0;

    std::size_t order() const { return points.size(); }
};
/// Nagell-Lutz enumeration.  Throws DomainError("factorization") when
/// 4 a4^3 + 27 a6^2 cannot be factored by trial division.
TorsionInfo torsion_subgroup(Curve const & E);

/// Integer line l y = m x + n, gcd(l, m, n) = 1, l > 0.
struct Line
{
    Int l, m, n;
    bool operator==(Line const &) const = default;
};
/// Line through P1 and P2 (tangent when equal); it also meets -(P1 + P2).
/// Throws DomainError("vertical-line") when the line is vertical.
Line secant_line(Curve const & E, RationalPoint const & P1, RationalPoint const & P2);

} // namespace ecmap

#endif
