#ifndef ECMAP_CLASSMAP_HPP
#define ECMAP_CLASSMAP_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecmap/elliptic.hpp"
#include "ecmap/quadform.hpp"

namespace ecmap {

/// d_E(u, v) = v (u^3 + a4 u v^2 - a6 v^3); the discriminant family is -4 d_E.
Int d_family(Curve const & E, Int const & u, Int const & v);
inline Int D_family(Curve const & E, Int const & u, Int const & v) { return 4 * d_family(E, u, v); }

/// u > 0, v > 0, 3u^2 + a4 v^2 > 0 and d_E(u, v) > 0.
bool is_map_suitable(Curve const & E, Int const & u, Int const & v);

/// v > 1 and (d_E(u, v) - u v) / v^2 > A0, where A0 is the largest
/// numerator of an affine torsion point (no condition when there is none).
bool is_kernel_suitable(Curve const & E, Int const & u, Int const & v, TorsionInfo const & tors);
bool is_kernel_suitable(Curve const & E, Int const & u, Int const & v);

/// The two halves of the height-ball window, each decided in interval
/// arithmetic:
///   lower: ((uv + v^2)/4)^(1+e') exp(2 (1+e') (delta(E) + diam)) < d_E
///   upper: d_E < (v^2 (uv + v^2))^(1+e'),   e' = eps / (1 - eps).
struct BoundSuitability
{
    Tri lower = Tri::False, upper = Tri::False;
    Tri both() const;
};
BoundSuitability bound_suitability(Curve const & E, Interval const & diam, Int const & u,
                                   Int const & v, double eps);
Tri is_bound_suitable(Curve const & E, Interval const & diam, Int const & u, Int const & v,
                      double eps);
Tri is_bound_suitable(Curve const & E, std::vector<RationalPoint> const & pts, Int const & u,
                      Int const & v, double eps, double tol = 1e-12);

struct PhiResult
{
    QuadForm raw_form;
    QuadForm reduced_class;
    Int mu, a, g;
    CanonicalRep rep;
};

/// The form (v a/g^2, 2 mu B v^2/g^2, (mu^2 B^2 v^4/g^4 + d)/(v a/g^2)) with
/// a = A v + C^2 u, g = gcd(C, v) and mu the least non-negative inverse of
/// C^3/g^2 modulo v a/g^2.  Infinity maps to the principal form.
/// Requires map-suitability and a fundamental -4 d_E(u, v) (checked).
PhiResult phi(Curve const & E, Int const & u, Int const & v, RationalPoint const & P);
/// Same form for a caller-chosen residue mu (must satisfy the congruence).
PhiResult phi_with_mu(Curve const & E, Int const & u, Int const & v, RationalPoint const & P,
                      Int const & mu);

/// Throws unless (u, v) is map-suitable and -4 d_E(u, v) is fundamental.
void require_phi_domain(Curve const & E, Int const & u, Int const & v);

struct CubeWitness
{
    BhargavaCube cube;
    Line line;
    Int d, C, M, N, b;
    std::array<Int, 3> A, B, Cs, a, g, mu, ell, q;
};

/// Cube attached to an affine collinear triple P1 + P2 + P3 = inf.
/// `bezout_shift` moves each (mu_i, l_i) along its solution line.
CubeWitness bhargava_cube_of_triple(Curve const & E, Int const & u, Int const & v,
                                    RationalPoint const & P1, RationalPoint const & P2,
                                    RationalPoint const & P3,
                                    std::array<Int, 3> const & bezout_shift = {0, 0, 0});

struct IdentityCheck
{
    std::string name;
    bool ok;
};
/// Re-derives every stored relation of a witness from its own fields:
/// integrality relations, the Bezout relations, the eight cube identities,
/// and the cube discriminant.  Needs the curve and (u, v).
std::vector<IdentityCheck> check_cube_witness(CubeWitness const & w, Curve const & E,
                                              Int const & u, Int const & v);
bool cube_witness_ok(CubeWitness const & w, Curve const & E, Int const & u, Int const & v);

/// Class of phi(P1 + P2) equals the composition of the classes of phi(P1), phi(P2).
bool verify_homomorphism(Curve const & E, Int const & u, Int const & v,
                         RationalPoint const & P1, RationalPoint const & P2);

/// (u, v) as the twist point (-u/v, 1/v^2) of -d y^2 = x^3 + a4 x + a6, moved to
/// the integral model Y^2 = X^3 + a4 d^2 X - a6 d^3 by (X, Y) = (-d x, d^2 y).
struct TwistPoint
{
    Curve twist;
    RationalPoint point;
};
TwistPoint twist_point(Curve const & E, Int const & u, Int const & v);

/// True iff [n]Q != inf for every n in {2..10, 12}.
bool twist_point_infinite_order(Curve const & E, Int const & u, Int const & v);

/// Torsion point -> reduced class.  Refuses kernel-unsuitable pairs.
std::vector<std::pair<RationalPoint, QuadForm>> torsion_embedding(Curve const & E, Int const & u,
                                                                  Int const & v);
std::vector<std::pair<RationalPoint, QuadForm>>
torsion_embedding(Curve const & E, Int const & u, Int const & v, TorsionInfo const & tors);

} // namespace ecmap

#endif
