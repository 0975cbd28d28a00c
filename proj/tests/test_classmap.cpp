#include <doctest.h>

#include <random>
#include <set>

#include "ecmap/classmap.hpp"
#include "oracles.hpp"

using namespace ecmap;

namespace {

RationalPoint pt(long x, long y)
{
    return RationalPoint::affine(Rational(x), Rational(y));
}

bool fundamental_pair(Curve const & E, long u, long v)
{
    Int D = D_family(E, Int(u), Int(v));
    return is_map_suitable(E, Int(u), Int(v)) && D.fits_slong_p() &&
           oracle::fundamental(-D.get_si());
}

} // namespace

TEST_CASE("family values and map suitability")
{
    Curve E(Int(0), Int(1));
    CHECK(d_family(E, Int(3), Int(1)) == 26);
    CHECK(D_family(E, Int(3), Int(1)) == 104);
    CHECK(D_family(E, Int(3), Int(2)) == 152);
    CHECK(is_map_suitable(E, Int(3), Int(1)));
    CHECK_FALSE(is_map_suitable(E, Int(1), Int(1))); // d = 0
    CHECK_FALSE(is_map_suitable(E, Int(0), Int(1)));
    CHECK_FALSE(is_map_suitable(E, Int(3), Int(-1)));
    Curve F(Int(-10), Int(0));
    CHECK_FALSE(is_map_suitable(F, Int(1), Int(1))); // 3u^2 + a4 v^2 < 0
}

TEST_CASE("phi on the worked example")
{
    Curve E(Int(0), Int(1));
    PhiResult r = phi(E, Int(3), Int(1), pt(2, 3));
    CHECK(r.raw_form == QuadForm(5, 6, 7));
    CHECK(r.reduced_class == QuadForm(5, -4, 6));
    CHECK(r.mu == 1);
    CHECK(phi(E, Int(3), Int(1), RationalPoint::at_infinity()).reduced_class == QuadForm(1, 0, 26));
}

TEST_CASE("phi refuses pairs outside its domain")
{
    Curve E(Int(0), Int(1));
    // -4 d_E(5, 1) = -496 = -16 * 31 is not fundamental
    CHECK_FALSE(oracle::fundamental(-D_family(E, Int(5), Int(1)).get_si()));
    try {
        phi(E, Int(5), Int(1), pt(2, 3));
        CHECK(false);
    } catch (DomainError const & e) {
        CHECK(e.kind() == "non-fundamental");
    }
    try {
        phi(E, Int(1), Int(1), pt(2, 3));
        CHECK(false);
    } catch (DomainError const & e) {
        CHECK(e.kind() == "map-suitability");
    }
    CHECK_THROWS_AS(phi(E, Int(3), Int(1), pt(1, 1)), DomainError);
}

TEST_CASE("phi images are primitive forms of the right discriminant")
{
    Curve E(Int(0), Int(1));
    auto tors = torsion_subgroup(E);
    for (long u = 1; u <= 25; ++u)
        for (long v = 1; v <= 25; ++v) {
            if (!fundamental_pair(E, u, v))
                continue;
            for (auto const & P : tors.points) {
                PhiResult r = phi(E, Int(u), Int(v), P);
                CHECK(r.raw_form.discriminant() == -D_family(E, Int(u), Int(v)));
                CHECK(r.raw_form.primitive());
                CHECK(r.raw_form.positive_definite());
                CHECK(r.reduced_class.is_reduced());
            }
        }
}

TEST_CASE("homomorphism property on random pairs of a rank-one curve")
{
    Curve E(Int(0), Int(-2));
    auto P = pt(3, 5);
    std::vector<RationalPoint> pts;
    for (int k = -3; k <= 3; ++k)
        pts.push_back(scalar_mul(E, k, P));
    int tested = 0;
    for (long u = 1; u <= 20 && tested < 10; ++u)
        for (long v = 1; v <= 6 && tested < 10; ++v) {
            if (!fundamental_pair(E, u, v))
                continue;
            ++tested;
            for (auto const & A : pts)
                for (auto const & B : pts)
                    CHECK(verify_homomorphism(E, Int(u), Int(v), A, B));
        }
    CHECK(tested == 10);
}

TEST_CASE("cube of the worked triple")
{
    Curve E(Int(0), Int(1));
    Int u(3), v(1);
    CubeWitness w = bhargava_cube_of_triple(E, u, v, pt(2, 3), pt(0, 1), pt(-1, 0));
    CHECK(w.cube.labeled() == std::array<Int, 8>{-1, -1, -2, 5, -1, 1, -1, -4});
    CHECK(w.b == -2);
    for (auto const & c : check_cube_witness(w, E, u, v)) {
        INFO(c.name);
        CHECK(c.ok);
    }
}

TEST_CASE("cube identities survive Bezout shifts")
{
    Curve E(Int(0), Int(1));
    Int u(3), v(1);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> k(-5, 5);
    for (int t = 0; t < 25; ++t) {
        std::array<Int, 3> s{k(rng), k(rng), k(rng)};
        CubeWitness w = bhargava_cube_of_triple(E, u, v, pt(2, 3), pt(0, 1), pt(-1, 0), s);
        CHECK(cube_witness_ok(w, E, u, v));
        auto forms = cube_associated_forms(w.cube);
        CHECK(reduced(forms[0]) == QuadForm(5, -4, 6));
        CHECK(reduced(forms[1]) == QuadForm(3, 2, 9));
        CHECK(reduced(forms[2]) == QuadForm(2, 0, 13));
    }
}

TEST_CASE("cube witness checks catch tampering")
{
    Curve E(Int(0), Int(1));
    Int u(3), v(1);
    CubeWitness w = bhargava_cube_of_triple(E, u, v, pt(2, 3), pt(0, 1), pt(-1, 0));
    CubeWitness bad = w;
    bad.cube.rho += 1;
    CHECK_FALSE(cube_witness_ok(bad, E, u, v));
    bad = w;
    bad.mu[1] += 1;
    CHECK_FALSE(cube_witness_ok(bad, E, u, v));
    bad = w;
    bad.b += 1;
    CHECK_FALSE(cube_witness_ok(bad, E, u, v));
}

TEST_CASE("cubes on a rank-two curve")
{
    Curve E(Int(0), Int(17));
    auto P = pt(-2, 3), Q = pt(-1, 4);
    auto R = negate(add(E, P, Q));
    int built = 0;
    for (long u = 1; u <= 30 && built < 6; ++u)
        for (long v = 1; v <= 4 && built < 6; ++v) {
            if (!fundamental_pair(E, u, v))
                continue;
            CubeWitness w = bhargava_cube_of_triple(E, Int(u), Int(v), P, Q, R);
            CHECK(cube_witness_ok(w, E, Int(u), Int(v)));
            auto forms = cube_associated_forms(w.cube);
            CHECK(reduced(forms[0]) == phi(E, Int(u), Int(v), P).reduced_class);
            CHECK(reduced(forms[1]) == phi(E, Int(u), Int(v), Q).reduced_class);
            CHECK(reduced(forms[2]) == phi(E, Int(u), Int(v), R).reduced_class);
            ++built;
        }
    CHECK(built == 6);
}

TEST_CASE("kernel suitability")
{
    Curve E(Int(0), Int(1));
    CHECK(is_kernel_suitable(E, Int(3), Int(2)));
    CHECK_FALSE(is_kernel_suitable(E, Int(3), Int(1))); // v = 1
    // (d - uv) / v^2 must exceed A0 = 2
    CHECK_FALSE(is_kernel_suitable(E, Int(2), Int(2)));
}

TEST_CASE("bound suitability windows")
{
    Curve E(Int(0), Int(1));
    auto s = bound_suitability(E, Interval(0L), Int(3), Int(2), 0.1);
    CHECK(s.lower == Tri::False);
    CHECK(s.upper == Tri::True);
    CHECK(is_bound_suitable(E, std::vector<RationalPoint>{}, Int(3), Int(1), 0.1) == Tri::False);
    CHECK(is_bound_suitable(E, Interval(0L), Int(11), Int(6), 0.1) == Tri::True);
    CHECK_THROWS_AS(bound_suitability(E, Interval(0L), Int(3), Int(2), 0.5), DomainError);
}

TEST_CASE("twist points")
{
    Curve E(Int(0), Int(1));
    TwistPoint t = twist_point(E, Int(3), Int(1));
    CHECK(on_curve(t.twist, t.point));
    CHECK(twist_point_infinite_order(E, Int(3), Int(1)));
    CHECK(twist_point_infinite_order(Curve(Int(0), Int(-2)), Int(1), Int(1)));
}

TEST_CASE("torsion embedding is injective for kernel-suitable pairs")
{
    Curve E(Int(0), Int(1));
    auto emb = torsion_embedding(E, Int(3), Int(2));
    CHECK(emb.size() == 6);
    std::set<std::string> classes;
    for (auto const & pf : emb)
        classes.insert(pf.second.str());
    CHECK(classes.size() == 6);
    CHECK(class_number(152) == 6);
    CHECK_THROWS_AS(torsion_embedding(E, Int(3), Int(1)), DomainError);
}
