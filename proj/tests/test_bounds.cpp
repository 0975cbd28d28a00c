#include <doctest.h>

#include <cmath>

#include "ecmap/bounds.hpp"
#include "ecmap/classmap.hpp"
#include "oracles.hpp"

using namespace ecmap;

namespace {

RationalPoint pt(long x, long y)
{
    return RationalPoint::affine(Rational(x), Rational(y));
}

} // namespace

TEST_CASE("delta constant")
{
    // h(j) = 0, h(Delta) = log 432
    CHECK(std::fabs(delta_E(Curve(Int(0), Int(1))).mid_double() -
                    (std::log(432.0) / 12 + 5.0 / 3)) < 1e-12);
    CHECK(std::fabs(delta_E(Curve(Int(0), Int(1))).mid_double() - 2.172368799) < 1e-9);
    CHECK(std::fabs(delta_E(Curve(Int(-1), Int(0))).mid_double() - 2.945080251) < 1e-9);
}

TEST_CASE("unit ball volumes")
{
    CHECK(unit_ball_volume(0).contains(1.0));
    CHECK(unit_ball_volume(1).contains(2.0));
    CHECK(std::fabs(unit_ball_volume(2).mid_double() - M_PI) < 1e-15);
    CHECK(std::fabs(unit_ball_volume(3).mid_double() - 4 * M_PI / 3) < 1e-14);
    CHECK(std::fabs(unit_ball_volume(4).mid_double() - M_PI * M_PI / 2) < 1e-14);
}

TEST_CASE("c constant")
{
    CHECK(c_constant(6, Interval(1L), 0).contains(6.0));
    Curve E(Int(0), Int(-2));
    auto c = c_constant(1, {pt(3, 5)}, E);
    CHECK(std::fabs(c.mid_double() - 2 / std::sqrt(0.67478841784007)) < 1e-10);
    try {
        c_constant(1, {pt(3, 5), scalar_mul(E, 2, pt(3, 5))}, E);
        CHECK(false);
    } catch (DomainError const & e) {
        CHECK(e.kind() == "independence");
    }
}

TEST_CASE("T bound")
{
    Curve E(Int(0), Int(1));
    // log(4 * 26 / 4) / 8 - delta / 4 at eps -> 0
    double want = std::log(26.0) / 8 - (std::log(432.0) / 12 + 5.0 / 3) / 4;
    CHECK(std::fabs(t_bound(E, Int(3), Int(1), 1e-30).mid_double() - want) < 1e-12);
    CHECK(std::fabs(want - (-0.1358)) < 1e-3);
    CHECK_THROWS_AS(t_bound(E, Int(1), Int(1), 0.1), DomainError);
}

TEST_CASE("point count bound")
{
    Interval c(2L), diam(1L);
    CHECK(point_count_bound(c, Interval(9L), diam, 1).contains(4.0)); // 2 (3 - 1)
    CHECK(point_count_bound(c, Interval::from_decimal("0.5"), diam, 1).contains(0.0));
    CHECK(point_count_bound(Interval(6L), Interval(1L), Interval(0L), 0).contains(6.0));
    CHECK_THROWS_AS(point_count_bound(c, Interval(-1L), diam, 1), DomainError);
}

TEST_CASE("class number lower bound stays below exact class numbers")
{
    Curve E(Int(0), Int(1));
    PointSetSummary none;
    for (long u = 2; u <= 40; ++u)
        for (long v = 2; v <= 12; ++v) {
            Int D = D_family(E, Int(u), Int(v));
            if (D <= 0 || !oracle::fundamental(-D.get_si()) || !is_map_suitable(E, Int(u), Int(v)))
                continue;
            BoundReport r = class_number_lower_bound(E, none, 6, Int(u), Int(v), 0.1, 0.0);
            CHECK(r.lower_bound.hi_double() <= static_cast<double>(class_number(D)));
            REQUIRE(r.gz_bound);
            CHECK(r.gz_bound->positive());
        }
}

TEST_CASE("classical bound values")
{
    CHECK(std::fabs(gross_zagier_bound(Int(7))->mid_double() / (std::log(7.0) / 7000) - 1) < 1e-14);
    CHECK(std::fabs(gross_zagier_bound(Int(104))->mid_double() / (std::log(104.0) / 42000) - 1) <
          1e-14);
    CHECK_THROWS_AS(gross_zagier_bound(Int(1)), DomainError);
}

TEST_CASE("polynomial envelopes bound every value")
{
    std::vector<std::pair<Poly, Poly>> cases{
            {{0, 2, 1}, {1}},          // t^2 + 2t over 1
            {{5, -3, 0, 2}, {1, 1}},   // 2t^3 - 3t + 5 over t + 1
            {{-7}, {0, 0, 3}},         // -7 over 3t^2
            {{100, 0, 1}, {0, 1}}};    // t^2 + 100 over t
    for (auto const & [r, s] : cases) {
        PolyEnvelope e = poly_envelope(r, s);
        for (long t = -60; t <= 60; ++t) {
            Int lhs = std::max(abs(poly_eval(r, Int(t))), abs(poly_eval(s, Int(t))));
            Int base = Int(std::labs(t)) + e.m, rhs = e.c;
            for (unsigned k = 0; k < e.n; ++k)
                rhs *= base;
            CHECK(lhs <= rhs);
        }
    }
    PolyEnvelope e = poly_envelope({0, 2, 1}, {1});
    CHECK(e.n == 2);
    CHECK(e.c == 1);
    CHECK(e.m == 1);
}

TEST_CASE("family c_min envelope and descriptor formats")
{
    // y^2 = x^3 + (1 - t^3) with the point (t, 1)
    std::string js = R"({"a4": [0], "a6": [1, 0, 0, -1], "points": [{"r": [0, 1], "s": [1]}],
                         "torsion_order": 1})";
    std::string toml = R"(a4 = [0]
a6 = [1, 0, 0, -1]
torsion_order = 1

[[points]]
r = [0, 1]
s = [1]
)";
    FamilyDescriptor F = FamilyDescriptor::from_json_text(js);
    FamilyDescriptor G = FamilyDescriptor::from_toml_text(toml);
    CHECK(F.a6 == G.a6);
    CHECK(F.points.size() == G.points.size());
    FamilyCmin f = family_cmin(F);
    CHECK(f.exponent == Rational(-1, 2));
    for (long t : {2L, 3L, 5L, 10L, 31L, 100L}) {
        Curve E(Int(0), poly_eval(F.a6, Int(t)));
        auto P = RationalPoint::affine(Rational(t), Rational(1));
        REQUIRE(on_curve(E, P));
        double h = canonical_height(E, P).value_double();
        CHECK(h <= f.height_upper(0, Int(t)).lo_double());
        // the bound constant with this point dominates the family minimum
        double cG = 2.0 / std::sqrt(h);
        CHECK(cG >= f.value(Int(t)).hi_double());
    }
}
