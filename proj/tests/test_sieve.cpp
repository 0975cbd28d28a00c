#include <doctest.h>

#include <cmath>

#include "ecmap/sieve.hpp"
#include "oracles.hpp"

using namespace ecmap;

namespace {

// G_n(a, b) = b ((a + n b)^3 + a4 (a + n b) b^2 - a6 b^3) in plain integers.
std::int64_t G(std::int64_t a4, std::int64_t a6, std::int64_t n, std::int64_t a, std::int64_t b)
{
    std::int64_t u = a + n * b;
    return b * (u * u * u + a4 * u * b * b - a6 * b * b * b);
}

std::int64_t brute_count(std::int64_t a4, std::int64_t a6, std::int64_t n, std::int64_t Y,
                         std::int64_t M, std::int64_t a0, std::int64_t b0)
{
    std::int64_t count = 0;
    for (std::int64_t a = 1; a <= Y; ++a)
        for (std::int64_t b = 1; b <= Y; ++b)
            if (((a - a0) % M + M) % M == 0 && ((b - b0) % M + M) % M == 0 &&
                oracle::squarefree(G(a4, a6, n, a, b)))
                ++count;
    return count;
}

SearchConfig base_config()
{
    SearchConfig cfg;
    cfg.curve = Curve(Int(0), Int(1));
    cfg.n = 0;
    cfg.Y = 30;
    cfg.epsilon = 0.1;
    return cfg;
}

bool same(SearchResult const & a, SearchResult const & b)
{
    if (a.records.size() != b.records.size() || a.raw_hits != b.raw_hits)
        return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        auto const & x = a.records[i];
        auto const & y = b.records[i];
        if (x.u != y.u || x.v != y.v || x.D != y.D || x.h != y.h || x.fiber != y.fiber ||
            x.bound_report.lower_bound.hi_double() != y.bound_report.lower_bound.hi_double())
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("square-free examples")
{
    CHECK(is_squarefree(Int(12)) == Tri::False);
    CHECK(is_squarefree(Int(26)) == Tri::True);
    CHECK(is_squarefree(Int(1)) == Tri::True);
}

TEST_CASE("shifted cubic")
{
    Curve E(Int(0), Int(1));
    auto c = shifted_cubic(E, Int(2));
    CHECK(c == std::array<Int, 4>{1, 6, 12, 7});
    CHECK(shifted_coefficients_positive(E, Int(2)));
    CHECK_FALSE(shifted_coefficients_positive(E, Int(0)));
    for (long x = 1; x < 6; ++x)
        for (long y = 1; y < 6; ++y)
            CHECK(shifted_form(E, Int(2), Int(x), Int(y)) == G(0, 1, 2, x, y));
}

TEST_CASE("congruence recipe and condition checks")
{
    Curve E(Int(0), Int(1));
    auto n = congruence_shift(E, 1, 1);
    REQUIRE(n);
    CHECK(*n == 2);
    CHECK(fmod(shifted_form(E, *n, Int(1), Int(1)), Int(4)) == 2);
    // G_4(1, 1) = 124 = 0 mod 4
    auto bad = check_congruence(E, Int(4), 4, 1, 1);
    CHECK_FALSE(bad.ok());
    CHECK(bad.failure.find("condition (1)") != std::string::npos);
    try {
        count_squarefree_box(E, Int(4), 10, 4, 1, 1);
        CHECK(false);
    } catch (DomainError const & e) {
        CHECK(e.kind() == "congruence-condition");
        CHECK(std::string(e.what()).find("0 mod 4") != std::string::npos);
    }
    CHECK(check_congruence(E, Int(2), 4, 1, 1).power_of_two);
    CHECK_FALSE(check_congruence(E, Int(2), 6, 1, 1).power_of_two);
    // G_2(1, 1) = 26 is a unit mod 9
    CHECK(check_congruence(E, Int(2), 9, 1, 1).unit);
}

TEST_CASE("box counts match exhaustive enumeration")
{
    Curve E(Int(0), Int(1));
    for (std::int64_t Y : {10, 37, 64}) {
        CHECK(count_squarefree_box(E, Int(2), Y, 4, 1, 1).count == brute_count(0, 1, 2, Y, 4, 1, 1));
        CHECK(count_squarefree_box(E, Int(2), Y, 9, 1, 1).count == brute_count(0, 1, 2, Y, 9, 1, 1));
    }
    Curve F(Int(-1), Int(0));
    auto n = congruence_shift(F, 1, 1);
    REQUIRE(n);
    long nn = n->get_si();
    CHECK(count_squarefree_box(F, *n, 50, 4, 1, 1).count == brute_count(-1, 0, nn, 50, 4, 1, 1));
    auto c = count_squarefree_box(E, Int(2), 10, 4, 1, 1);
    CHECK(c.density == doctest::Approx(double(c.count) / 100.0));
}

TEST_CASE("box counts are independent of the worker count")
{
    Curve E(Int(0), Int(1));
    auto ref = serial::count_squarefree_box(E, Int(2), 300, 4, 1, 1);
    for (int t : {1, 2, 4, 8}) {
        auto c = count_squarefree_box(E, Int(2), 300, 4, 1, 1, t);
        CHECK(c.count == ref.count);
        CHECK(c.unknown == ref.unknown);
    }
}

TEST_CASE("census counts")
{
    Curve E(Int(0), Int(1));
    PointSetSummary none;
    std::int64_t Y = 60;
    Census c = suitability_census(E, none, Int(2), Y, 0.1, 0.05);
    CHECK(c.pairs == (Y - 1) * (Y - 1));
    CHECK(c.map_fail == 0);
    CHECK(c.kernel_fail >= Y - 1); // the row y = 1
    Census s = serial::suitability_census(E, none, Int(2), Y, 0.1, 0.05);
    CHECK(s.any_fail == c.any_fail);
    CHECK(s.lower_fail == c.lower_fail);
    CHECK(s.upper_fail == c.upper_fail);
    for (int t : {1, 3, 8})
        CHECK(suitability_census(E, none, Int(2), Y, 0.1, 0.05, t).any_fail == c.any_fail);

    // recount with the interval predicates directly
    std::int64_t lower = 0, upper = 0, kernel = 0;
    for (long y = 1; y < Y; ++y)
        for (long x = 1; x < Y; ++x) {
            Int u(x + 2 * y), v(y);
            auto a = bound_suitability(E, Interval(0L), u, v, 0.1);
            auto b = bound_suitability(E, Interval(0L), u, v, 0.15);
            lower += !(a.lower == Tri::True && b.lower == Tri::True);
            upper += !(a.upper == Tri::True && b.upper == Tri::True);
            kernel += !is_kernel_suitable(E, u, v);
        }
    CHECK(lower == c.lower_fail);
    CHECK(upper == c.upper_fail);
    CHECK(kernel == c.kernel_fail);
    // n = 0 leaves pairs with x <= y map-unsuitable
    CHECK(suitability_census(E, none, Int(0), 20, 0.1, 0.0).map_fail > 0);
}

TEST_CASE("box calibration keeps discriminants below X")
{
    Curve E(Int(0), Int(1));
    double lambda = box_lambda(E, Int(2));
    double X = 1e8;
    auto side = static_cast<long>(std::floor(lambda * std::pow(X, 0.25)));
    for (long x = 1; x < side; ++x)
        for (long y = 1; y < side; ++y)
            CHECK(4.0 * static_cast<double>(G(0, 1, 2, x, y)) < X);
}

TEST_CASE("search records satisfy every filter")
{
    SearchConfig cfg = base_config();
    cfg.Y = 40;
    SearchResult r = search_psi(cfg);
    REQUIRE(!r.records.empty());
    CHECK(r.fibers_within_bound);
    Curve const & E = cfg.curve;
    Int prev = 0;
    for (auto const & rec : r.records) {
        CHECK(rec.D > prev);
        prev = rec.D;
        CHECK(rec.D == D_family(E, rec.u, rec.v));
        CHECK(oracle::fundamental(-rec.D.get_si()));
        CHECK(is_map_suitable(E, rec.u, rec.v));
        CHECK(is_kernel_suitable(E, rec.u, rec.v));
        CHECK(is_bound_suitable(E, Interval(0L), rec.u, rec.v, 0.1) == Tri::True);
        CHECK(twist_point_infinite_order(E, rec.u, rec.v));
        CHECK(rec.torsion_embeds);
        if (rec.h) {
            CHECK(*rec.h == oracle::class_number_fundamental(rec.D.get_si()));
            CHECK(*rec.h % 6 == 0);
            CHECK(rec.bound_report.lower_bound.hi_double() <= static_cast<double>(*rec.h));
        }
    }
    CHECK(same(r, serial::search_psi(cfg)));
    cfg.threads = 3;
    CHECK(same(r, search_psi(cfg)));
}

TEST_CASE("search with the bound filters off contains (3, 2)")
{
    SearchConfig cfg = base_config();
    cfg.Y = 6;
    cfg.require_bound = false;
    SearchResult r = search_psi(cfg);
    bool found = false;
    for (auto const & rec : r.records)
        if (rec.u == 3 && rec.v == 2) {
            found = true;
            CHECK(rec.D == 152);
            REQUIRE(rec.h);
            CHECK(*rec.h == 6);
        }
    CHECK(found);
}

TEST_CASE("epsilon near one half closes the window")
{
    SearchConfig cfg = base_config();
    cfg.epsilon = 0.49;
    CHECK(search_psi(cfg).records.empty());
}

TEST_CASE("colliding discriminants are reported once")
{
    // d(21, 10) = d(33, 2) = 71610 on y^2 = x^3 - x
    Curve E(Int(-1), Int(0));
    REQUIRE(d_family(E, Int(21), Int(10)) == d_family(E, Int(33), Int(2)));
    SearchConfig cfg;
    cfg.curve = E;
    cfg.n = 0;
    cfg.Y = 40;
    cfg.require_bound = false;
    cfg.require_twist = false;
    cfg.require_embedding = false;
    SearchResult r = search_psi(cfg);
    std::size_t hits = 0;
    for (auto const & rec : r.records)
        if (rec.D == 4 * 71610) {
            ++hits;
            CHECK(rec.fiber == 2);
            CHECK(rec.u == 21);
        }
    CHECK(hits == 1);
    CHECK(r.raw_hits > r.records.size());
    CHECK(r.fibers_within_bound);
}

TEST_CASE("search configuration checks")
{
    SearchConfig cfg = base_config();
    cfg.epsilon = 0.6;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = base_config();
    cfg.alpha = 0.45;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = base_config();
    cfg.parity_filter = true;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.conductor = Int(36);
    cfg.sign_epsilon = 1;
    CHECK_THROWS_AS(cfg.validate(), DomainError); // 36 is a square
    cfg.conductor = Int(27);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parity filter keeps sign +1 only")
{
    SearchConfig cfg = base_config();
    cfg.curve = Curve(Int(0), Int(-2));
    cfg.points = {RationalPoint::affine(Rational(3), Rational(5))};
    cfg.Y = 60;
    cfg.require_bound = false;
    cfg.conductor = Int(1728);
    cfg.sign_epsilon = -1;
    SearchResult all = search_psi(cfg);
    cfg.parity_filter = true;
    SearchResult kept = search_psi(cfg);
    std::size_t plus = 0;
    for (auto const & rec : all.records)
        plus += rec.twist_sign == 1;
    CHECK(kept.records.size() == plus);
    for (auto const & rec : kept.records)
        CHECK(rec.twist_sign == 1);
}

TEST_CASE("twist sign")
{
    CHECK(twist_sign(Int(7), Int(11), 1) == oracle::kronecker(-7, -11));
    CHECK(twist_sign(Int(7), Int(11), -1) == -oracle::kronecker(-7, -11));
    // chi_{-d}(-1) = -1 for every imaginary quadratic character
    CHECK(twist_sign(Int(7), Int(1), 1) == -1);
    try {
        twist_sign(Int(26), Int(11), 1);
        CHECK(false);
    } catch (DomainError const & e) {
        CHECK(e.kind() == "character-undefined");
    }
    for (long d = 1; d < 200; d += 2)
        if (std::gcd(d, 4L * 15) == 1)
            CHECK(twist_sign(Int(d), Int(15), 1) == oracle::kronecker(-d, -15));
}

TEST_CASE("divisor counts")
{
    CHECK(divisor_count(Int(1)) == Int(1));
    CHECK(divisor_count(Int(12)) == Int(6));
    CHECK(divisor_count(Int(286440)) == Int(128));
}
