#include <doctest.h>

#include "ecmap/io.hpp"

using namespace ecmap;
using io::json;

TEST_CASE("integers serialize as numbers when they fit, strings otherwise")
{
    CHECK(io::to_json(Int(104)).dump() == "104");
    CHECK(io::to_json(Int(-5)).dump() == "-5");
    Int big = Int(1) << 100;
    CHECK(io::to_json(big).is_string());
    CHECK(io::int_from_json(io::to_json(big)) == big);
    CHECK(io::int_from_json(json(42)) == 42);
    CHECK(io::int_from_json(json("-17")) == -17);
    CHECK_THROWS(io::int_from_json(json(1.5)));
}

TEST_CASE("intervals round-trip as decimal strings")
{
    Interval x = log(Interval(10L));
    json j = io::to_json(x);
    CHECK(j.at("lo").is_string());
    Interval y = io::interval_from_json(j);
    CHECK(y.contains(x));
    CHECK(y.radius_upper() < 1e-35);
}

TEST_CASE("cube witnesses round-trip and re-verify")
{
    Curve E(Int(0), Int(1));
    auto P1 = RationalPoint::affine(2, 3), P2 = RationalPoint::affine(0, 1),
         P3 = RationalPoint::affine(-1, 0);
    CubeWitness w = bhargava_cube_of_triple(E, Int(3), Int(1), P1, P2, P3, {2, -1, 0});
    json j = io::witness_to_json(w, E, Int(3), Int(1));
    io::WitnessInput in = io::witness_from_json(json::parse(j.dump()));
    CHECK(in.curve == E);
    CHECK(in.witness.cube == w.cube);
    CHECK(cube_witness_ok(in.witness, in.curve, in.u, in.v));
    j["q"][0] = 99;
    io::WitnessInput bad = io::witness_from_json(j);
    CHECK_FALSE(cube_witness_ok(bad.witness, bad.curve, bad.u, bad.v));
}

TEST_CASE("point lists in several formats")
{
    auto a = io::points_from_text("3,5\n# comment\n\n129/100,-383/1000\n");
    REQUIRE(a.size() == 2);
    CHECK(a[1] == RationalPoint::affine(Rational(129, 100), Rational(-383, 1000)));
    auto b = io::points_from_text(R"(["3,5", [0, 1]])");
    REQUIRE(b.size() == 2);
    CHECK(b[1] == RationalPoint::affine(0, 1));
    auto c = io::points_from_text(R"({"points": ["-2,3"]})");
    CHECK(c.size() == 1);
    CHECK(io::points_from_text("  \n").empty());
}

TEST_CASE("search configuration from JSON")
{
    auto cfg = io::search_config_from_json(json::parse(
            R"({"curve": [0, 1], "Y": 50, "M": 4, "a0": 1, "b0": 1, "epsilon": 0.2,
                "conductor": 36, "sign_epsilon": -1})"));
    CHECK(cfg.n == 2); // least admissible shift
    CHECK(cfg.Y == 50);
    CHECK(cfg.epsilon == 0.2);
    CHECK(cfg.conductor == Int(36));
    CHECK(cfg.sign_epsilon == -1);
    CHECK_THROWS_AS(io::search_config_from_json(json::parse(
                            R"({"curve": [0, 1], "Y": 5, "points": ["1,1"]})")),
                    DomainError);
}

TEST_CASE("records serialize with all fields")
{
    SearchConfig cfg;
    cfg.curve = Curve(Int(0), Int(1));
    cfg.n = 0;
    cfg.Y = 20;
    auto res = search_psi(cfg);
    REQUIRE(!res.records.empty());
    json j = io::to_json(res.records.front());
    for (char const * k : {"u", "v", "D", "flags", "fiber", "bound_report", "h", "twist_sign"})
        CHECK(j.contains(k));
    CHECK(j["bound_report"]["lower_bound"].contains("lo"));
    CHECK(json::parse(j.dump()) == j);
}
