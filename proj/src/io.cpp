#include "ecmap/io.hpp"

#include <fstream>
#include <sstream>

namespace ecmap::io {

json to_json(Int const & n)
{
    if (fits_int64(n))
        return to_int64(n);
    return n.get_str();
}

Int int_from_json(json const & j)
{
    if (j.is_number_integer())
        return Int(j.get<long>());
    if (j.is_string())
        return parse_int(j.get<std::string>());
    throw std::invalid_argument("expected an integer, got " + j.dump());
}

json to_json(Interval const & x)
{
    return json{{"lo", x.lo_string()}, {"hi", x.hi_string()}};
}

Interval interval_from_json(json const & j)
{
    return Interval::hull(Interval::from_decimal(j.at("lo").get<std::string>()),
                          Interval::from_decimal(j.at("hi").get<std::string>()));
}

json to_json(QuadForm const & f)
{
    return json::array({to_json(f.a), to_json(f.b), to_json(f.c)});
}

QuadForm form_from_json(json const & j)
{
    return QuadForm{int_from_json(j.at(0)), int_from_json(j.at(1)), int_from_json(j.at(2))};
}

json to_json(RationalPoint const & P)
{
    return P.str();
}

json to_json(Curve const & E)
{
    return json::array({to_json(E.a4), to_json(E.a6)});
}

Curve curve_from_json(json const & j)
{
    if (j.is_string())
        return Curve::parse(j.get<std::string>());
    return Curve(int_from_json(j.at(0)), int_from_json(j.at(1)));
}

char const * tri_name(Tri t)
{
    return to_string(t);
}

json to_json(BoundReport const & r)
{
    json j;
    j["d_bits"] = r.d_bits;
    j["T"] = to_json(r.T);
    j["c"] = to_json(r.c);
    j["lower_bound"] = to_json(r.lower_bound);
    j["t_above_threshold"] = tri_name(r.t_above_threshold);
    j["alpha_check"] = tri_name(r.alpha_check);
    j["gz_bound"] = r.gz_bound ? to_json(*r.gz_bound) : json(nullptr);
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

json to_json(PhiResult const & r)
{
    json j;
    j["raw"] = to_json(r.raw_form);
    j["reduced"] = to_json(r.reduced_class);
    j["mu"] = to_json(r.mu);
    j["a"] = to_json(r.a);
    j["g"] = to_json(r.g);
    j["rep"] = json::array({to_json(r.rep.A), to_json(r.rep.B), to_json(r.rep.C)});
    return j;
}

json to_json(PsiRecord const & r)
{
    json j;
    j["u"] = to_json(r.u);
    j["v"] = to_json(r.v);
    j["D"] = to_json(r.D);
    j["flags"] = {{"map", r.map_suitable},
                  {"kernel", r.kernel_suitable},
                  {"eps_bound", tri_name(r.eps_bound)},
                  {"eps_alpha_bound", tri_name(r.eps_alpha_bound)},
                  {"twist_infinite_order", r.twist_infinite},
                  {"torsion_embeds", r.torsion_embeds}};
    j["fiber"] = r.fiber;
    j["bound_report"] = to_json(r.bound_report);
    j["h"] = r.h ? json(*r.h) : json(nullptr);
    j["twist_sign"] = r.twist_sign ? json(*r.twist_sign) : json(nullptr);
    return j;
}

json to_json(Census const & c)
{
    return json{{"pairs", c.pairs},         {"map_fail", c.map_fail},
                {"kernel_fail", c.kernel_fail}, {"lower_fail", c.lower_fail},
                {"upper_fail", c.upper_fail}, {"any_fail", c.any_fail},
                {"failure_fraction", c.failure_fraction()}};
}

namespace {

json envelope_json(PolyEnvelope const & e)
{
    return json{{"n", e.n}, {"c", to_json(e.c)}, {"m", to_json(e.m)}};
}

} // namespace

json to_json(FamilyCmin const & f)
{
    json j;
    j["coefficient"] = to_json(f.coefficient);
    j["exponent"] = f.exponent.get_str();
    j["m"] = to_json(f.m);
    j["mu"] = to_json(f.mu);
    j["j_envelope"] = envelope_json(f.j_envelope);
    j["disc_envelope"] = envelope_json(f.disc_envelope);
    json pts = json::array();
    for (std::size_t i = 0; i < f.point_envelopes.size(); ++i)
        pts.push_back({{"envelope", envelope_json(f.point_envelopes[i])},
                       {"slope", to_json(f.slope[i])},
                       {"intercept", to_json(f.intercept[i])}});
    j["points"] = pts;
    return j;
}

namespace {

json int_array(std::array<Int, 3> const & a)
{
    return json::array({to_json(a[0]), to_json(a[1]), to_json(a[2])});
}

std::array<Int, 3> int_array_from(json const & j)
{
    return {int_from_json(j.at(0)), int_from_json(j.at(1)), int_from_json(j.at(2))};
}

} // namespace

json witness_to_json(CubeWitness const & w, Curve const & E, Int const & u, Int const & v)
{
    json j;
    j["curve"] = to_json(E);
    j["u"] = to_json(u);
    j["v"] = to_json(v);
    json cube = json::array();
    for (Int const & e : w.cube.labeled())
        cube.push_back(to_json(e));
    j["cube"] = cube;
    j["line"] = json::array({to_json(w.line.l), to_json(w.line.m), to_json(w.line.n)});
    j["d"] = to_json(w.d);
    j["C"] = to_json(w.C);
    j["M"] = to_json(w.M);
    j["N"] = to_json(w.N);
    j["b"] = to_json(w.b);
    j["A"] = int_array(w.A);
    j["B"] = int_array(w.B);
    j["Cs"] = int_array(w.Cs);
    j["a"] = int_array(w.a);
    j["g"] = int_array(w.g);
    j["mu"] = int_array(w.mu);
    j["ell"] = int_array(w.ell);
    j["q"] = int_array(w.q);
    return j;
}

WitnessInput witness_from_json(json const & j)
{
    WitnessInput in;
    in.curve = curve_from_json(j.at("curve"));
    in.u = int_from_json(j.at("u"));
    in.v = int_from_json(j.at("v"));
    std::array<Int, 8> e;
    json const & cube = j.at("cube");
    if (cube.size() != 8)
        throw std::invalid_argument("cube must have 8 entries");
    for (std::size_t i = 0; i < 8; ++i)
        e[i] = int_from_json(cube.at(i));
    CubeWitness & w = in.witness;
    w.cube = BhargavaCube::from_labeled(e);
    json const & line = j.at("line");
    w.line = Line{int_from_json(line.at(0)), int_from_json(line.at(1)), int_from_json(line.at(2))};
    w.d = int_from_json(j.at("d"));
    w.C = int_from_json(j.at("C"));
    w.M = int_from_json(j.at("M"));
    w.N = int_from_json(j.at("N"));
    w.b = int_from_json(j.at("b"));
    w.A = int_array_from(j.at("A"));
    w.B = int_array_from(j.at("B"));
    w.Cs = int_array_from(j.at("Cs"));
    w.a = int_array_from(j.at("a"));
    w.g = int_array_from(j.at("g"));
    w.mu = int_array_from(j.at("mu"));
    w.ell = int_array_from(j.at("ell"));
    w.q = int_array_from(j.at("q"));
    return in;
}

namespace {

RationalPoint point_from_json(json const & j)
{
    if (j.is_string())
        return RationalPoint::parse(j.get<std::string>());
    if (j.is_array() && j.size() == 2) {
        auto coord = [](json const & c) {
            return c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>());
        };
        return RationalPoint::affine(coord(j[0]), coord(j[1]));
    }
    throw std::invalid_argument("malformed point " + j.dump());
}

std::vector<RationalPoint> points_from_json(json const & j)
{
    json const & arr = j.is_object() ? j.at("points") : j;
    std::vector<RationalPoint> pts;
    for (auto const & p : arr)
        pts.push_back(point_from_json(p));
    return pts;
}

} // namespace

std::vector<RationalPoint> points_from_text(std::string const & text)
{
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    if (text[first] == '[' || text[first] == '{')
        return points_from_json(json::parse(text));
    std::vector<RationalPoint> pts;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        pts.push_back(RationalPoint::parse(line));
    }
    return pts;
}

SearchConfig search_config_from_json(json const & j)
{
    SearchConfig cfg;
    cfg.curve = curve_from_json(j.at("curve"));
    if (j.contains("points"))
        cfg.points = points_from_json(j.at("points"));
    for (auto const & P : cfg.points)
        require_on_curve(cfg.curve, P);
    cfg.G_order = j.value("G_order", std::int64_t(0));
    cfg.Y = j.at("Y").get<std::int64_t>();
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.M = j.value("M", std::int64_t(1));
    cfg.a0 = j.value("a0", std::int64_t(0));
    cfg.b0 = j.value("b0", std::int64_t(0));
    if (j.contains("n")) {
        cfg.n = int_from_json(j.at("n"));
    } else {
        auto n = congruence_shift(cfg.curve, cfg.a0, cfg.b0);
        if (!n)
            throw DomainError("search-config", "no admissible shift n for (a0, b0)");
        cfg.n = *n;
    }
    if (j.contains("conductor") && !j.at("conductor").is_null())
        cfg.conductor = int_from_json(j.at("conductor"));
    if (j.contains("sign_epsilon") && !j.at("sign_epsilon").is_null())
        cfg.sign_epsilon = j.at("sign_epsilon").get<int>();
    cfg.parity_filter = j.value("parity_filter", false);
    cfg.require_bound = j.value("require_bound", true);
    cfg.require_twist = j.value("require_twist", true);
    cfg.require_embedding = j.value("require_embedding", true);
    if (j.contains("h_limit"))
        cfg.h_limit = int_from_json(j.at("h_limit"));
    cfg.height_tol = j.value("height_tol", cfg.height_tol);
    return cfg;
}

std::string read_file(std::string const & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace ecmap::io
