// classmap: command-line front end for the ecmap library.
//
// Exit codes: 0 success, 1 domain error (JSON error object on stdout),
// 2 usage error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ecmap/io.hpp"

using namespace ecmap;
using io::json;
using io::to_json;

namespace {

struct UsageError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct Globals
{
    int threads = 0;
    long precision = 128;
    bool deterministic = false;
};

void emit(json const & j)
{
    std::cout << j.dump() << '\n';
}

std::vector<std::string> split(std::string const & s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (cur.find_first_not_of(' ') != std::string::npos)
            out.push_back(cur);
    return out;
}

std::vector<RationalPoint> parse_points(std::string const & list)
{
    std::vector<RationalPoint> pts;
    for (auto const & p : split(list, ';'))
        pts.push_back(RationalPoint::parse(p));
    return pts;
}

std::string slurp(std::string const & path)
{
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    return io::read_file(path);
}

// Points from --points "x,y;..." and/or --points-file.
std::vector<RationalPoint> gather_points(Curve const & E, std::string const & inline_list,
                                         std::string const & file)
{
    std::vector<RationalPoint> pts = parse_points(inline_list);
    if (!file.empty())
        for (auto const & P : io::points_from_text(slurp(file)))
            pts.push_back(P);
    for (auto const & P : pts)
        require_on_curve(E, P);
    return pts;
}

json pair_json(Curve const & E, Int const & u, Int const & v)
{
    return json{{"curve", to_json(E)}, {"u", to_json(u)}, {"v", to_json(v)}};
}

// ---- subcommand bodies -----------------------------------------------------

struct Args
{
    std::string D, curve = "0,1", u, v, point, points, points_file, shift, file, config, summary,
                witness, n, Y = "100", t_values;
    double eps = 0.1, alpha = 0.0;
    std::int64_t M = 4, a0 = 1, b0 = 1, G = 0, forms_limit = 1000;
    bool check = false, serial = false, no_gz = false;
};

int cmd_classnum(Args const & a)
{
    Int D = parse_int(a.D);
    emit({{"D", to_json(D)}, {"h", class_number(D)}});
    return 0;
}

int cmd_classgroup(Args const & a)
{
    Int D = parse_int(a.D);
    ClassGroupTable t = class_group_structure(D);
    json j{{"D", to_json(D)}, {"h", t.h()}, {"structure", t.structure}};
    if (t.h() <= a.forms_limit) {
        json forms = json::array();
        for (std::size_t i = 0; i < t.reduced_forms.size(); ++i)
            forms.push_back({{"form", to_json(t.reduced_forms[i])}, {"order", t.orders[i]}});
        j["forms"] = forms;
    }
    emit(j);
    return 0;
}

int cmd_phi(Args const & a)
{
    Curve E = Curve::parse(a.curve);
    Int u = parse_int(a.u), v = parse_int(a.v);
    RationalPoint P = RationalPoint::parse(a.point);
    PhiResult r = phi(E, u, v, P);
    json j = pair_json(E, u, v);
    j["D"] = to_json(D_family(E, u, v));
    j["point"] = to_json(P);
    j.update(to_json(r));
    emit(j);
    return 0;
}

int cmd_cube(Args const & a)
{
    if (a.check) {
        std::string src = !a.witness.empty() ? a.witness : "-";
        io::WitnessInput in = io::witness_from_json(json::parse(slurp(src)));
        auto checks = check_cube_witness(in.witness, in.curve, in.u, in.v);
        bool ok = true;
        json list = json::array();
        for (auto const & c : checks) {
            ok = ok && c.ok;
            list.push_back({{"name", c.name}, {"ok", c.ok}});
        }
        if (!ok) {
            emit({{"error", "identity-failure"},
                  {"message", "witness fails re-verification"},
                  {"checks", list}});
            return 1;
        }
        emit({{"ok", true}, {"checks", list}});
        return 0;
    }
    Curve E = Curve::parse(a.curve);
    Int u = parse_int(a.u), v = parse_int(a.v);
    auto pts = parse_points(a.points);
    if (pts.size() == 2)
        pts.push_back(negate(add(E, pts[0], pts[1])));
    if (pts.size() != 3)
        throw UsageError("--points needs two or three points separated by ';'");
    for (auto const & P : pts)
        require_on_curve(E, P);
    std::array<Int, 3> shift{0, 0, 0};
    if (!a.shift.empty()) {
        auto parts = split(a.shift, ',');
        if (parts.size() != 3)
            throw UsageError("--shift needs three integers");
        for (int i = 0; i < 3; ++i)
            shift[i] = parse_int(parts[i]);
    }
    CubeWitness w = bhargava_cube_of_triple(E, u, v, pts[0], pts[1], pts[2], shift);
    json j = io::witness_to_json(w, E, u, v);
    j["points"] = json::array({to_json(pts[0]), to_json(pts[1]), to_json(pts[2])});
    auto forms = cube_associated_forms(w.cube);
    json reduced = json::array(), images = json::array();
    QuadForm acc = principal_form(-D_family(E, u, v));
    for (int i = 0; i < 3; ++i) {
        QuadForm r = ecmap::reduced(forms[i]);
        reduced.push_back(to_json(r));
        images.push_back(to_json(phi(E, u, v, pts[i]).reduced_class));
        acc = compose(acc, r);
    }
    j["reduced_forms"] = reduced;
    j["phi_images"] = images;
    j["composes_to_principal"] = acc == principal_form(-D_family(E, u, v));
    j["identities_ok"] = cube_witness_ok(w, E, u, v);
    emit(j);
    return 0;
}

int cmd_verify_hom(Args const & a)
{
    Curve E = Curve::parse(a.curve);
    Int u = parse_int(a.u), v = parse_int(a.v);
    require_phi_domain(E, u, v);
    std::vector<std::pair<RationalPoint, RationalPoint>> pairs;
    if (!a.points.empty()) {
        auto pts = parse_points(a.points);
        if (pts.size() != 2)
            throw UsageError("--points needs exactly two points");
        for (auto const & P : pts)
            require_on_curve(E, P);
        pairs.emplace_back(pts[0], pts[1]);
    } else {
        auto tors = torsion_subgroup(E);
        for (auto const & P : tors.points)
            for (auto const & Q : tors.points)
                pairs.emplace_back(P, Q);
    }
    std::size_t failures = 0;
    for (auto const & [P, Q] : pairs)
        failures += !verify_homomorphism(E, u, v, P, Q);
    json j = pair_json(E, u, v);
    j["pairs"] = pairs.size();
    j["failures"] = failures;
    j["ok"] = failures == 0;
    emit(j);
    return 0;
}

int cmd_suitability(Args const & a)
{
    Curve E = Curve::parse(a.curve);
    Int u = parse_int(a.u), v = parse_int(a.v);
    auto pts = gather_points(E, a.points, a.points_file);
    Interval diam = diameter(E, pts).range;
    json j = pair_json(E, u, v);
    bool map_ok = is_map_suitable(E, u, v);
    j["map"] = map_ok;
    j["kernel"] = map_ok && is_kernel_suitable(E, u, v);
    j["fundamental"] = map_ok ? io::tri_name(fundamental_discriminant(-D_family(E, u, v))) : "false";
    auto at = [&](double e) {
        auto s = bound_suitability(E, diam, u, v, e);
        return json{{"epsilon", e}, {"lower", io::tri_name(s.lower)}, {"upper", io::tri_name(s.upper)},
                    {"both", io::tri_name(s.both())}};
    };
    j["bound"] = at(a.eps);
    if (a.alpha > 0)
        j["bound_eps_alpha"] = at(a.eps + a.alpha);
    j["twist_infinite_order"] = map_ok && twist_point_infinite_order(E, u, v);
    emit(j);
    return 0;
}

int cmd_bound(Args const & a)
{
    Curve E = Curve::parse(a.curve);
    Int u = parse_int(a.u), v = parse_int(a.v);
    auto pts = gather_points(E, a.points, a.points_file);
    std::int64_t G = a.G > 0 ? a.G : static_cast<std::int64_t>(torsion_subgroup(E).order());
    PointSetSummary s = summarize_points(E, pts);
    BoundReport r = class_number_lower_bound(E, s, G, u, v, a.eps, a.alpha, !a.no_gz);
    json j = pair_json(E, u, v);
    j["rank"] = s.rank;
    j["G_order"] = G;
    j["regulator"] = to_json(s.regulator);
    j["diameter"] = to_json(s.diameter);
    j.update(to_json(r));
    emit(j);
    return 0;
}

std::string sig12(Interval const & x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x.mid_double());
    return buf;
}

int cmd_gz(Args const & a)
{
    Int D = parse_int(a.D);
    auto b = gross_zagier_bound(D);
    if (!b)
        throw DomainError("factorization", "cannot factor " + D.get_str() + " by trial division");
    emit({{"D", to_json(D)}, {"bound", to_json(*b)}, {"value", sig12(*b)}});
    return 0;
}

int cmd_family_cmin(Args const & a)
{
    std::string text = slurp(a.file);
    auto first = text.find_first_not_of(" \t\r\n");
    bool is_json = first != std::string::npos && text[first] == '{';
    FamilyDescriptor F =
            is_json ? FamilyDescriptor::from_json_text(text) : FamilyDescriptor::from_toml_text(text);
    FamilyCmin f = family_cmin(F);
    json j = to_json(f);
    if (!a.t_values.empty()) {
        json vals = json::array();
        for (auto const & t : split(a.t_values, ','))
            vals.push_back({{"t", t}, {"c_min", to_json(f.value(parse_int(t)))}});
        j["values"] = vals;
    }
    emit(j);
    return 0;
}

int cmd_search(Args const & a, Globals const & g)
{
    SearchConfig cfg = io::search_config_from_json(json::parse(slurp(a.config)));
    cfg.threads = g.threads;
    auto start = std::chrono::system_clock::now();
    SearchResult res = a.serial ? serial::search_psi(cfg) : search_psi(cfg);
    for (auto const & r : res.records)
        emit(to_json(r));
    if (!a.summary.empty()) {
        json s{{"curve", to_json(cfg.curve)},
               {"n", to_json(cfg.n)},
               {"Y", cfg.Y},
               {"lambda", res.lambda},
               {"G_order", res.G_order},
               {"raw_hits", res.raw_hits},
               {"records", res.records.size()},
               {"fibers_within_bound", res.fibers_within_bound}};
        if (cfg.conductor)
            s["conductor_divides_coefficients"] = res.conductor_divides_coefficients;
        if (!g.deterministic) {
            std::time_t t = std::chrono::system_clock::to_time_t(start);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
            s["timestamp"] = buf;
        }
        std::ofstream(a.summary) << s.dump() << '\n';
    }
    return 0;
}

Int shift_or_recipe(Curve const & E, Args const & a)
{
    if (!a.n.empty())
        return parse_int(a.n);
    auto n = congruence_shift(E, a.a0, a.b0);
    if (!n)
        throw DomainError("congruence-condition", "no admissible shift n for (a0, b0)");
    return *n;
}

int cmd_count(Args const & a, Globals const & g)
{
    Curve E = Curve::parse(a.curve);
    Int n = shift_or_recipe(E, a);
    std::vector<std::int64_t> Ys;
    for (auto const & y : split(a.Y, ','))
        Ys.push_back(to_int64(parse_int(y)));
    std::ostringstream out;
    out << "Y,count,density\n";
    for (auto Y : Ys) {
        BoxCount c = a.serial ? serial::count_squarefree_box(E, n, Y, a.M, a.a0, a.b0)
                              : count_squarefree_box(E, n, Y, a.M, a.a0, a.b0, g.threads);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10f", c.density);
        out << Y << ',' << c.count << ',' << buf << '\n';
    }
    std::cout << out.str();
    return 0;
}

int cmd_census(Args const & a, Globals const & g)
{
    Curve E = Curve::parse(a.curve);
    Int n = a.n.empty() ? Int(1) : parse_int(a.n);
    auto pts = gather_points(E, a.points, a.points_file);
    PointSetSummary s = summarize_points(E, pts);
    std::int64_t Y = to_int64(parse_int(a.Y));
    Census c = a.serial ? serial::suitability_census(E, s, n, Y, a.eps, a.alpha)
                        : suitability_census(E, s, n, Y, a.eps, a.alpha, g.threads);
    json j{{"curve", to_json(E)}, {"n", to_json(n)}, {"Y", Y},
           {"coefficients_positive", shifted_coefficients_positive(E, n)}};
    j.update(to_json(c));
    emit(j);
    return 0;
}

int env_threads()
{
    if (char const * s = std::getenv("CLASSMAP_THREADS")) {
        try {
            return std::max(0, std::stoi(s));
        } catch (std::exception const &) {
        }
    }
    return 0;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Class groups from elliptic curve points"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    g.threads = env_threads();
    app.add_option("--threads", g.threads, "Worker threads (default: CLASSMAP_THREADS or all)")
            ->check(CLI::NonNegativeNumber);
    app.add_option("--precision", g.precision, "Interval mantissa bits")
            ->check(CLI::Range(32L, 1L << 20));
    app.add_flag("--deterministic", g.deterministic, "Suppress timestamps");

    Args a;
    auto curve_opt = [&](CLI::App * s) { s->add_option("--curve", a.curve, "a4,a6"); };
    auto uv_opts = [&](CLI::App * s) {
        s->add_option("-u", a.u, "u")->required();
        s->add_option("-v", a.v, "v")->required();
    };
    auto pts_opts = [&](CLI::App * s) {
        s->add_option("--points", a.points, "x1,y1;x2,y2;...");
        s->add_option("--points-file", a.points_file, "File of points (JSON or one per line)");
    };

    auto classnum = app.add_subcommand("classnum", "Class number h(-D)");
    classnum->add_option("-D", a.D, "D > 0 with -D a discriminant")->required();

    auto classgroup = app.add_subcommand("classgroup", "Class group structure of -D");
    classgroup->add_option("-D", a.D, "D")->required();
    classgroup->add_option("--forms-limit", a.forms_limit, "List forms only when h <= limit");

    auto phi_cmd = app.add_subcommand("phi", "Image of a point in CL(-D_E(u, v))");
    curve_opt(phi_cmd);
    uv_opts(phi_cmd);
    phi_cmd->add_option("--point", a.point, "x,y or inf")->required();

    auto cube = app.add_subcommand("cube", "Cube of a collinear triple, or --check a witness");
    curve_opt(cube);
    cube->add_option("-u", a.u, "u");
    cube->add_option("-v", a.v, "v");
    cube->add_option("--points", a.points, "P1;P2[;P3]");
    cube->add_option("--shift", a.shift, "Bezout shifts s1,s2,s3");
    cube->add_flag("--check", a.check, "Re-verify a serialized witness");
    cube->add_option("--witness", a.witness, "Witness JSON file for --check (default stdin)");

    auto hom = app.add_subcommand("verify-hom", "Check phi(P + Q) = phi(P) phi(Q)");
    curve_opt(hom);
    uv_opts(hom);
    hom->add_option("--points", a.points, "P;Q (default: all torsion pairs)");

    auto suit = app.add_subcommand("suitability", "Suitability predicates at (u, v)");
    curve_opt(suit);
    uv_opts(suit);
    pts_opts(suit);
    suit->add_option("--eps", a.eps, "epsilon in (0, 1/2)");
    suit->add_option("--alpha", a.alpha, "alpha >= 0");

    auto bound = app.add_subcommand("bound", "Class-number lower bound");
    curve_opt(bound);
    uv_opts(bound);
    pts_opts(bound);
    bound->add_option("--eps", a.eps, "epsilon in (0, 1/2)");
    bound->add_option("--alpha", a.alpha, "alpha >= 0");
    bound->add_option("--G", a.G, "|G| (default: torsion order)");
    bound->add_flag("--no-gz", a.no_gz, "Skip the classical bound");

    auto gz = app.add_subcommand("gz", "Classical bound log(D)/7000 prod(...)");
    gz->add_option("-D", a.D, "D")->required();

    auto fam = app.add_subcommand("family-cmin", "c_min for a parametric family");
    fam->add_option("--file", a.file, "Family descriptor (JSON or TOML)")->required();
    fam->add_option("--t", a.t_values, "Evaluate at t1,t2,...");

    auto search = app.add_subcommand("search", "Harvest discriminants (JSON lines)");
    search->add_option("--config", a.config, "Search config JSON")->required();
    search->add_option("--summary", a.summary, "Write run metadata JSON here");
    search->add_flag("--serial", a.serial, "Use the single-threaded reference");

    auto count = app.add_subcommand("count-squarefree", "Square-free box counts (CSV)");
    curve_opt(count);
    count->add_option("-n", a.n, "Shift n (default: least admissible)");
    count->add_option("-M,--modulus", a.M, "Modulus M");
    count->add_option("--a0", a.a0, "Residue of a");
    count->add_option("--b0", a.b0, "Residue of b");
    count->add_option("-Y", a.Y, "Box sizes Y1,Y2,...");
    count->add_flag("--serial", a.serial, "Use the single-threaded reference");

    auto census = app.add_subcommand("census", "Suitability failure counts over a box");
    curve_opt(census);
    pts_opts(census);
    census->add_option("-n", a.n, "Shift n");
    census->add_option("-Y", a.Y, "Box size");
    census->add_option("--eps", a.eps, "epsilon");
    census->add_option("--alpha", a.alpha, "alpha");
    census->add_flag("--serial", a.serial, "Use the single-threaded reference");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        set_default_precision(g.precision);
        if (classnum->parsed())
            return cmd_classnum(a);
        if (classgroup->parsed())
            return cmd_classgroup(a);
        if (phi_cmd->parsed())
            return cmd_phi(a);
        if (cube->parsed()) {
            if (!a.check && (a.u.empty() || a.v.empty() || a.points.empty()))
                throw UsageError("cube needs -u, -v and --points (or --check)");
            return cmd_cube(a);
        }
        if (hom->parsed())
            return cmd_verify_hom(a);
        if (suit->parsed())
            return cmd_suitability(a);
        if (bound->parsed())
            return cmd_bound(a);
        if (gz->parsed())
            return cmd_gz(a);
        if (fam->parsed())
            return cmd_family_cmin(a);
        if (search->parsed())
            return cmd_search(a, g);
        if (count->parsed())
            return cmd_count(a, g);
        if (census->parsed())
            return cmd_census(a, g);
    } catch (DomainError const & e) {
        emit({{"error", e.kind()}, {"message", e.what()}});
        return 1;
    } catch (json::exception const & e) {
        std::cerr << "classmap: malformed input: " << e.what() << '\n';
        return 2;
    } catch (std::invalid_argument const & e) {
        std::cerr << "classmap: " << e.what() << '\n';
        return 2;
    } catch (std::exception const & e) {
        emit({{"error", "internal"}, {"message", e.what()}});
        return 1;
    }
    return 2;
}
