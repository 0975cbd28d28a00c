#include "ecmap/bounds.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "ecmap/classmap.hpp"

namespace ecmap {

Interval delta_E(Curve const & E)
{
    Interval hj = rational_height(E.j_invariant());
    Interval hd = log_int(abs(E.discriminant()));
    return hj / Interval(8L) + hd / Interval(12L) + Interval(5L) / Interval(3L);
}

Interval unit_ball_volume(unsigned r)
{
    Interval omega = r % 2 == 0 ? Interval(1L) : Interval(2L);
    Interval two_pi = Interval(2L) * Interval::pi();
    for (unsigned k = r % 2 == 0 ? 2 : 3; k <= r; k += 2)
        omega = omega * two_pi / Interval(static_cast<long>(k));
    return omega;
}

Interval c_constant(std::int64_t G_order, Interval const & regulator, unsigned r)
{
    if (G_order <= 0)
        throw DomainError("group-order", "|G| must be positive");
    if (r > 0 && !regulator.positive())
        throw DomainError("independence",
                          "independence not certified: regulator enclosure contains 0");
    Interval G(static_cast<long>(G_order));
    if (r == 0)
        return G;
    return G / sqrt(regulator) * unit_ball_volume(r);
}

Interval c_constant(std::int64_t G_order, std::vector<RationalPoint> const & pts, Curve const & E,
                    double tol)
{
    return c_constant(G_order, regulator(E, pts, tol).range, static_cast<unsigned>(pts.size()));
}

Interval t_bound(Curve const & E, Int const & u, Int const & v, Interval const & eps)
{
    Int d = d_family(E, u, v);
    if (d <= 0)
        throw DomainError("d-nonpositive", "T_E needs d_E(u, v) > 0");
    Int w = u * v + v * v;
    if (w <= 0)
        throw DomainError("d-nonpositive", "T_E needs uv + v^2 > 0");
    Interval one(1L);
    Interval inner = log_int(Int(4)) + (one - eps) * log_int(d) - log_int(w);
    return inner / Interval(8L) - delta_E(E) / Interval(4L);
}

Interval t_bound(Curve const & E, Int const & u, Int const & v, double eps)
{
    return t_bound(E, u, v, Interval::from_double(eps));
}

PointSetSummary summarize_points(Curve const & E, std::vector<RationalPoint> const & pts,
                                 double tol)
{
    PointSetSummary s;
    s.rank = static_cast<unsigned>(pts.size());
    s.regulator = regulator(E, pts, tol).range;
    s.diameter = diameter(E, pts, tol).range;
    return s;
}

Interval point_count_bound(Interval const & c, Interval const & T, Interval const & diam, unsigned r)
{
    if (!T.positive())
        throw DomainError("t-nonpositive", "point_count_bound needs T > 0");
    Interval half = Interval(1L) / Interval(2L);
    Interval value;
    if (r == 0) {
        value = c;
    } else {
        Interval lead = exp(Interval(static_cast<long>(r)) * half * log(T));
        Interval sub = Interval(static_cast<long>(r)) * sqrt(abs(diam)) *
                       exp(Interval(static_cast<long>(r) - 1) * half * log(T));
        value = c * (lead - sub);
    }
    return max(value, Interval(0L));
}

BoundReport class_number_lower_bound(Curve const & E, PointSetSummary const & pts,
                                     std::int64_t G_order, Int const & u, Int const & v,
                                     double eps, double alpha, bool with_gz)
{
    BoundReport rep;
    Int d = d_family(E, u, v);
    if (d <= 0)
        throw DomainError("d-nonpositive", "bound needs d_E(u, v) > 0");
    rep.d_bits = mpz_sizeinbase(d.get_mpz_t(), 2);
    rep.T = t_bound(E, u, v, eps);
    rep.c = c_constant(G_order, pts.regulator, pts.rank);

    Interval quarter_diam = pts.diameter / Interval(4L);
    rep.t_above_threshold = less(quarter_diam, rep.T);
    Interval alpha_rhs =
            Interval::from_double(alpha) / Interval(8L) * log_int(d) + quarter_diam;
    rep.alpha_check = less(alpha_rhs, rep.T);

    if (rep.t_above_threshold == Tri::True) {
        rep.lower_bound = point_count_bound(rep.c, rep.T, pts.diameter, pts.rank);
    } else {
        rep.lower_bound = Interval(0L);
        rep.note = "T below threshold";
    }
    if (with_gz)
        rep.gz_bound = gross_zagier_bound(4 * d);
    return rep;
}

Interval gross_zagier_bound(Int const & D, std::vector<std::pair<Int, unsigned>> const & factors)
{
    if (D <= 1)
        throw DomainError("gz-domain", "gross_zagier_bound needs D > 1");
    Rational prod(1);
    for (auto const & [p, e] : factors) {
        if (p == D)
            continue;
        Int fl = isqrt(Int(4 * p)); // floor(2 sqrt p)
        prod *= Rational(1) - Rational(fl, Int(p + 1));
    }
    prod.canonicalize();
    return log_int(D) / Interval(7000L) * Interval(prod);
}

std::optional<Interval> gross_zagier_bound(Int const & D)
{
    auto f = factor_trial(D);
    if (!f)
        return std::nullopt;
    return gross_zagier_bound(D, *f);
}

Int poly_eval(Poly const & p, Int const & t)
{
    Int acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * t + *it;
    return acc;
}

namespace {

void trim(Poly & p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

Poly poly_mul(Poly const & a, Poly const & b)
{
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

Poly poly_add(Poly const & a, Poly const & b)
{
    Poly r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] += b[i];
    trim(r);
    return r;
}

Poly poly_scale(Poly const & a, Int const & k)
{
    Poly r = a;
    for (auto & c : r)
        c *= k;
    trim(r);
    return r;
}

Int coeff(Poly const & p, std::size_t k)
{
    return k < p.size() ? p[k] : Int(0);
}

Int binomial(unsigned n, unsigned k)
{
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

} // namespace

PolyEnvelope poly_envelope(Poly const & r_in, Poly const & s_in)
{
    Poly r = r_in, s = s_in;
    trim(r);
    trim(s);
    PolyEnvelope env;
    std::size_t deg = std::max(r.empty() ? 0 : r.size() - 1, s.empty() ? 0 : s.size() - 1);
    env.n = static_cast<unsigned>(deg);
    env.c = std::max(abs(coeff(r, deg)), abs(coeff(s, deg)));
    if (env.c == 0)
        throw DomainError("zero-polynomial", "poly_envelope: both polynomials are zero");
    env.m = 1;
    // least b >= 1 with c binom(n, k) b^(n-k) >= max(|r[t^k]|, |s[t^k]|) for k < n;
    // the constant term (k = 0) is included so the envelope bounds every value
    for (unsigned k = 0; k < env.n; ++k) {
        Int target = std::max(abs(coeff(r, k)), abs(coeff(s, k)));
        Int scale = env.c * binomial(env.n, k);
        unsigned e = env.n - k;
        auto ok = [&](Int const & b) {
            Int p;
            mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), e);
            return scale * p >= target;
        };
        Int ratio = fdiv(target + scale - 1, scale); // ceil(target / scale)
        Int b;
        mpz_root(b.get_mpz_t(), ratio.get_mpz_t(), e);
        if (b < 1)
            b = 1;
        while (b > 1 && ok(Int(b - 1)))
            --b;
        while (!ok(b))
            ++b;
        if (b > env.m)
            env.m = b;
    }
    return env;
}

Interval FamilyCmin::height_upper(std::size_t i, Int const & t) const
{
    return intercept.at(i) + slope.at(i) * log_int(Int(abs(t) + m));
}

Interval FamilyCmin::value(Int const & t) const
{
    Interval L = log_int(Int(abs(t) + m)) + mu;
    Interval e = Interval(exponent);
    if (exponent == 0)
        return coefficient;
    return coefficient * exp(e * log(L));
}

FamilyCmin family_cmin(FamilyDescriptor const & F)
{
    Poly a4 = F.a4, a6 = F.a6;
    trim(a4);
    trim(a6);
    if (a4.empty() && a6.empty())
        throw DomainError("zero-polynomial", "family_cmin: a4 and a6 are both zero");
    if (F.torsion_order <= 0)
        throw DomainError("group-order", "family_cmin: torsion_order must be positive");

    FamilyCmin out;
    // j = 6912 a4^3 / (4 a4^3 + 27 a6^2), Delta = -16 (4 a4^3 + 27 a6^2)
    Poly a4cube = poly_mul(poly_mul(a4, a4), a4);
    Poly core = poly_add(poly_scale(a4cube, 4), poly_scale(poly_mul(a6, a6), 27));
    if (core.empty())
        throw DomainError("singular-family", "family_cmin: discriminant vanishes identically");
    // j identically 0 has height 0: H = 1 = 1 * (|t| + 1)^0
    out.j_envelope = a4.empty() ? PolyEnvelope{} : poly_envelope(poly_scale(a4cube, 6912), core);
    out.disc_envelope = poly_envelope(poly_scale(core, -16), Poly{Int(1)});

    out.m = std::max(out.j_envelope.m, out.disc_envelope.m);
    for (auto const & pt : F.points) {
        Poly s = pt.s;
        trim(s);
        if (s.empty())
            throw DomainError("zero-polynomial", "family_cmin: point denominator is zero");
        out.point_envelopes.push_back(poly_envelope(pt.r, s));
        out.m = std::max(out.m, out.point_envelopes.back().m);
    }

    Interval twelfth = Interval(1L) / Interval(12L);
    Interval half = Interval(1L) / Interval(2L);
    Interval base_slope = Interval(static_cast<long>(out.j_envelope.n) +
                                   static_cast<long>(out.disc_envelope.n)) *
                          twelfth;
    Interval base_intercept = (log_int(out.j_envelope.c) + log_int(out.disc_envelope.c)) * twelfth +
                              Interval::from_decimal("1.07");

    std::size_t r = F.points.size();
    Interval prod(1L);
    Interval mu_sum(0L);
    long growing = 0;
    for (std::size_t i = 0; i < r; ++i) {
        auto const & env = out.point_envelopes[i];
        Interval sl = base_slope + Interval(static_cast<long>(env.n)) * half;
        Interval ic = base_intercept + log_int(env.c) * half;
        out.slope.push_back(sl);
        out.intercept.push_back(ic);
        if (sl.positive()) {
            // slope (L + ic/slope); the product over such factors is at most
            // prod(slope) (L + mean(ic/slope))^r' by AM-GM, with equality in the limit
            prod *= sl;
            mu_sum += ic / sl;
            ++growing;
        } else {
            prod *= ic;
        }
    }
    out.mu = growing > 0 ? mu_sum / Interval(growing) : Interval(0L);
    out.exponent = Rational(-growing, 2);
    out.exponent.canonicalize();
    out.coefficient = Interval(static_cast<long>(F.torsion_order)) *
                      unit_ball_volume(static_cast<unsigned>(r)) / sqrt(prod);
    return out;
}

namespace {

Int json_int(nlohmann::json const & j)
{
    if (j.is_number_integer())
        return Int(std::to_string(j.get<long long>()));
    if (j.is_string())
        return parse_int(j.get<std::string>());
    throw std::invalid_argument("expected an integer, got " + j.dump());
}

Poly json_poly(nlohmann::json const & j, char const * key)
{
    if (!j.is_array())
        throw std::invalid_argument(std::string("'") + key + "' must be an array of integers");
    Poly p;
    for (auto const & c : j)
        p.push_back(json_int(c));
    return p;
}

} // namespace

FamilyDescriptor FamilyDescriptor::from_json_text(std::string const & text)
{
    nlohmann::json j = nlohmann::json::parse(text);
    FamilyDescriptor F;
    F.a4 = json_poly(j.at("a4"), "a4");
    F.a6 = json_poly(j.at("a6"), "a6");
    for (auto const & p : j.at("points"))
        F.points.push_back({json_poly(p.at("r"), "r"), json_poly(p.at("s"), "s")});
    F.torsion_order = j.contains("torsion_order") ? to_int64(json_int(j["torsion_order"])) : 1;
    return F;
}

namespace {

std::string strip(std::string s)
{
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Int toml_int(std::string s)
{
    s = strip(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
    return parse_int(s);
}

Poly toml_array(std::string const & v)
{
    std::string s = strip(v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("expected an array: " + v);
    s = s.substr(1, s.size() - 2);
    Poly p;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (strip(item).empty())
            continue;
        p.push_back(toml_int(item));
    }
    return p;
}

} // namespace

FamilyDescriptor FamilyDescriptor::from_toml_text(std::string const & text)
{
    // Subset of TOML: comments, `key = integer`, `key = [integers]` (may span
    // lines), and [[points]] array-of-tables headers.
    FamilyDescriptor F;
    bool have_a4 = false, have_a6 = false;
    FamilyPoint * cur = nullptr;
    std::stringstream in(text);
    std::string line, pending;
    auto handle = [&](std::string const & stmt) {
        auto eq = stmt.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed TOML line: " + stmt);
        std::string key = strip(stmt.substr(0, eq));
        std::string val = strip(stmt.substr(eq + 1));
        if (cur) {
            if (key == "r")
                cur->r = toml_array(val);
            else if (key == "s")
                cur->s = toml_array(val);
            else
                throw std::invalid_argument("unknown key in [[points]]: " + key);
            return;
        }
        if (key == "a4") {
            F.a4 = toml_array(val);
            have_a4 = true;
        } else if (key == "a6") {
            F.a6 = toml_array(val);
            have_a6 = true;
        } else if (key == "torsion_order") {
            F.torsion_order = to_int64(toml_int(val));
        } else {
            throw std::invalid_argument("unknown key: " + key);
        }
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = strip(line);
        if (line.empty())
            continue;
        if (!pending.empty()) {
            pending += " " + line;
        } else if (line == "[[points]]") {
            F.points.emplace_back();
            cur = &F.points.back();
            continue;
        } else if (line.front() == '[') {
            throw std::invalid_argument("unsupported TOML table: " + line);
        } else {
            pending = line;
        }
        if (std::count(pending.begin(), pending.end(), '[') ==
            std::count(pending.begin(), pending.end(), ']')) {
            handle(pending);
            pending.clear();
        }
    }
    if (!pending.empty())
        throw std::invalid_argument("unterminated TOML array");
    if (!have_a4 || !have_a6)
        throw std::invalid_argument("family descriptor needs a4 and a6");
    return F;
}

} // namespace ecmap
