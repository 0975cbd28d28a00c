#include "ecmap/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace ecmap {

Curve::Curve(Int a4_, Int a6_) : a4(std::move(a4_)), a6(std::move(a6_))
{
    if (disc_core() == 0)
        throw DomainError("singular-curve", "curve (" + str() + ") is singular");
}

Rational Curve::j_invariant() const
{
    Rational j(6912 * a4 * a4 * a4, disc_core());
    j.canonicalize();
    return j;
}

Rational Curve::rhs(Rational const & x) const
{
    return x * x * x + Rational(a4) * x + Rational(a6);
}

std::string Curve::str() const
{
    return a4.get_str() + "," + a6.get_str();
}

Curve Curve::parse(std::string_view s)
{
    auto comma = s.find(',');
    if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
        throw std::invalid_argument("curve must be 'a4,a6': " + std::string(s));
    return Curve(parse_int(s.substr(0, comma)), parse_int(s.substr(comma + 1)));
}

std::string RationalPoint::str() const
{
    if (infinity)
        return "inf";
    return x.get_str() + "," + y.get_str();
}

RationalPoint RationalPoint::parse(std::string_view s)
{
    std::string t(s);
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    if (t == "inf" || t == "O" || t == "oo")
        return at_infinity();
    if (!t.empty() && t.front() == '(' && t.back() == ')')
        t = t.substr(1, t.size() - 2);
    auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
        throw std::invalid_argument("point must be 'x,y': " + std::string(s));
    return affine(parse_rational(t.substr(0, comma)), parse_rational(t.substr(comma + 1)));
}

bool on_curve(Curve const & E, RationalPoint const & P)
{
    return P.infinity || P.y * P.y == E.rhs(P.x);
}

void require_on_curve(Curve const & E, RationalPoint const & P)
{
    if (!on_curve(E, P))
        throw DomainError("not-on-curve",
                          "point (" + P.str() + ") is not on curve (" + E.str() + ")");
}

RationalPoint negate(RationalPoint const & P)
{
    if (P.infinity)
        return P;
    return RationalPoint::affine(P.x, -P.y);
}

namespace {

// Chord-tangent addition for points already known to be on the curve.
RationalPoint add_unchecked(Curve const & E, RationalPoint const & P, RationalPoint const & Q)
{
    if (P.infinity)
        return Q;
    if (Q.infinity)
        return P;
    Rational lambda;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == 0)
            return RationalPoint::at_infinity();
        lambda = (3 * P.x * P.x + Rational(E.a4)) / (2 * P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    Rational x3 = lambda * lambda - P.x - Q.x;
    Rational y3 = lambda * (P.x - x3) - P.y;
    return RationalPoint::affine(std::move(x3), std::move(y3));
}

RationalPoint mul_unchecked(Curve const & E, Int k, RationalPoint P)
{
    if (k < 0) {
        k = -k;
        P = negate(P);
    }
    RationalPoint acc = RationalPoint::at_infinity();
    auto bits = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2));
    for (long i = bits - 1; i >= 0; --i) {
        acc = add_unchecked(E, acc, acc);
        if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i)))
            acc = add_unchecked(E, acc, P);
    }
    return acc;
}

} // namespace

RationalPoint add(Curve const & E, RationalPoint const & P, RationalPoint const & Q)
{
    require_on_curve(E, P);
    require_on_curve(E, Q);
    return add_unchecked(E, P, Q);
}

RationalPoint scalar_mul(Curve const & E, Int k, RationalPoint const & P)
{
    require_on_curve(E, P);
    if (k == 0)
        return RationalPoint::at_infinity();
    return mul_unchecked(E, std::move(k), P);
}

CanonicalRep canonical_rep(RationalPoint const & P)
{
    if (P.infinity)
        throw DomainError("malformed-point", "canonical_rep: point at infinity");
    Int const & xd = P.x.get_den();
    Int C = isqrt(xd);
    if (C * C != xd || P.y.get_den() != C * C * C)
        throw DomainError("malformed-point",
                          "canonical_rep: denominators of (" + P.str() +
                                  ") are not of the form C^2, C^3");
    return {P.x.get_num(), P.y.get_num(), C};
}

Interval rational_height(Rational const & x)
{
    Int n = abs(x.get_num());
    Int const & d = x.get_den();
    return log_int(n > d ? n : d);
}

Interval weil_height(RationalPoint const & P)
{
    if (P.infinity)
        return Interval(0L);
    return rational_height(P.x);
}

HeightEnvelope height_envelope(Curve const & E)
{
    Interval hj = rational_height(E.j_invariant());
    Interval hd = log_int(abs(E.discriminant()));
    Interval lower = hj / Interval(8L) + hd / Interval(12L) + Interval::from_decimal("0.973");
    Interval upper = hj / Interval(12L) + hd / Interval(12L) + Interval::from_decimal("1.07");
    return {lower, upper};
}

std::optional<int> torsion_order(Curve const & E, RationalPoint const & P)
{
    require_on_curve(E, P);
    Int core = abs(E.disc_core());
    RationalPoint Q = P;
    for (int n = 1; n <= 12; ++n) {
        if (Q.infinity)
            return n;
        // Nagell-Lutz: torsion points are integral with y = 0 or y^2 | 4a4^3 + 27a6^2
        if (Q.x.get_den() != 1 || Q.y.get_den() != 1)
            return std::nullopt;
        Int y = Q.y.get_num();
        if (y != 0 && !mpz_divisible_p(core.get_mpz_t(), Int(y * y).get_mpz_t()))
            return std::nullopt;
        Q = add_unchecked(E, Q, P);
    }
    return std::nullopt;
}

namespace {

// phi(X, Z) and psi(X, Z): x([2]P) = phi / psi for x(P) = X / Z.
struct DoublingForms
{
    Int a4, a6;

    Int phi(Int const & X, Int const & Z) const
    {
        Int X2 = X * X, Z2 = Z * Z;
        return X2 * X2 - 2 * a4 * X2 * Z2 - 8 * a6 * X * Z2 * Z + a4 * a4 * Z2 * Z2;
    }
    Int psi(Int const & X, Int const & Z) const
    {
        Int Z2 = Z * Z;
        return 4 * Z * (X * X * X + a4 * X * Z2 + a6 * Z2 * Z);
    }
    Interval phi(Interval const & X, Interval const & Z) const
    {
        Interval X2 = powi(X, 2), Z2 = powi(Z, 2);
        return powi(X2, 2) - Interval(2L) * Interval(a4) * X2 * Z2 -
               Interval(8L) * Interval(a6) * X * Z2 * Z + Interval(a4) * Interval(a4) * powi(Z2, 2);
    }
    Interval psi(Interval const & X, Interval const & Z) const
    {
        Interval Z2 = powi(Z, 2);
        return Interval(4L) * Z * (powi(X, 3) + Interval(a4) * X * Z2 + Interval(a6) * Z2 * Z);
    }
};

// log max(|phi(x)|, |psi(x)|) - 4 log max(|x|, 1), evaluated on the side of
// |x| = 1 where the homogeneous coordinates stay bounded.
Interval local_increment(DoublingForms const & f, Interval const & x)
{
    Interval ax = abs(x);
    Interval one(1L);
    if (certainly_greater(ax, one)) {
        Interval t = one / x;
        return log(max(abs(f.phi(one, t)), abs(f.psi(one, t))));
    }
    if (mpfr_cmp_ui(ax.hi(), 1) <= 0)
        return log(max(abs(f.phi(x, one)), abs(f.psi(x, one))));
    return log(max(abs(f.phi(x, one)), abs(f.psi(x, one)))) -
           Interval(4L) * log(max(ax, one));
}

// hhat(P) enclosure from k doublings:
//   h_W(x_k) = 4^k h_W(x_0) + sum_i 4^(k-1-i) (F(x_i) - log g_(i+1))
// with F the archimedean increment above and g the gcd cancelled at each
// doubling.  The gcds divide Res(phi, psi) = Delta^2, so they are read off
// the coordinates tracked modulo a power of Delta^2 instead of exactly.
Interval height_after_doublings(Curve const & E, RationalPoint const & P, int k,
                                HeightEnvelope const & env)
{
    DoublingForms f{E.a4, E.a6};
    CanonicalRep rep = canonical_rep(P);
    Int X = rep.A, Z = rep.C * rep.C;
    Interval h0 = log_int(abs(X) > Z ? abs(X) : Z);

    Int R = E.discriminant() * E.discriminant();
    Int m;
    mpz_pow_ui(m.get_mpz_t(), R.get_mpz_t(), static_cast<unsigned long>(k) + 1);
    Int Xm = fmod(X, m), Zm = fmod(Z, m);

    Interval x(P.x);
    Interval acc(0L);
    Interval quarter = Interval(1L) / Interval(4L);
    Interval scale(1L); // 4^-(i+1)
    for (int i = 0; i < k; ++i) {
        scale *= quarter;
        Interval F = local_increment(f, x);

        Int pm = fmod(f.phi(Xm, Zm), m);
        Int qm = fmod(f.psi(Xm, Zm), m);
        Int g = gcd(gcd(pm, qm), R);
        m /= g;
        Xm = fmod(Int(pm / g), m);
        Zm = fmod(Int(qm / g), m);

        acc += scale * (F - log_int(g));

        Interval one(1L);
        if (certainly_greater(abs(x), one)) {
            Interval t = one / x;
            x = f.phi(one, t) / f.psi(one, t);
        } else {
            x = f.phi(x, one) / f.psi(x, one);
        }
    }
    Interval half = Interval(1L) / Interval(2L);
    Interval tail = Interval::hull(-env.lower, env.upper) * powi(quarter, k);
    return half * (h0 + acc) + tail;
}

} // namespace

HeightValue canonical_height(Curve const & E, RationalPoint const & P, double tol)
{
    require_on_curve(E, P);
    if (!(tol > 0))
        throw DomainError("tolerance", "canonical_height: tol must be positive");
    if (torsion_order(E, P))
        return {Interval(0L)};

    HeightEnvelope env = height_envelope(E);
    double span = (env.lower + env.upper).hi_double();
    // the envelope contributes span / 4^k; leave a quarter of 2 tol for rounding
    int k = 0;
    while (k < max_height_doublings && span / std::ldexp(1.0, 2 * k) > 1.5 * tol)
        ++k;
    bool capped = span / std::ldexp(1.0, 2 * k) > 1.5 * tol;

    long prec = working_precision() + 4L * k + 64;
    std::optional<HeightValue> best;
    for (int attempt = 0; attempt < 5; ++attempt, prec *= 2) {
        PrecisionScope scope(prec);
        try {
            HeightValue hv{height_after_doublings(E, P, k, env)};
            if (!best || hv.error_double() < best->error_double())
                best = hv;
            if (!capped && hv.error_double() <= tol)
                return hv;
            if (capped)
                break;
        } catch (DomainError const &) {
            // orbit enclosure lost too much precision; retry wider
        }
    }
    if (!best)
        throw DomainError("height-precision", "canonical_height: real orbit enclosure failed");
    throw HeightError("canonical_height: tolerance not reached within " +
                              std::to_string(max_height_doublings) + " doublings",
                      *best);
}

HeightValue neron_tate_pairing(Curve const & E, RationalPoint const & P, RationalPoint const & Q,
                               double tol)
{
    require_on_curve(E, P);
    require_on_curve(E, Q);
    if (P == Q)
        return canonical_height(E, P, tol);
    Interval hp = canonical_height(E, P, tol / 2).range;
    Interval hq = canonical_height(E, Q, tol / 2).range;
    Interval hs = canonical_height(E, add_unchecked(E, P, Q), tol / 2).range;
    return {(hs - hp - hq) / Interval(2L)};
}

std::vector<std::vector<Interval>> height_gram(Curve const & E,
                                               std::vector<RationalPoint> const & pts,
                                               double tol)
{
    std::size_t r = pts.size();
    std::vector<Interval> h;
    for (auto const & P : pts)
        h.push_back(canonical_height(E, P, tol).range);
    std::vector<std::vector<Interval>> g(r, std::vector<Interval>(r));
    for (std::size_t i = 0; i < r; ++i) {
        g[i][i] = h[i];
        for (std::size_t j = i + 1; j < r; ++j) {
            Interval hs = canonical_height(E, add_unchecked(E, pts[i], pts[j]), tol).range;
            g[i][j] = g[j][i] = (hs - h[i] - h[j]) / Interval(2L);
        }
    }
    return g;
}

namespace {

Interval laplace_det(std::vector<std::vector<Interval>> const & a, std::vector<std::size_t> & cols,
                     std::size_t row)
{
    std::size_t n = a.size();
    if (row == n)
        return Interval(1L);
    Interval total(0L);
    int sign = 1;
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
        std::size_t c = cols[idx];
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(idx));
        Interval term = a[row][c] * laplace_det(a, cols, row + 1);
        cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(idx), c);
        if (sign > 0)
            total += term;
        else
            total -= term;
        sign = -sign;
    }
    return total;
}

} // namespace

HeightValue regulator(Curve const & E, std::vector<RationalPoint> const & pts, double tol)
{
    for (auto const & P : pts)
        require_on_curve(E, P);
    if (pts.empty())
        return {Interval(1L)};
    auto g = height_gram(E, pts, tol);
    std::vector<std::size_t> cols(pts.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        cols[i] = i;
    return {laplace_det(g, cols, 0)};
}

HeightValue diameter(Curve const & E, std::vector<RationalPoint> const & pts, double tol)
{
    for (auto const & P : pts)
        require_on_curve(E, P);
    std::size_t r = pts.size();
    Interval best(0L);
    std::vector<int> delta(r, -1);
    // enumerate {0, +-1}^r, skipping vectors whose first non-zero entry is -1
    // (their negatives have the same height)
    std::size_t total = 1;
    for (std::size_t i = 0; i < r; ++i)
        total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        int first = 0;
        RationalPoint S = RationalPoint::at_infinity();
        for (std::size_t i = 0; i < r; ++i, c /= 3) {
            int d = static_cast<int>(c % 3) - 1;
            if (first == 0)
                first = d;
            if (d == 1)
                S = add_unchecked(E, S, pts[i]);
            else if (d == -1)
                S = add_unchecked(E, S, negate(pts[i]));
        }
        if (first <= 0)
            continue;
        Interval h2 = Interval(2L) * canonical_height(E, S, tol / 2).range;
        best = max(best, h2);
    }
    return {best};
}

namespace {

// All integer roots of the monic cubic x^3 + p x + q.
std::vector<Int> integer_roots_depressed_cubic(Int const & p, Int const & q)
{
    auto f = [&](Int const & x) -> Int { return x * x * x + p * x + q; };
    Int B = 1 + std::max(abs(p), abs(q));
    std::vector<std::pair<Int, Int>> increasing, decreasing;
    if (p >= 0) {
        increasing.push_back({-B, B});
    } else {
        Int k = isqrt(fdiv(-p, 3)); // floor of the critical point
        Int K = 3 * k * k == -p ? k : k + 1;
        increasing.push_back({-B, -K});
        decreasing.push_back({-k, k});
        increasing.push_back({K, B});
    }
    std::vector<Int> roots;
    auto search = [&](Int lo, Int hi, int dir) {
        if (lo > hi)
            return;
        // least x in [lo, hi] with dir * f(x) >= 0
        Int a = lo, b = hi;
        if (dir * sgn(f(b)) < 0)
            return;
        while (a < b) {
            Int mid = fdiv(a + b, 2);
            if (dir * sgn(f(mid)) >= 0)
                b = mid;
            else
                a = mid + 1;
        }
        if (f(a) == 0)
            roots.push_back(a);
    };
    for (auto const & [lo, hi] : increasing)
        search(lo, hi, 1);
    for (auto const & [lo, hi] : decreasing)
        search(lo, hi, -1);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

bool point_less(RationalPoint const & a, RationalPoint const & b)
{
    if (a.infinity != b.infinity)
        return a.infinity;
    if (a.infinity)
        return false;
    if (a.x != b.x)
        return a.x < b.x;
    return a.y < b.y;
}

} // namespace

TorsionInfo torsion_subgroup(Curve const & E)
{
    Int core = abs(E.disc_core());
    auto fac = factor_trial(core);
    if (!fac)
        throw DomainError("factorization",
                          "torsion_subgroup: cannot factor 4a4^3 + 27a6^2 = " + core.get_str());

    // candidate y >= 0 with y^2 | core, plus y = 0
    std::vector<Int> ys{Int(0), Int(1)};
    for (auto const & [p, e] : *fac) {
        std::size_t n = ys.size();
        for (std::size_t i = 1; i < n; ++i) {
            Int pk = ys[i];
            for (unsigned j = 1; 2 * j <= e; ++j) {
                pk *= p;
                ys.push_back(pk);
            }
        }
    }

    TorsionInfo info;
    info.points.push_back(RationalPoint::at_infinity());
    for (Int const & y : ys) {
        for (Int const & x : integer_roots_depressed_cubic(E.a4, E.a6 - y * y)) {
            for (int s : {1, -1}) {
                if (y == 0 && s < 0)
                    continue;
                RationalPoint P = RationalPoint::affine(Rational(x), Rational(Int(s * y)));
                if (torsion_order(E, P))
                    info.points.push_back(P);
            }
        }
    }
    std::sort(info.points.begin(), info.points.end(), point_less);

    std::size_t n = info.points.size();
    std::size_t two_torsion = 0;
    for (auto const & P : info.points)
        if (!P.infinity && P.y == 0)
            ++two_torsion;
    if (n == 1) {
        info.structure = "trivial";
    } else if (two_torsion == 3) {
        info.invariants = {2, static_cast<int>(n / 2)};
        info.structure = "Z/2xZ/" + std::to_string(n / 2);
    } else {
        info.invariants = {static_cast<int>(n)};
        info.structure = "Z/" + std::to_string(n);
    }
    for (auto const & P : info.points)
        if (!P.infinity && (!info.A0 || P.x.get_num() > *info.A0))
            info.A0 = P.x.get_num();
    return info;
}

Line secant_line(Curve const & E, RationalPoint const & P1, RationalPoint const & P2)
{
    require_on_curve(E, P1);
    require_on_curve(E, P2);
    if (P1.infinity || P2.infinity)
        throw DomainError("vertical-line", "vertical line; triple contains inf");
    Rational lambda;
    if (P1.x == P2.x) {
        if (P1.y != P2.y || P1.y == 0)
            throw DomainError("vertical-line", "vertical line; triple contains inf");
        lambda = (3 * P1.x * P1.x + Rational(E.a4)) / (2 * P1.y);
    } else {
        lambda = (P2.y - P1.y) / (P2.x - P1.x);
    }
    Rational nu = P1.y - lambda * P1.x;
    Int l = lcm(lambda.get_den(), nu.get_den());
    Int m = lambda.get_num() * (l / lambda.get_den());
    Int n = nu.get_num() * (l / nu.get_den());
    Int g = gcd(gcd(l, m), n);
    return {l / g, m / g, n / g};
}

} // namespace ecmap
