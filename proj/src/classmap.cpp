#include "ecmap/classmap.hpp"

#include <algorithm>

#include "ecmap/bounds.hpp"

namespace ecmap {

Int d_family(Curve const & E, Int const & u, Int const & v)
{
    Int v2 = v * v;
    return v * (u * u * u + E.a4 * u * v2 - E.a6 * v2 * v);
}

bool is_map_suitable(Curve const & E, Int const & u, Int const & v)
{
    return u > 0 && v > 0 && 3 * u * u + E.a4 * v * v > 0 && d_family(E, u, v) > 0;
}

bool is_kernel_suitable(Curve const & E, Int const & u, Int const & v, TorsionInfo const & tors)
{
    if (v <= 1)
        return false;
    if (!tors.A0)
        return true;
    // (d - uv)/v^2 > A0  <=>  d - uv > A0 v^2  (v > 0)
    return d_family(E, u, v) - u * v > *tors.A0 * v * v;
}

bool is_kernel_suitable(Curve const & E, Int const & u, Int const & v)
{
    return is_kernel_suitable(E, u, v, torsion_subgroup(E));
}

Tri BoundSuitability::both() const
{
    if (lower == Tri::False || upper == Tri::False)
        return Tri::False;
    if (lower == Tri::True && upper == Tri::True)
        return Tri::True;
    return Tri::Unknown;
}

BoundSuitability bound_suitability(Curve const & E, Interval const & diam, Int const & u,
                                   Int const & v, double eps)
{
    if (!(eps > 0 && eps < 0.5))
        throw DomainError("epsilon", "epsilon must lie in (0, 1/2)");
    BoundSuitability r;
    if (u <= 0 || v <= 0)
        return r;
    Int d = d_family(E, u, v);
    if (d <= 0)
        return r;
    Interval e = Interval::from_double(eps);
    Interval one(1L);
    Interval power = one + e / (one - e); // 1 + e'
    Int w = u * v + v * v;
    Interval log_d = log_int(d);
    // compare logarithms of both sides
    Interval lower_side =
            power * (log_int(w) - log_int(Int(4)) + Interval(2L) * (delta_E(E) + diam));
    Interval upper_side = power * log_int(v * v * w);
    r.lower = less(lower_side, log_d);
    r.upper = less(log_d, upper_side);
    return r;
}

Tri is_bound_suitable(Curve const & E, Interval const & diam, Int const & u, Int const & v,
                      double eps)
{
    return bound_suitability(E, diam, u, v, eps).both();
}

Tri is_bound_suitable(Curve const & E, std::vector<RationalPoint> const & pts, Int const & u,
                      Int const & v, double eps, double tol)
{
    return is_bound_suitable(E, diameter(E, pts, tol).range, u, v, eps);
}

void require_phi_domain(Curve const & E, Int const & u, Int const & v)
{
    if (!is_map_suitable(E, u, v))
        throw DomainError("map-suitability",
                          "(u, v) = (" + u.get_str() + ", " + v.get_str() +
                                  ") is not map-suitable for (" + E.str() + ")");
    Int disc = -D_family(E, u, v);
    Tri f = fundamental_discriminant(disc);
    if (f == Tri::Unknown)
        throw DomainError("squarefree-unknown",
                          "cannot decide whether " + disc.get_str() + " is fundamental");
    if (f == Tri::False)
        throw DomainError("non-fundamental",
                          "-D_E(u, v) = " + disc.get_str() + " is not a fundamental discriminant");
}

namespace {

// Exact quotient; a remainder means an assumption upstream was violated.
Int exact_div(Int const & n, Int const & d, char const * what)
{
    if (d == 0 || !mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()))
        throw DomainError("non-integral", std::string(what) + " is not integral");
    Int q;
    mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

PhiResult phi_form(Curve const & E, Int const & u, Int const & v, RationalPoint const & P,
                   Int const * mu_override)
{
    PhiResult r;
    Int d = d_family(E, u, v);
    if (P.infinity) {
        r.raw_form = principal_form(Int(-4 * d));
        r.reduced_class = r.raw_form;
        r.mu = 0;
        r.a = 0;
        r.g = 0;
        return r;
    }
    r.rep = canonical_rep(P);
    Int const & A = r.rep.A;
    Int const & B = r.rep.B;
    Int const & C = r.rep.C;
    r.a = A * v + C * C * u;
    r.g = gcd(C, v);
    Int g2 = r.g * r.g;
    Int lead = exact_div(v * r.a, g2, "v a / g^2");
    Int c3 = exact_div(C * C * C, g2, "C^3 / g^2");
    if (mu_override) {
        if (fmod(Int(c3 * *mu_override - 1), lead) != 0)
            throw DomainError("mu", "mu does not satisfy C^3/g^2 mu = 1 mod v a/g^2");
        r.mu = *mu_override;
    } else {
        r.mu = inverse_mod(c3, lead);
    }
    Int bv = exact_div(B * v * v, g2, "B v^2 / g^2");
    Int mid = 2 * r.mu * bv;
    Int last = exact_div(r.mu * r.mu * bv * bv + d, lead, "third Eq. coefficient");
    r.raw_form = {lead, mid, last};
    if (r.raw_form.discriminant() != -4 * d)
        throw DomainError("internal", "phi: discriminant mismatch");
    if (!r.raw_form.positive_definite())
        throw DomainError("not-positive-definite", "phi: form is not positive definite");
    if (!r.raw_form.primitive())
        throw DomainError("imprimitive", "phi: form is not primitive");
    r.reduced_class = reduced(r.raw_form);
    return r;
}

} // namespace

PhiResult phi(Curve const & E, Int const & u, Int const & v, RationalPoint const & P)
{
    require_on_curve(E, P);
    require_phi_domain(E, u, v);
    return phi_form(E, u, v, P, nullptr);
}

PhiResult phi_with_mu(Curve const & E, Int const & u, Int const & v, RationalPoint const & P,
                      Int const & mu)
{
    require_on_curve(E, P);
    require_phi_domain(E, u, v);
    return phi_form(E, u, v, P, &mu);
}

CubeWitness bhargava_cube_of_triple(Curve const & E, Int const & u, Int const & v,
                                    RationalPoint const & P1, RationalPoint const & P2,
                                    RationalPoint const & P3,
                                    std::array<Int, 3> const & bezout_shift)
{
    std::array<RationalPoint const *, 3> P{&P1, &P2, &P3};
    for (auto p : P) {
        require_on_curve(E, *p);
        if (p->infinity)
            throw DomainError("infinite-point", "cube triple contains the point at infinity");
    }
    if (!add(E, add(E, P1, P2), P3).infinity)
        throw DomainError("not-collinear", "cube triple does not sum to infinity");
    require_phi_domain(E, u, v);

    CubeWitness w;
    w.line = secant_line(E, P1, P2);
    w.d = d_family(E, u, v);
    for (int i = 0; i < 3; ++i) {
        CanonicalRep rep = canonical_rep(*P[i]);
        w.A[i] = rep.A;
        w.B[i] = rep.B;
        w.Cs[i] = rep.C;
    }
    w.C = w.Cs[0] * w.Cs[1] * w.Cs[2];
    w.M = exact_div(w.C * w.line.m, w.line.l, "M = C m / l");
    w.N = exact_div(w.C * w.line.n, w.line.l, "N = C n / l");
    w.b = w.N * v - w.M * u;

    for (int i = 0; i < 3; ++i) {
        Int const & Ci = w.Cs[i];
        w.a[i] = w.A[i] * v + Ci * Ci * u;
        w.g[i] = gcd(Ci, v);
        Int g2 = w.g[i] * w.g[i];
        Int c3 = Ci * Ci * Ci;
        // C_i^3 mu_i + v a_i l_i = g_i^2, mu_i least non-negative
        Int mod = exact_div(v * w.a[i], g2, "v a_i / g_i^2");
        Int mu = inverse_mod(exact_div(c3, g2, "C_i^3 / g_i^2"), mod);
        mu += bezout_shift[i] * mod;
        w.mu[i] = mu;
        w.ell[i] = exact_div(g2 - c3 * mu, v * w.a[i], "l_i");
        w.q[i] = exact_div(w.b * v * w.ell[i] - w.M * Ci * mu, w.g[i], "q_i");
    }

    auto const & g = w.g;
    auto const & q = w.q;
    auto const & a = w.a;
    BhargavaCube & cube = w.cube;
    cube.rho = exact_div(v * w.C, g[0] * g[1] * g[2], "rho");
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        cube.psi[i] = exact_div(v * q[i], g[j] * g[k], "psi_i");
        cube.phi[i] = exact_div(v * q[j] * q[k] - a[i] * g[j] * g[k], w.C * g[i], "phi_i");
    }
    Int theta_num = v * q[0] * q[1] * q[2] - a[0] * g[1] * g[2] * q[0] -
                    a[1] * g[0] * g[2] * q[1] - a[2] * g[0] * g[1] * q[2] +
                    2 * w.b * g[0] * g[1] * g[2];
    cube.theta = exact_div(theta_num, w.C * w.C, "theta");
    return w;
}

std::vector<IdentityCheck> check_cube_witness(CubeWitness const & w, Curve const & E,
                                              Int const & u, Int const & v)
{
    std::vector<IdentityCheck> out;
    auto check = [&](std::string name, bool ok) { out.push_back({std::move(name), ok}); };
    auto divides = [](Int const & d, Int const & n) {
        return d != 0 && mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
    };

    auto const & A = w.A;
    auto const & Cs = w.Cs;
    auto const & a = w.a;
    Int const & C = w.C;
    Int const & M = w.M;
    Int const & N = w.N;
    Int const & b = w.b;
    Int const & d = w.d;
    Int C2 = C * C;
    std::array<Int, 3> S{Cs[0] * Cs[0], Cs[1] * Cs[1], Cs[2] * Cs[2]};

    check("d", d == d_family(E, u, v));
    check("C", C == Cs[0] * Cs[1] * Cs[2]);
    check("M l = C m", M * w.line.l == C * w.line.m);
    check("N l = C n", N * w.line.l == C * w.line.n);
    check("b", b == N * v - M * u);
    for (int i = 0; i < 3; ++i) {
        std::string s = std::to_string(i + 1);
        check("a_" + s, a[i] == A[i] * v + S[i] * u);
        check("g_" + s, w.g[i] == gcd(Cs[i], v));
        check("bezout_" + s,
              Cs[i] * S[i] * w.mu[i] + v * a[i] * w.ell[i] == w.g[i] * w.g[i]);
        check("q_" + s, w.q[i] * w.g[i] == b * v * w.ell[i] - M * Cs[i] * w.mu[i]);
    }

    check("(7) a1a2a3 v = b^2 v^2 + C^2 d", a[0] * a[1] * a[2] * v == b * b * v * v + C2 * d);
    check("(8) A1A2A3 = N^2 - a6 C^2", A[0] * A[1] * A[2] == N * N - E.a6 * C2);
    check("(9)", a[1] * a[2] * S[0] + a[0] * a[2] * S[1] + a[0] * a[1] * S[2] ==
                         -2 * M * b * v + C2 * (3 * u * u + E.a4 * v * v));
    check("(10)", A[1] * A[2] * S[0] + A[0] * A[2] * S[1] + A[0] * A[1] * S[2] ==
                          -2 * M * N + E.a4 * C2);
    check("(11)", a[0] * S[1] * S[2] + a[1] * S[0] * S[2] + a[2] * S[0] * S[1] ==
                          M * M * v + 3 * C2 * u);
    check("(12)", A[0] * S[1] * S[2] + A[1] * S[0] * S[2] + A[2] * S[0] * S[1] == M * M);
    bool d13 = true, d14 = true;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        Int cc = Cs[i] * Cs[j];
        d13 = d13 && divides(cc, M * N + A[i] * A[j] * S[k]);
        d14 = d14 && divides(cc, A[i] * A[j] * M + A[i] * S[j] * N + A[j] * S[i] * N);
    }
    check("(13) CiCj | MN + AiAjCk^2", d13);
    check("(14) CiCj | AiAjM + AiCj^2N + AjCi^2N", d14);

    // entries as defined, recomputed from the stored intermediates
    auto const & g = w.g;
    auto const & q = w.q;
    BhargavaCube const & c = w.cube;
    check("rho", c.rho * g[0] * g[1] * g[2] == v * C);
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        std::string s = std::to_string(i + 1);
        check("psi_" + s, c.psi[i] * g[j] * g[k] == v * q[i]);
        check("phi_" + s, c.phi[i] * C * g[i] == v * q[j] * q[k] - a[i] * g[j] * g[k]);
    }
    check("theta", c.theta * C2 == v * q[0] * q[1] * q[2] - a[0] * g[1] * g[2] * q[0] -
                                           a[1] * g[0] * g[2] * q[1] -
                                           a[2] * g[0] * g[1] * q[2] +
                                           2 * b * g[0] * g[1] * g[2]);

    bool forms_ok = true;
    try {
        auto forms = cube_associated_forms(c);
        for (auto const & f : forms)
            forms_ok = forms_ok && f.discriminant() == -4 * d;
    } catch (DomainError const &) {
        forms_ok = false;
    }
    check("cube discriminant", forms_ok);
    return out;
}

bool cube_witness_ok(CubeWitness const & w, Curve const & E, Int const & u, Int const & v)
{
    auto checks = check_cube_witness(w, E, u, v);
    return std::all_of(checks.begin(), checks.end(), [](IdentityCheck const & c) { return c.ok; });
}

bool verify_homomorphism(Curve const & E, Int const & u, Int const & v,
                         RationalPoint const & P1, RationalPoint const & P2)
{
    require_on_curve(E, P1);
    require_on_curve(E, P2);
    require_phi_domain(E, u, v);
    QuadForm lhs = phi_form(E, u, v, add(E, P1, P2), nullptr).reduced_class;
    QuadForm rhs = compose(phi_form(E, u, v, P1, nullptr).reduced_class,
                           phi_form(E, u, v, P2, nullptr).reduced_class);
    return lhs == rhs;
}

TwistPoint twist_point(Curve const & E, Int const & u, Int const & v)
{
    Int d = d_family(E, u, v);
    if (d <= 0 || v <= 0)
        throw DomainError("twist", "twist point needs d_E(u, v) > 0 and v > 0");
    // (-u/v, 1/v^2) on -d y^2 = x^3 + a4 x + a6
    Rational x(Int(-u), v), y(Int(1), Int(v * v));
    x.canonicalize();
    y.canonicalize();
    if (-Rational(d) * y * y != E.rhs(x))
        throw DomainError("internal", "twist point does not satisfy the twist equation");
    Int d2 = d * d;
    TwistPoint t{Curve(E.a4 * d2, -E.a6 * d2 * d), {}};
    Rational X = -Rational(d) * x, Y = Rational(d2) * y;
    t.point = RationalPoint::affine(X, Y);
    require_on_curve(t.twist, t.point);
    return t;
}

bool twist_point_infinite_order(Curve const & E, Int const & u, Int const & v)
{
    TwistPoint t = twist_point(E, u, v);
    // By Mazur a torsion point has order in {1..10, 12}; torsion_order walks
    // the multiples up to 12, leaving early once a multiple is non-integral.
    return !torsion_order(t.twist, t.point).has_value();
}

std::vector<std::pair<RationalPoint, QuadForm>>
torsion_embedding(Curve const & E, Int const & u, Int const & v, TorsionInfo const & tors)
{
    require_phi_domain(E, u, v);
    if (!is_kernel_suitable(E, u, v, tors))
        throw DomainError("kernel-suitability",
                          "kernel-suitability fails for (u, v) = (" + u.get_str() + ", " +
                                  v.get_str() + "); injectivity on torsion not guaranteed");
    std::vector<std::pair<RationalPoint, QuadForm>> out;
    for (auto const & P : tors.points)
        out.emplace_back(P, phi_form(E, u, v, P, nullptr).reduced_class);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (out[i].second == out[j].second)
                throw DomainError("internal", "torsion embedding is not injective");
    return out;
}

std::vector<std::pair<RationalPoint, QuadForm>> torsion_embedding(Curve const & E, Int const & u,
                                                                  Int const & v)
{
    return torsion_embedding(E, u, v, torsion_subgroup(E));
}

} // namespace ecmap
