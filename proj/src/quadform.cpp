#include "ecmap/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ecmap {

bool QuadForm::primitive() const
{
    return gcd(gcd(a, b), c) == 1;
}

bool QuadForm::is_reduced() const
{
    Int ab = ecmap::abs(b);
    if (!(ab <= a && a <= c))
        return false;
    if ((ab == a || a == c) && b < 0)
        return false;
    return true;
}

std::string QuadForm::str() const
{
    return a.get_str() + "," + b.get_str() + "," + c.get_str();
}

QuadForm QuadForm::parse(std::string_view s)
{
    auto p1 = s.find(',');
    auto p2 = p1 == std::string_view::npos ? p1 : s.find(',', p1 + 1);
    if (p2 == std::string_view::npos || s.find(',', p2 + 1) != std::string_view::npos)
        throw std::invalid_argument("form must be 'a,b,c': " + std::string(s));
    return {parse_int(s.substr(0, p1)), parse_int(s.substr(p1 + 1, p2 - p1 - 1)),
            parse_int(s.substr(p2 + 1))};
}

Mat2 Mat2::operator*(Mat2 const & o) const
{
    return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
}

QuadForm act(QuadForm const & f, Mat2 const & m)
{
    // f(p x + q y, r x + s y)
    Int a = f.a * m.p * m.p + f.b * m.p * m.r + f.c * m.r * m.r;
    Int b = 2 * f.a * m.p * m.q + f.b * (m.p * m.s + m.q * m.r) + 2 * f.c * m.r * m.s;
    Int c = f.a * m.q * m.q + f.b * m.q * m.s + f.c * m.s * m.s;
    return {a, b, c};
}

Reduction reduce(QuadForm const & f)
{
    if (!f.positive_definite())
        throw DomainError("not-positive-definite",
                          "reduce: form (" + f.str() + ") is not positive definite");
    Int a = f.a, b = f.b, c = f.c;
    Mat2 t;
    Int two_a, k;
    for (;;) {
        // normalize: bring b into (-a, a] by x -> x + k y
        if (!(b > -a && b <= a)) {
            two_a = 2 * a;
            k = fdiv(a - b, two_a);
            c = a * k * k + b * k + c;
            b += two_a * k;
            t = t * Mat2{1, k, 0, 1};
        }
        if (a > c) {
            // (x, y) -> (-y, x)
            std::swap(a, c);
            b = -b;
            t = t * Mat2{0, -1, 1, 0};
            continue;
        }
        if (a == c && b < 0) {
            b = -b;
            t = t * Mat2{0, -1, 1, 0};
        }
        break;
    }
    return {{a, b, c}, t};
}

QuadForm principal_form(Int const & disc)
{
    if (disc >= 0)
        throw DomainError("discriminant", "principal_form: discriminant must be negative");
    Int r = fmod(disc, 4);
    if (r == 0)
        return {1, 0, -disc / 4};
    if (r == 1)
        return {1, 1, (1 - disc) / 4};
    throw DomainError("discriminant",
                      "principal_form: " + disc.get_str() + " is not 0 or 1 mod 4");
}

QuadForm compose(QuadForm const & f, QuadForm const & g)
{
    Int disc = f.discriminant();
    if (disc != g.discriminant())
        throw DomainError("discriminant-mismatch",
                          "compose: discriminants " + disc.get_str() + " and " +
                                  g.discriminant().get_str() + " differ");
    if (!f.primitive() || !g.primitive())
        throw DomainError("imprimitive", "compose: inputs must be primitive");
    if (!f.positive_definite() || !g.positive_definite())
        throw DomainError("not-positive-definite", "compose: inputs must be positive definite");

    // d = gcd(a1, a2, beta) = u a1 + v a2 + w beta
    Int beta = (f.b + g.b) / 2;
    Bezout e1 = ext_gcd(f.a, g.a);
    Bezout e2 = ext_gcd(e1.g, beta);
    Int const & d = e2.g;
    Int v = e2.s * e1.t;
    Int const & w = e2.t;

    Int a2d = g.a / d;
    Int a3 = (f.a / d) * a2d;
    Int b3 = g.b + 2 * a2d * (v * (beta - g.b) - w * g.c);
    b3 = fmod(b3, 2 * a3);
    Int num = b3 * b3 - disc;
    Int c3 = num / (4 * a3);
    return reduced({a3, b3, c3});
}

QuadForm inverse(QuadForm const & f)
{
    return reduced({f.a, -f.b, f.c});
}

void require_negative_discriminant(Int const & D)
{
    if (D <= 0)
        throw DomainError("discriminant", "D must be positive (discriminant -D < 0)");
    Int r = fmod(-D, 4);
    if (r != 0 && r != 1)
        throw DomainError("discriminant",
                          "-" + D.get_str() + " is not congruent to 0 or 1 mod 4");
}

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

void require_negative_discriminant64(std::int64_t D)
{
    require_negative_discriminant(Int(static_cast<long>(D)));
}

// Visits reduced primitive (a, b, c) of discriminant -D in (a, b) order.
template <class Visit>
void enumerate_reduced64(std::int64_t D, Visit && visit)
{
    for (std::int64_t a = 1; 3 * a * a <= D; ++a) {
        std::int64_t four_a = 4 * a;
        std::int64_t b0 = -a + 1;
        // b = D (mod 2)
        if (((b0 - D) % 2 + 2) % 2 != 0)
            ++b0;
        for (std::int64_t b = b0; b <= a; b += 2) {
            std::int64_t num = b * b + D;
            if (num % four_a != 0)
                continue;
            std::int64_t c = num / four_a;
            if (c < a || (c == a && b < 0))
                continue;
            if (gcd64(gcd64(a, b), c) != 1)
                continue;
            visit(a, b, c);
        }
    }
}

} // namespace

std::int64_t class_number(std::int64_t D)
{
    require_negative_discriminant64(D);
    if (D > (std::int64_t(1) << 50))
        throw DomainError("too-large", "class_number: D beyond enumeration range");
    std::int64_t h = 0;
    enumerate_reduced64(D, [&](std::int64_t, std::int64_t, std::int64_t) { ++h; });
    return h;
}

std::int64_t class_number(Int const & D)
{
    require_negative_discriminant(D);
    if (!fits_int64(D))
        throw DomainError("too-large", "class_number: D beyond enumeration range");
    return class_number(to_int64(D));
}

std::vector<QuadForm> reduced_forms(Int const & D)
{
    require_negative_discriminant(D);
    if (!fits_int64(D) || to_int64(D) > (std::int64_t(1) << 50))
        throw DomainError("too-large", "reduced_forms: D beyond enumeration range");
    std::vector<QuadForm> out;
    enumerate_reduced64(to_int64(D), [&](std::int64_t a, std::int64_t b, std::int64_t c) {
        out.emplace_back(Int(static_cast<long>(a)), Int(static_cast<long>(b)),
                         Int(static_cast<long>(c)));
    });
    return out;
}

std::int64_t ClassGroupTable::index_of(QuadForm const & f) const
{
    // reduced_forms is sorted by (a, b)
    auto it = std::lower_bound(reduced_forms.begin(), reduced_forms.end(), f,
                               [](QuadForm const & x, QuadForm const & y) {
                                   return x.a < y.a || (x.a == y.a && x.b < y.b);
                               });
    if (it == reduced_forms.end() || !(*it == f))
        return -1;
    return it - reduced_forms.begin();
}

std::vector<std::int64_t> structure_from_orders(std::vector<std::int64_t> const & orders)
{
    auto n = static_cast<std::int64_t>(orders.size());
    // For each p: count_k = #{x : ord(x) | p^k} = p^(sum_i min(e_i, k)), so
    // log_p(count_k / count_{k-1}) = #{i : e_i >= k}.
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> exps;
    std::int64_t rest = n;
    for (std::int64_t p = 2; rest > 1; ++p) {
        if (rest % p != 0)
            continue;
        std::int64_t part = 1;
        while (rest % p == 0) {
            rest /= p;
            part *= p;
        }
        std::vector<std::int64_t> at_least; // at_least[k-1] = #{i : e_i >= k}
        std::int64_t prev = 1;
        for (std::int64_t pk = p; prev < part; pk *= p) {
            std::int64_t c = 0;
            for (auto o : orders)
                if (pk % o == 0)
                    ++c;
            std::int64_t ratio = c / prev, e = 0;
            for (; ratio > 1; ratio /= p)
                ++e;
            at_least.push_back(e);
            prev = c;
        }
        std::vector<std::int64_t> ex; // exponents, descending
        for (std::size_t k = 0; k < at_least.size(); ++k) {
            std::int64_t next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
            for (std::int64_t j = 0; j < at_least[k] - next; ++j)
                ex.push_back(static_cast<std::int64_t>(k) + 1);
        }
        std::sort(ex.rbegin(), ex.rend());
        exps.emplace_back(p, std::move(ex));
    }
    std::size_t m = 0;
    for (auto & [p, ex] : exps)
        m = std::max(m, ex.size());
    std::vector<std::int64_t> d(m, 1);
    // the last factor collects the largest exponent of every prime
    for (auto & [p, ex] : exps)
        for (std::size_t i = 0; i < ex.size(); ++i)
            for (std::int64_t j = 0; j < ex[i]; ++j)
                d[m - 1 - i] *= p;
    return d;
}

ClassGroupTable class_group_structure(Int const & D, std::int64_t table_limit)
{
    ClassGroupTable t;
    t.disc = -D;
    t.reduced_forms = reduced_forms(D);
    auto h = t.h();
    QuadForm const id = principal_form(t.disc);

    if (h <= table_limit) {
        t.composition_index.assign(h, std::vector<std::int32_t>(h, -1));
        for (std::int64_t i = 0; i < h; ++i)
            for (std::int64_t j = i; j < h; ++j) {
                auto k = t.index_of(compose(t.reduced_forms[i], t.reduced_forms[j]));
                t.composition_index[i][j] = t.composition_index[j][i] =
                        static_cast<std::int32_t>(k);
            }
    }

    auto id_index = t.index_of(id);
    t.orders.resize(h);
    for (std::int64_t i = 0; i < h; ++i) {
        std::int64_t ord = 1;
        if (!t.composition_index.empty()) {
            std::int64_t cur = i;
            while (cur != id_index) {
                cur = t.composition_index[cur][i];
                ++ord;
            }
        } else {
            QuadForm cur = t.reduced_forms[i];
            while (!(cur == id)) {
                cur = compose(cur, t.reduced_forms[i]);
                ++ord;
            }
        }
        t.orders[i] = ord;
    }
    t.structure = structure_from_orders(t.orders);
    return t;
}

Tri fundamental_discriminant(Int const & disc)
{
    if (disc >= 0)
        return Tri::False;
    Int r = fmod(disc, 4);
    if (r == 1)
        return squarefree_status(disc);
    if (r != 0)
        return Tri::False;
    Int m = disc / 4;
    Int rm = fmod(m, 4);
    if (rm != 2 && rm != 3)
        return Tri::False;
    return squarefree_status(m);
}

bool is_fundamental_discriminant(Int const & disc)
{
    Tri t = fundamental_discriminant(disc);
    if (t == Tri::Unknown)
        throw DomainError("squarefree-unknown",
                          "cannot decide square-freeness of " + disc.get_str() +
                                  " within the trial-division budget");
    return t == Tri::True;
}

int kronecker_symbol(Int const & a_in, Int const & n_in)
{
    Int a = a_in, n = n_in;
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    int k = 1;
    if (n < 0) {
        n = -n;
        if (a < 0)
            k = -k;
    }
    // factor out 2 from n: (a|2) = 0 for even a, else +1 / -1 for a = +-1 / +-3 mod 8
    unsigned long v2 = mpz_scan1(n.get_mpz_t(), 0);
    if (v2 > 0) {
        if (mpz_even_p(a.get_mpz_t()))
            return 0;
        mpz_tdiv_q_2exp(n.get_mpz_t(), n.get_mpz_t(), v2);
        Int a8 = fmod(a, 8);
        if ((v2 & 1) && (a8 == 3 || a8 == 5))
            k = -k;
    }
    // Jacobi symbol (a | n), n odd positive
    a = fmod(a, n);
    while (a != 0) {
        unsigned long t = mpz_scan1(a.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), t);
        Int n8 = fmod(n, 8);
        if ((t & 1) && (n8 == 3 || n8 == 5))
            k = -k;
        if (fmod(a, 4) == 3 && fmod(n, 4) == 3)
            k = -k;
        std::swap(a, n);
        a = fmod(a, n);
    }
    return n == 1 ? k : 0;
}

int kronecker_symbol(std::int64_t a, std::int64_t n)
{
    return kronecker_symbol(Int(static_cast<long>(a)), Int(static_cast<long>(n)));
}

std::array<Int, 8> BhargavaCube::labeled() const
{
    return {phi[2], psi[0], phi[1], theta, psi[1], rho, psi[2], phi[0]};
}

BhargavaCube BhargavaCube::from_labeled(std::array<Int, 8> const & e)
{
    BhargavaCube c;
    c.phi[2] = e[0];
    c.psi[0] = e[1];
    c.phi[1] = e[2];
    c.theta = e[3];
    c.psi[1] = e[4];
    c.rho = e[5];
    c.psi[2] = e[6];
    c.phi[0] = e[7];
    return c;
}

std::array<QuadForm, 3> cube_associated_forms(BhargavaCube const & q)
{
    // Q_i = (psi_j psi_k - rho phi_i,
    //        rho theta + psi_i phi_i - psi_j phi_j - psi_k phi_k,
    //        phi_j phi_k - psi_i theta)
    std::array<QuadForm, 3> out;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        out[i] = {q.psi[j] * q.psi[k] - q.rho * q.phi[i],
                  q.rho * q.theta + q.psi[i] * q.phi[i] - q.psi[j] * q.phi[j] -
                          q.psi[k] * q.phi[k],
                  q.phi[j] * q.phi[k] - q.psi[i] * q.theta};
        if (out[i].a == 0 || !out[i].positive_definite())
            throw DomainError("non-definite slice",
                              "cube slice " + std::to_string(i + 1) + " gives (" +
                                      out[i].str() + "), not positive definite");
    }
    return out;
}

} // namespace ecmap
