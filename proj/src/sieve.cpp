#include "ecmap/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>

#include <omp.h>

namespace ecmap {

Tri is_squarefree(Int const & n)
{
    return squarefree_status(n);
}

Int shifted_form(Curve const & E, Int const & n, Int const & x, Int const & y)
{
    return d_family(E, x + n * y, y);
}

std::array<Int, 4> shifted_cubic(Curve const & E, Int const & n)
{
    // (x + n y)^3 + a4 (x + n y) y^2 - a6 y^3
    return {Int(1), Int(3 * n), Int(3 * n * n + E.a4), Int(n * n * n + E.a4 * n - E.a6)};
}

bool shifted_coefficients_positive(Curve const & E, Int const & n)
{
    for (Int const & c : shifted_cubic(E, n))
        if (c <= 0)
            return false;
    return true;
}

CongruenceCheck check_congruence(Curve const & E, Int const & n, std::int64_t M, std::int64_t a0,
                                 std::int64_t b0)
{
    CongruenceCheck r;
    if (M < 1) {
        r.failure = "modulus must be positive";
        return r;
    }
    Int Mi(static_cast<long>(M));
    Int value = shifted_form(E, n, Int(static_cast<long>(a0)), Int(static_cast<long>(b0)));

    bool pow2 = M >= 4 && (M & (M - 1)) == 0;
    bool odd = (a0 & 1) != 0 && (b0 & 1) != 0;
    r.power_of_two = pow2 && odd && fmod(value, Int(4)) != 0;

    auto unit = [&](Int const & k) { return gcd(fmod(k, Mi), Mi) == 1; };
    r.unit = unit(Int(static_cast<long>(a0))) && unit(Int(static_cast<long>(b0))) && unit(value);

    if (!r.ok()) {
        std::string why;
        if (!pow2)
            why = "M is not 2^k with k >= 2";
        else if (!odd)
            why = "a0 and b0 must both be odd";
        else
            why = "G_n(a0, b0) = " + value.get_str() + " is 0 mod 4";
        r.failure = "condition (1) fails: " + why + "; condition (2) fails: a0, b0, G_n(a0, b0) "
                    "are not all units mod " + std::to_string(M);
    }
    return r;
}

std::optional<Int> congruence_shift(Curve const & E, std::int64_t a0, std::int64_t b0,
                                    Int const & n_min, unsigned window)
{
    Int a(static_cast<long>(a0)), b(static_cast<long>(b0));
    Int n = n_min < 1 ? Int(1) : n_min;
    for (unsigned i = 0; i < window; ++i, ++n) {
        if (!shifted_coefficients_positive(E, n))
            continue;
        Int r = fmod(shifted_form(E, n, a, b), Int(4));
        if (r == 1 || r == 2)
            return n;
    }
    return std::nullopt;
}

double box_lambda(Curve const & E, Int const & n)
{
    Int S = 0;
    for (Int const & c : shifted_cubic(E, n))
        S += abs(c);
    return std::pow(4.0 * mpz_get_d(S.get_mpz_t()), -0.25);
}

std::optional<Int> divisor_count(Int const & n)
{
    if (n == 0)
        return std::nullopt;
    auto f = factor_trial(abs(n));
    if (!f)
        return std::nullopt;
    Int tau = 1;
    for (auto const & pe : *f)
        tau *= pe.second + 1;
    return tau;
}

int twist_sign(Int const & d, Int const & N, int eps)
{
    if (d <= 0 || N <= 0)
        throw DomainError("character-undefined", "twist_sign needs d > 0 and N > 0");
    if (eps != 1 && eps != -1)
        throw DomainError("character-undefined", "sign must be +1 or -1");
    if (gcd(d, 4 * N) != 1)
        throw DomainError("character-undefined",
                          "character not defined on this input: gcd(d, 4N) = " +
                                  Int(gcd(d, 4 * N)).get_str());
    return kronecker_symbol(Int(-d), Int(-N)) * eps;
}

namespace {

int resolve_threads(int threads)
{
    return threads > 0 ? threads : omp_get_max_threads();
}

void require_eps(double eps, double alpha)
{
    if (!(eps > 0 && eps < 0.5))
        throw DomainError("epsilon", "epsilon must lie in (0, 1/2)");
    if (!(alpha >= 0 && eps + alpha < 0.5))
        throw DomainError("epsilon", "alpha must satisfy 0 <= alpha < 1/2 - epsilon");
}

// ---- square-free box count -------------------------------------------------

void validate_box(Curve const & E, Int const & n, std::int64_t Y, std::int64_t M, std::int64_t a0,
                  std::int64_t b0)
{
    if (Y < 1)
        throw DomainError("box", "Y must be positive");
    auto c = check_congruence(E, n, M, a0, b0);
    if (!c.ok())
        throw DomainError("congruence-condition", c.failure);
}

// first a in (0, Y] with a = r (mod M)
std::int64_t first_residue(std::int64_t r, std::int64_t M)
{
    std::int64_t s = ((r % M) + M) % M;
    return s == 0 ? M : s;
}

struct RowCount
{
    std::int64_t count = 0, unknown = 0;
};

RowCount count_row(Curve const & E, Int const & n, std::int64_t b, std::int64_t Y, std::int64_t M,
                   std::int64_t a0)
{
    RowCount r;
    Int bi(static_cast<long>(b));
    for (std::int64_t a = first_residue(a0, M); a <= Y; a += M) {
        Tri t = squarefree_status(shifted_form(E, n, Int(static_cast<long>(a)), bi));
        if (t == Tri::True)
            ++r.count;
        else if (t == Tri::Unknown)
            ++r.unknown;
    }
    return r;
}

BoxCount finish(std::int64_t count, std::int64_t unknown, std::int64_t Y)
{
    BoxCount out;
    out.count = count;
    out.unknown = unknown;
    out.density = static_cast<double>(count) / (static_cast<double>(Y) * static_cast<double>(Y));
    return out;
}

// ---- bound window with a double fast path ----------------------------------

// Both halves of bound suitability at one epsilon.  Decides in double when
// the margin clearly exceeds rounding, otherwise in interval arithmetic.
class BoundWindow
{
public:
    BoundWindow(Curve const & E, Interval const & diam, double eps)
        : eps_(eps)
    {
        Interval e = Interval::from_double(eps);
        Interval one(1L);
        power_ = one + e / (one - e);
        shift_ = Interval(2L) * (delta_E(E) + diam) - log_int(Int(4));
        power_d_ = power_.mid_double();
        shift_d_ = shift_.mid_double();
        slack_ = 2.0 * (power_.radius_upper() * (1.0 + std::fabs(shift_d_)) +
                        power_d_ * shift_.radius_upper());
    }

    BoundSuitability operator()(Int const & d, Int const & v, Int const & w) const
    {
        BoundSuitability r;
        double ld = log_of(d), lv = log_of(v), lw = log_of(w);
        double lower_side = power_d_ * (lw + shift_d_);
        double upper_side = power_d_ * (2.0 * lv + lw);
        auto margin = [&](double a, double b) {
            return 1e-9 * (1.0 + std::fabs(a) + std::fabs(b)) + slack_ * (1.0 + std::fabs(lw));
        };
        bool lower_sure = std::fabs(ld - lower_side) > margin(ld, lower_side);
        bool upper_sure = std::fabs(upper_side - ld) > margin(ld, upper_side);
        if (lower_sure)
            r.lower = tri(lower_side < ld);
        if (upper_sure)
            r.upper = tri(ld < upper_side);
        if (!lower_sure || !upper_sure) {
            Interval log_d = log_int(d), log_w = log_int(w);
            if (!lower_sure)
                r.lower = less(power_ * (log_w + shift_), log_d);
            if (!upper_sure)
                r.upper = less(log_d, power_ * (Interval(2L) * log_int(v) + log_w));
        }
        return r;
    }

    double eps() const { return eps_; }

private:
    static double log_of(Int const & k)
    {
        long e = 0;
        double m = mpz_get_d_2exp(&e, k.get_mpz_t());
        return std::log(m) + static_cast<double>(e) * std::log(2.0);
    }

    double eps_;
    Interval power_, shift_;
    double power_d_, shift_d_, slack_;
};

// ---- census ----------------------------------------------------------------

struct CensusContext
{
    Curve const & E;
    Int n;
    TorsionInfo tors;
    BoundWindow at_eps, at_eps_alpha;
};

Census census_row(CensusContext const & ctx, std::int64_t y, std::int64_t Y)
{
    Census c;
    Int v(static_cast<long>(y));
    for (std::int64_t x = 1; x < Y; ++x) {
        Int u = Int(static_cast<long>(x)) + ctx.n * v;
        ++c.pairs;
        bool map_ok = is_map_suitable(ctx.E, u, v);
        bool kernel_ok = map_ok && is_kernel_suitable(ctx.E, u, v, ctx.tors);
        bool lower_ok = false, upper_ok = false;
        if (map_ok) {
            Int d = d_family(ctx.E, u, v), w = u * v + v * v;
            auto s1 = ctx.at_eps(d, v, w), s2 = ctx.at_eps_alpha(d, v, w);
            lower_ok = s1.lower == Tri::True && s2.lower == Tri::True;
            upper_ok = s1.upper == Tri::True && s2.upper == Tri::True;
        }
        c.map_fail += !map_ok;
        c.kernel_fail += !kernel_ok;
        c.lower_fail += !lower_ok;
        c.upper_fail += !upper_ok;
        c.any_fail += !(map_ok && kernel_ok && lower_ok && upper_ok);
    }
    return c;
}

void add(Census & a, Census const & b)
{
    a.pairs += b.pairs;
    a.map_fail += b.map_fail;
    a.kernel_fail += b.kernel_fail;
    a.lower_fail += b.lower_fail;
    a.upper_fail += b.upper_fail;
    a.any_fail += b.any_fail;
}

CensusContext make_census(Curve const & E, PointSetSummary const & pts, Int const & n,
                          double eps, double alpha)
{
    require_eps(eps, alpha);
    return CensusContext{E, n, torsion_subgroup(E), BoundWindow(E, pts.diameter, eps),
                         BoundWindow(E, pts.diameter, eps + alpha)};
}

// ---- search ----------------------------------------------------------------

struct SearchContext
{
    SearchConfig const & cfg;
    TorsionInfo tors;
    PointSetSummary pts;
    std::int64_t G_order;
    BoundWindow at_eps, at_eps_alpha;
};

SearchContext make_search(SearchConfig const & cfg)
{
    cfg.validate();
    TorsionInfo tors = torsion_subgroup(cfg.curve);
    PointSetSummary pts = summarize_points(cfg.curve, cfg.points, cfg.height_tol);
    std::int64_t G = cfg.G_order > 0 ? cfg.G_order : static_cast<std::int64_t>(tors.order());
    return SearchContext{cfg,
                         std::move(tors),
                         pts,
                         G,
                         BoundWindow(cfg.curve, pts.diameter, cfg.epsilon),
                         BoundWindow(cfg.curve, pts.diameter, cfg.epsilon + cfg.alpha)};
}

bool in_residue(std::int64_t k, std::int64_t r, std::int64_t M)
{
    return M <= 1 || ((k - r) % M + M) % M == 0;
}

void search_row(SearchContext const & ctx, std::int64_t y, std::vector<PsiRecord> & out)
{
    SearchConfig const & cfg = ctx.cfg;
    Curve const & E = cfg.curve;
    if (!in_residue(y, cfg.b0, cfg.M))
        return;
    Int v(static_cast<long>(y));
    for (std::int64_t x = 1; x < cfg.Y; ++x) {
        if (!in_residue(x, cfg.a0, cfg.M))
            continue;
        Int u = Int(static_cast<long>(x)) + cfg.n * v;
        if (!is_map_suitable(E, u, v))
            continue;
        Int d = d_family(E, u, v);
        Int r4 = fmod(d, Int(4));
        if (r4 != 1 && r4 != 2)
            continue;
        if (squarefree_status(d) != Tri::True)
            continue;
        if (!is_kernel_suitable(E, u, v, ctx.tors))
            continue;

        PsiRecord rec;
        rec.u = u;
        rec.v = v;
        rec.D = 4 * d;
        rec.map_suitable = true;
        rec.kernel_suitable = true;
        Int w = u * v + v * v;
        rec.eps_bound = ctx.at_eps(d, v, w).both();
        rec.eps_alpha_bound = ctx.at_eps_alpha(d, v, w).both();
        if (cfg.require_bound && (rec.eps_bound != Tri::True || rec.eps_alpha_bound != Tri::True))
            continue;

        if (cfg.conductor) {
            Int const & N = *cfg.conductor;
            if (gcd(d, 4 * N) == 1)
                rec.twist_sign = twist_sign(d, N, cfg.sign_epsilon.value_or(1));
            if (cfg.parity_filter && rec.twist_sign != 1)
                continue;
        }

        rec.twist_infinite = twist_point_infinite_order(E, u, v);
        if (cfg.require_twist && !rec.twist_infinite)
            continue;

        // Injective torsion embedding; also exercises every raw form's integrality.
        auto emb = torsion_embedding(E, u, v, ctx.tors);
        std::vector<QuadForm> classes;
        for (auto const & pf : emb)
            classes.push_back(pf.second);
        std::sort(classes.begin(), classes.end(), [](QuadForm const & a, QuadForm const & b) {
            return std::tie(a.a, a.b, a.c) < std::tie(b.a, b.b, b.c);
        });
        rec.torsion_embeds =
                std::adjacent_find(classes.begin(), classes.end(), [](auto const & a, auto const & b) {
                    return a.a == b.a && a.b == b.b && a.c == b.c;
                }) == classes.end();
        if (cfg.require_embedding && !rec.torsion_embeds)
            continue;

        out.push_back(std::move(rec));
    }
}

// Sort, deduplicate by D, then attach the expensive per-D data.
SearchResult finish_search(SearchContext const & ctx, std::vector<PsiRecord> hits)
{
    SearchConfig const & cfg = ctx.cfg;
    SearchResult res;
    res.raw_hits = hits.size();
    res.lambda = box_lambda(cfg.curve, cfg.n);
    res.G_order = ctx.G_order;
    if (cfg.conductor) {
        Int m = 4 * *cfg.conductor;
        res.conductor_divides_coefficients = fmod(cfg.curve.a4, m) == 0 && fmod(cfg.curve.a6, m) == 0;
    }
    std::sort(hits.begin(), hits.end(), [](PsiRecord const & a, PsiRecord const & b) {
        return std::tie(a.D, a.u, a.v) < std::tie(b.D, b.u, b.v);
    });
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        while (j < hits.size() && hits[j].D == hits[i].D)
            ++j;
        PsiRecord rec = std::move(hits[i]);
        rec.fiber = j - i;
        if (auto tau = divisor_count(rec.D); tau && Int(static_cast<long>(rec.fiber)) > 3 * *tau)
            res.fibers_within_bound = false;
        res.records.push_back(std::move(rec));
        i = j;
    }
    return res;
}

void attach_reports(SearchContext const & ctx, PsiRecord & rec)
{
    SearchConfig const & cfg = ctx.cfg;
    rec.bound_report = class_number_lower_bound(cfg.curve, ctx.pts, ctx.G_order, rec.u, rec.v,
                                                cfg.epsilon, cfg.alpha, rec.D <= cfg.h_limit);
    if (rec.D <= cfg.h_limit)
        rec.h = class_number(rec.D);
}

} // namespace

void SearchConfig::validate() const
{
    auto fail = [](std::string const & what) { throw DomainError("search-config", what); };
    if (!(epsilon > 0 && epsilon < 0.5))
        fail("epsilon must lie in (0, 1/2)");
    if (!(alpha >= 0 && alpha < 0.5 - epsilon))
        fail("alpha must satisfy 0 <= alpha < 1/2 - epsilon");
    if (Y < 1)
        fail("Y must be positive");
    if (n < 0)
        fail("n must be non-negative");
    if (M < 1)
        fail("M must be positive");
    if (G_order < 0)
        fail("G_order must be non-negative");
    if (conductor && *conductor <= 0)
        fail("conductor must be positive");
    if (sign_epsilon && *sign_epsilon != 1 && *sign_epsilon != -1)
        fail("sign_epsilon must be +1 or -1");
    if (parity_filter) {
        if (!conductor || !sign_epsilon)
            fail("parity filter needs conductor and sign_epsilon");
        if (is_perfect_square(*conductor))
            fail("parity filter needs a conductor that is not a perfect square");
    }
}

BoxCount count_squarefree_box(Curve const & E, Int const & n, std::int64_t Y, std::int64_t M,
                              std::int64_t a0, std::int64_t b0, int threads)
{
    validate_box(E, n, Y, M, a0, b0);
    std::int64_t first = first_residue(b0, M);
    std::int64_t rows = first <= Y ? (Y - first) / M + 1 : 0;
    std::int64_t count = 0, unknown = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : count, unknown) \
        num_threads(resolve_threads(threads))
    for (std::int64_t i = 0; i < rows; ++i) {
        RowCount r = count_row(E, n, first + i * M, Y, M, a0);
        count += r.count;
        unknown += r.unknown;
    }
    return finish(count, unknown, Y);
}

Census suitability_census(Curve const & E, PointSetSummary const & pts, Int const & n,
                          std::int64_t Y, double eps, double alpha, int threads)
{
    CensusContext ctx = make_census(E, pts, n, eps, alpha);
    std::int64_t rows = std::max<std::int64_t>(Y - 1, 0);
    std::vector<Census> per_row(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
    for (std::int64_t i = 0; i < rows; ++i)
        per_row[static_cast<std::size_t>(i)] = census_row(ctx, i + 1, Y);
    Census total;
    for (auto const & c : per_row)
        add(total, c);
    return total;
}

SearchResult search_psi(SearchConfig const & cfg)
{
    SearchContext ctx = make_search(cfg);
    std::int64_t rows = std::max<std::int64_t>(cfg.Y - 1, 0);
    std::vector<std::vector<PsiRecord>> per_row(static_cast<std::size_t>(rows));
    std::exception_ptr error;
    std::mutex error_lock;
    int nt = resolve_threads(cfg.threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::int64_t i = 0; i < rows; ++i) {
        try {
            search_row(ctx, i + 1, per_row[static_cast<std::size_t>(i)]);
        } catch (...) {
            std::lock_guard<std::mutex> g(error_lock);
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    std::vector<PsiRecord> hits;
    for (auto & row : per_row)
        for (auto & r : row)
            hits.push_back(std::move(r));
    SearchResult res = finish_search(ctx, std::move(hits));
    auto & recs = res.records;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::size_t i = 0; i < recs.size(); ++i) {
        try {
            attach_reports(ctx, recs[i]);
        } catch (...) {
            std::lock_guard<std::mutex> g(error_lock);
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    return res;
}

namespace serial {

BoxCount count_squarefree_box(Curve const & E, Int const & n, std::int64_t Y, std::int64_t M,
                              std::int64_t a0, std::int64_t b0)
{
    validate_box(E, n, Y, M, a0, b0);
    std::int64_t count = 0, unknown = 0;
    for (std::int64_t b = first_residue(b0, M); b <= Y; b += M) {
        RowCount r = count_row(E, n, b, Y, M, a0);
        count += r.count;
        unknown += r.unknown;
    }
    return finish(count, unknown, Y);
}

Census suitability_census(Curve const & E, PointSetSummary const & pts, Int const & n,
                          std::int64_t Y, double eps, double alpha)
{
    CensusContext ctx = make_census(E, pts, n, eps, alpha);
    Census total;
    for (std::int64_t y = 1; y < Y; ++y)
        add(total, census_row(ctx, y, Y));
    return total;
}

SearchResult search_psi(SearchConfig const & cfg)
{
    SearchContext ctx = make_search(cfg);
    std::vector<PsiRecord> hits;
    for (std::int64_t y = 1; y < cfg.Y; ++y)
        search_row(ctx, y, hits);
    SearchResult res = finish_search(ctx, std::move(hits));
    for (auto & rec : res.records)
        attach_reports(ctx, rec);
    return res;
}

} // namespace serial

} // namespace ecmap
