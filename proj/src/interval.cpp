#include "ecmap/interval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace ecmap {

namespace {

std::atomic<long> g_default_precision{128};
thread_local long t_precision = 0;

long clamp_prec(long p)
{
    return std::clamp<long>(p, MPFR_PREC_MIN + 1, 1L << 24);
}

std::string render(mpfr_srcptr x, int digits, mpfr_rnd_t rnd)
{
    if (mpfr_zero_p(x))
        return "0";
    char * buf = nullptr;
    int n = rnd == MPFR_RNDD ? mpfr_asprintf(&buf, "%.*RDe", digits - 1, x)
                             : mpfr_asprintf(&buf, "%.*RUe", digits - 1, x);
    if (n < 0)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

} // namespace

void set_default_precision(long bits)
{
    g_default_precision.store(clamp_prec(bits));
}

long default_precision()
{
    return g_default_precision.load();
}

long working_precision()
{
    return t_precision > 0 ? t_precision : g_default_precision.load();
}

PrecisionScope::PrecisionScope(long bits) : saved_(t_precision)
{
    t_precision = std::max(working_precision(), clamp_prec(bits));
}

PrecisionScope::~PrecisionScope()
{
    t_precision = saved_;
}

Interval::Interval(Uninit, long prec)
{
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
}

Interval::Interval() : Interval(0L) {}

Interval::Interval(long v) : Interval(Uninit{}, working_precision())
{
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(Int const & v) : Interval(Uninit{}, working_precision())
{
    mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(Rational const & v) : Interval(Uninit{}, working_precision())
{
    mpfr_set_q(lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, v.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(Interval const & o) : Interval(Uninit{}, o.precision())
{
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval && o) noexcept : Interval(Uninit{}, MPFR_PREC_MIN)
{
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval & Interval::operator=(Interval const & o)
{
    if (this != &o) {
        mpfr_set_prec(lo_, o.precision());
        mpfr_set_prec(hi_, o.precision());
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval & Interval::operator=(Interval && o) noexcept
{
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Interval::~Interval()
{
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::from_double(double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("Interval::from_double: non-finite value");
    Interval r(Uninit{}, std::max<long>(working_precision(), 53));
    mpfr_set_d(r.lo_, v, MPFR_RNDD);
    mpfr_set_d(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_decimal(std::string const & s)
{
    Interval r(Uninit{}, working_precision());
    if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0 ||
        mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU) != 0)
        throw std::invalid_argument("malformed decimal '" + s + "'");
    return r;
}

Interval Interval::hull(Interval const & a, Interval const & b)
{
    Interval r(Uninit{}, std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::pi()
{
    Interval r(Uninit{}, working_precision());
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::between(double lo, double hi)
{
    if (!(lo <= hi))
        throw std::invalid_argument("Interval::between: lo > hi");
    Interval r(Uninit{}, std::max<long>(working_precision(), 53));
    mpfr_set_d(r.lo_, lo, MPFR_RNDD);
    mpfr_set_d(r.hi_, hi, MPFR_RNDU);
    return r;
}

double Interval::lo_double() const
{
    return mpfr_get_d(lo_, MPFR_RNDD);
}

double Interval::hi_double() const
{
    return mpfr_get_d(hi_, MPFR_RNDU);
}

double Interval::mid_double() const
{
    return midpoint().lo_double();
}

double Interval::radius_upper() const
{
    return radius().hi_double();
}

Interval Interval::width() const
{
    Interval r(Uninit{}, precision());
    mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::midpoint() const
{
    Interval r(Uninit{}, precision() + 1);
    mpfr_add(r.lo_, lo_, hi_, MPFR_RNDD);
    mpfr_div_2ui(r.lo_, r.lo_, 1, MPFR_RNDD);
    mpfr_add(r.hi_, lo_, hi_, MPFR_RNDU);
    mpfr_div_2ui(r.hi_, r.hi_, 1, MPFR_RNDU);
    return r;
}

Interval Interval::radius() const
{
    Interval w = width();
    mpfr_div_2ui(w.lo_, w.lo_, 1, MPFR_RNDD);
    mpfr_div_2ui(w.hi_, w.hi_, 1, MPFR_RNDU);
    return w;
}

std::string Interval::lo_string(int digits) const
{
    return render(lo_, digits, MPFR_RNDD);
}

std::string Interval::hi_string(int digits) const
{
    return render(hi_, digits, MPFR_RNDU);
}

bool Interval::contains(double v) const
{
    return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0;
}

bool Interval::contains(Interval const & o) const
{
    return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_);
}

bool Interval::contains_zero() const
{
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::positive() const
{
    return mpfr_sgn(lo_) > 0;
}

bool Interval::nonnegative() const
{
    return mpfr_sgn(lo_) >= 0;
}

bool Interval::negative() const
{
    return mpfr_sgn(hi_) < 0;
}

void Interval::raise_precision(long p)
{
    if (p <= precision())
        return;
    // widening the mantissa is exact
    mpfr_prec_round(lo_, p, MPFR_RNDD);
    mpfr_prec_round(hi_, p, MPFR_RNDU);
}

Interval & Interval::operator+=(Interval const & o)
{
    raise_precision(o.precision());
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval & Interval::operator-=(Interval const & o)
{
    raise_precision(o.precision());
    // lo - o.hi may alias when o is *this, so compute into fresh storage
    Interval r(Uninit{}, precision());
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return *this = std::move(r);
}

Interval & Interval::operator*=(Interval const & o)
{
    raise_precision(o.precision());
    long p = precision();
    mpfr_t t;
    mpfr_init2(t, p);
    Interval r(Uninit{}, p);
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    mpfr_srcptr xs[2] = {lo_, hi_};
    mpfr_srcptr ys[2] = {o.lo_, o.hi_};
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        }
    }
    mpfr_clear(t);
    return *this = std::move(r);
}

Interval & Interval::operator/=(Interval const & o)
{
    if (o.contains_zero())
        throw DomainError("interval-division", "interval division by an interval containing 0");
    Interval inv(Uninit{}, std::max(precision(), o.precision()));
    mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
    return *this *= inv;
}

Interval operator-(Interval const & a)
{
    Interval r(Interval::Uninit{}, a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

Interval log(Interval const & a)
{
    if (!a.positive())
        throw DomainError("interval-log", "log of an interval not certainly positive");
    Interval r(Interval::Uninit{}, a.precision());
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval exp(Interval const & a)
{
    Interval r(Interval::Uninit{}, a.precision());
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval sqrt(Interval const & a)
{
    if (!a.nonnegative())
        throw DomainError("interval-sqrt", "sqrt of an interval not certainly non-negative");
    Interval r(Interval::Uninit{}, a.precision());
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval abs(Interval const & a)
{
    if (a.nonnegative())
        return a;
    if (a.negative())
        return -a;
    Interval r(Interval::Uninit{}, a.precision());
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, a.precision());
    mpfr_neg(t, a.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, t, a.hi_, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Interval max(Interval const & a, Interval const & b)
{
    Interval r(Interval::Uninit{}, std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval min(Interval const & a, Interval const & b)
{
    Interval r(Interval::Uninit{}, std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval pow(Interval const & base, Interval const & exponent)
{
    return exp(exponent * log(base));
}

Interval powi(Interval const & base, unsigned long n)
{
    Interval result(1L);
    Interval b = base;
    // even powers of a sign-straddling interval are non-negative
    if (n % 2 == 0 && base.contains_zero())
        b = abs(base);
    while (n > 0) {
        if (n & 1)
            result *= b;
        n >>= 1;
        if (n > 0)
            b *= b;
    }
    return result;
}

Interval log_int(Int const & n)
{
    if (n <= 0)
        throw DomainError("log", "log of a non-positive integer");
    return log(Interval(n));
}

bool certainly_less(Interval const & a, Interval const & b)
{
    return mpfr_less_p(a.hi(), b.lo());
}

bool certainly_greater(Interval const & a, Interval const & b)
{
    return mpfr_greater_p(a.lo(), b.hi());
}

Tri less(Interval const & a, Interval const & b)
{
    if (certainly_less(a, b))
        return Tri::True;
    if (mpfr_greaterequal_p(a.lo(), b.hi()))
        return Tri::False;
    return Tri::Unknown;
}

} // namespace ecmap
