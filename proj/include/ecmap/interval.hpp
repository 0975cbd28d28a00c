#ifndef ECMAP_INTERVAL_HPP
#define ECMAP_INTERVAL_HPP

#include <mpfr.h>

#include <string>

#include "ecmap/arith.hpp"

namespace ecmap {

/// Global mantissa size (bits) used by newly created intervals.  The CLI flag
/// `--precision` sets it once at start-up.
void set_default_precision(long bits);
long default_precision();

/// Precision in effect on the calling thread: the innermost PrecisionScope,
/// otherwise the global default.
long working_precision();

/// Raises (never lowers) the working precision for the current thread.
class PrecisionScope
{
    long saved_;

  public:
    explicit PrecisionScope(long bits);
    ~PrecisionScope();
    PrecisionScope(PrecisionScope const &) = delete;
    PrecisionScope & operator=(PrecisionScope const &) = delete;
};

/*
 * Closed interval [lo, hi] of binary floating-point endpoints.  Every
 * operation rounds its lower endpoint toward -inf and its upper endpoint
 * toward +inf, so the exact real result of the operation applied to any
 * members of the operands lies in the result.
 */
class Interval
{
    mpfr_t lo_, hi_;

    struct Uninit
    {
    };
    explicit Interval(Uninit, long prec);
    void raise_precision(long p);

  public:
    Interval();
    Interval(long v);
    explicit Interval(Int const & v);
    explicit Interval(Rational const & v);
    Interval(Interval const & o);
    Interval(Interval && o) noexcept;
    Interval & operator=(Interval const & o);
    Interval & operator=(Interval && o) noexcept;
    ~Interval();

    static Interval from_double(double v);
    /// Decimal literal such as "1.07" or "-0.973", enclosed outward.
    static Interval from_decimal(std::string const & s);
    static Interval hull(Interval const & a, Interval const & b);
    static Interval pi();
    /// Interval spanning two doubles (lo <= hi).
    static Interval between(double lo, double hi);

    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    long precision() const { return mpfr_get_prec(lo_); }

    double lo_double() const;
    double hi_double() const;
    double mid_double() const;
    /// Upper bound on the half-width.
    double radius_upper() const;
    Interval width() const;
    Interval midpoint() const;
    Interval radius() const;

    /// Decimal rendering with `digits` significant digits, rounded outward.
    std::string lo_string(int digits = 40) const;
    std::string hi_string(int digits = 40) const;

    bool contains(double v) const;
    bool contains(Interval const & o) const;
    bool contains_zero() const;
    bool positive() const; // lo > 0
    bool nonnegative() const;
    bool negative() const;

    Interval & operator+=(Interval const & o);
    Interval & operator-=(Interval const & o);
    Interval & operator*=(Interval const & o);
    Interval & operator/=(Interval const & o);

    friend Interval operator+(Interval a, Interval const & b) { return a += b; }
    friend Interval operator-(Interval a, Interval const & b) { return a -= b; }
    friend Interval operator*(Interval a, Interval const & b) { return a *= b; }
    friend Interval operator/(Interval a, Interval const & b) { return a /= b; }
    friend Interval operator-(Interval const & a);

    friend Interval log(Interval const & a);
    friend Interval exp(Interval const & a);
    friend Interval sqrt(Interval const & a);
    friend Interval abs(Interval const & a);
    friend Interval max(Interval const & a, Interval const & b);
    friend Interval min(Interval const & a, Interval const & b);
    friend Interval pow(Interval const & base, Interval const & exponent);
    friend Interval powi(Interval const & base, unsigned long n);
};

/// log of a positive integer (outward rounded).
Interval log_int(Int const & n);

/// Certain comparisons: true only if the relation holds for every member.
bool certainly_less(Interval const & a, Interval const & b);
bool certainly_greater(Interval const & a, Interval const & b);
/// Three-valued a < b.
Tri less(Interval const & a, Interval const & b);

} // namespace ecmap

#endif
