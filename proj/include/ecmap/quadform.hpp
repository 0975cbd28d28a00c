#ifndef ECMAP_QUADFORM_HPP
#define ECMAP_QUADFORM_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ecmap/arith.hpp"

namespace ecmap {

/*
 * Integral binary quadratic form a x^2 + b xy + c y^2.  Forms handed to the
 * class-group operations are positive definite: b^2 - 4ac < 0 and a > 0.
 * Equality is coefficient-wise; compare classes by comparing reduce() output.
 */
struct QuadForm
{
    Int a, b, c;

    QuadForm() = default;
    QuadForm(Int a_, Int b_, Int c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}

    Int discriminant() const { return b * b - 4 * a * c; }
    bool positive_definite() const { return a > 0 && discriminant() < 0; }
    bool primitive() const;
    /// |b| <= a <= c, and b >= 0 whenever |b| = a or a = c.
    bool is_reduced() const;

    /// Serialized as "a,b,c".
    std::string str() const;
    static QuadForm parse(std::string_view s);

    bool operator==(QuadForm const &) const = default;
};

/// Substitution (x, y) -> (p x + q y, r x + s y).
struct Mat2
{
    Int p{1}, q{0}, r{0}, s{1};
    Int det() const { return p * s - q * r; }
    Mat2 operator*(Mat2 const & o) const;
    bool operator==(Mat2 const &) const = default;
};

/// f((x, y) M) with the substitution convention above.
QuadForm act(QuadForm const & f, Mat2 const & m);

struct Reduction
{
    QuadForm form;
    Mat2 transform; // act(input, transform) == form, det = 1
};

/// Gauss reduction of a positive definite form.
Reduction reduce(QuadForm const & f);
inline QuadForm reduced(QuadForm const & f) { return reduce(f).form; }

/// (1, 0, -disc/4) or (1, 1, (1 - disc)/4) for disc < 0, disc = 0,1 mod 4.
QuadForm principal_form(Int const & disc);

/// Dirichlet composition of two primitive forms of one discriminant; the
/// result is reduced.
QuadForm compose(QuadForm const & f, QuadForm const & g);
/// Inverse class (a, -b, c), reduced.
QuadForm inverse(QuadForm const & f);

/// Check that -D is a discriminant (D > 0, -D = 0 or 1 mod 4).
void require_negative_discriminant(Int const & D);

/// Reduced primitive forms of discriminant -D in enumeration order
/// (a ascending, then b ascending).
std::vector<QuadForm> reduced_forms(Int const & D);

/// h(-D): number of primitive reduced forms of discriminant -D.
std::int64_t class_number(std::int64_t D);
std::int64_t class_number(Int const & D);

struct ClassGroupTable
{
    Int disc; // negative
    std::vector<QuadForm> reduced_forms;
    std::vector<std::int64_t> structure; // d1 | d2 | ..., empty for the trivial group
    std::vector<std::int64_t> orders;    // order of each form
    /// composition_index[i][j] = index of forms[i] * forms[j]; filled only when
    /// h <= table_limit passed to class_group_structure.
    std::vector<std::vector<std::int32_t>> composition_index;

    std::int64_t h() const { return static_cast<std::int64_t>(reduced_forms.size()); }
    std::int64_t index_of(QuadForm const & reduced_form) const;
};

ClassGroupTable class_group_structure(Int const & D, std::int64_t table_limit = 512);

/// Elementary divisors d1 | d2 | ... of a finite abelian group given the
/// multiset of its element orders.
std::vector<std::int64_t> structure_from_orders(std::vector<std::int64_t> const & orders);

/// Fundamental discriminant test; Unknown when square-freeness of the odd
/// part cannot be settled within the trial-division budget.
Tri fundamental_discriminant(Int const & disc);
/// Total for inputs within the budget; throws DomainError otherwise.
bool is_fundamental_discriminant(Int const & disc);

/// Kronecker symbol (a | n), extended to all integers n.
int kronecker_symbol(Int const & a, Int const & n);
int kronecker_symbol(std::int64_t a, std::int64_t n);

/*
 * 2x2x2 integer cube.  Corner c[s1][s2][s3] with bits relative to the
 * rho-corner:
 *
 *     rho = c000   psi1 = c100   psi2 = c010   psi3 = c001
 *     theta = c111 phi1 = c011   phi2 = c101   phi3 = c110
 *
 * i.e. psi_i differs from rho in direction i, phi_i differs from theta in
 * direction i.  Slicing along direction i gives M_i (s_i = 0) and N_i
 * (s_i = 1) and Q_i(x, y) = -det(M_i x - N_i y).
 */
struct BhargavaCube
{
    Int rho, theta;
    std::array<Int, 3> psi, phi;

    /// Entries in the order (phi3, psi1, phi2, theta; psi2, rho, psi3, phi1).
    std::array<Int, 8> labeled() const;
    static BhargavaCube from_labeled(std::array<Int, 8> const & e);

    bool operator==(BhargavaCube const &) const = default;
};

/// The three forms Q_1, Q_2, Q_3 of the cube (not reduced).  Throws
/// DomainError("non-definite slice") when a slice is not positive definite.
std::array<QuadForm, 3> cube_associated_forms(BhargavaCube const & cube);

} // namespace ecmap

#endif
