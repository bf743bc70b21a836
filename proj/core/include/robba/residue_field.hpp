#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace robba {

namespace fp {

/// Dense polynomial over F_p, little-endian coefficients, p < 2^31.
using Poly = std::vector<uint64_t>;

Poly trim(Poly f);
bool is_zero(const Poly& f);
int degree(const Poly& f);  // -1 for the zero polynomial

Poly add(const Poly& a, const Poly& b, uint64_t p);
Poly sub(const Poly& a, const Poly& b, uint64_t p);
Poly mul(const Poly& a, const Poly& b, uint64_t p);
Poly rem(Poly a, const Poly& f, uint64_t p);
Poly gcd(Poly a, Poly b, uint64_t p);
Poly powmod(const Poly& base, const mpz_class& e, const Poly& f, uint64_t p);

uint64_t inv_mod_p(uint64_t a, uint64_t p);

/// Inverse of a modulo (f, p); throws std::domain_error if gcd(a, f) != 1.
Poly invmod(const Poly& a, const Poly& f, uint64_t p);

bool is_irreducible(const Poly& f, uint64_t p);

/// First monic irreducible of degree m over F_p in lexicographic order
/// of (c_0, ..., c_{m-1}). Deterministic, so ring construction is too.
Poly first_irreducible(uint64_t p, int m);

/// Any solution of A x = b over F_p (A row-major, rows of equal length).
std::optional<std::vector<uint64_t>> solve(std::vector<std::vector<uint64_t>> a,
                                           std::vector<uint64_t> b, uint64_t p);

/// Basis of the kernel of A over F_p, in a deterministic order.
std::vector<std::vector<uint64_t>> kernel(std::vector<std::vector<uint64_t>> a, uint64_t p);

}  // namespace fp

/**
 * The finite field F_{p^m} presented as F_p[x]/(modulus).
 *
 * Elements are reduced polynomials (fp::Poly of degree < m). Everything
 * here is deterministic: fixed modulus, fixed enumeration orders.
 */
class ResidueField {
   public:
    using Elem = fp::Poly;

    ResidueField(uint64_t p, int deg, fp::Poly modulus);
    static ResidueField with_default_modulus(uint64_t p, int deg);

    uint64_t p() const { return p_; }
    int deg() const { return deg_; }
    const fp::Poly& modulus() const { return modulus_; }
    mpz_class size() const;  // p^deg

    Elem zero() const { return {}; }
    Elem one() const { return {1}; }
    Elem gen() const;  // the class of x
    Elem from_uint(uint64_t v) const { return fp::trim({v % p_}); }

    bool is_zero(const Elem& a) const { return fp::is_zero(a); }
    bool eq(const Elem& a, const Elem& b) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem pow(const Elem& a, const mpz_class& e) const;

    /// x -> x^(p^k), the k-fold p-power Frobenius.
    Elem frobenius(const Elem& a, int k = 1) const;

    /// F_p-coordinates with respect to the power basis, length deg().
    std::vector<uint64_t> coords(const Elem& a) const;
    Elem from_coords(const std::vector<uint64_t>& c) const;

    /// Element number j in the deterministic enumeration (base-p digits).
    Elem nth_elem(const mpz_class& j) const;

   private:
    uint64_t p_;
    int deg_;
    fp::Poly modulus_;
};

/**
 * A root in F of a polynomial with F_p coefficients, if one exists.
 * Deterministic splitting (fixed probe sequence), used to embed residue
 * fields into extensions.
 */
std::optional<ResidueField::Elem> root_in_field(const ResidueField& F, const fp::Poly& g);

}  // namespace robba
