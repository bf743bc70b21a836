#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "robba/residue_field.hpp"

namespace robba {

class CoeffElem;

/**
 * The coefficient ring O = W(F_{p^m}) at working precision p^N, together
 * with the lifted p-power Frobenius. Elements of the fraction field K
 * carry an explicit power of p, so O and K share one representation.
 *
 * The modulus is a monic degree-m lift of an irreducible polynomial over
 * F_p; the Frobenius image of the generator is Hensel-lifted once at
 * construction. pi = p throughout (unramified coefficients only).
 */
class CoeffRing : public std::enable_shared_from_this<CoeffRing> {
   public:
    /// With an explicit monic modulus (integer coefficients, degree m).
    CoeffRing(uint64_t p, int a, int m, int N, std::vector<mpz_class> modulus);
    /// With the deterministic default modulus of degree m.
    CoeffRing(uint64_t p, int a, int m, int N);

    static std::shared_ptr<const CoeffRing> make(uint64_t p, int a, int m, int N);
    static std::shared_ptr<const CoeffRing> make(uint64_t p, int a, int m, int N,
                                                 std::vector<mpz_class> modulus);

    uint64_t p() const { return p_; }
    int a() const { return a_; }
    int m() const { return m_; }
    int precision() const { return N_; }
    long q() const { return q_; }  // p^a, guaranteed to fit a long
    const mpz_class& p_to_N() const { return pN_; }
    const std::vector<mpz_class>& modulus() const { return modulus_; }
    const std::vector<mpz_class>& frobenius_image() const { return frob_images_[1 % m_]; }
    const ResidueField& residue_field() const { return residue_; }

    bool same_ring(const CoeffRing& other) const;

    // -- element constructors ------------------------------------------
    CoeffElem zero() const;
    CoeffElem one() const;
    CoeffElem from_int(long n) const;
    CoeffElem from_mpz(const mpz_class& n) const;
    /// p^val * unit(g), unit given by integer coefficients.
    CoeffElem from_val_unit(long val, std::vector<mpz_class> unit) const;
    /// Naive (digitwise) lift of a residue-field element, valuation 0.
    CoeffElem lift_residue(const ResidueField::Elem& e) const;
    /// The generator g of O over Z_p.
    CoeffElem generator() const;

    // -- internal arithmetic on unit polynomials mod (modulus, p^N) ----
    std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& x,
                                    const std::vector<mpz_class>& y) const;
    std::vector<mpz_class> poly_add(const std::vector<mpz_class>& x,
                                    const std::vector<mpz_class>& y) const;
    std::vector<mpz_class> poly_inv(const std::vector<mpz_class>& x) const;
    std::vector<mpz_class> poly_eval(const std::vector<mpz_class>& f,
                                     const std::vector<mpz_class>& at) const;
    std::vector<mpz_class> reduce_mod_pN(std::vector<mpz_class> f) const;
    /// Image of the generator under sigma_0^k, k reduced mod m.
    const std::vector<mpz_class>& frob_power_image(int k) const;

    ResidueField::Elem residue_of(const CoeffElem& x) const;

   private:
    void init();

    uint64_t p_;
    int a_, m_, N_;
    long q_;
    mpz_class pN_;
    std::vector<mpz_class> modulus_;
    ResidueField residue_;
    std::vector<std::vector<mpz_class>> frob_images_;  // k -> sigma_0^k(g)
};

using RingPtr = std::shared_ptr<const CoeffRing>;

/**
 * An element p^val * unit(g) of K = Frac W(F_{p^m}), unit a polynomial of
 * degree < m over Z/p^N that is nonzero mod p. The zero element is the
 * canonical sentinel (empty unit); anything that cancels below the
 * working precision collapses to it.
 */
class CoeffElem {
   public:
    CoeffElem() = default;

    const RingPtr& ring() const { return ring_; }
    bool is_zero() const { return unit_.empty(); }
    long val() const;
    const std::vector<mpz_class>& unit() const { return unit_; }

    /// v_p; std::nullopt encodes +infinity (zero at precision).
    std::optional<long> vp() const;

    bool is_one() const;

    CoeffElem operator-() const;
    CoeffElem operator+(const CoeffElem& o) const;
    CoeffElem operator-(const CoeffElem& o) const;
    CoeffElem operator*(const CoeffElem& o) const;
    bool operator==(const CoeffElem& o) const;
    bool operator!=(const CoeffElem& o) const { return !(*this == o); }

    /// Multiplicative inverse; throws std::domain_error on zero at precision.
    CoeffElem inverse() const;

    /// sigma_0^power; power = ring's a gives the q-power Frobenius sigma.
    CoeffElem frobenius(int power = 1) const;
    CoeffElem sigma() const;

    std::string str() const;

    friend class CoeffRing;

   private:
    CoeffElem(RingPtr ring, long val, std::vector<mpz_class> unit);
    static CoeffElem normalized(const RingPtr& ring, long base_val, std::vector<mpz_class> raw);

    RingPtr ring_;
    long val_ = 0;
    std::vector<mpz_class> unit_;  // empty <=> zero
};

void require_same_ring(const CoeffElem& x, const CoeffElem& y);

}  // namespace robba
