#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "robba/coeff.hpp"
#include "robba/rational.hpp"

namespace robba {

/**
 * The series domain: a coefficient ring plus the exponent window budget
 * that truncation clamps to. Series over the same domain interoperate.
 */
struct SeriesRing {
    RingPtr coeff;
    long window_lo = -40;
    long window_hi = 40;

    bool same(const SeriesRing& o) const {
        return coeff->same_ring(*o.coeff) && window_lo == o.window_lo && window_hi == o.window_hi;
    }
};

using SeriesRingPtr = std::shared_ptr<const SeriesRing>;

SeriesRingPtr make_series_ring(RingPtr coeff, long window_lo = -40, long window_hi = 40);

/// w_s(f) together with its certification status. `exact` means the value
/// is the valuation of f on the nose; otherwise it is a certified lower
/// bound (the dropped part of the representation may reach down to it).
struct GaussValue {
    Rat s;
    ExtRat w;
    bool exact = true;
};

/**
 * Certificate for everything a series representation has dropped.
 *
 * Dropped content with uniform (exponent, vp) lower bounds is kept as a
 * Pareto frontier of pairs: each dropped term is dominated componentwise
 * by some pair, so min over pairs of s*vp + exponent bounds them at every
 * radius at once. Content without a uniform pair bound (geometric-series
 * remainders with mixed-sign support) carries per-radius floors instead
 * and restricts certification to those radii, plus whatever a declared
 * minimal exponent lets us translate down to smaller radii.
 */
class DropCert {
   public:
    bool exact() const { return exact_; }
    bool has_infinite_part() const { return infinite_; }
    const std::vector<std::pair<long, Rat>>& pairs() const { return pairs_; }
    const std::map<Rat, Rat>& radius_floors() const { return floors_; }
    const std::optional<long>& infinite_min_exponent() const { return inf_min_exponent_; }

    void add_dropped_term(long exponent, const Rat& vp);
    void add_remainder_floor(const Rat& s, const Rat& floor);
    void set_infinite_min_exponent(long e);
    void mark_uncertified();  // infinite content with no usable floor

    /// Lower bound on s*vp + i over all dropped content; nullopt when the
    /// certificate cannot speak at this radius.
    std::optional<ExtRat> floor_at(const Rat& s) const;

    static DropCert combined_add(const DropCert& a, const DropCert& b);
    /// Product rule; the stored frontiers and stored w_s-minima of the two
    /// factors bound the cross terms.
    static DropCert combined_mul(const DropCert& a, const std::vector<std::pair<long, Rat>>& stored_a,
                                 const DropCert& b, const std::vector<std::pair<long, Rat>>& stored_b);
    /// Exponent map i -> q*i (coefficientwise Frobenius leaves vp alone).
    DropCert exponent_scaled(long q) const;
    /// Multiply every dropped term by a monomial of valuation v, degree k.
    DropCert monomial_shifted(const Rat& v, long k) const;

   private:
    void prune();

    bool exact_ = true;
    bool infinite_ = false;
    std::vector<std::pair<long, Rat>> pairs_;  // exponent increasing, vp decreasing
    std::map<Rat, Rat> floors_;
    std::optional<long> inf_min_exponent_;
};

enum class Tail { exact, truncated };

/**
 * Truncated bidirectional Laurent series over the coefficient ring: the
 * working model of the Robba ring and its subrings. Stored coefficients
 * are exact (val, unit) data; the certificate accounts for whatever was
 * truncated away. Values are immutable once built.
 */
class LaurentSeries {
   public:
    LaurentSeries() = default;

    static LaurentSeries zero(SeriesRingPtr sr);
    static LaurentSeries constant(SeriesRingPtr sr, const CoeffElem& c);
    static LaurentSeries one(SeriesRingPtr sr);
    static LaurentSeries monomial(SeriesRingPtr sr, const CoeffElem& c, long exponent);
    static LaurentSeries from_terms(SeriesRingPtr sr, std::map<long, CoeffElem> terms,
                                    Tail lo = Tail::exact, Tail hi = Tail::exact);
    /// Assembles a series from explicit pieces, certificate included.
    static LaurentSeries from_parts(SeriesRingPtr sr, std::map<long, CoeffElem> terms, Tail lo,
                                    Tail hi, DropCert cert);

    const SeriesRingPtr& ring() const { return ring_; }
    const std::map<long, CoeffElem>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    Tail tail_lo() const { return tail_lo_; }
    Tail tail_hi() const { return tail_hi_; }
    const DropCert& cert() const { return cert_; }

    /// Tight stored-support bounds; throws on the zero series.
    long support_min() const;
    long support_max() const;

    CoeffElem coeff_at(long i) const;  // the ring's zero if absent

    LaurentSeries operator-() const;
    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries scaled(const CoeffElem& c) const;
    LaurentSeries monomial_times(const CoeffElem& c, long k) const;

    /// Equality of the stored representation (at working precision).
    bool same_terms(const LaurentSeries& o) const;

    // subring membership on the representation
    bool is_plus() const;          // support in [0, inf)
    bool is_minus() const;         // support in (-inf, 0]
    bool is_strict_minus() const;  // support in (-inf, -1]
    bool is_integral() const;      // every stored vp >= 0 (and drops too)

    CoeffElem at_zero() const;  // constant coefficient

    /// Stored Pareto frontier of (exponent, val), used by the cert algebra.
    std::vector<std::pair<long, Rat>> stored_frontier() const;

    friend LaurentSeries clipped_to(LaurentSeries f, long lo, long hi);

    std::string str() const;

   private:
    void clamp_to_window();
    void set_truncated_sides(long dropped_lo, long dropped_hi);

    SeriesRingPtr ring_;
    std::map<long, CoeffElem> coeffs_;
    Tail tail_lo_ = Tail::exact;
    Tail tail_hi_ = Tail::exact;
    DropCert cert_;
};

/// w_s at a positive radius; throws std::domain_error when the truncation
/// certificate cannot speak at this radius.
GaussValue gauss_norm(const LaurentSeries& f, const Rat& s);

/// Minimal exponent over ALL content (stored and dropped). nullopt when
/// unknown; a series with no content at all reports a large sentinel.
std::optional<long> total_min_exponent(const LaurentSeries& f);

/// u * d/du, acting as c_i u^i -> i c_i u^i.
LaurentSeries theta(const LaurentSeries& f);

/// (f^-, f^+) with support in (-inf,-1] and [0,inf); f = f^- + f^+.
std::pair<LaurentSeries, LaurentSeries> split_plus_minus(const LaurentSeries& f);

/**
 * Frobenius lift on the series ring: coefficients through sigma = sigma_0^a,
 * u through image_of_u. Absent image means u -> u^q, the lift every
 * pipeline defaults to.
 */
struct FrobeniusLift {
    long q;
    std::optional<LaurentSeries> image_of_u;
};

void validate_lift(const FrobeniusLift& lift, const SeriesRingPtr& sr);

LaurentSeries frobenius_substitute(const LaurentSeries& f, const FrobeniusLift& lift);

struct InvertOptions {
    std::optional<Rat> radius;    // certify the geometric remainder here
    std::optional<Rat> target;    // stop once the remainder floor reaches this
    int max_terms = 512;
};

/**
 * Multiplicative inverse. Requires a unique w_s-minimal term at the
 * declared radius, or a unit lowest coefficient when no radius is given.
 */
LaurentSeries invert(const LaurentSeries& f, const InvertOptions& opts = {});

}  // namespace robba
