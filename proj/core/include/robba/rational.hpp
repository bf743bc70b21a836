#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>

namespace robba {

/// Exact rational scalar. Used for Gauss radii, valuations and floors.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "num/den" or "num" (arbitrary-precision decimal parts).
Rat rat_from_string(const std::string& s);

/// Canonical "num/den" form; integers are printed without "/1".
std::string rat_to_string(const Rat& q);

/**
 * A rational extended by +infinity.
 *
 * Gauss valuations take the value +infinity exactly on series that are
 * zero at working precision, so this is the natural codomain for them.
 */
class ExtRat {
   public:
    ExtRat() : inf_(true) {}  // default: +infinity (empty min)
    ExtRat(const Rat& v) : inf_(false), v_(v) {}
    ExtRat(long v) : inf_(false), v_(rat(v)) {}

    static ExtRat infinity() { return ExtRat(); }

    bool is_infinite() const { return inf_; }
    const Rat& value() const {
        if (inf_) throw std::domain_error("value() of +infinity");
        return v_;
    }

    ExtRat operator+(const ExtRat& o) const {
        if (inf_ || o.inf_) return infinity();
        return ExtRat(v_ + o.v_);
    }

    friend ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }

    bool operator==(const ExtRat& o) const {
        if (inf_ != o.inf_) return false;
        return inf_ || v_ == o.v_;
    }
    bool operator<(const ExtRat& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return v_ < o.v_;
    }
    bool operator<=(const ExtRat& o) const { return *this < o || *this == o; }
    bool operator>(const ExtRat& o) const { return o < *this; }
    bool operator>=(const ExtRat& o) const { return o <= *this; }

    std::string str() const { return inf_ ? "inf" : rat_to_string(v_); }

   private:
    bool inf_;
    Rat v_;
};

}  // namespace robba
