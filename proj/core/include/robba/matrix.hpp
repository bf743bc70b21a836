#pragma once

#include <vector>

#include "robba/series.hpp"

namespace robba {

/// Exponent of the unique w_s-minimal stored term, when it is unique and
/// the certificate puts all dropped content strictly above it.
std::optional<long> unique_minimal_term(const LaurentSeries& f, const Rat& s);

/**
 * Square matrix over the Laurent-series ring. Carrier of the Frobenius
 * and connection matrices and of every factorization in the toolkit.
 */
class SeriesMatrix {
   public:
    SeriesMatrix() = default;
    SeriesMatrix(SeriesRingPtr sr, int n);  // zero matrix

    static SeriesMatrix identity(SeriesRingPtr sr, int n);

    int n() const { return n_; }
    const SeriesRingPtr& ring() const { return ring_; }

    const LaurentSeries& at(int i, int j) const;
    LaurentSeries& at(int i, int j);

    SeriesMatrix operator+(const SeriesMatrix& o) const;
    SeriesMatrix operator-(const SeriesMatrix& o) const;
    SeriesMatrix operator*(const SeriesMatrix& o) const;
    SeriesMatrix operator-() const;

    SeriesMatrix plus_identity() const;   // M + I
    SeriesMatrix minus_identity() const;  // M - I

    /// Entrywise Frobenius substitution.
    SeriesMatrix sigma(const FrobeniusLift& lift) const;
    /// Entrywise theta = u d/du.
    SeriesMatrix theta_map() const;
    SeriesMatrix scaled(const CoeffElem& c) const;

    bool is_plus() const;
    bool is_strict_minus_off_identity() const;  // M - I strictly minus
    bool is_zero() const;

    /// Constant matrix M(u=0) as series-ring constants.
    std::vector<CoeffElem> constant_term() const;  // row-major n*n

    LaurentSeries determinant() const;  // Laplace expansion, small n

    /**
     * Inverse, by the first applicable route: exact Neumann sum when
     * I - M is nilpotent at the window, geometric series when
     * w_r(M - I) > 0 at the declared radius, else adjugate over the
     * determinant (which must have an invertible minimal term).
     */
    SeriesMatrix inverse(const InvertOptions& opts = {}) const;

   private:
    SeriesRingPtr ring_;
    int n_ = 0;
    std::vector<LaurentSeries> e_;  // row-major
};

/// Entrywise-minimum Gauss value of the matrix at radius s.
GaussValue gauss_norm(const SeriesMatrix& m, const Rat& s);

std::pair<SeriesMatrix, SeriesMatrix> split_plus_minus(const SeriesMatrix& m);

}  // namespace robba
