#pragma once

#include "robba/matrix.hpp"

namespace robba {

/**
 * Result of the plus/minus (Birkhoff-style) factorization M = Y * Z near
 * the identity: Y - I has strictly negative support, Z is a plus matrix,
 * and achieved_floor is the certified w_r of the reconstruction residual.
 */
struct BirkhoffFactorization {
    SeriesMatrix Y;
    SeriesMatrix Z;
    Rat r;
    ExtRat achieved_floor;
    int iterations = 0;
    std::vector<Rat> contraction;  // measured w_r(M_k - I) per iteration
};

/// U = V * W with V a Laurent-polynomial matrix invertible over the dense
/// localization (det a monomial unit) and W invertible over the plus ring.
struct FullFactorization {
    SeriesMatrix V;
    SeriesMatrix W;
    Rat r;
    ExtRat floor;  // certified w_r(V*W - U)
};

/**
 * Laurent-polynomial approximation V of U^{-1} with certified
 * w_r(V*U - I) > 0. `margin` sets the truncation threshold: terms of
 * U^{-1} with value below margin - w_r(U) are kept.
 */
SeriesMatrix approximate_inverse(const SeriesMatrix& U, const Rat& r, const Rat& margin = Rat(1));

/**
 * Iterative plus/minus splitting of M with certified w_r(M - I) > 0.
 * Each round absorbs the minus part into Y and the plus part into Z and
 * strictly increases w_r(M - I); failure to contract is an error, never a
 * wrong answer.
 */
BirkhoffFactorization birkhoff_factor(const SeriesMatrix& M, const Rat& r, int max_iters = 20,
                                      std::optional<Rat> target = std::nullopt);

/// Approximate inverse first, plus/minus factorization second: U = V * W.
FullFactorization factor_full(const SeriesMatrix& U, const Rat& r, int max_iters = 20);

/// True when f has a single dominant term at radius s: a monomial times a
/// series of strictly larger w_s. This is invertibility in the localized
/// model.
bool is_monomial_unit(const LaurentSeries& f, const Rat& s);

}  // namespace robba
