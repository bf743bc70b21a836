#include "robba/factor.hpp"

#include <stdexcept>

namespace robba {

bool is_monomial_unit(const LaurentSeries& f, const Rat& s) {
    return unique_minimal_term(f, s).has_value();
}

SeriesMatrix approximate_inverse(const SeriesMatrix& U, const Rat& r, const Rat& margin) {
    const SeriesRingPtr& sr = U.ring();
    GaussValue wu = gauss_norm(U, r);
    if (wu.w.is_infinite()) throw std::domain_error("U not invertible at precision");

    InvertOptions iopts;
    iopts.radius = r;
    // remainder of the inverse must stay above the truncation threshold
    Rat threshold = margin - wu.w.value();
    iopts.target = threshold + Rat(1);
    SeriesMatrix uinv = U.inverse(iopts);

    // keep terms with r*vp + i < threshold, as an exact Laurent-polynomial
    // snapshot; the dropped tail sits above it by construction
    SeriesMatrix V(sr, U.n());
    for (int i = 0; i < U.n(); ++i)
        for (int j = 0; j < U.n(); ++j) {
            std::map<long, CoeffElem> kept;
            for (const auto& [k, c] : uinv.at(i, j).terms())
                if (ExtRat(r * Rat(c.val()) + k) < ExtRat(threshold)) kept.emplace(k, c);
            V.at(i, j) = LaurentSeries::from_terms(sr, std::move(kept));
        }

    SeriesMatrix residual = V * U - SeriesMatrix::identity(sr, U.n());
    GaussValue g = gauss_norm(residual, r);
    if (!(g.w > ExtRat(Rat(0))))
        throw std::domain_error("approximate inverse could not be certified within the window");
    if (V.determinant().is_zero()) throw std::domain_error("approximate inverse is singular at precision");
    return V;
}

BirkhoffFactorization birkhoff_factor(const SeriesMatrix& M, const Rat& r, int max_iters,
                                      std::optional<Rat> target) {
    const SeriesRingPtr& sr = M.ring();
    const int n = M.n();
    SeriesMatrix I = SeriesMatrix::identity(sr, n);

    GaussValue g0 = gauss_norm(M - I, r);
    if (g0.w.is_infinite()) {
        BirkhoffFactorization out{I, I, r, ExtRat::infinity(), 0, {}};
        return out;
    }
    Rat delta0 = g0.w.value();
    if (!(delta0 > 0)) throw std::domain_error("birkhoff_factor needs certified w_r(M - I) > 0");

    Rat stop = target ? *target : Rat(max_iters + 1) * delta0;

    SeriesMatrix Y = I, Z = I, Mk = M;
    std::vector<Rat> history;
    ExtRat last = ExtRat(delta0);
    int iters = 0;
    InvertOptions iopts;
    iopts.radius = r;
    iopts.target = stop + delta0;

    while (true) {
        SeriesMatrix E = Mk - I;
        GaussValue gk = gauss_norm(E, r);
        if (iters > 0) {
            if (!(gk.w > last)) throw std::runtime_error("factorization diverged");
        }
        last = gk.w;
        if (gk.w.is_infinite()) break;
        history.push_back(gk.w.value());
        if (gk.w >= ExtRat(stop)) break;
        if (iters >= max_iters) break;
        ++iters;

        auto [Em, Ep] = split_plus_minus(E);
        SeriesMatrix Ym = I + Em;
        SeriesMatrix Yp = I + Ep;
        Mk = Ym.inverse(iopts) * Mk * Yp.inverse(iopts);
        Y = Y * Ym;
        Z = Yp * Z;
    }

    BirkhoffFactorization out;
    out.Y = Y;
    out.Z = Z;
    out.r = r;
    out.iterations = iters;
    out.contraction = std::move(history);
    SeriesMatrix residual = Y * Z - M;
    out.achieved_floor = gauss_norm(residual, r).w;
    return out;
}

FullFactorization factor_full(const SeriesMatrix& U, const Rat& r, int max_iters) {
    const SeriesRingPtr& sr = U.ring();
    SeriesMatrix X = approximate_inverse(U, r);
    SeriesMatrix M = X * U;
    BirkhoffFactorization bz = birkhoff_factor(M, r, max_iters);

    InvertOptions iopts;
    iopts.radius = r;
    SeriesMatrix Xinv = X.inverse(iopts);
    SeriesMatrix Vraw = Xinv * bz.Y;

    // exact Laurent-polynomial snapshot of V
    SeriesMatrix V(sr, U.n());
    for (int i = 0; i < U.n(); ++i)
        for (int j = 0; j < U.n(); ++j)
            V.at(i, j) = LaurentSeries::from_terms(sr, Vraw.at(i, j).terms());

    FullFactorization out;
    out.V = V;
    out.W = bz.Z;
    out.r = r;
    SeriesMatrix residual = V * bz.Z - U;
    out.floor = gauss_norm(residual, r).w;
    if (!out.W.is_plus()) throw std::runtime_error("plus factor has negative support");
    if (!is_monomial_unit(V.determinant(), r))
        throw std::domain_error("V is not invertible over the localization");
    return out;
}

}  // namespace robba
