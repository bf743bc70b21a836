#include "robba/matrix.hpp"

#include <stdexcept>

namespace robba {

std::optional<long> unique_minimal_term(const LaurentSeries& f, const Rat& s) {
    if (f.is_zero()) return std::nullopt;
    GaussValue g = gauss_norm(f, s);
    if (!g.exact) return std::nullopt;
    std::optional<long> found;
    for (const auto& [i, c] : f.terms()) {
        if (ExtRat(s * Rat(c.val()) + i) == g.w) {
            if (found) return std::nullopt;
            found = i;
        }
    }
    return found;
}

SeriesMatrix::SeriesMatrix(SeriesRingPtr sr, int n) : ring_(std::move(sr)), n_(n) {
    if (n < 1) throw std::invalid_argument("matrix rank must be >= 1");
    e_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), LaurentSeries::zero(ring_));
}

SeriesMatrix SeriesMatrix::identity(SeriesRingPtr sr, int n) {
    SeriesMatrix m(std::move(sr), n);
    for (int i = 0; i < n; ++i) m.at(i, i) = LaurentSeries::one(m.ring_);
    return m;
}

const LaurentSeries& SeriesMatrix::at(int i, int j) const {
    return e_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
}

LaurentSeries& SeriesMatrix::at(int i, int j) {
    return e_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
}

static void require_same_shape(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.n() != b.n()) throw std::invalid_argument("matrix rank mismatch");
    if (!a.ring()->same(*b.ring())) throw std::invalid_argument("mixed series rings");
}

SeriesMatrix SeriesMatrix::operator+(const SeriesMatrix& o) const {
    require_same_shape(*this, o);
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = at(i, j) + o.at(i, j);
    return r;
}

SeriesMatrix SeriesMatrix::operator-(const SeriesMatrix& o) const {
    require_same_shape(*this, o);
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = at(i, j) - o.at(i, j);
    return r;
}

SeriesMatrix SeriesMatrix::operator-() const {
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = -at(i, j);
    return r;
}

SeriesMatrix SeriesMatrix::operator*(const SeriesMatrix& o) const {
    require_same_shape(*this, o);
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            LaurentSeries acc = LaurentSeries::zero(ring_);
            for (int k = 0; k < n_; ++k) acc = acc + at(i, k) * o.at(k, j);
            r.at(i, j) = std::move(acc);
        }
    return r;
}

SeriesMatrix SeriesMatrix::plus_identity() const {
    SeriesMatrix r = *this;
    for (int i = 0; i < n_; ++i) r.at(i, i) = r.at(i, i) + LaurentSeries::one(ring_);
    return r;
}

SeriesMatrix SeriesMatrix::minus_identity() const {
    SeriesMatrix r = *this;
    for (int i = 0; i < n_; ++i) r.at(i, i) = r.at(i, i) - LaurentSeries::one(ring_);
    return r;
}

SeriesMatrix SeriesMatrix::sigma(const FrobeniusLift& lift) const {
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = frobenius_substitute(at(i, j), lift);
    return r;
}

SeriesMatrix SeriesMatrix::theta_map() const {
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = theta(at(i, j));
    return r;
}

SeriesMatrix SeriesMatrix::scaled(const CoeffElem& c) const {
    SeriesMatrix r(ring_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = at(i, j).scaled(c);
    return r;
}

bool SeriesMatrix::is_plus() const {
    for (const auto& f : e_)
        if (!f.is_plus()) return false;
    return true;
}

bool SeriesMatrix::is_strict_minus_off_identity() const {
    SeriesMatrix d = minus_identity();
    for (const auto& f : d.e_)
        if (!f.is_strict_minus()) return false;
    return true;
}

bool SeriesMatrix::is_zero() const {
    for (const auto& f : e_)
        if (!f.is_zero()) return false;
    return true;
}

std::vector<CoeffElem> SeriesMatrix::constant_term() const {
    std::vector<CoeffElem> r;
    r.reserve(e_.size());
    for (const auto& f : e_) r.push_back(f.at_zero());
    return r;
}

LaurentSeries SeriesMatrix::determinant() const {
    if (n_ == 1) return at(0, 0);
    // Laplace expansion along the first row; fine for the small ranks here
    LaurentSeries det = LaurentSeries::zero(ring_);
    for (int j = 0; j < n_; ++j) {
        if (at(0, j).is_zero()) continue;
        SeriesMatrix minor(ring_, n_ - 1);
        for (int r = 1; r < n_; ++r) {
            int cc = 0;
            for (int c = 0; c < n_; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = at(r, c);
            }
        }
        LaurentSeries term = at(0, j) * minor.determinant();
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

GaussValue gauss_norm(const SeriesMatrix& m, const Rat& s) {
    ExtRat exact_min = ExtRat::infinity();
    ExtRat floor_min = ExtRat::infinity();
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) {
            GaussValue g = gauss_norm(m.at(i, j), s);
            if (g.exact)
                exact_min = min(exact_min, g.w);
            else
                floor_min = min(floor_min, g.w);
        }
    if (exact_min <= floor_min) return {s, exact_min, true};
    return {s, floor_min, false};
}

std::pair<SeriesMatrix, SeriesMatrix> split_plus_minus(const SeriesMatrix& m) {
    SeriesMatrix lo(m.ring(), m.n()), hi(m.ring(), m.n());
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) {
            auto [mn, pl] = split_plus_minus(m.at(i, j));
            lo.at(i, j) = std::move(mn);
            hi.at(i, j) = std::move(pl);
        }
    return {std::move(lo), std::move(hi)};
}

SeriesMatrix SeriesMatrix::inverse(const InvertOptions& opts) const {
    SeriesMatrix E = identity(ring_, n_) - *this;  // M = I - E
    if (E.is_zero()) return identity(ring_, n_);

    // exact Neumann sum when E is nilpotent at the window
    {
        SeriesMatrix sum = identity(ring_, n_) + E;
        SeriesMatrix pw = E;
        bool nil = false;
        for (int k = 2; k <= n_ + 1; ++k) {
            pw = pw * E;
            if (pw.is_zero()) {
                bool exact = true;
                for (int i = 0; i < n_ && exact; ++i)
                    for (int j = 0; j < n_ && exact; ++j)
                        if (!pw.at(i, j).cert().exact()) exact = false;
                if (exact) nil = true;
                break;
            }
            sum = sum + pw;
        }
        if (nil) return sum;
    }

    if (opts.radius) {
        std::optional<Rat> delta;
        try {
            GaussValue d = gauss_norm(E, *opts.radius);
            if (!d.w.is_infinite() && d.w > ExtRat(Rat(0))) delta = d.w.value();
        } catch (const std::domain_error&) {
            // E uncertified at this radius: fall through to the adjugate
        }
        if (delta) {
            Rat target = opts.target
                             ? *opts.target
                             : *opts.radius * Rat(ring_->coeff->precision()) +
                                   Rat(std::max<long>(1, ring_->window_hi - ring_->window_lo));
            SeriesMatrix sum = identity(ring_, n_);
            SeriesMatrix pw = identity(ring_, n_);
            int k = 0;
            bool clean = false;
            long remainder_from = 0;  // remainder = sum_{j >= remainder_from} E^j
            while (true) {
                ++k;
                if (k > opts.max_terms)
                    throw std::runtime_error("matrix inversion did not converge within the term budget");
                pw = pw * E;
                if (pw.is_zero()) {
                    bool exact = true;
                    for (int i = 0; i < n_ && exact; ++i)
                        for (int j = 0; j < n_ && exact; ++j)
                            if (!pw.at(i, j).cert().exact()) exact = false;
                    clean = exact;
                    remainder_from = k;
                    break;
                }
                sum = sum + pw;
                if (Rat(k + 1) * *delta >= target) {
                    remainder_from = k + 1;
                    break;
                }
            }
            if (!clean) {
                // w_r(E^j) >= j*delta bounds the true remainder, dropped parts included
                Rat fl = Rat(remainder_from) * *delta;
                std::optional<long> em;  // min exponent of E's total content
                bool em_known = true;
                for (int i = 0; i < n_ && em_known; ++i)
                    for (int j = 0; j < n_ && em_known; ++j) {
                        auto x = total_min_exponent(E.at(i, j));
                        if (!x) {
                            em_known = false;
                            break;
                        }
                        em = em ? std::min(*em, *x) : *x;
                    }
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < n_; ++j) {
                        DropCert c = sum.at(i, j).cert();
                        c.add_remainder_floor(*opts.radius, fl);
                        if (em_known && em && *em >= 0)
                            c.set_infinite_min_exponent(remainder_from * *em);
                        sum.at(i, j) = LaurentSeries::from_parts(ring_, sum.at(i, j).terms(),
                                                                 Tail::truncated, Tail::truncated,
                                                                 std::move(c));
                    }
            }
            return sum;
        }
    }

    // adjugate over the determinant
    LaurentSeries det = determinant();
    InvertOptions iopts;
    iopts.radius = opts.radius;
    iopts.target = opts.target;
    iopts.max_terms = opts.max_terms;
    LaurentSeries det_inv = invert(det, iopts);
    SeriesMatrix r(ring_, n_);
    if (n_ == 1) {
        r.at(0, 0) = det_inv;
        return r;
    }
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            SeriesMatrix minor(ring_, n_ - 1);
            int rr = 0;
            for (int x = 0; x < n_; ++x) {
                if (x == j) continue;
                int cc = 0;
                for (int y = 0; y < n_; ++y) {
                    if (y == i) continue;
                    minor.at(rr, cc++) = at(x, y);
                }
                ++rr;
            }
            LaurentSeries cof = minor.determinant() * det_inv;
            r.at(i, j) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return r;
}

}  // namespace robba
