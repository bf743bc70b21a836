#include "robba/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace robba {

SeriesRingPtr make_series_ring(RingPtr coeff, long window_lo, long window_hi) {
    if (window_lo > window_hi) throw std::invalid_argument("empty series window");
    auto sr = std::make_shared<SeriesRing>();
    sr->coeff = std::move(coeff);
    sr->window_lo = window_lo;
    sr->window_hi = window_hi;
    return sr;
}

// ----------------------------------------------------------------- certs

void DropCert::prune() {
    std::sort(pairs_.begin(), pairs_.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    // keep the lower-left staircase: exponent increasing, vp strictly decreasing
    std::vector<std::pair<long, Rat>> out;
    for (auto& pr : pairs_) {
        if (!out.empty() && out.back().second <= pr.second) continue;  // dominated
        out.push_back(pr);
    }
    // hard cap: coarsen by merging neighbours componentwise
    while (out.size() > 64) {
        std::vector<std::pair<long, Rat>> half;
        for (size_t i = 0; i + 1 < out.size(); i += 2)
            half.emplace_back(std::min(out[i].first, out[i + 1].first),
                              std::min(out[i].second, out[i + 1].second));
        if (out.size() % 2) half.push_back(out.back());
        out = std::move(half);
    }
    pairs_ = std::move(out);
}

void DropCert::add_dropped_term(long exponent, const Rat& vp) {
    exact_ = false;
    pairs_.emplace_back(exponent, vp);
    prune();
}

void DropCert::add_remainder_floor(const Rat& s, const Rat& floor) {
    exact_ = false;
    infinite_ = true;
    auto it = floors_.find(s);
    if (it == floors_.end())
        floors_.emplace(s, floor);
    else if (floor < it->second)
        it->second = floor;
}

void DropCert::mark_uncertified() {
    exact_ = false;
    infinite_ = true;
    floors_.clear();
    inf_min_exponent_.reset();
}

void DropCert::set_infinite_min_exponent(long e) {
    if (!inf_min_exponent_ || e < *inf_min_exponent_) inf_min_exponent_ = e;
}

std::optional<ExtRat> DropCert::floor_at(const Rat& s) const {
    if (exact_) return ExtRat::infinity();
    ExtRat best = ExtRat::infinity();
    for (const auto& [i, v] : pairs_) best = min(best, ExtRat(s * v + i));
    if (!infinite_) return best;
    auto it = floors_.find(s);
    if (it != floors_.end()) return min(best, ExtRat(it->second));
    // translate a floor down from a larger radius when the infinite part
    // has a known minimal exponent: s*v + i >= (s/s0)(s0*v + i) + (1 - s/s0)*i
    if (inf_min_exponent_) {
        ExtRat translated = ExtRat::infinity();
        for (const auto& [s0, fl] : floors_) {
            if (s0 <= s) continue;
            Rat t = s / s0;
            translated = min(translated, ExtRat(t * fl + (Rat(1) - t) * Rat(*inf_min_exponent_)));
        }
        if (!translated.is_infinite()) return min(best, translated);
    }
    return std::nullopt;
}

DropCert DropCert::combined_add(const DropCert& a, const DropCert& b) {
    DropCert r;
    r.exact_ = a.exact_ && b.exact_;
    r.infinite_ = a.infinite_ || b.infinite_;
    r.pairs_ = a.pairs_;
    r.pairs_.insert(r.pairs_.end(), b.pairs_.begin(), b.pairs_.end());
    r.prune();
    if (a.infinite_ && b.infinite_) {
        for (const auto& [s, fl] : a.floors_) {
            auto it = b.floors_.find(s);
            if (it != b.floors_.end()) r.floors_.emplace(s, std::min(fl, it->second));
        }
        if (a.inf_min_exponent_ && b.inf_min_exponent_)
            r.inf_min_exponent_ = std::min(*a.inf_min_exponent_, *b.inf_min_exponent_);
    } else if (a.infinite_) {
        r.floors_ = a.floors_;
        r.inf_min_exponent_ = a.inf_min_exponent_;
    } else if (b.infinite_) {
        r.floors_ = b.floors_;
        r.inf_min_exponent_ = b.inf_min_exponent_;
    }
    return r;
}

namespace {

ExtRat frontier_eval(const std::vector<std::pair<long, Rat>>& fr, const Rat& s) {
    ExtRat best = ExtRat::infinity();
    for (const auto& [i, v] : fr) best = min(best, ExtRat(s * v + i));
    return best;
}

std::optional<long> frontier_min_exponent(const std::vector<std::pair<long, Rat>>& fr) {
    if (fr.empty()) return std::nullopt;
    long e = fr.front().first;
    for (const auto& [i, v] : fr) e = std::min(e, i);
    return e;
}

}  // namespace

DropCert DropCert::combined_mul(const DropCert& a, const std::vector<std::pair<long, Rat>>& stored_a,
                                const DropCert& b, const std::vector<std::pair<long, Rat>>& stored_b) {
    DropCert r;
    r.exact_ = a.exact_ && b.exact_;
    if (r.exact_) return r;
    r.infinite_ = a.infinite_ || b.infinite_;

    // finite dropped content: cross sums of frontiers
    auto cross = [&](const std::vector<std::pair<long, Rat>>& x,
                     const std::vector<std::pair<long, Rat>>& y) {
        for (const auto& [i1, v1] : x)
            for (const auto& [j1, w1] : y) r.pairs_.emplace_back(i1 + j1, v1 + w1);
    };
    cross(a.pairs_, stored_b);
    cross(stored_a, b.pairs_);
    cross(a.pairs_, b.pairs_);
    r.prune();

    // infinite content: per-radius floors, using whatever the other factor
    // can certify at the same radius
    auto other_floor = [](const DropCert& c, const std::vector<std::pair<long, Rat>>& stored,
                          const Rat& s) -> std::optional<ExtRat> {
        ExtRat st = frontier_eval(stored, s);
        auto dropped = c.floor_at(s);
        if (!dropped) return std::nullopt;
        return min(st, *dropped);
    };
    auto add_floor = [&](const Rat& s, const Rat& v) {
        auto it = r.floors_.find(s);
        if (it == r.floors_.end())
            r.floors_.emplace(s, v);
        else if (v < it->second)
            it->second = v;
    };
    if (a.infinite_)
        for (const auto& [s, fl] : a.floors_) {
            auto ob = other_floor(b, stored_b, s);
            if (!ob) continue;               // radius unusable on the other side
            if (ob->is_infinite()) continue;  // other side has no content at all
            add_floor(s, fl + ob->value());
        }
    if (b.infinite_)
        for (const auto& [s, fl] : b.floors_) {
            auto oa = other_floor(a, stored_a, s);
            if (!oa) continue;
            if (oa->is_infinite()) continue;
            add_floor(s, fl + oa->value());
        }

    // minimal exponent of the infinite part of the product, when known
    if (r.infinite_) {
        struct MinExp {
            bool unknown = false;
            std::optional<long> e;
        };
        auto total_min = [&](const DropCert& c, const std::vector<std::pair<long, Rat>>& stored) {
            MinExp m;
            auto push = [&](std::optional<long> x) {
                if (x) m.e = m.e ? std::min(*m.e, *x) : x;
            };
            push(frontier_min_exponent(stored));
            push(frontier_min_exponent(c.pairs_));
            if (c.infinite_) {
                if (c.inf_min_exponent_)
                    push(c.inf_min_exponent_);
                else
                    m.unknown = true;
            }
            return m;
        };
        bool unknown = false;
        std::optional<long> e;
        auto push = [&](long x) { e = e ? std::min(*e, x) : x; };
        if (a.infinite_) {
            MinExp mb = total_min(b, stored_b);
            if (!a.inf_min_exponent_ || mb.unknown)
                unknown = true;
            else if (mb.e)
                push(*a.inf_min_exponent_ + *mb.e);
        }
        if (b.infinite_) {
            MinExp ma = total_min(a, stored_a);
            if (!b.inf_min_exponent_ || ma.unknown)
                unknown = true;
            else if (ma.e)
                push(*b.inf_min_exponent_ + *ma.e);
        }
        if (!unknown && e) r.inf_min_exponent_ = e;
    }
    return r;
}

DropCert DropCert::exponent_scaled(long q) const {
    DropCert r;
    r.exact_ = exact_;
    r.infinite_ = infinite_;
    for (const auto& [i, v] : pairs_) r.pairs_.emplace_back(q * i, v);
    r.prune();
    for (const auto& [s, fl] : floors_) r.floors_.emplace(s * q, fl * q);
    if (inf_min_exponent_) r.inf_min_exponent_ = q * *inf_min_exponent_;
    return r;
}

DropCert DropCert::monomial_shifted(const Rat& v, long k) const {
    DropCert r;
    r.exact_ = exact_;
    r.infinite_ = infinite_;
    for (const auto& [i, w] : pairs_) r.pairs_.emplace_back(i + k, w + v);
    r.prune();
    for (const auto& [s, fl] : floors_) r.floors_.emplace(s, fl + s * v + k);
    if (inf_min_exponent_) r.inf_min_exponent_ = *inf_min_exponent_ + k;
    return r;
}

// ----------------------------------------------------------------- series

LaurentSeries LaurentSeries::zero(SeriesRingPtr sr) {
    LaurentSeries f;
    f.ring_ = std::move(sr);
    return f;
}

LaurentSeries LaurentSeries::constant(SeriesRingPtr sr, const CoeffElem& c) {
    return monomial(std::move(sr), c, 0);
}

LaurentSeries LaurentSeries::one(SeriesRingPtr sr) {
    CoeffElem c = sr->coeff->one();
    return monomial(std::move(sr), c, 0);
}

LaurentSeries LaurentSeries::monomial(SeriesRingPtr sr, const CoeffElem& c, long exponent) {
    LaurentSeries f;
    f.ring_ = std::move(sr);
    if (!c.is_zero()) f.coeffs_.emplace(exponent, c);
    f.clamp_to_window();
    return f;
}

LaurentSeries LaurentSeries::from_terms(SeriesRingPtr sr, std::map<long, CoeffElem> terms,
                                        Tail lo, Tail hi) {
    LaurentSeries f;
    f.ring_ = std::move(sr);
    for (auto& [i, c] : terms)
        if (!c.is_zero()) f.coeffs_.emplace(i, c);
    f.tail_lo_ = lo;
    f.tail_hi_ = hi;
    if (lo == Tail::truncated || hi == Tail::truncated) f.cert_.mark_uncertified();
    f.clamp_to_window();
    return f;
}

LaurentSeries LaurentSeries::from_parts(SeriesRingPtr sr, std::map<long, CoeffElem> terms,
                                        Tail lo, Tail hi, DropCert cert) {
    LaurentSeries f;
    f.ring_ = std::move(sr);
    for (auto& [i, c] : terms)
        if (!c.is_zero()) f.coeffs_.emplace(i, c);
    f.tail_lo_ = lo;
    f.tail_hi_ = hi;
    f.cert_ = std::move(cert);
    f.clamp_to_window();
    return f;
}

void LaurentSeries::clamp_to_window() {
    if (!ring_) throw std::invalid_argument("series without a ring");
    bool drop_lo = false, drop_hi = false;
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->first < ring_->window_lo) {
            cert_.add_dropped_term(it->first, Rat(it->second.val()));
            drop_lo = true;
            it = coeffs_.erase(it);
        } else if (it->first > ring_->window_hi) {
            cert_.add_dropped_term(it->first, Rat(it->second.val()));
            drop_hi = true;
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
    if (drop_lo) tail_lo_ = Tail::truncated;
    if (drop_hi) tail_hi_ = Tail::truncated;
}

long LaurentSeries::support_min() const {
    if (coeffs_.empty()) throw std::domain_error("support of zero series");
    return coeffs_.begin()->first;
}

long LaurentSeries::support_max() const {
    if (coeffs_.empty()) throw std::domain_error("support of zero series");
    return coeffs_.rbegin()->first;
}

CoeffElem LaurentSeries::coeff_at(long i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? ring_->coeff->zero() : it->second;
}

CoeffElem LaurentSeries::at_zero() const { return coeff_at(0); }

static void require_same_sring(const LaurentSeries& a, const LaurentSeries& b) {
    if (!a.ring() || !b.ring()) throw std::invalid_argument("series without a ring");
    if (!a.ring()->same(*b.ring())) throw std::invalid_argument("mixed series rings");
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& [i, c] : r.coeffs_) c = -c;
    return r;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    require_same_sring(*this, o);
    LaurentSeries r;
    r.ring_ = ring_;
    r.coeffs_ = coeffs_;
    for (const auto& [i, c] : o.coeffs_) {
        auto it = r.coeffs_.find(i);
        if (it == r.coeffs_.end()) {
            r.coeffs_.emplace(i, c);
        } else {
            CoeffElem s = it->second + c;
            if (s.is_zero())
                r.coeffs_.erase(it);
            else
                it->second = s;
        }
    }
    r.tail_lo_ = (tail_lo_ == Tail::exact && o.tail_lo_ == Tail::exact) ? Tail::exact : Tail::truncated;
    r.tail_hi_ = (tail_hi_ == Tail::exact && o.tail_hi_ == Tail::exact) ? Tail::exact : Tail::truncated;
    r.cert_ = DropCert::combined_add(cert_, o.cert_);
    return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const { return *this + (-o); }

std::vector<std::pair<long, Rat>> LaurentSeries::stored_frontier() const {
    std::vector<std::pair<long, Rat>> fr;
    std::optional<Rat> best;
    for (const auto& [i, c] : coeffs_) {  // exponent-ascending
        Rat v(c.val());
        if (!best || v < *best) {
            fr.emplace_back(i, v);
            best = v;
        }
    }
    return fr;
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    require_same_sring(*this, o);
    LaurentSeries r;
    r.ring_ = ring_;
    if (is_zero() || o.is_zero()) return r;  // exact zero; dropped * 0 = 0
    std::map<long, CoeffElem> acc;
    long wlo = ring_->window_lo, whi = ring_->window_hi;
    DropCert clip;
    for (const auto& [i, c] : coeffs_) {
        for (const auto& [j, d] : o.coeffs_) {
            long k = i + j;
            if (k < wlo || k > whi) {
                clip.add_dropped_term(k, Rat(c.val() + d.val()));
                continue;
            }
            CoeffElem prod = c * d;
            auto it = acc.find(k);
            if (it == acc.end()) {
                acc.emplace(k, std::move(prod));
            } else {
                CoeffElem s = it->second + prod;
                if (s.is_zero())
                    acc.erase(it);
                else
                    it->second = s;
            }
        }
    }
    r.coeffs_ = std::move(acc);
    r.cert_ = DropCert::combined_add(
        DropCert::combined_mul(cert_, stored_frontier(), o.cert_, o.stored_frontier()), clip);
    bool lo_tr = tail_lo_ == Tail::truncated || o.tail_lo_ == Tail::truncated || !clip.exact();
    bool hi_tr = tail_hi_ == Tail::truncated || o.tail_hi_ == Tail::truncated || !clip.exact();
    r.tail_lo_ = lo_tr ? Tail::truncated : Tail::exact;
    r.tail_hi_ = hi_tr ? Tail::truncated : Tail::exact;
    return r;
}

LaurentSeries LaurentSeries::scaled(const CoeffElem& c) const { return monomial_times(c, 0); }

LaurentSeries LaurentSeries::monomial_times(const CoeffElem& c, long k) const {
    LaurentSeries r;
    r.ring_ = ring_;
    if (c.is_zero()) return r;
    for (const auto& [i, x] : coeffs_) {
        CoeffElem y = x * c;
        if (!y.is_zero()) r.coeffs_.emplace(i + k, y);
    }
    r.tail_lo_ = tail_lo_;
    r.tail_hi_ = tail_hi_;
    r.cert_ = cert_.monomial_shifted(Rat(c.val()), k);
    r.clamp_to_window();
    return r;
}

bool LaurentSeries::same_terms(const LaurentSeries& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return false;
    auto it = o.coeffs_.begin();
    for (const auto& [i, c] : coeffs_) {
        if (it->first != i || !(it->second == c)) return false;
        ++it;
    }
    return true;
}

bool LaurentSeries::is_plus() const {
    return coeffs_.empty() || support_min() >= 0;
}
bool LaurentSeries::is_minus() const {
    return coeffs_.empty() || support_max() <= 0;
}
bool LaurentSeries::is_strict_minus() const {
    return coeffs_.empty() || support_max() <= -1;
}
bool LaurentSeries::is_integral() const {
    for (const auto& [i, c] : coeffs_)
        if (c.val() < 0) return false;
    if (!cert_.exact())
        for (const auto& [i, v] : cert_.pairs())
            if (v < 0) return false;
    return !cert_.has_infinite_part() || cert_.exact();
}

LaurentSeries clipped_to(LaurentSeries f, long lo, long hi) {
    for (auto it = f.coeffs_.begin(); it != f.coeffs_.end();) {
        if (it->first < lo || it->first > hi) {
            f.cert_.add_dropped_term(it->first, Rat(it->second.val()));
            if (it->first < lo) f.tail_lo_ = Tail::truncated;
            if (it->first > hi) f.tail_hi_ = Tail::truncated;
            it = f.coeffs_.erase(it);
        } else {
            ++it;
        }
    }
    return f;
}

std::string LaurentSeries::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (i != 0) os << "*u^" << i;
    }
    return os.str();
}

// ------------------------------------------------------------- operations

GaussValue gauss_norm(const LaurentSeries& f, const Rat& s) {
    if (s <= 0) throw std::invalid_argument("gauss norm needs s > 0");
    ExtRat wrep = ExtRat::infinity();
    for (const auto& [i, c] : f.terms()) wrep = min(wrep, ExtRat(s * Rat(c.val()) + i));
    if (f.cert().exact()) return {s, wrep, true};
    auto fl = f.cert().floor_at(s);
    if (!fl) throw std::domain_error("norm not certified at this s");
    if (wrep <= *fl) return {s, wrep, true};
    return {s, min(wrep, *fl), false};
}

std::optional<long> total_min_exponent(const LaurentSeries& f) {
    std::optional<long> e;
    auto push = [&](long x) { e = e ? std::min(*e, x) : x; };
    if (!f.is_zero()) push(f.support_min());
    for (const auto& [i, v] : f.cert().pairs()) push(i);
    if (f.cert().has_infinite_part()) {
        if (f.cert().infinite_min_exponent())
            push(*f.cert().infinite_min_exponent());
        else
            return std::nullopt;
    }
    if (!e) return std::numeric_limits<long>::max() / 4;  // no content at all
    return e;
}

LaurentSeries theta(const LaurentSeries& f) {
    std::map<long, CoeffElem> out;
    const auto& K = f.ring()->coeff;
    for (const auto& [i, c] : f.terms()) {
        if (i == 0) continue;
        CoeffElem y = c * K->from_int(i);
        if (!y.is_zero()) out.emplace(i, y);
    }
    // multiplying a dropped term by its integer exponent never lowers vp,
    // so the certificate carries over unchanged
    return LaurentSeries::from_parts(f.ring(), std::move(out), f.tail_lo(), f.tail_hi(), f.cert());
}

std::pair<LaurentSeries, LaurentSeries> split_plus_minus(const LaurentSeries& f) {
    std::map<long, CoeffElem> lo, hi;
    for (const auto& [i, c] : f.terms()) (i < 0 ? lo : hi).emplace(i, c);
    Tail t = f.cert().exact() ? Tail::exact : Tail::truncated;
    LaurentSeries minus = LaurentSeries::from_parts(f.ring(), std::move(lo), f.tail_lo(), t, f.cert());
    LaurentSeries plus = LaurentSeries::from_parts(f.ring(), std::move(hi), t, f.tail_hi(), f.cert());
    return {std::move(minus), std::move(plus)};
}

void validate_lift(const FrobeniusLift& lift, const SeriesRingPtr& sr) {
    if (lift.q < 2) throw std::invalid_argument("Frobenius lift needs q >= 2");
    if (lift.q != sr->coeff->q())
        throw std::invalid_argument("lift q does not match the coefficient ring");
    if (!lift.image_of_u) return;
    const LaurentSeries& img = *lift.image_of_u;
    if (img.is_zero() || !img.is_plus() || !img.is_integral())
        throw std::invalid_argument("u^sigma must be a plus integral series");
    if (img.support_min() != lift.q || img.coeff_at(lift.q).val() != 0)
        throw std::invalid_argument("u^sigma / u^q must be a unit at precision");
}

LaurentSeries frobenius_substitute(const LaurentSeries& f, const FrobeniusLift& lift) {
    validate_lift(lift, f.ring());
    const long q = lift.q;
    const int a = f.ring()->coeff->a();
    if (!lift.image_of_u) {
        std::map<long, CoeffElem> out;
        DropCert clip;
        long wlo = f.ring()->window_lo, whi = f.ring()->window_hi;
        for (const auto& [i, c] : f.terms()) {
            long k = q * i;
            CoeffElem y = c.frobenius(a);
            if (k < wlo || k > whi)
                clip.add_dropped_term(k, Rat(y.val()));
            else
                out.emplace(k, y);
        }
        DropCert cert = DropCert::combined_add(f.cert().exponent_scaled(q), clip);
        Tail lo = f.tail_lo() == Tail::exact && clip.exact() ? Tail::exact : Tail::truncated;
        Tail hi = f.tail_hi() == Tail::exact && clip.exact() ? Tail::exact : Tail::truncated;
        return LaurentSeries::from_parts(f.ring(), std::move(out), lo, hi, std::move(cert));
    }
    // general lift: substitute powers of image_of_u
    LaurentSeries acc = LaurentSeries::zero(f.ring());
    if (f.is_zero()) return acc;
    const LaurentSeries& img = *lift.image_of_u;
    LaurentSeries img_inv = invert(img);
    LaurentSeries pw = LaurentSeries::one(f.ring());
    long at = 0;
    auto step_to = [&](long target) {
        while (at < target) { pw = pw * img; ++at; }
        while (at > target) { pw = pw * img_inv; --at; }
    };
    for (const auto& [i, c] : f.terms()) {
        step_to(i);
        acc = acc + pw.scaled(c.frobenius(a));
    }
    if (!f.cert().exact()) {
        // the exponent image of f's dropped content is lift-dependent;
        // only the trivial lift transports certificates
        DropCert cc = acc.cert();
        cc.mark_uncertified();
        return LaurentSeries::from_parts(acc.ring(), acc.terms(), Tail::truncated,
                                         Tail::truncated, std::move(cc));
    }
    return acc;
}

LaurentSeries invert(const LaurentSeries& f, const InvertOptions& opts) {
    if (f.is_zero()) throw std::domain_error("not a unit in represented ring");
    const SeriesRingPtr& sr = f.ring();

    long pivot_exp;
    if (opts.radius) {
        GaussValue g = gauss_norm(f, *opts.radius);
        if (!g.exact)
            throw std::domain_error("inverse pivot not certified at the declared radius");
        std::optional<long> found;
        for (const auto& [i, c] : f.terms()) {
            if (ExtRat(*opts.radius * Rat(c.val()) + i) == g.w) {
                if (found) throw std::domain_error("w_s-minimal term is not unique");
                found = i;
            }
        }
        pivot_exp = *found;
    } else {
        pivot_exp = f.support_min();
    }
    CoeffElem pivot = f.coeff_at(pivot_exp);
    CoeffElem pivot_inv = pivot.inverse();

    // e = f / pivot - 1
    LaurentSeries e = f.monomial_times(pivot_inv, -pivot_exp) - LaurentSeries::one(sr);

    LaurentSeries sum = LaurentSeries::one(sr);
    LaurentSeries term = LaurentSeries::one(sr);
    Rat delta;  // w(e) at the declared radius, when present
    bool have_delta = false;
    std::optional<Rat> min_e_vp;
    if (!e.is_zero()) {
        Rat mv(e.terms().begin()->second.val());
        for (const auto& [i, c] : e.terms()) mv = std::min(mv, Rat(c.val()));
        min_e_vp = mv;
    }
    if (opts.radius) {
        GaussValue ge = gauss_norm(e, *opts.radius);
        if (ge.w.is_infinite()) {
            have_delta = false;  // e vanishes: exact monomial inverse
        } else {
            if (ge.w <= ExtRat(Rat(0)))
                throw std::domain_error("not a unit in represented ring");
            delta = ge.w.value();
            have_delta = true;
        }
    } else if (!e.is_zero() && e.support_min() <= 0) {
        throw std::domain_error("not a unit in represented ring");
    }

    Rat target = opts.target ? *opts.target
                             : (opts.radius ? *opts.radius * Rat(sr->coeff->precision()) +
                                                  Rat(std::max<long>(1, sr->window_hi - sr->window_lo))
                                            : Rat(0));
    bool clean_exit = e.is_zero();
    int k = 0;
    while (!e.is_zero()) {
        ++k;
        if (k > opts.max_terms)
            throw std::runtime_error("series inversion did not converge within the term budget");
        term = term * e;
        if (term.is_zero()) {
            clean_exit = term.cert().exact();  // nilpotent tail: exact inverse
            break;
        }
        if (k % 2 == 1)
            sum = sum - term;
        else
            sum = sum + term;
        if (have_delta && Rat(k + 1) * delta >= target) break;
        if (!have_delta && term.support_min() > sr->window_hi) break;
    }

    LaurentSeries result = sum.monomial_times(pivot_inv, -pivot_exp);
    std::map<long, CoeffElem> terms = result.terms();
    DropCert cert = result.cert();
    Tail tlo = result.tail_lo(), thi = result.tail_hi();

    if (!clean_exit) {
        // remainder sum_{j>k} (-e)^j, scaled by pivot^{-1} u^{-pivot_exp}
        if (opts.radius && have_delta) {
            Rat fl = Rat(k + 1) * delta - *opts.radius * Rat(pivot.val()) - pivot_exp;
            cert.add_remainder_floor(*opts.radius, fl);
            if (e.support_min() >= 0)
                cert.set_infinite_min_exponent((k + 1) * e.support_min() - pivot_exp);
            thi = Tail::truncated;
        } else if (min_e_vp && *min_e_vp >= 0 && e.support_min() >= 1) {
            // plus-sliding tail: exponents >= k+1, vp >= (k+1)*min_vp
            cert.add_dropped_term(k + 1 - pivot_exp, Rat(k + 1) * *min_e_vp - Rat(pivot.val()));
            thi = Tail::truncated;
        } else {
            cert.mark_uncertified();
            tlo = thi = Tail::truncated;
        }
    }
    // account for f's own dropped content: 1/(f+df) - 1/f ~ df / f^2
    if (!f.cert().exact()) {
        if (opts.radius) {
            GaussValue gf = gauss_norm(f, *opts.radius);
            auto fl = f.cert().floor_at(*opts.radius);
            if (fl && !fl->is_infinite() && !gf.w.is_infinite())
                cert.add_remainder_floor(*opts.radius, fl->value() - 2 * gf.w.value());
            else if (!fl)
                cert.mark_uncertified();
        } else {
            cert.mark_uncertified();
        }
        tlo = thi = Tail::truncated;
    }
    return LaurentSeries::from_parts(sr, std::move(terms), tlo, thi, std::move(cert));
}

}  // namespace robba
