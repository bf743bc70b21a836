#include "robba/coeff.hpp"

#include <sstream>
#include <stdexcept>

namespace robba {

namespace {

bool fits_long_pow(uint64_t p, int a, long& out) {
    long double bound = 1;
    long v = 1;
    for (int i = 0; i < a; ++i) {
        bound *= static_cast<long double>(p);
        if (bound > 1e15L) return false;
        v *= static_cast<long>(p);
    }
    out = v;
    return true;
}

}  // namespace

CoeffRing::CoeffRing(uint64_t p, int a, int m, int N, std::vector<mpz_class> modulus)
    : p_(p), a_(a), m_(m), N_(N), modulus_(std::move(modulus)),
      residue_(p, m, [&] {
          fp::Poly r;
          for (const auto& c : modulus_) {
              mpz_class cc = c % static_cast<unsigned long>(p);
              if (cc < 0) cc += static_cast<unsigned long>(p);
              r.push_back(cc.get_ui());
          }
          return fp::trim(r);
      }()) {
    init();
}

CoeffRing::CoeffRing(uint64_t p, int a, int m, int N)
    : CoeffRing(p, a, m, N, [&] {
          fp::Poly f = fp::first_irreducible(p, m);
          std::vector<mpz_class> lift;
          for (uint64_t c : f) lift.emplace_back(c);
          return lift;
      }()) {}

std::shared_ptr<const CoeffRing> CoeffRing::make(uint64_t p, int a, int m, int N) {
    return std::make_shared<const CoeffRing>(p, a, m, N);
}

std::shared_ptr<const CoeffRing> CoeffRing::make(uint64_t p, int a, int m, int N,
                                                 std::vector<mpz_class> modulus) {
    return std::make_shared<const CoeffRing>(p, a, m, N, std::move(modulus));
}

void CoeffRing::init() {
    if (p_ < 2) throw std::invalid_argument("p must be a prime >= 2");
    if (a_ < 1) throw std::invalid_argument("a must be >= 1");
    if (m_ < 1) throw std::invalid_argument("m must be >= 1");
    if (N_ < 1) throw std::invalid_argument("precision N must be >= 1");
    if (!fits_long_pow(p_, a_, q_)) throw std::invalid_argument("q = p^a too large");
    if (static_cast<int>(modulus_.size()) != m_ + 1 || modulus_[static_cast<size_t>(m_)] != 1)
        throw std::invalid_argument("modulus must be monic of degree m");
    // primality of p (trial division is plenty at these sizes)
    for (uint64_t d = 2; d * d <= p_; ++d)
        if (p_ % d == 0) throw std::invalid_argument("p must be prime");

    mpz_ui_pow_ui(pN_.get_mpz_t(), p_, static_cast<unsigned long>(N_));
    modulus_ = reduce_mod_pN(std::move(modulus_));
    modulus_[static_cast<size_t>(m_)] = 1;

    // Hensel-lift the image of the generator under sigma_0: the unique
    // root of the modulus congruent to g^p mod p.
    std::vector<mpz_class> y;
    {
        ResidueField::Elem gp = residue_.pow(residue_.gen(), mpz_class(static_cast<unsigned long>(p_)));
        for (uint64_t c : gp) y.emplace_back(c);
    }
    auto eval_poly = [&](const std::vector<mpz_class>& f, const std::vector<mpz_class>& at) {
        return poly_eval(f, at);
    };
    std::vector<mpz_class> deriv;  // modulus'
    for (size_t i = 1; i < modulus_.size(); ++i)
        deriv.push_back(modulus_[i] * static_cast<unsigned long>(i));
    int prec = 1;
    while (prec < N_) {
        prec = std::min(2 * prec, N_);
        std::vector<mpz_class> fy = eval_poly(modulus_, y);
        std::vector<mpz_class> dfy = eval_poly(deriv, y);
        std::vector<mpz_class> corr = poly_mul(fy, poly_inv(dfy));
        // y -= corr, mod p^N
        if (y.size() < corr.size()) y.resize(corr.size());
        for (size_t i = 0; i < corr.size(); ++i) y[i] -= corr[i];
        y = reduce_mod_pN(std::move(y));
    }
    // sanity: y is a root of the modulus to full precision
    for (const auto& c : eval_poly(modulus_, y))
        if (c != 0) throw std::logic_error("Frobenius lift failed the Hensel condition");

    frob_images_.resize(static_cast<size_t>(m_));
    frob_images_[0] = reduce_mod_pN({mpz_class(0), mpz_class(1)});  // the generator g
    for (int k = 1; k < m_; ++k)
        frob_images_[static_cast<size_t>(k)] = poly_eval(y, frob_images_[static_cast<size_t>(k - 1)]);
}

bool CoeffRing::same_ring(const CoeffRing& other) const {
    return this == &other ||
           (p_ == other.p_ && a_ == other.a_ && m_ == other.m_ && N_ == other.N_ &&
            modulus_ == other.modulus_);
}

std::vector<mpz_class> CoeffRing::reduce_mod_pN(std::vector<mpz_class> f) const {
    // reduce by the monic modulus, then coefficients into [0, p^N)
    while (static_cast<int>(f.size()) > m_) {
        mpz_class lead = f.back();
        size_t d = f.size() - 1;
        f.pop_back();
        if (lead != 0)
            for (int i = 0; i < m_; ++i)
                f[d - static_cast<size_t>(m_) + static_cast<size_t>(i)] -=
                    lead * modulus_[static_cast<size_t>(i)];
    }
    for (auto& c : f) {
        c %= pN_;
        if (c < 0) c += pN_;
    }
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

std::vector<mpz_class> CoeffRing::poly_add(const std::vector<mpz_class>& x,
                                           const std::vector<mpz_class>& y) const {
    std::vector<mpz_class> r(std::max(x.size(), y.size()), mpz_class(0));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < x.size()) r[i] += x[i];
        if (i < y.size()) r[i] += y[i];
    }
    return reduce_mod_pN(std::move(r));
}

std::vector<mpz_class> CoeffRing::poly_mul(const std::vector<mpz_class>& x,
                                           const std::vector<mpz_class>& y) const {
    if (x.empty() || y.empty()) return {};
    std::vector<mpz_class> r(x.size() + y.size() - 1, mpz_class(0));
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    }
    return reduce_mod_pN(std::move(r));
}

std::vector<mpz_class> CoeffRing::poly_eval(const std::vector<mpz_class>& f,
                                            const std::vector<mpz_class>& at) const {
    std::vector<mpz_class> acc;
    for (size_t i = f.size(); i-- > 0;) {
        acc = poly_mul(acc, at);
        if (acc.empty()) acc = {mpz_class(0)};
        acc[0] += f[i];
        acc = reduce_mod_pN(std::move(acc));
    }
    return acc;
}

std::vector<mpz_class> CoeffRing::poly_inv(const std::vector<mpz_class>& x) const {
    // start from the inverse mod p, Newton-lift to p^N
    fp::Poly xbar;
    for (const auto& c : x) {
        mpz_class cc = c % static_cast<unsigned long>(p_);
        xbar.push_back(cc.get_ui());
    }
    xbar = fp::trim(xbar);
    if (fp::is_zero(xbar)) throw std::domain_error("not invertible at precision");
    fp::Poly wbar = fp::invmod(xbar, residue_.modulus(), p_);
    std::vector<mpz_class> w;
    for (uint64_t c : wbar) w.emplace_back(c);
    int prec = 1;
    while (prec < N_) {
        prec = std::min(2 * prec, N_);
        // w <- w * (2 - x w)
        std::vector<mpz_class> t = poly_mul(x, w);
        for (auto& c : t) c = -c;
        if (t.empty()) t = {mpz_class(0)};
        t[0] += 2;
        w = poly_mul(w, reduce_mod_pN(std::move(t)));
    }
    return w;
}

const std::vector<mpz_class>& CoeffRing::frob_power_image(int k) const {
    int kk = k % m_;
    if (kk < 0) kk += m_;
    return frob_images_[static_cast<size_t>(kk)];
}

ResidueField::Elem CoeffRing::residue_of(const CoeffElem& x) const {
    if (x.is_zero() || x.val() > 0) return residue_.zero();
    if (x.val() < 0) throw std::domain_error("residue of an element with negative valuation");
    fp::Poly r;
    for (const auto& c : x.unit()) {
        mpz_class cc = c % static_cast<unsigned long>(p_);
        r.push_back(cc.get_ui());
    }
    return fp::trim(r);
}

// ---------------------------------------------------------------------

CoeffElem::CoeffElem(RingPtr ring, long val, std::vector<mpz_class> unit)
    : ring_(std::move(ring)), val_(val), unit_(std::move(unit)) {}

CoeffElem CoeffElem::normalized(const RingPtr& ring, long base_val, std::vector<mpz_class> raw) {
    raw = ring->reduce_mod_pN(std::move(raw));
    if (raw.empty()) return ring->zero();
    // factor out the largest common power of p
    long j = ring->precision();
    mpz_class pz(static_cast<unsigned long>(ring->p()));
    mpz_class scratch;
    for (const auto& c : raw) {
        if (c == 0) continue;
        long v = static_cast<long>(mpz_remove(scratch.get_mpz_t(), c.get_mpz_t(), pz.get_mpz_t()));
        j = std::min(j, v);
        if (j == 0) break;
    }
    if (j > 0) {
        mpz_class pj;
        mpz_pow_ui(pj.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(j));
        for (auto& c : raw) c /= pj;
    }
    while (!raw.empty() && raw.back() == 0) raw.pop_back();
    if (raw.empty()) return ring->zero();
    return CoeffElem(ring, base_val + j, std::move(raw));
}

CoeffElem CoeffRing::zero() const {
    return CoeffElem(shared_from_this(), 0, {});
}

CoeffElem CoeffRing::one() const { return from_int(1); }

CoeffElem CoeffRing::from_int(long n) const { return from_mpz(mpz_class(n)); }

CoeffElem CoeffRing::from_mpz(const mpz_class& n) const {
    return CoeffElem::normalized(shared_from_this(), 0, {n});
}

CoeffElem CoeffRing::from_val_unit(long val, std::vector<mpz_class> unit) const {
    return CoeffElem::normalized(shared_from_this(), val, std::move(unit));
}

CoeffElem CoeffRing::lift_residue(const ResidueField::Elem& e) const {
    std::vector<mpz_class> u;
    for (uint64_t c : e) u.emplace_back(c);
    return CoeffElem::normalized(shared_from_this(), 0, std::move(u));
}

CoeffElem CoeffRing::generator() const {
    if (m_ == 1) return CoeffElem::normalized(shared_from_this(), 0, frob_images_[0]);
    return CoeffElem::normalized(shared_from_this(), 0, {mpz_class(0), mpz_class(1)});
}

long CoeffElem::val() const {
    if (is_zero()) throw std::domain_error("valuation of zero at precision");
    return val_;
}

std::optional<long> CoeffElem::vp() const {
    if (is_zero()) return std::nullopt;
    return val_;
}

bool CoeffElem::is_one() const {
    return !is_zero() && val_ == 0 && unit_.size() == 1 && unit_[0] == 1;
}

CoeffElem CoeffElem::operator-() const {
    if (is_zero()) return *this;
    std::vector<mpz_class> u = unit_;
    for (auto& c : u) c = -c;
    return normalized(ring_, val_, std::move(u));
}

CoeffElem CoeffElem::operator+(const CoeffElem& o) const {
    require_same_ring(*this, o);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    long v = std::min(val_, o.val_);
    long dx = val_ - v, dy = o.val_ - v;
    int N = ring_->precision();
    if (dx >= N) return o;  // x invisible at this scale
    if (dy >= N) return *this;
    mpz_class pz(static_cast<unsigned long>(ring_->p()));
    mpz_class px, py;
    mpz_pow_ui(px.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(dx));
    mpz_pow_ui(py.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(dy));
    std::vector<mpz_class> r(std::max(unit_.size(), o.unit_.size()), mpz_class(0));
    for (size_t i = 0; i < unit_.size(); ++i) r[i] += unit_[i] * px;
    for (size_t i = 0; i < o.unit_.size(); ++i) r[i] += o.unit_[i] * py;
    return normalized(ring_, v, std::move(r));
}

CoeffElem CoeffElem::operator-(const CoeffElem& o) const { return *this + (-o); }

CoeffElem CoeffElem::operator*(const CoeffElem& o) const {
    require_same_ring(*this, o);
    if (is_zero() || o.is_zero()) return ring_ ? ring_->zero() : o.ring_->zero();
    return CoeffElem(ring_, val_ + o.val_, ring_->poly_mul(unit_, o.unit_));
}

bool CoeffElem::operator==(const CoeffElem& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    require_same_ring(*this, o);
    return val_ == o.val_ && unit_ == o.unit_;
}

CoeffElem CoeffElem::inverse() const {
    if (is_zero()) throw std::domain_error("not invertible at precision");
    return CoeffElem(ring_, -val_, ring_->poly_inv(unit_));
}

CoeffElem CoeffElem::frobenius(int power) const {
    if (is_zero()) return *this;
    if (ring_->m() == 1) return *this;  // sigma_0 is the identity on Z_p
    const auto& image = ring_->frob_power_image(power);
    return CoeffElem(ring_, val_, ring_->poly_eval(unit_, image));
}

CoeffElem CoeffElem::sigma() const { return frobenius(ring_->a()); }

std::string CoeffElem::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    os << "p^" << val_ << "*(";
    for (size_t i = 0; i < unit_.size(); ++i) {
        if (i) os << " + ";
        os << unit_[i].get_str();
        if (i == 1) os << "*g";
        if (i > 1) os << "*g^" << i;
    }
    os << ")";
    return os.str();
}

void require_same_ring(const CoeffElem& x, const CoeffElem& y) {
    if (!x.ring() || !y.ring()) throw std::invalid_argument("element without a ring");
    if (!x.ring()->same_ring(*y.ring()))
        throw std::invalid_argument("mixed coefficient rings");
}

}  // namespace robba
