#include "robba/residue_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace robba {

namespace fp {

Poly trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

bool is_zero(const Poly& f) { return trim(f).empty(); }

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

Poly add(const Poly& a, const Poly& b, uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = s % p;
    }
    return trim(r);
}

Poly sub(const Poly& a, const Poly& b, uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint64_t x = i < a.size() ? a[i] : 0;
        uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = (x + p - y) % p;
    }
    return trim(r);
}

Poly mul(const Poly& a, const Poly& b, uint64_t p) {
    if (is_zero(a) || is_zero(b)) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return trim(r);
}

uint64_t inv_mod_p(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) throw std::domain_error("inverse of 0 mod p");
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(p), nr = static_cast<long long>(a);
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    return static_cast<uint64_t>(t < 0 ? t + static_cast<long long>(p) : t);
}

Poly rem(Poly a, const Poly& f, uint64_t p) {
    a = trim(a);
    Poly g = trim(f);
    if (g.empty()) throw std::domain_error("division by zero polynomial");
    uint64_t leadinv = inv_mod_p(g.back(), p);
    while (a.size() >= g.size()) {
        uint64_t c = (a.back() * leadinv) % p;
        size_t shift = a.size() - g.size();
        if (c != 0)
            for (size_t i = 0; i < g.size(); ++i)
                a[shift + i] = (a[shift + i] + p * g[i] - (c * g[i]) % p) % p;
        a.pop_back();
        a = trim(a);
        if (a.empty()) break;
    }
    return a;
}

Poly gcd(Poly a, Poly b, uint64_t p) {
    a = trim(a);
    b = trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = b;
        b = r;
    }
    if (!a.empty()) {  // monic normalization
        uint64_t c = inv_mod_p(a.back(), p);
        for (auto& x : a) x = (x * c) % p;
    }
    return a;
}

Poly powmod(const Poly& base, const mpz_class& e, const Poly& f, uint64_t p) {
    Poly result{1};
    Poly b = rem(base, f, p);
    mpz_class n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) result = rem(mul(result, b, p), f, p);
        b = rem(mul(b, b, p), f, p);
        n >>= 1;
    }
    return result;
}

Poly invmod(const Poly& a, const Poly& f, uint64_t p) {
    // extended Euclid on (a mod f, f)
    Poly r0 = trim(f), r1 = rem(a, f, p);
    Poly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        // quotient of r0 by r1
        Poly q;
        Poly rr = r0;
        uint64_t leadinv = inv_mod_p(r1.back(), p);
        q.assign(rr.size() >= r1.size() ? rr.size() - r1.size() + 1 : 0, 0);
        while (rr.size() >= r1.size() && !rr.empty()) {
            uint64_t c = (rr.back() * leadinv) % p;
            size_t shift = rr.size() - r1.size();
            q[shift] = c;
            for (size_t i = 0; i < r1.size(); ++i)
                rr[shift + i] = (rr[shift + i] + p * r1[i] - (c * r1[i]) % p) % p;
            rr = trim(rr);
            if (rr.empty()) break;
        }
        Poly s2 = sub(s0, mul(q, s1, p), p);
        r0 = r1;
        r1 = rr;
        s0 = s1;
        s1 = s2;
    }
    if (degree(r0) != 0) throw std::domain_error("not invertible modulo (f, p)");
    uint64_t c = inv_mod_p(r0[0], p);
    Poly inv = s0;
    for (auto& x : inv) x = (x * c) % p;
    return rem(inv, f, p);
}

bool is_irreducible(const Poly& f_in, uint64_t p) {
    Poly f = trim(f_in);
    int m = degree(f);
    if (m <= 0) return false;
    if (m == 1) return true;
    // x^(p^m) == x mod f, and gcd(x^(p^(m/l)) - x, f) = 1 for prime l | m
    Poly x{0, 1};
    mpz_class pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), p, static_cast<unsigned long>(m));
    if (!is_zero(sub(powmod(x, pm, f, p), rem(x, f, p), p))) return false;
    int mm = m;
    for (int l = 2; l * l <= mm || l <= mm; ++l) {
        if (l > mm) break;
        if (mm % l != 0) continue;
        while (mm % l == 0) mm /= l;
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(m / l));
        Poly g = gcd(sub(powmod(x, pe, f, p), x, p), f, p);
        if (degree(g) != 0) return false;
    }
    return true;
}

Poly first_irreducible(uint64_t p, int m) {
    if (m < 1) throw std::invalid_argument("degree must be >= 1");
    if (m == 1) return Poly{0, 1};  // x itself
    // enumerate constant-first tuples (c_0, ..., c_{m-1})
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), p, static_cast<unsigned long>(m));
    for (mpz_class j = 0; j < total; ++j) {
        Poly f(m + 1, 0);
        f[m] = 1;
        mpz_class v = j;
        for (int i = 0; i < m; ++i) {
            mpz_class d = v % p;
            f[i] = d.get_ui();
            v /= p;
        }
        if (is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

std::optional<std::vector<uint64_t>> solve(std::vector<std::vector<uint64_t>> a,
                                           std::vector<uint64_t> b, uint64_t p) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col(rows, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && a[sel][c] % p == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        std::swap(b[sel], b[rank]);
        uint64_t inv = inv_mod_p(a[rank][c], p);
        for (size_t j = c; j < cols; ++j) a[rank][j] = (a[rank][j] * inv) % p;
        b[rank] = (b[rank] * inv) % p;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] % p == 0) continue;
            uint64_t f = a[r][c] % p;
            for (size_t j = c; j < cols; ++j)
                a[r][j] = (a[r][j] + p - (f * a[rank][j]) % p) % p;
            b[r] = (b[r] + p - (f * b[rank]) % p) % p;
        }
        pivot_col[rank] = static_cast<int>(c);
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (b[r] % p != 0) return std::nullopt;
    std::vector<uint64_t> x(cols, 0);
    for (size_t r = 0; r < rank; ++r) x[static_cast<size_t>(pivot_col[r])] = b[r] % p;
    return x;
}

std::vector<std::vector<uint64_t>> kernel(std::vector<std::vector<uint64_t>> a, uint64_t p) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_of_col(cols, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && a[sel][c] % p == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        uint64_t inv = inv_mod_p(a[rank][c], p);
        for (size_t j = c; j < cols; ++j) a[rank][j] = (a[rank][j] * inv) % p;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] % p == 0) continue;
            uint64_t f = a[r][c] % p;
            for (size_t j = c; j < cols; ++j)
                a[r][j] = (a[r][j] + p - (f * a[rank][j]) % p) % p;
        }
        pivot_of_col[c] = static_cast<int>(rank);
        ++rank;
    }
    std::vector<std::vector<uint64_t>> basis;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] != -1) continue;
        std::vector<uint64_t> v(cols, 0);
        v[c] = 1;
        for (size_t cc = 0; cc < cols; ++cc)
            if (pivot_of_col[cc] != -1)
                v[cc] = (p - a[static_cast<size_t>(pivot_of_col[cc])][c] % p) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace fp

ResidueField::ResidueField(uint64_t p, int deg, fp::Poly modulus)
    : p_(p), deg_(deg), modulus_(fp::trim(std::move(modulus))) {
    if (deg < 1) throw std::invalid_argument("field degree must be >= 1");
    if (fp::degree(modulus_) != deg) throw std::invalid_argument("modulus degree mismatch");
    if (modulus_.back() != 1) throw std::invalid_argument("modulus must be monic");
    if (!fp::is_irreducible(modulus_, p)) throw std::invalid_argument("modulus reducible mod p");
}

ResidueField ResidueField::with_default_modulus(uint64_t p, int deg) {
    return ResidueField(p, deg, fp::first_irreducible(p, deg));
}

mpz_class ResidueField::size() const {
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), p_, static_cast<unsigned long>(deg_));
    return s;
}

ResidueField::Elem ResidueField::gen() const {
    if (deg_ == 1) return fp::rem({0, 1}, modulus_, p_);
    return {0, 1};
}

bool ResidueField::eq(const Elem& a, const Elem& b) const { return fp::is_zero(sub(a, b)); }

ResidueField::Elem ResidueField::add(const Elem& a, const Elem& b) const {
    return fp::add(a, b, p_);
}
ResidueField::Elem ResidueField::sub(const Elem& a, const Elem& b) const {
    return fp::sub(a, b, p_);
}
ResidueField::Elem ResidueField::neg(const Elem& a) const { return fp::sub({}, a, p_); }
ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
    return fp::rem(fp::mul(a, b, p_), modulus_, p_);
}
ResidueField::Elem ResidueField::inv(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("inverse of zero field element");
    return fp::invmod(a, modulus_, p_);
}
ResidueField::Elem ResidueField::pow(const Elem& a, const mpz_class& e) const {
    if (e < 0) return pow(inv(a), -e);
    return fp::powmod(a, e, modulus_, p_);
}

ResidueField::Elem ResidueField::frobenius(const Elem& a, int k) const {
    int kk = k % deg_;
    if (kk < 0) kk += deg_;
    Elem r = a;
    mpz_class pz(static_cast<unsigned long>(p_));
    for (int i = 0; i < kk; ++i) r = pow(r, pz);
    return r;
}

std::vector<uint64_t> ResidueField::coords(const Elem& a) const {
    std::vector<uint64_t> c(static_cast<size_t>(deg_), 0);
    for (size_t i = 0; i < a.size() && i < c.size(); ++i) c[i] = a[i] % p_;
    return c;
}

ResidueField::Elem ResidueField::from_coords(const std::vector<uint64_t>& c) const {
    fp::Poly f(c.begin(), c.end());
    for (auto& x : f) x %= p_;
    return fp::rem(f, modulus_, p_);
}

ResidueField::Elem ResidueField::nth_elem(const mpz_class& j) const {
    std::vector<uint64_t> c(static_cast<size_t>(deg_), 0);
    mpz_class v = j;
    for (int i = 0; i < deg_; ++i) {
        mpz_class d = v % p_;
        c[static_cast<size_t>(i)] = d.get_ui();
        v /= p_;
    }
    return from_coords(c);
}

namespace {

using FElem = ResidueField::Elem;
using FPoly = std::vector<FElem>;  // polynomial over F, little-endian

FPoly ftrim(const ResidueField& F, FPoly f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
    return f;
}

FPoly fmul(const ResidueField& F, const FPoly& a, const FPoly& b) {
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return ftrim(F, r);
}

FPoly frem(const ResidueField& F, FPoly a, const FPoly& f) {
    a = ftrim(F, a);
    FElem leadinv = F.inv(f.back());
    while (a.size() >= f.size()) {
        FElem c = F.mul(a.back(), leadinv);
        size_t shift = a.size() - f.size();
        for (size_t i = 0; i < f.size(); ++i)
            a[shift + i] = F.sub(a[shift + i], F.mul(c, f[i]));
        a = ftrim(F, a);
        if (a.empty()) break;
    }
    return a;
}

FPoly fgcd(const ResidueField& F, FPoly a, FPoly b) {
    a = ftrim(F, a);
    b = ftrim(F, b);
    while (!b.empty()) {
        FPoly r = frem(F, a, b);
        a = b;
        b = r;
    }
    if (!a.empty()) {
        FElem c = F.inv(a.back());
        for (auto& x : a) x = F.mul(x, c);
    }
    return a;
}

FPoly fpowmod(const ResidueField& F, const FPoly& base, mpz_class e, const FPoly& f) {
    FPoly result{F.one()};
    FPoly b = frem(F, base, f);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = frem(F, fmul(F, result, b), f);
        b = frem(F, fmul(F, b, b), f);
        e >>= 1;
    }
    return result;
}

}  // namespace

std::optional<ResidueField::Elem> root_in_field(const ResidueField& F, const fp::Poly& g_in) {
    fp::Poly g = fp::trim(g_in);
    if (fp::degree(g) < 1) return std::nullopt;
    FPoly f;
    for (uint64_t c : g) f.push_back(F.from_uint(c));
    f = ftrim(F, f);
    {  // keep only the part that splits into linear factors over F
        FPoly x{F.zero(), F.one()};
        FPoly xq = fpowmod(F, x, F.size(), f);
        // gcd(f, x^|F| - x)
        FPoly d = xq;
        if (d.size() < 2) d.resize(2, F.zero());
        d[1] = F.sub(d[1], F.one());
        f = fgcd(F, f, ftrim(F, d));
        if (f.size() < 2) return std::nullopt;
    }
    // split down to a linear factor with a deterministic probe sequence
    mpz_class probe = 1;
    while (f.size() > 2) {
        FElem c = F.nth_elem(probe);
        probe += 1;
        FPoly split;
        if (F.p() != 2) {
            FPoly xc{c, F.one()};
            mpz_class e = (F.size() - 1) / 2;
            FPoly h = fpowmod(F, xc, e, f);
            if (h.empty()) continue;
            h[0] = F.sub(h[0], F.one());
            split = fgcd(F, f, ftrim(F, h));
        } else {
            // absolute trace of c*x down to F_2
            FPoly cx{F.zero(), c};
            FPoly t = frem(F, cx, f);
            FPoly acc = t;
            int bits = F.deg();
            for (int i = 1; i < bits; ++i) {
                t = frem(F, fmul(F, t, t), f);
                for (size_t j = 0; j < t.size(); ++j) {
                    if (acc.size() <= j) acc.resize(j + 1, F.zero());
                    acc[j] = F.add(acc[j], t[j]);
                }
            }
            split = fgcd(F, f, ftrim(F, acc));
        }
        if (split.size() >= 2 && split.size() < f.size()) f = split;
        if (probe > 4096) throw std::runtime_error("root splitting did not converge");
    }
    // f = x + f0  =>  root = -f0 / f1
    FElem root = F.neg(F.mul(f[0], F.inv(f[1])));
    return root;
}

}  // namespace robba
