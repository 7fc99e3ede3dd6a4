#pragma once

// Dense polynomials over Q_p with one shared precision for all coefficients:
// the value is (1/p^shift) * sum c_i x^i with representatives c_i in
// [0, p^prec), so every coefficient is known at absolute precision
// prec - shift.  This is the workhorse of the cohomology reductions, where
// per-coefficient PadicElement tracking would be needlessly slow; the shared
// floor is a sound (if slightly pessimistic) under-approximation of the
// per-coefficient precisions.
//
// Multiplication switches to Kronecker substitution (pack into one big
// integer, one gmp multiply, unpack) above a size threshold.

#include <gmpxx.h>

#include <vector>

#include "padicqc/errors.hpp"
#include "padicqc/padic.hpp"

namespace padicqc {

class PolyZp {
  public:
    PolyZp() : p_(0), shift_(0), prec_(0) {}
    PolyZp(long p, long prec, long shift = 0) : p_(p), shift_(shift), prec_(prec) {
        mod_ = detail::pow_p(p, prec);
    }

    long p() const { return p_; }
    long prec() const { return prec_; }
    long shift() const { return shift_; }
    // absolute precision certified for every coefficient value
    long abs_precision() const { return prec_ - shift_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero_rep() const {
        for (auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    template <class Poly> // anything with degree() and get(e) -> mpq_class
    static PolyZp from_rat_poly(const Poly& f, long p, long prec) {
        PolyZp r(p, prec);
        r.c_.resize(f.degree() + 1);
        for (long i = 0; i <= f.degree(); ++i) {
            PadicElement e = PadicElement::from_rational(p, f.get(i), prec);
            r.set_coeff_internal(i, e, 0);
        }
        r.trim();
        return r;
    }

    void set_coeff(long i, const PadicElement& e) {
        // requires v(e) >= -shift and abs(e) >= prec - shift; callers align first
        if (static_cast<long>(c_.size()) <= i) c_.resize(i + 1, mpz_class(0));
        set_coeff_internal(i, e, shift_);
    }

    PadicElement coeff(long i) const {
        if (i < 0 || i > degree()) return PadicElement::zero_to_precision(p_, abs_precision());
        return PadicElement::from_mpz(p_, c_[i], prec_).shift(-shift_);
    }

    const mpz_class& rep(long i) const { return c_[i]; }
    void set_rep(long i, mpz_class v) {
        if (static_cast<long>(c_.size()) <= i) c_.resize(i + 1, mpz_class(0));
        mpz_mod(c_[i].get_mpz_t(), v.get_mpz_t(), mod_.get_mpz_t());
    }

    // minimal valuation over coefficient values (PREC_INF if all reps vanish)
    long vmin() const {
        long v = PREC_INF;
        for (auto& x : c_) {
            if (x == 0) continue;
            v = std::min(v, detail::valuation_mpz(x, p_));
            if (v == 0) break;
        }
        return v == PREC_INF ? PREC_INF : v - shift_;
    }

    friend PolyZp operator+(const PolyZp& a, const PolyZp& b) { return combine(a, b, false); }
    friend PolyZp operator-(const PolyZp& a, const PolyZp& b) { return combine(a, b, true); }

    friend PolyZp operator*(const PolyZp& a, const PolyZp& b) {
        check(a, b);
        long va = a.vmin(), vb = b.vmin();
        long aa = a.abs_precision(), ab = b.abs_precision();
        long abs = std::min(va >= PREC_INF / 8 ? PREC_INF / 8 : ab + va,
                            vb >= PREC_INF / 8 ? PREC_INF / 8 : aa + vb);
        abs = std::min(abs, aa + ab + 64); // finite even when a factor is a zero representative
        long shift = a.shift_ + b.shift_;
        PolyZp r(a.p_, std::max(abs + shift, 1L), shift);
        if (a.c_.empty() || b.c_.empty() || abs + shift <= 0) return r;
        r.c_ = multiply_reps(a.c_, b.c_, a.p_, r.mod_);
        r.trim();
        return r;
    }

    PolyZp times_padic(const PadicElement& s) const {
        if (s.is_exact_zero()) return PolyZp(p_, prec_, shift_);
        PolyZp r = *this;
        if (s.is_zero_to_precision()) {
            long abs = std::min(abs_precision() + vmin_or0(), s.abs_precision() + vmin_or0());
            return PolyZp(p_, std::max(1L, abs), 0);
        }
        long vs = s.valuation();
        long abs = std::min(abs_precision() + vs, s.abs_precision() + vmin_or0());
        long shift = shift_ - std::min(vs, 0L);
        long extra = vs > 0 ? vs : 0;
        PolyZp out(p_, abs + shift, shift);
        mpz_class mul = (s.unit() * detail::pow_p(p_, extra)) % out.mod_;
        out.c_.resize(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) {
            out.c_[i] = (c_[i] * mul) % out.mod_;
        }
        out.trim();
        return out;
    }

    // divide by a nonzero integer, exactly (tracked: costs v_p(n) digits)
    PolyZp div_long(long n) const {
        if (n == 0) throw DomainError("PolyZp: division by zero");
        mpz_class nn(n);
        long v = detail::valuation_mpz(nn, p_);
        mpz_class u = nn / detail::pow_p(p_, v);
        PolyZp r(p_, prec_, shift_ + v);
        mpz_class uinv;
        mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), r.mod_.get_mpz_t());
        r.c_.resize(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = (c_[i] * uinv) % r.mod_;
        r.trim();
        return r;
    }

    PolyZp times_long(long n) const {
        PolyZp r = *this;
        mpz_class nn(n);
        for (auto& x : r.c_) {
            x = (x * nn) % mod_;
            if (x < 0) x += mod_;
        }
        r.trim();
        return r;
    }

    PolyZp derivative() const {
        PolyZp r(p_, prec_, shift_);
        if (c_.size() <= 1) return r;
        r.c_.resize(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = (c_[i] * mpz_class(static_cast<long>(i))) % mod_;
        r.trim();
        return r;
    }

    PolyZp shift_x(long k) const { // multiply by x^k
        PolyZp r(p_, prec_, shift_);
        r.c_.assign(c_.size() + k, mpz_class(0));
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i + k] = c_[i];
        r.trim();
        return r;
    }

    // remainder and quotient modulo a monic divisor held at matching prec
    std::pair<PolyZp, PolyZp> divmod_monic(const PolyZp& d) const {
        if (d.degree() < 0) throw DomainError("PolyZp: division by zero polynomial");
        if (d.rep(d.degree()) != 1) throw DomainError("PolyZp: divisor must be monic");
        PolyZp r = *this;
        PolyZp q(p_, prec_, shift_);
        long dd = d.degree();
        if (r.degree() >= dd) q.c_.assign(r.degree() - dd + 1, mpz_class(0));
        for (long i = r.degree(); i >= dd; --i) {
            mpz_class lead = r.c_[i] % mod_;
            if (lead == 0) continue;
            q.c_[i - dd] = lead;
            for (long j = 0; j <= dd; ++j) {
                r.c_[i - dd + j] = (r.c_[i - dd + j] - lead * d.rep(j)) % mod_;
                if (r.c_[i - dd + j] < 0) r.c_[i - dd + j] += mod_;
            }
        }
        r.trim();
        q.trim();
        return {q, r};
    }

    PadicElement eval(const PadicElement& x) const {
        PadicElement acc = PadicElement::exact_zero(p_);
        for (long i = degree(); i >= 0; --i)
            acc = acc * x + coeff(i);
        return acc;
    }

    template <class Series>
    Series eval_series(const Series& xs, long order) const {
        // monomial substitution x -> c t^e evades Horner's truncation loss
        long stored = 0, mono_e = 0;
        for (long e = xs.min_exp(); e < xs.truncation_order(); ++e)
            if (xs.stored_nonzero(e)) {
                ++stored;
                mono_e = e;
            }
        if (stored == 1) {
            Series r(xs.proto(), order);
            r.set_tail_bound(PREC_INF / 2, 0);
            PadicElement c = xs.get(mono_e);
            PadicElement cp = PadicElement::one(p_, EXACT_PREC);
            for (long i = 0; i <= degree(); ++i) {
                if (i > 0) cp = cp * c;
                if (rep(i) != 0 && i * mono_e < order) {
                    Series term(xs.proto(), order);
                    term.set(i * mono_e, coeff(i) * cp);
                    term.set_tail_bound(PREC_INF / 2, 0);
                    r = r + term;
                }
            }
            return r;
        }
        Series acc(xs.proto(), order);
        acc.set_tail_bound(PREC_INF / 2, 0);
        for (long i = degree(); i >= 0; --i) {
            acc = (acc * xs).truncated(order);
            Series cst(xs.proto(), order);
            cst.set(0, coeff(i));
            cst.set_tail_bound(PREC_INF / 2, 0);
            acc = acc + cst;
        }
        return acc;
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

  private:
    long p_, shift_, prec_;
    mpz_class mod_;
    std::vector<mpz_class> c_;

    long vmin_or0() const {
        long v = vmin();
        return v >= PREC_INF / 8 ? 0 : std::max(v, -shift_);
    }

    void set_coeff_internal(long i, const PadicElement& e, long shift) {
        if (e.is_exact_zero()) {
            c_[i] = 0;
            return;
        }
        if (e.is_zero_to_precision()) {
            if (e.abs_precision() < prec_ - shift)
                throw PrecisionError("PolyZp: coefficient below shared precision");
            c_[i] = 0;
            return;
        }
        long v = e.valuation();
        if (v + shift < 0) throw DomainError("PolyZp: coefficient valuation below shift");
        if (e.abs_precision() < prec_ - shift)
            throw PrecisionError("PolyZp: coefficient below shared precision");
        mpz_class val = e.unit() * detail::pow_p(p_, v + shift);
        mpz_mod(c_[i].get_mpz_t(), val.get_mpz_t(), mod_.get_mpz_t());
    }

    static void check(const PolyZp& a, const PolyZp& b) {
        if (a.p_ != b.p_) throw DomainError("PolyZp: prime mismatch");
    }

    static PolyZp combine(const PolyZp& a, const PolyZp& b, bool sub) {
        check(a, b);
        long shift = std::max(a.shift_, b.shift_);
        long abs = std::min(a.abs_precision(), b.abs_precision());
        PolyZp r(a.p_, abs + shift, shift);
        r.c_.assign(std::max(a.c_.size(), b.c_.size()), mpz_class(0));
        mpz_class la = detail::pow_p(a.p_, shift - a.shift_), lb = detail::pow_p(a.p_, shift - b.shift_);
        for (size_t i = 0; i < r.c_.size(); ++i) {
            mpz_class va = i < a.c_.size() ? a.c_[i] * la : mpz_class(0);
            mpz_class vb = i < b.c_.size() ? b.c_[i] * lb : mpz_class(0);
            mpz_class s;
            if (sub) s = va - vb;
            else s = va + vb;
            mpz_mod(r.c_[i].get_mpz_t(), s.get_mpz_t(), r.mod_.get_mpz_t());
        }
        r.trim();
        return r;
    }

    static std::vector<mpz_class> multiply_reps(const std::vector<mpz_class>& a,
                                                const std::vector<mpz_class>& b, long /*p*/,
                                                const mpz_class& mod) {
        std::vector<mpz_class> out(a.size() + b.size() - 1, mpz_class(0));
        if (a.size() < 24 || b.size() < 24) {
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i] == 0) continue;
                for (size_t j = 0; j < b.size(); ++j) {
                    if (b[j] == 0) continue;
                    out[i + j] += a[i] * b[j];
                }
            }
            for (auto& x : out) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
            return out;
        }
        // Kronecker substitution
        size_t coeff_bits = mpz_sizeinbase(mod.get_mpz_t(), 2);
        size_t slot_bits = 2 * coeff_bits + 64;
        slot_bits = (slot_bits + 63) / 64 * 64;
        size_t words = slot_bits / 64;
        auto pack = [&](const std::vector<mpz_class>& v) {
            std::vector<uint64_t> buf(v.size() * words, 0);
            for (size_t i = 0; i < v.size(); ++i) {
                size_t count = 0;
                mpz_export(buf.data() + i * words, &count, -1, 8, 0, 0, v[i].get_mpz_t());
            }
            mpz_class big;
            mpz_import(big.get_mpz_t(), buf.size(), -1, 8, 0, 0, buf.data());
            return big;
        };
        mpz_class big = pack(a) * pack(b);
        // unpack slot by slot
        size_t n = out.size();
        std::vector<uint64_t> buf(n * words + 4, 0);
        size_t count = 0;
        mpz_export(buf.data(), &count, -1, 8, 0, 0, big.get_mpz_t());
        for (size_t i = 0; i < n; ++i) {
            mpz_class x;
            mpz_import(x.get_mpz_t(), words, -1, 8, 0, 0, buf.data() + i * words);
            mpz_mod(out[i].get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        }
        return out;
    }
};

} // namespace padicqc
