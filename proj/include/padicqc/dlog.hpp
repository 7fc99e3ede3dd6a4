#pragma once

// Coleman integrals of the residual classes  beta(x) f'(x)/f(x) dx  that the
// even reductions leave behind.  Writing f = prod (x - r) over an algebraic
// closure, the primitive is  sum_r beta(r) Log(x - r)  with the standard
// branch (Log kills Teichmuller parts, log p = 0; only unit ratios ever reach
// the log series here, so the branch constant never appears).
//
// No root finding over extensions: the F_p-rational roots are Hensel-lifted
// and split off, and the sum over the remaining conjugate roots is a trace
// computed in the quotient ring R = Q_p[T]/(cofactor), which is etale and
// unramified since disc(f) is a p-unit.

#include <vector>

#include "padicqc/curve.hpp"
#include "padicqc/log_series.hpp"
#include "padicqc/padic_linalg.hpp"
#include "padicqc/poly_zp.hpp"

namespace padicqc {

// elements of R = Q_p[T]/(h) as coefficient vectors of length deg h
class QuotientRing {
  public:
    QuotientRing() = default;
    QuotientRing(std::vector<PadicElement> monic_h, long p, long prec)
        : p_(p), prec_(prec), h_(std::move(monic_h)) {
        n_ = static_cast<long>(h_.size()) - 1;
        // power sums of the roots of h via Newton's identities
        // h = T^n + a_{n-1} T^(n-1) + ... + a_0
        s_.assign(std::max<long>(n_, 1), PadicElement::exact_zero(p));
        if (n_ >= 1) {
            s_[0] = PadicElement::from_mpz(p, n_, prec);
            for (long k = 1; k < n_; ++k) {
                PadicElement acc = PadicElement::from_mpz(p, k, prec) * h_[n_ - k];
                for (long i = 1; i < k; ++i) acc += h_[n_ - i] * s_[k - i];
                s_[k] = -acc;
            }
        }
    }

    long dim() const { return n_; }
    long prime() const { return p_; }

    using Elem = std::vector<PadicElement>;

    Elem zero() const { return Elem(n_, PadicElement::exact_zero(p_)); }
    Elem scalar(const PadicElement& c) const {
        Elem e = zero();
        if (n_ > 0) e[0] = c;
        return e;
    }
    Elem generator() const {
        Elem e = zero();
        if (n_ > 1) e[1] = PadicElement::one(p_, prec_);
        else if (n_ == 1) e[0] = -h_[0]; // T = root
        return e;
    }
    Elem from_poly(const PolyZp& b) const {
        // b(T) reduced mod h
        Elem acc = zero();
        for (long i = b.degree(); i >= 0; --i) {
            acc = mul_by_T(acc);
            acc[0] += b.coeff(i);
        }
        return acc;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (long i = 0; i < n_; ++i) r[i] += b[i];
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (long i = 0; i < n_; ++i) r[i] -= b[i];
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<PadicElement> full(2 * n_ - 1, PadicElement::exact_zero(p_));
        for (long i = 0; i < n_; ++i) {
            if (a[i].is_exact_zero()) continue;
            for (long j = 0; j < n_; ++j) {
                if (b[j].is_exact_zero()) continue;
                full[i + j] += a[i] * b[j];
            }
        }
        // reduce by monic h
        for (long d = 2 * n_ - 2; d >= n_; --d) {
            PadicElement lead = full[d];
            if (lead.is_exact_zero()) continue;
            full[d] = PadicElement::exact_zero(p_);
            for (long j = 0; j < n_; ++j) full[d - n_ + j] -= lead * h_[j];
        }
        full.resize(n_);
        return full;
    }
    Elem mul_by_T(const Elem& a) const {
        Elem r = zero();
        for (long i = 0; i + 1 < n_; ++i) r[i + 1] = a[i];
        if (n_ >= 1 && !a[n_ - 1].is_exact_zero())
            for (long j = 0; j < n_; ++j) r[j] -= a[n_ - 1] * h_[j];
        return r;
    }
    Elem pow_p(const Elem& a) const {
        Elem acc = scalar(PadicElement::one(p_, prec_));
        Elem base = a;
        long e = p_;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            e >>= 1;
            if (e) base = mul(base, base);
        }
        return acc;
    }
    Elem inverse(const Elem& a) const {
        // solve (mult-by-a) x = 1
        PadicMatrix m(n_, n_, p_);
        Elem col = a;
        for (long j = 0; j < n_; ++j) {
            for (long i = 0; i < n_; ++i) m.at(i, j) = col[i];
            col = mul_by_T(col);
        }
        PadicMatrix rhs(n_, 1, p_);
        rhs.at(0, 0) = PadicElement::one(p_, prec_);
        auto x = solve_linear(m, rhs);
        Elem r = zero();
        for (long i = 0; i < n_; ++i) r[i] = x.at(i, 0);
        return r;
    }

    Elem teichmuller(const Elem& a) const {
        Elem x = a;
        for (long i = 0; i <= prec_ + 2; ++i) x = pow_p(x);
        return x;
    }

    // Log of a unit: log(u / omega(u)) by the log(1+z) series
    Elem log_unit(const Elem& u) const {
        Elem w = mul(u, inverse(teichmuller(u)));
        Elem z = w;
        z[0] -= PadicElement::one(p_, prec_); // v(z) >= 1 componentwise
        Elem acc = zero(), zp = z;
        for (long k = 1; k <= 4 * prec_ + 8; ++k) {
            mpq_class q(k % 2 ? 1 : -1, k);
            q.canonicalize();
            Elem term = zp;
            bool live = false;
            for (long i = 0; i < n_; ++i) {
                term[i] = coeff_times_rat(term[i], q);
                if (!term[i].is_exact_zero() && term[i].valuation_floor() < prec_) live = true;
            }
            acc = add(acc, term);
            if (!live && k > prec_) break;
            zp = mul(zp, z);
        }
        return acc;
    }

    PadicElement trace(const Elem& a) const {
        PadicElement t = PadicElement::exact_zero(p_);
        for (long i = 0; i < n_; ++i) t += a[i] * s_[i];
        return t;
    }

  private:
    long p_ = 0, prec_ = 0, n_ = 0;
    std::vector<PadicElement> h_;
    std::vector<PadicElement> s_; // power sums
};

// Splits f into the Hensel lifts of its F_p-rational roots and one cofactor.
class DlogMachine {
  public:
    DlogMachine() = default;
    DlogMachine(const HyperellipticCurve& C, long prec) : p_(C.p()), prec_(prec) {
        const RatPoly& f = C.f();
        // F_p-roots of fbar
        std::vector<long> fp_roots;
        for (long x = 0; x < p_; ++x)
            if (C.f_mod_p(x) == 0) fp_roots.push_back(x);
        // current := f embedded with PadicElement coefficients (monic)
        std::vector<PadicElement> cur(f.degree() + 1, PadicElement::exact_zero(p_));
        for (long i = 0; i <= f.degree(); ++i)
            cur[i] = PadicElement::from_rational(p_, f.get(i), prec + 8);
        for (long r0 : fp_roots) {
            PadicElement r = hensel_root(C, r0, prec + 8);
            roots_.push_back(r);
            // deflate: cur / (x - r)
            std::vector<PadicElement> quo(cur.size() - 1, PadicElement::exact_zero(p_));
            PadicElement carry = PadicElement::exact_zero(p_);
            for (long i = static_cast<long>(cur.size()) - 1; i >= 1; --i) {
                carry = cur[i] + carry * r;
                quo[i - 1] = carry;
            }
            cur = quo;
        }
        ring_ = QuotientRing(cur, p_, prec + 8);
    }

    long prime() const { return p_; }
    const std::vector<PadicElement>& lifted_roots() const { return roots_; }
    const QuotientRing& ring() const { return ring_; }

    // sum_r beta(r) [Log(xq - r) - Log(xp - r)]; both points must have unit
    // distance to every root (ordinary affine disks)
    PadicElement value(const PolyZp& beta, const PadicElement& xp, const PadicElement& xq) const {
        PadicElement acc = PadicElement::exact_zero(p_);
        for (auto& r : roots_) {
            PadicElement br = beta.eval(r);
            if (br.is_exact_zero()) continue;
            acc += br * (log_unit_qp(xq - r) - log_unit_qp(xp - r));
        }
        if (ring_.dim() > 0) {
            auto T = ring_.generator();
            auto bq = ring_.from_poly(beta);
            auto dq = ring_.sub(ring_.scalar(xq), T);
            auto dp = ring_.sub(ring_.scalar(xp), T);
            auto lg = ring_.sub(ring_.log_unit(dq), ring_.log_unit(dp));
            acc += ring_.trace(ring_.mul(bq, lg));
        }
        return acc;
    }

    // The same primitive as a series along a disk, normalized against the
    // base value at x_base:  sum_r beta(r) [Log(x(t) - r) - Log(x_base - r)].
    // Weierstrass disks over a lifted root contribute 2L + unit-series; the
    // infinite disks contribute -deg-weighted L.
    LogSeries series_on_disk(const PolyZp& beta, const ResidueDisk& disk, const PadicSeries& xs,
                             const PadicElement& x_base, long order) const {
        LogSeries out = LogSeries::zero(p_, order);
        for (auto& r : roots_) {
            PadicElement br = beta.eval(r);
            if (br.is_exact_zero()) continue;
            out = out + root_term(br, r, disk, xs, x_base, order);
        }
        if (ring_.dim() > 0) out = out + cofactor_term(beta, disk, xs, x_base, order);
        return out;
    }

    PadicElement log_unit_qp(const PadicElement& u) const {
        if (u.is_zero_to_precision() || u.valuation() != 0)
            throw DomainError("log_unit_qp: argument is not a unit");
        PadicElement w = u / u.teichmuller();
        PadicElement z = w - PadicElement::one(p_, w.abs_precision());
        PadicElement acc = PadicElement::exact_zero(p_), zp = z;
        for (long k = 1; k <= 4 * prec_ + 8; ++k) {
            mpq_class q(k % 2 ? 1 : -1, k);
            q.canonicalize();
            acc += coeff_times_rat(zp, q);
            if (zp.is_zero_to_precision() || zp.valuation_floor() - detail::valuation_mpz(mpz_class(k + 1), p_) >= prec_)
                if (k > 2) break;
            zp *= z;
        }
        return acc;
    }

  private:
    long p_ = 0, prec_ = 0;
    std::vector<PadicElement> roots_;
    QuotientRing ring_;

    static PadicElement hensel_root(const HyperellipticCurve& C, long r0, long prec) {
        PadicElement x = PadicElement::from_mpz(C.p(), r0, prec);
        for (int it = 0; it < 64; ++it) {
            PadicElement fx = C.f().eval_padic(x, prec);
            if (fx.is_zero_to_precision() && fx.abs_precision() >= prec - 1) break;
            PadicElement fpx = C.f().derivative().eval_padic(x, prec);
            x = x - fx / fpx;
        }
        return x;
    }

    // log1p of a series with positive-valuation coefficients and zero CT
    static PadicSeries log1p_series(const PadicSeries& z, long order, long prec) {
        long p = z.proto().prime();
        PadicSeries acc(PadicElement::exact_zero(p), order);
        acc.set_tail_bound(PREC_INF / 2, 0);
        PadicSeries zp = z;
        for (long k = 1; k <= order + prec + 4; ++k) {
            mpq_class q(k % 2 ? 1 : -1, k);
            q.canonicalize();
            acc = acc + zp.times_rational(q);
            // z has min_exp >= 1 or positive-valuation constant; either way
            // powers die in (t, p)-adic weight
            if (k > order && k > 2 * prec + 4) break;
            zp = (zp * z).truncated(order);
        }
        return acc;
    }

    LogSeries root_term(const PadicElement& br, const PadicElement& r, const ResidueDisk& disk,
                        const PadicSeries& xs, const PadicElement& x_base, long order) const {
        long p = p_;
        PadicElement base = log_unit_qp(x_base - r);
        if (disk.kind == ResidueDisk::Kind::infinite) {
            // x - r = u^-1 (1 - r u): Log = -L + log1p(-r u)
            PadicSeries z(PadicElement::exact_zero(p), order);
            z.set(1, -r);
            z.set_tail_bound(PREC_INF / 2, 0);
            PadicSeries s = log1p_series(z, order, prec_);
            PadicSeries cst(PadicElement::exact_zero(p), order);
            cst.set(0, -base);
            cst.set_tail_bound(PREC_INF / 2, 0);
            PadicSeries Lcoef(PadicElement::exact_zero(p), order);
            Lcoef.set(0, -PadicElement::one(p, prec_));
            Lcoef.set_tail_bound(PREC_INF / 2, 0);
            return LogSeries(s + cst, Lcoef, PadicSeries(PadicElement::exact_zero(p), order))
                .times_coeff(br);
        }
        // affine or weierstrass: x(t) - r
        PadicSeries diff = xs;
        PadicSeries cr(PadicElement::exact_zero(p), order);
        cr.set(0, -r);
        cr.set_tail_bound(PREC_INF / 2, 0);
        diff = diff + cr;
        PadicElement c0 = diff.truncation_order() > 0 && diff.stored_nonzero(0)
                              ? diff.get(0)
                              : PadicElement::zero_to_precision(p, prec_);
        bool own_root = disk.kind == ResidueDisk::Kind::weierstrass && c0.is_zero_to_precision();
        if (!own_root) {
            // unit constant term: Log(diff) = Log(c0) + log1p(diff/c0 - 1)
            PadicSeries rel = diff.times_coeff(c0.inverse());
            rel.set(0, PadicElement::exact_zero(p));
            PadicSeries s = log1p_series(rel, order, prec_);
            PadicSeries cst(PadicElement::exact_zero(p), order);
            cst.set(0, log_unit_qp(c0) - base);
            cst.set_tail_bound(PREC_INF / 2, 0);
            PadicSeries zero(PadicElement::exact_zero(p), order);
            return LogSeries(s + cst, zero, zero).times_coeff(br);
        }
        // the disk's own root: x(t) - r = t^2 w(t), w(0) a unit
        PadicSeries w = diff.shift_exponent(-2);
        w.set_tail_bound(0, 0); // x(t) integral and x0 = r exactly at this precision
        PadicElement w0 = w.get(0);
        PadicSeries rel = w.times_coeff(w0.inverse());
        rel.set(0, PadicElement::exact_zero(p));
        PadicSeries s = log1p_series(rel, order, prec_);
        PadicSeries cst(PadicElement::exact_zero(p), order);
        cst.set(0, log_unit_qp(w0) - base);
        cst.set_tail_bound(PREC_INF / 2, 0);
        PadicSeries Lcoef(PadicElement::exact_zero(p), order);
        Lcoef.set(0, PadicElement::from_mpz(p, 2, prec_));
        Lcoef.set_tail_bound(PREC_INF / 2, 0);
        return LogSeries(s + cst, Lcoef, PadicSeries(PadicElement::exact_zero(p), order)).times_coeff(br);
    }

    LogSeries cofactor_term(const PolyZp& beta, const ResidueDisk& disk, const PadicSeries& xs,
                            const PadicElement& x_base, long order) const {
        long p = p_;
        long n = ring_.dim();
        auto T = ring_.generator();
        auto bq = ring_.from_poly(beta);
        auto base = ring_.log_unit(ring_.sub(ring_.scalar(x_base), T));
        // series with R coefficients: diff(t) = x(t) - T (or u^-1(1 - Tu) at infinity)
        std::vector<QuotientRing::Elem> rel(order, ring_.zero()); // exponents 1..order-1 of the log1p argument
        QuotientRing::Elem c0inv;
        bool at_infinity = disk.kind == ResidueDisk::Kind::infinite;
        QuotientRing::Elem cst_log = ring_.zero();
        if (at_infinity) {
            // x - T = u^-1 (1 - T u): one -L per conjugate root
            if (order > 1) rel[1] = ring_.sub(ring_.zero(), T);
            cst_log = ring_.sub(ring_.zero(), base);
        } else {
            QuotientRing::Elem c0 = ring_.sub(ring_.scalar(xs.get(0)), T);
            c0inv = ring_.inverse(c0);
            for (long e = 1; e < order && e < xs.truncation_order(); ++e) {
                auto xe = xs.get(e);
                if (xe.is_exact_zero()) continue;
                rel[e] = ring_.mul(ring_.scalar(xe), c0inv);
            }
            cst_log = ring_.sub(ring_.log_unit(c0), base);
        }
        // log1p over R-coefficient series
        std::vector<QuotientRing::Elem> acc(order, ring_.zero());
        std::vector<QuotientRing::Elem> zp = rel;
        for (long k = 1; k <= order + prec_ + 2; ++k) {
            mpq_class q(k % 2 ? 1 : -1, k);
            q.canonicalize();
            for (long e = 0; e < order; ++e)
                for (long i = 0; i < n; ++i) acc[e][i] += coeff_times_rat(zp[e][i], q);
            if (k > order) break;
            // zp <- zp * rel (series conv with R mults)
            std::vector<QuotientRing::Elem> nz(order, ring_.zero());
            for (long e1 = 0; e1 < order; ++e1)
                for (long e2 = 1; e1 + e2 < order; ++e2) {
                    bool zero1 = true;
                    for (auto& c : zp[e1])
                        if (!c.is_exact_zero()) zero1 = false;
                    if (zero1) break;
                    nz[e1 + e2] = ring_.add(nz[e1 + e2], ring_.mul(zp[e1], rel[e2]));
                }
            zp = nz;
        }
        PadicSeries s(PadicElement::exact_zero(p), order);
        s.set_tail_bound(-2 * detail_logp(prec_, p), 2); // log1p division slack
        for (long e = 1; e < order; ++e) {
            PadicElement tr = ring_.trace(ring_.mul(bq, acc[e]));
            if (!tr.is_exact_zero()) s.set(e, tr);
        }
        PadicElement cst = ring_.trace(ring_.mul(bq, cst_log));
        s.set(0, cst);
        PadicSeries zero(PadicElement::exact_zero(p), order);
        zero.set_tail_bound(PREC_INF / 2, 0);
        PadicSeries Ls = zero;
        if (at_infinity) Ls.set(0, -ring_.trace(bq));
        return LogSeries(s, Ls, zero);
    }

    static long detail_logp(long k, long p) {
        long b = 0, acc = 1;
        while (acc < k && b < 64) {
            acc *= p;
            ++b;
        }
        return b;
    }
};

} // namespace padicqc
