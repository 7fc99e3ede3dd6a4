#pragma once

// The coordinate algebra of Y' = {y^2 = f(x), y invertible} as finite sums
// sum_m A_m(x) y^m, and the pole-order reductions on its 1-forms.
//
// Forms split under y -> -y.  The odd part reduces against the basis
// omega_i = x^i dx/(2y), i = 0..2g, producing an exact primitive; the even
// part is pulled from the projective line and reduces to an exact primitive
// plus an elementary polynomial part plus a dlog class  beta(x) f'(x)/f(x) dx
// with deg beta < deg f.

#include <map>
#include <vector>

#include "padicqc/curve.hpp"
#include "padicqc/errors.hpp"
#include "padicqc/padic.hpp"
#include "padicqc/poly_zp.hpp"
#include "padicqc/series.hpp"

namespace padicqc {

struct MWContext {
    long p = 0;
    long g = 0;
    long prec = 0;     // shared representative precision of the stage
    long prec_div = 0; // generous modulus for the fixed divisors f, f'
    PolyZp f, fp;      // f and f' at prec
    PolyZp f_div, fp_div; // the same at prec_div (value representatives)
    PolyZp bez_u, bez_v;  // u f + v f' = 1

    MWContext() = default;
    MWContext(const HyperellipticCurve& C, long prec_) : p(C.p()), g(C.genus()), prec(prec_) {
        prec_div = 2 * prec + 96;
        f = PolyZp::from_rat_poly(C.f(), p, prec);
        fp = PolyZp::from_rat_poly(C.f().derivative(), p, prec);
        f_div = PolyZp::from_rat_poly(C.f(), p, prec_div);
        fp_div = PolyZp::from_rat_poly(C.f().derivative(), p, prec_div);
        auto [u, v] = RatPoly::bezout_coprime(C.f(), C.f().derivative());
        bez_u = PolyZp::from_rat_poly(u, p, prec);
        bez_v = PolyZp::from_rat_poly(v, p, prec);
    }

    // A = alpha f + beta f' with deg beta < deg f.  The divisor representatives
    // are held at prec_div >= any dividend modulus seen here.
    std::pair<PolyZp, PolyZp> split_f_fp(const PolyZp& A) const {
        PolyZp av = A * bez_v;
        if (av.prec() > prec_div) throw Error("split_f_fp: dividend modulus exceeds divisor table");
        PolyZp beta = av.divmod_monic(f_div).second;
        PolyZp num = A - beta * fp;
        auto [alpha, rem] = num.divmod_monic(f_div);
        if (!rem.is_zero_rep()) throw Error("split_f_fp: inexact division (internal)");
        return {alpha, beta};
    }
};

// Element sum_m A_m(x) y^m, keyed by the y-exponent m.  Exponents >= 2 are
// folded into {0,1} with y^2 = f at normalization time.
struct MWElem {
    long p = 0;
    std::map<long, PolyZp> lev;

    bool empty() const { return lev.empty(); }

    void add_level(long m, const PolyZp& A) {
        if (A.degree() < 0) return;
        auto it = lev.find(m);
        if (it == lev.end()) lev.emplace(m, A);
        else it->second = it->second + A;
    }

    void normalize(const MWContext& ctx) {
        // fold m >= 2 down via y^2 = f
        while (true) {
            auto it = lev.rbegin();
            if (it == lev.rend() || it->first < 2) break;
            long m = it->first;
            PolyZp A = it->second;
            lev.erase(m);
            add_level(m - 2, A * ctx.f);
        }
        for (auto it = lev.begin(); it != lev.end();) {
            it->second.trim();
            if (it->second.degree() < 0) it = lev.erase(it);
            else ++it;
        }
    }

    MWElem operator+(const MWElem& o) const {
        MWElem r = *this;
        for (auto& [m, A] : o.lev) r.add_level(m, A);
        return r;
    }
    MWElem operator-() const {
        MWElem r = *this;
        for (auto& [m, A] : r.lev) A = A.times_long(-1);
        return r;
    }
    MWElem operator-(const MWElem& o) const { return *this + (-o); }

    MWElem times_padic(const PadicElement& s) const {
        MWElem r;
        r.p = p;
        for (auto& [m, A] : lev) r.lev.emplace(m, A.times_padic(s));
        return r;
    }
    MWElem shift_x(long k) const {
        MWElem r;
        r.p = p;
        for (auto& [m, A] : lev) r.lev.emplace(m, A.shift_x(k));
        return r;
    }
    MWElem shift_y(long k) const {
        MWElem r;
        r.p = p;
        for (auto& [m, A] : lev) r.lev.emplace(m + k, A);
        return r;
    }

    // d(elem) as the coefficient of dx: d(A y^m) = (A' + (m/2) A f' y^-2) y^m dx
    MWElem differential_coefficient(const MWContext& ctx) const {
        MWElem r;
        r.p = p;
        for (auto& [m, A] : lev) {
            r.add_level(m, A.derivative());
            if (m != 0) r.add_level(m - 2, (A * ctx.fp).times_long(m).div_long(2));
        }
        r.normalize(ctx);
        return r;
    }

    PadicElement eval(const PadicElement& x, const PadicElement& y) const {
        PadicElement acc = PadicElement::exact_zero(p);
        for (auto& [m, A] : lev) {
            PadicElement t = A.eval(x);
            acc += m == 0 ? t : t * y.pow(m);
        }
        return acc;
    }

    long min_abs_precision() const {
        long a = PREC_INF;
        for (auto& [m, A] : lev) a = std::min(a, A.abs_precision() + std::max(0L, A.vmin()));
        return a;
    }

    // Expansion along a disk parametrisation, as a Laurent series clipped to
    // [window_lo, trunc).  Dropped deep-pole terms must sit below `cap`
    // p-adically; coefficient precisions are capped accordingly.
    PadicSeries expand(const LocalExpansion& le, long order, long window_lo, long cap) const;

    // Full product (used for small operands).
    MWElem mul(const MWElem& o, const MWContext& ctx) const {
        MWElem r;
        r.p = p;
        for (auto& [m1, A1] : lev)
            for (auto& [m2, A2] : o.lev) r.add_level(m1 + m2, A1 * A2);
        r.normalize(ctx);
        return r;
    }
};

// Bivariate Kronecker product of two odd elements (big operands): writes both
// as y^(1-2k)-indexed vectors, packs (x, k) into one integer each, multiplies
// once, unpacks.  The result is even (y-exponents 2-2K), normalized back.
inline MWElem mul_odd_big(const MWElem& a, const MWElem& b, const MWContext& ctx) {
    long p = a.p;
    auto as_vec = [](const MWElem& e, long& nx) {
        long kmax = 0;
        nx = 0;
        for (auto& [m, A] : e.lev) {
            if (m > 1 || m % 2 == 0) throw DomainError("mul_odd_big: operand not odd-normalized");
            kmax = std::max(kmax, (1 - m) / 2);
            nx = std::max(nx, A.degree() + 1);
        }
        std::vector<const PolyZp*> v(kmax + 1, nullptr);
        for (auto& [m, A] : e.lev) v[(1 - m) / 2] = &A;
        return v;
    };
    long nxa = 0, nxb = 0;
    auto va = as_vec(a, nxa), vb = as_vec(b, nxb);
    if (va.empty() || vb.empty()) return MWElem{p, {}};

    // align shifts and precision
    long shift_a = 0, shift_b = 0, abs_a = PREC_INF, abs_b = PREC_INF;
    long vmin_a = 0, vmin_b = 0;
    for (auto* A : va)
        if (A) {
            shift_a = std::max(shift_a, A->shift());
            abs_a = std::min(abs_a, A->abs_precision());
            vmin_a = std::min(vmin_a, A->vmin() >= PREC_INF / 8 ? 0 : A->vmin());
        }
    for (auto* B : vb)
        if (B) {
            shift_b = std::max(shift_b, B->shift());
            abs_b = std::min(abs_b, B->abs_precision());
            vmin_b = std::min(vmin_b, B->vmin() >= PREC_INF / 8 ? 0 : B->vmin());
        }
    long abs = std::min(abs_a + vmin_b, abs_b + vmin_a);
    long shift = shift_a + shift_b;
    long prec = abs + shift;
    if (prec <= 0) throw PrecisionError("mul_odd_big: precision exhausted");
    mpz_class mod = detail::pow_p(p, prec);

    size_t coeff_bits = mpz_sizeinbase(mod.get_mpz_t(), 2);
    size_t slot_bits = (2 * coeff_bits + 80 + 63) / 64 * 64;
    size_t words = slot_bits / 64;
    long nx = nxa + nxb; // room for the x-convolution inside one k-slot row
    auto pack = [&](const std::vector<const PolyZp*>& v, long target_shift) {
        std::vector<uint64_t> buf(v.size() * nx * words + 2, 0);
        for (size_t k = 0; k < v.size(); ++k) {
            if (!v[k]) continue;
            mpz_class lift = detail::pow_p(p, target_shift - v[k]->shift());
            for (long i = 0; i <= v[k]->degree(); ++i) {
                if (v[k]->rep(i) == 0) continue;
                mpz_class val = (v[k]->rep(i) * lift) % mod;
                size_t count = 0;
                mpz_export(buf.data() + (k * nx + i) * words, &count, -1, 8, 0, 0, val.get_mpz_t());
            }
        }
        mpz_class big;
        mpz_import(big.get_mpz_t(), buf.size(), -1, 8, 0, 0, buf.data());
        return big;
    };
    mpz_class prod = pack(va, shift_a) * pack(vb, shift_b);

    long nk = static_cast<long>(va.size() + vb.size()) - 1;
    std::vector<uint64_t> buf(static_cast<size_t>(nk) * nx * words + 4, 0);
    size_t count = 0;
    mpz_export(buf.data(), &count, -1, 8, 0, 0, prod.get_mpz_t());
    MWElem out;
    out.p = p;
    for (long k = 0; k < nk; ++k) {
        PolyZp A(p, prec, shift);
        bool any = false;
        for (long i = 0; i < nx; ++i) {
            mpz_class x;
            mpz_import(x.get_mpz_t(), words, -1, 8, 0, 0, buf.data() + (static_cast<size_t>(k) * nx + i) * words);
            if (x == 0) continue;
            A.set_rep(i, x);
            any = true;
        }
        if (!any) continue;
        // k-slot k corresponds to y^(2-2k)
        out.add_level(2 - 2 * k, A);
    }
    out.normalize(ctx);
    return out;
}

inline PadicSeries MWElem::expand(const LocalExpansion& le, long order, long window_lo, long cap) const {
    PadicElement proto = PadicElement::exact_zero(p);
    PadicSeries acc(proto, order);
    acc.set_tail_bound(PREC_INF / 2, 0);
    if (lev.empty()) return acc;

    auto clip = [&](PadicSeries s) {
        if (s.min_exp() >= window_lo) return s;
        PadicSeries r(proto, s.truncation_order());
        bool dropped = false;
        for (long e = window_lo; e < s.truncation_order(); ++e) {
            auto c = s.get(e);
            if (!c.is_exact_zero()) r.set(e, c);
        }
        for (long e = s.min_exp(); e < window_lo; ++e) {
            auto c = s.get(e);
            if (c.is_exact_zero()) continue;
            if (c.valuation_floor() < cap)
                throw PrecisionError("MWElem::expand: significant term clipped (widen window)");
            dropped = true;
        }
        if (s.has_tail_bound()) r.set_tail_bound(s.tail_mu(), s.tail_slack());
        if (dropped) {
            // dropping O(p^cap) terms caps every certified precision at cap
            PadicSeries capped(proto, r.truncation_order());
            for (long e = r.min_exp(); e < r.truncation_order(); ++e) {
                auto c = r.get(e);
                if (!c.is_exact_zero()) capped.set(e, c.with_abs_precision(cap));
            }
            if (r.has_tail_bound()) capped.set_tail_bound(r.tail_mu(), r.tail_slack());
            return capped;
        }
        return r;
    };

    // y-power ladder
    PadicSeries y1 = le.y.truncated(order);
    PadicSeries yinv = y1.inverse();
    // inverse of a unit-leading integral series keeps integral coefficients
    yinv.set_tail_bound(0, 0);
    PadicSeries yinv2 = clip((yinv * yinv).truncated(order));
    std::map<long, PadicSeries> ypow;
    PadicSeries one_series(PadicElement::exact_zero(p), order);
    one_series.set(0, PadicElement::one(p, EXACT_PREC));
    one_series.set_tail_bound(PREC_INF / 2, 0);
    ypow[0] = one_series;
    ypow[1] = y1;
    ypow[-1] = yinv;
    long mmin = lev.begin()->first;
    for (long m = -2; m >= mmin; --m)
        ypow[m] = clip((ypow[m + 2] * yinv2).truncated(order));

    for (auto& [m, A] : lev) {
        PadicSeries ax = clip(A.template eval_series<PadicSeries>(le.x, order));
        acc = acc + clip((ax * ypow.at(m)).truncated(order));
    }
    return acc;
}

// A 1-form (coefficient of dx) on the odd part.
struct OddReduction {
    std::vector<PadicElement> basis; // coordinates on omega_i = x^i dx/(2y), i = 0..2g
    MWElem primitive;                // F with  form = dF + sum basis_i omega_i
};

inline OddReduction reduce_odd(MWElem form, const MWContext& ctx) {
    long p = ctx.p, g = ctx.g;
    form.normalize(ctx);
    MWElem F;
    F.p = p;
    // fold y^{+1} into y^{-1}
    if (form.lev.count(1)) {
        PolyZp A = form.lev.at(1);
        form.lev.erase(1);
        form.add_level(-1, A * ctx.f);
    }
    for (auto& [m, A] : form.lev) {
        (void)A;
        if (m >= 0 || (-m) % 2 == 0) throw DomainError("reduce_odd: even component present");
    }
    // y-pole reduction
    while (!form.lev.empty() && form.lev.begin()->first < -1) {
        long mneg = form.lev.begin()->first; // = -m
        long m = -mneg;
        PolyZp A = form.lev.begin()->second;
        form.lev.erase(mneg);
        auto [alpha, beta] = ctx.split_f_fp(A);
        // A y^-m dx = [alpha + 2 beta'/(m-2)] y^-(m-2) dx + d(-2/(m-2) beta y^-(m-2))
        PolyZp carry = alpha + beta.derivative().times_long(2).div_long(m - 2);
        form.add_level(mneg + 2, carry);
        F.add_level(mneg + 2, beta.times_long(-2).div_long(m - 2));
    }
    OddReduction out;
    out.primitive = F;
    out.basis.assign(2 * g + 1, PadicElement::exact_zero(p));
    if (form.lev.empty()) return out;
    PolyZp A = form.lev.begin()->second;
    // x-degree reduction at the y^-1 level
    while (A.degree() >= 2 * g + 1) {
        long D = A.degree(), s = D - (2 * g + 1);
        PadicElement lam = A.coeff(D) / PadicElement::from_mpz(p, s + g + 1, ctx.prec + 8);
        // d(x^s y) = [s x^(s-1) f + (1/2) x^s f'] y^-1 dx
        PolyZp rel = ctx.f.shift_x(s > 0 ? s - 1 : 0).times_long(s);
        if (s == 0) rel = PolyZp(p, ctx.prec); // s x^(s-1) f term vanishes
        rel = rel + ctx.fp.shift_x(s).div_long(2);
        A = A - rel.times_padic(lam);
        A.trim();
        if (A.degree() >= D) throw Error("reduce_odd: x-degree reduction stalled (internal)");
        PolyZp add(p, ctx.prec);
        add.set_rep(0, 1);
        F.add_level(1, add.shift_x(s).times_padic(lam));
    }
    for (long i = 0; i <= std::min<long>(2 * g, A.degree()); ++i)
        out.basis[i] = A.coeff(i) + A.coeff(i); // omega_i carries 1/(2y)
    out.primitive = F;
    return out;
}

// Even part: form = d(primitive) + poly_part(x) dx + dlog_numer(x) f'/f dx.
struct EvenReduction {
    MWElem primitive;
    PolyZp poly_part;
    PolyZp dlog_numer; // deg < deg f
};

inline EvenReduction reduce_even(MWElem form, const MWContext& ctx) {
    long p = ctx.p;
    form.normalize(ctx);
    MWElem F;
    F.p = p;
    for (auto& [m, A] : form.lev) {
        (void)A;
        if (m > 0 || (-m) % 2 != 0) throw DomainError("reduce_even: odd component present");
    }
    while (!form.lev.empty() && form.lev.begin()->first < -2) {
        long mneg = form.lev.begin()->first;
        long m = -mneg;
        PolyZp A = form.lev.begin()->second;
        form.lev.erase(mneg);
        auto [alpha, beta] = ctx.split_f_fp(A);
        PolyZp carry = alpha + beta.derivative().times_long(2).div_long(m - 2);
        form.add_level(mneg + 2, carry);
        F.add_level(mneg + 2, beta.times_long(-2).div_long(m - 2));
    }
    EvenReduction out;
    out.poly_part = PolyZp(p, ctx.prec);
    out.dlog_numer = PolyZp(p, ctx.prec);
    if (form.lev.count(0)) out.poly_part = form.lev.at(0);
    if (form.lev.count(-2)) {
        auto [alpha, beta] = ctx.split_f_fp(form.lev.at(-2));
        out.poly_part = out.poly_part + alpha;
        out.dlog_numer = beta;
    }
    out.primitive = F;
    return out;
}

} // namespace padicqc
