#pragma once

// Even-degree hyperelliptic curves y^2 = f(x), deg f = 2g+2, monic, with the
// two points at infinity.  Everything here assumes good reduction at the odd
// prime of the context: v_p(disc f) = 0 and p-integral coefficients.
//
// Conventions fixed here and relied on downstream:
//   * inf_plus is the point at infinity where y/x^(g+1) -> +1,
//   * the local parameter is t = x - x0 on ordinary affine disks, t = y on
//     Weierstrass disks and u = 1/x on the two infinite disks,
//   * disk centers are Frobenius-fixed: Teichmuller lifts on ordinary disks,
//     the Weierstrass point itself / the infinite point itself elsewhere.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "padicqc/errors.hpp"
#include "padicqc/padic.hpp"
#include "padicqc/rational.hpp"
#include "padicqc/series.hpp"

namespace padicqc {

class HyperellipticCurve {
  public:
    HyperellipticCurve(RatPoly f, PadicContext ctx) : f_(std::move(f)), ctx_(ctx) {
        long deg = f_.degree();
        if (deg < 4 || deg % 2 != 0) throw DomainError("curve: f must have even degree >= 4");
        if (f_.leading() != 1) throw DomainError("curve: f must be monic");
        genus_ = (deg - 2) / 2;
        for (auto& c : f_.coeffs())
            if (detail::valuation_mpz(c.get_den(), ctx_.p) != 0)
                throw DomainError("curve: coefficients are not p-integral");
        mpq_class disc = f_.discriminant();
        if (disc == 0) throw DomainError("curve: singular model (disc = 0)");
        long v = detail::valuation_mpz(disc.get_num(), ctx_.p) - detail::valuation_mpz(disc.get_den(), ctx_.p);
        if (v != 0) throw DomainError("curve: bad reduction at p (p divides disc f)");
    }

    static HyperellipticCurve kms(const mpq_class& a, PadicContext ctx) {
        RatPoly f;
        f.set(6, 1);
        f.set(4, a);
        f.set(2, a);
        f.set(0, 1);
        return HyperellipticCurve(std::move(f), ctx);
    }

    const RatPoly& f() const { return f_; }
    long genus() const { return genus_; }
    const PadicContext& context() const { return ctx_; }
    long p() const { return ctx_.p; }

    std::optional<mpq_class> kms_a() const {
        if (f_.degree() != 6 || f_.get(0) != 1 || f_.get(1) != 0 || f_.get(3) != 0 || f_.get(5) != 0 ||
            f_.get(2) != f_.get(4))
            return std::nullopt;
        return f_.get(2);
    }

    long f_mod_p(long xbar) const {
        long p = ctx_.p, acc = 0;
        for (long e = f_.degree(); e >= 0; --e) {
            mpq_class c = f_.get(e);
            mpz_class num = c.get_num() % p, den = c.get_den() % p;
            long cn = ((num.get_si() % p) + p) % p;
            long cd = ((den.get_si() % p) + p) % p;
            long inv = 1;
            for (long t = 1; t < p; ++t)
                if ((t * cd) % p == 1) { inv = t; break; }
            acc = (acc * xbar + cn * inv) % p;
        }
        return acc;
    }

    bool is_square_mod_p(long a) const {
        a = ((a % ctx_.p) + ctx_.p) % ctx_.p;
        for (long t = 0; t < ctx_.p; ++t)
            if ((t * t) % ctx_.p == a) return true;
        return false;
    }

    long point_count_fp() const {
        long p = ctx_.p, n = 2; // two rational points at infinity (monic even model)
        for (long x = 0; x < p; ++x) {
            long fx = f_mod_p(x);
            if (fx == 0) n += 1;
            else if (is_square_mod_p(fx)) n += 2;
        }
        return n;
    }

  private:
    RatPoly f_;
    PadicContext ctx_;
    long genus_;
};

struct CurvePoint {
    enum class Kind { affine, inf_plus, inf_minus };
    Kind kind = Kind::affine;
    PadicElement x, y;
    std::optional<QuadExt> exact_x, exact_y;

    static CurvePoint infinity(bool plus) {
        CurvePoint P;
        P.kind = plus ? Kind::inf_plus : Kind::inf_minus;
        return P;
    }
    static CurvePoint affine_exact(const HyperellipticCurve& C, const QuadExt& ex, const QuadExt& ey,
                                   long prec, long sqrt_d_residue = 0) {
        // exact on-curve check over Q(sqrt d)
        QuadExt fx(mpq_class(0));
        for (long e = C.f().degree(); e >= 0; --e) fx = fx * ex + QuadExt(C.f().get(e));
        if (!(ey * ey == fx)) throw DomainError("point is not on the curve");
        CurvePoint P;
        P.x = ex.embed(C.p(), prec, sqrt_d_residue);
        P.y = ey.embed(C.p(), prec, sqrt_d_residue);
        P.exact_x = ex;
        P.exact_y = ey;
        return P;
    }
    static CurvePoint affine_padic(const HyperellipticCurve& C, PadicElement px, PadicElement py) {
        PadicElement fx = C.f().eval_padic(px, px.abs_precision() + 2);
        PadicElement diff = py * py - fx;
        if (!diff.is_exact_zero() && !diff.is_zero_to_precision())
            throw DomainError("point is not on the curve to stated precision");
        CurvePoint P;
        P.x = std::move(px);
        P.y = std::move(py);
        return P;
    }
    bool at_infinity() const { return kind != Kind::affine; }

    std::string to_string() const {
        if (kind == Kind::inf_plus) return "inf+";
        if (kind == Kind::inf_minus) return "inf-";
        if (exact_x && exact_y) return "(" + exact_x->to_string() + ", " + exact_y->to_string() + ")";
        return "(" + x.to_string() + ", " + y.to_string() + ")";
    }
};

inline CurvePoint involution(const CurvePoint& P) {
    if (P.kind == CurvePoint::Kind::inf_plus) return CurvePoint::infinity(false);
    if (P.kind == CurvePoint::Kind::inf_minus) return CurvePoint::infinity(true);
    CurvePoint Q = P;
    Q.y = -Q.y;
    if (Q.exact_y) Q.exact_y = QuadExt(-Q.exact_y->a, -Q.exact_y->b, Q.exact_y->d);
    return Q;
}

struct ResidueDisk {
    enum class Kind { affine, weierstrass, infinite };
    Kind kind = Kind::affine;
    long xbar = 0; // affine / weierstrass
    long ybar = 0; // affine only
    bool plus = true; // infinite only

    bool operator==(const ResidueDisk& o) const {
        return kind == o.kind && xbar == o.xbar && ybar == o.ybar && plus == o.plus;
    }
    bool operator<(const ResidueDisk& o) const {
        auto key = [](const ResidueDisk& d) {
            return std::tuple<int, long, long, int>(static_cast<int>(d.kind), d.xbar, d.ybar, d.plus ? 0 : 1);
        };
        return key(*this) < key(o);
    }
    std::string label() const {
        if (kind == Kind::infinite) return plus ? "inf+" : "inf-";
        if (kind == Kind::weierstrass) return "(" + std::to_string(xbar) + ", 0)";
        return "(" + std::to_string(xbar) + ", " + std::to_string(ybar) + ")";
    }
};

inline ResidueDisk involution_disk(const ResidueDisk& d, long p) {
    ResidueDisk w = d;
    if (d.kind == ResidueDisk::Kind::infinite) w.plus = !d.plus;
    if (d.kind == ResidueDisk::Kind::affine) w.ybar = (p - d.ybar) % p;
    return w;
}

// Disks in a fixed deterministic order: affine/weierstrass by (xbar, ybar),
// then inf+, inf-.
inline std::vector<ResidueDisk> enumerate_disks(const HyperellipticCurve& C) {
    std::vector<ResidueDisk> out;
    long p = C.p();
    for (long x = 0; x < p; ++x) {
        long fx = C.f_mod_p(x);
        if (fx == 0) {
            ResidueDisk d;
            d.kind = ResidueDisk::Kind::weierstrass;
            d.xbar = x;
            out.push_back(d);
        } else if (C.is_square_mod_p(fx)) {
            for (long y = 1; y < p; ++y)
                if ((y * y) % p == fx) {
                    ResidueDisk d;
                    d.kind = ResidueDisk::Kind::affine;
                    d.xbar = x;
                    d.ybar = y;
                    out.push_back(d);
                }
        }
    }
    ResidueDisk ip;
    ip.kind = ResidueDisk::Kind::infinite;
    ip.plus = true;
    out.push_back(ip);
    ResidueDisk im = ip;
    im.plus = false;
    out.push_back(im);
    std::sort(out.begin(), out.end());
    return out;
}

inline ResidueDisk reduce_mod_p(const HyperellipticCurve& C, const CurvePoint& P) {
    ResidueDisk d;
    if (P.kind != CurvePoint::Kind::affine) {
        d.kind = ResidueDisk::Kind::infinite;
        d.plus = P.kind == CurvePoint::Kind::inf_plus;
        return d;
    }
    long p = C.p();
    long vx = P.x.is_zero_to_precision() ? PREC_INF : P.x.valuation();
    if (vx < 0) {
        // infinite disk; the sheet is the residue of y/x^(g+1)
        PadicElement ratio = P.y * P.x.pow(C.genus() + 1).inverse();
        long r = ratio.residue();
        d.kind = ResidueDisk::Kind::infinite;
        if (r == 1) d.plus = true;
        else if (r == p - 1) d.plus = false;
        else throw DomainError("point at infinite disk with non-unit sheet ratio");
        return d;
    }
    long xbar = vx >= 1 ? 0 : P.x.residue();
    if (!P.y.is_zero_to_precision() && P.y.valuation() < 0)
        throw DomainError("point with negative-valuation y cannot lie on an affine disk");
    long ybar = P.y.is_zero_to_precision() ? 0 : P.y.residue();
    if (ybar == 0) {
        if (C.f_mod_p(xbar) != 0)
            throw PrecisionError("y indistinguishable from zero on a non-Weierstrass disk");
        d.kind = ResidueDisk::Kind::weierstrass;
        d.xbar = xbar;
        return d;
    }
    d.kind = ResidueDisk::Kind::affine;
    d.xbar = xbar;
    d.ybar = ybar;
    return d;
}

// Frobenius-fixed center of a disk.
inline CurvePoint disk_center(const HyperellipticCurve& C, const ResidueDisk& d, long prec) {
    long p = C.p();
    switch (d.kind) {
        case ResidueDisk::Kind::infinite:
            return CurvePoint::infinity(d.plus);
        case ResidueDisk::Kind::affine: {
            PadicElement x0 = d.xbar == 0 ? PadicElement::exact_zero(p)
                                          : PadicElement::from_mpz(p, d.xbar, prec).teichmuller();
            PadicElement fx = C.f().eval_padic(x0, prec);
            PadicElement y0 = fx.sqrt(d.ybar);
            CurvePoint P;
            P.x = x0;
            P.y = y0;
            return P;
        }
        case ResidueDisk::Kind::weierstrass: {
            // Hensel root of f above xbar
            PadicElement r = PadicElement::from_mpz(p, d.xbar, prec);
            if (d.xbar == 0) r = PadicElement::zero_to_precision(p, 1); // seed; refined below
            PadicElement x = PadicElement::from_mpz(p, d.xbar, prec);
            for (int it = 0; it < 64; ++it) {
                PadicElement fx = C.f().eval_padic(x, prec);
                if (fx.is_zero_to_precision() && fx.abs_precision() >= prec) break;
                PadicElement fpx = C.f().derivative().eval_padic(x, prec);
                x = x - fx / fpx;
            }
            CurvePoint P;
            P.x = x;
            P.y = PadicElement::exact_zero(p);
            return P;
        }
    }
    throw DomainError("disk_center: unreachable");
}

// local parameter value of an affine point inside its disk
inline PadicElement local_parameter_value(const HyperellipticCurve& C, const ResidueDisk& d,
                                          const CurvePoint& P, long prec) {
    switch (d.kind) {
        case ResidueDisk::Kind::affine:
            return P.x - disk_center(C, d, prec).x;
        case ResidueDisk::Kind::weierstrass:
            return P.y;
        case ResidueDisk::Kind::infinite:
            if (P.at_infinity()) return PadicElement::exact_zero(C.p());
            return P.x.inverse();
    }
    throw DomainError("local_parameter_value: unreachable");
}

struct LocalExpansion {
    PadicSeries x, y; // coordinates as series in the disk parameter
};

// Expansion of (x, y) around the center of a disk, to t-order `order`, with
// coefficients carried at absolute precision `prec`.  Coefficients lie in
// Z_p (centers are integral, f is p-integral and the recursions divide only
// by units), which justifies the zero tail floors set here.
inline LocalExpansion local_expansion(const HyperellipticCurve& C, const ResidueDisk& d, long order,
                                      long prec) {
    long p = C.p();
    PadicElement proto = PadicElement::exact_zero(p);
    auto embed_f_on = [&](const PadicSeries& xs) {
        PadicSeries acc(proto, order);
        for (long e = C.f().degree(); e >= 0; --e) {
            acc = (acc * xs).truncated(order);
            PadicSeries cst(proto, order);
            cst.set(0, PadicElement::from_rational(p, C.f().get(e), prec));
            acc = acc + cst;
        }
        return acc;
    };
    switch (d.kind) {
        case ResidueDisk::Kind::affine: {
            CurvePoint c0 = disk_center(C, d, prec);
            PadicSeries xs(proto, order);
            xs.set(0, c0.x);
            xs.set(1, PadicElement::one(p, prec));
            xs.set_tail_bound(0, 0);
            PadicSeries fx = embed_f_on(xs);
            PadicSeries ys = fx.series_sqrt(c0.y);
            ys.set_tail_bound(0, 0);
            return {xs, ys};
        }
        case ResidueDisk::Kind::weierstrass: {
            CurvePoint c0 = disk_center(C, d, prec);
            // solve f(x(t)) = t^2 with x(0) = root, by Newton in t-adic accuracy
            PadicSeries t2 = PadicSeries::monomial(PadicElement::one(p, prec + 4), 2, order);
            PadicSeries xs(proto, order);
            xs.set(0, c0.x);
            long acc_order = 1;
            RatPoly fp = C.f().derivative();
            auto embed_poly_on = [&](const RatPoly& g, const PadicSeries& s) {
                PadicSeries a(proto, order);
                for (long e = g.degree(); e >= 0; --e) {
                    a = (a * s).truncated(order);
                    PadicSeries cst(proto, order);
                    cst.set(0, PadicElement::from_rational(p, g.get(e), prec));
                    a = a + cst;
                }
                return a;
            };
            while (acc_order < order) {
                PadicSeries err = embed_poly_on(C.f(), xs) - t2;
                PadicSeries der = embed_poly_on(fp, xs);
                xs = (xs - (err * der.inverse()).truncated(order)).truncated(order);
                acc_order *= 2;
            }
            xs.set_tail_bound(0, 0);
            PadicSeries ys = PadicSeries::monomial(PadicElement::one(p, prec + 4), 1, order);
            ys.set_tail_bound(0, 0);
            return {xs, ys};
        }
        case ResidueDisk::Kind::infinite: {
            long g = C.genus();
            PadicSeries xs = PadicSeries::monomial(PadicElement::one(p, prec + 4), -1, order);
            xs.set_tail_bound(PREC_INF / 2, 0);
            // h(u)^2 = u^(2g+2) f(1/u), h(0) = 1
            PadicSeries hh(proto, order);
            for (long e = 0; e <= C.f().degree(); ++e)
                hh.set(C.f().degree() - e, PadicElement::from_rational(p, C.f().get(e), prec));
            PadicSeries h = hh.series_sqrt(PadicElement::one(p, prec));
            PadicSeries ys = h.shift_exponent(-(g + 1));
            if (!d.plus) ys = -ys;
            ys.set_tail_bound(0, 0);
            return {xs, ys};
        }
    }
    throw DomainError("local_expansion: unreachable");
}

// Expansion around an affine point P itself (t = x - x(P) or t = y at a
// Weierstrass point of the disk).
inline LocalExpansion local_expansion_at_point(const HyperellipticCurve& C, const CurvePoint& P,
                                               long order, long prec) {
    if (P.at_infinity()) {
        ResidueDisk d;
        d.kind = ResidueDisk::Kind::infinite;
        d.plus = P.kind == CurvePoint::Kind::inf_plus;
        return local_expansion(C, d, order, prec);
    }
    long p = C.p();
    PadicElement proto = PadicElement::exact_zero(p);
    PadicSeries xs(proto, order);
    xs.set(0, P.x);
    xs.set(1, PadicElement::one(p, prec));
    xs.set_tail_bound(0, 0);
    PadicSeries fx(proto, order);
    for (long e = C.f().degree(); e >= 0; --e) {
        fx = (fx * xs).truncated(order);
        PadicSeries cst(proto, order);
        cst.set(0, PadicElement::from_rational(p, C.f().get(e), prec));
        fx = fx + cst;
    }
    PadicSeries ys = fx.series_sqrt(P.y);
    ys.set_tail_bound(0, 0);
    return {xs, ys};
}

// The two maps from a KMS curve to its elliptic quotient y^2 = x^3+ax^2+ax+1.
struct EllipticImage {
    PadicElement x, y;
};
inline std::pair<EllipticImage, EllipticImage> kms_quotient_maps(const HyperellipticCurve& C,
                                                                 const CurvePoint& P) {
    auto a_opt = C.kms_a();
    if (!a_opt) throw DomainError("kms_quotient_maps: not a KMS-family curve");
    if (P.at_infinity()) throw DomainError("kms_quotient_maps: affine point required");
    EllipticImage e1{P.x * P.x, P.y};
    if (P.x.is_zero_to_precision() || P.x.is_exact_zero())
        throw DomainError("kms_quotient_maps: x = 0 is outside the domain of the second map");
    PadicElement xinv = P.x.inverse();
    EllipticImage e2{xinv * xinv, P.y * xinv.pow(3)};
    return {e1, e2};
}

} // namespace padicqc
