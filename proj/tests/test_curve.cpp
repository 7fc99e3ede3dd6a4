#include "doctest.h"

#include "padicqc/curve.hpp"

using namespace padicqc;

static HyperellipticCurve kms31() { return HyperellipticCurve::kms(31, PadicContext(3, 12)); }

TEST_CASE("curve validation") {
    CHECK_NOTHROW(kms31());
    CHECK_NOTHROW(HyperellipticCurve::kms(1, PadicContext(3, 8)));
    // bad reduction at p = 3
    bool threw = false;
    try {
        HyperellipticCurve::kms(3, PadicContext(3, 8));
    } catch (const DomainError&) { threw = true; }
    CHECK(threw);
    // non-monic
    RatPoly f;
    f.set(6, 2);
    f.set(0, 1);
    CHECK_THROWS_AS(HyperellipticCurve(f, PadicContext(3, 8)), DomainError);
}

TEST_CASE("involution") {
    auto C = kms31();
    auto P = CurvePoint::affine_exact(C, QuadExt(mpq_class(0)), QuadExt(mpq_class(1)), 12);
    auto W = involution(P);
    CHECK(W.y == -P.y);
    CHECK(W.x == P.x);
    auto WW = involution(W);
    CHECK(WW.y == P.y);
    CHECK(involution(CurvePoint::infinity(true)).kind == CurvePoint::Kind::inf_minus);
}

TEST_CASE("disk enumeration for a=31, p=3") {
    auto C = kms31();
    auto disks = enumerate_disks(C);
    CHECK(disks.size() == 8);
    long n_affine = 0, n_inf = 0, n_w = 0;
    for (auto& d : disks) {
        if (d.kind == ResidueDisk::Kind::affine) ++n_affine;
        if (d.kind == ResidueDisk::Kind::infinite) ++n_inf;
        if (d.kind == ResidueDisk::Kind::weierstrass) ++n_w;
    }
    CHECK(n_affine == 6);
    CHECK(n_inf == 2);
    CHECK(n_w == 0);
    CHECK(C.point_count_fp() == 8);

    for (auto& d : disks)
        if (d.kind == ResidueDisk::Kind::affine)
            CHECK((d.ybar * d.ybar) % 3 == C.f_mod_p(d.xbar));
}

TEST_CASE("disk count equals #X(F_p) for several curves") {
    for (long p : {3L, 5L, 7L}) {
        for (long a : {1L, 5L, 31L, -2L}) {
            RatPoly f;
            f.set(6, 1);
            f.set(4, a);
            f.set(2, a);
            f.set(0, 1);
            mpq_class disc = f.discriminant();
            if (disc == 0 || detail::valuation_mpz(disc.get_num(), p) != 0) continue;
            HyperellipticCurve C(f, PadicContext(p, 8));
            auto disks = enumerate_disks(C);
            long weight = 0; // each disk corresponds to one F_p-point
            for (auto& d : disks) {
                (void)d;
                ++weight;
            }
            CHECK(weight == C.point_count_fp());
        }
    }
}

TEST_CASE("reduction of specific points") {
    auto C = kms31();
    long prec = 12;
    auto P = CurvePoint::affine_exact(C, QuadExt(mpq_class(0)), QuadExt(mpq_class(1)), prec);
    auto d = reduce_mod_p(C, P);
    CHECK(d.kind == ResidueDisk::Kind::affine);
    CHECK(d.xbar == 0);
    CHECK(d.ybar == 1);

    auto Q = CurvePoint::affine_exact(C, QuadExt(mpq_class(7)), QuadExt(mpq_class(440)), prec);
    auto dq = reduce_mod_p(C, Q);
    CHECK(dq.xbar == 1);
    CHECK(dq.ybar == 2);

    // x of negative valuation: infinite disk
    auto xr = PadicElement::from_rational(3, mpq_class(1, 3) + 1, prec);
    auto fx = C.f().eval_padic(xr, prec);
    auto yr = fx.sqrt(fx.unit().get_si() % 3 == 1 ? 1 : 2);
    auto R = CurvePoint::affine_padic(C, xr, yr);
    auto dr = reduce_mod_p(C, R);
    CHECK(dr.kind == ResidueDisk::Kind::infinite);

    // involution commutes with reduction
    auto dw = reduce_mod_p(C, involution(Q));
    CHECK(dw == involution_disk(dq, 3));
}

TEST_CASE("local expansions satisfy y^2 = f(x)") {
    auto C = kms31();
    long order = 12, prec = 12;
    for (auto& d : enumerate_disks(C)) {
        auto le = local_expansion(C, d, order, prec);
        PadicSeries lhs = le.y * le.y;
        PadicSeries fx(PadicElement::exact_zero(3), lhs.truncation_order());
        for (long e = C.f().degree(); e >= 0; --e) {
            fx = (fx * le.x).truncated(lhs.truncation_order());
            PadicSeries cst(PadicElement::exact_zero(3), lhs.truncation_order());
            cst.set(0, PadicElement::from_rational(3, C.f().get(e), prec));
            fx = fx + cst;
        }
        auto diff = lhs - fx;
        for (long e = diff.min_exp(); e < diff.truncation_order(); ++e) {
            auto c = diff.get(e);
            if (!c.is_exact_zero()) CHECK(c.is_zero_to_precision());
        }
    }
}

TEST_CASE("weierstrass disk expansion on a curve with f(xbar)=0 mod p") {
    // f = x^6+x^4+x^2+1 mod 5 vanishes at x = 2, 3
    auto C = HyperellipticCurve::kms(31, PadicContext(5, 10));
    bool found = false;
    for (auto& d : enumerate_disks(C))
        if (d.kind == ResidueDisk::Kind::weierstrass) {
            found = true;
            auto le = local_expansion(C, d, 10, 10);
            auto c0 = disk_center(C, d, 10);
            auto fx = C.f().eval_padic(c0.x, 10);
            CHECK(fx.is_zero_to_precision());
            auto fp = C.f().derivative().eval_padic(c0.x, 10);
            auto expect = fp.inverse();
            CHECK(le.x.get(2) == expect.with_abs_precision(le.x.get(2).abs_precision()));
        }
    CHECK(found);
}

TEST_CASE("infinite expansion leading term") {
    auto C = kms31();
    auto d = ResidueDisk{};
    d.kind = ResidueDisk::Kind::infinite;
    d.plus = true;
    auto le = local_expansion(C, d, 10, 12);
    CHECK(le.y.min_exp() == -3);
    CHECK(le.y.get(-3) == PadicElement::one(3, 12));
    auto dm = d;
    dm.plus = false;
    auto lem = local_expansion(C, dm, 10, 12);
    CHECK(lem.y.get(-3) == -PadicElement::one(3, 12));
}

TEST_CASE("kms quotient maps land on E") {
    auto C = kms31();
    long prec = 12;
    auto check_on_E = [&](const EllipticImage& e) {
        PadicElement a = PadicElement::from_mpz(3, 31, prec);
        PadicElement rhs = ((e.x + a) * e.x + a) * e.x + PadicElement::one(3, prec);
        auto diff = e.y * e.y - rhs;
        if (!diff.is_exact_zero()) CHECK(diff.is_zero_to_precision());
    };
    auto P = CurvePoint::affine_exact(C, QuadExt(mpq_class(1)), QuadExt(mpq_class(8)), prec);
    auto [e1, e2] = kms_quotient_maps(C, P);
    CHECK(e1.x == P.x * P.x);
    CHECK(e1.y == P.y);
    check_on_E(e1);
    check_on_E(e2);

    auto Q = CurvePoint::affine_exact(C, QuadExt(mpq_class(7)), QuadExt(mpq_class(440)), prec);
    auto [q1, q2] = kms_quotient_maps(C, Q);
    check_on_E(q1);
    check_on_E(q2); // (1/49, 440/343) lands on E

    auto B = CurvePoint::affine_exact(C, QuadExt(mpq_class(0)), QuadExt(mpq_class(1)), prec);
    CHECK_THROWS_AS(kms_quotient_maps(C, B), DomainError);
}

TEST_CASE("teichmuller disk centers are frobenius fixed") {
    auto C = kms31();
    for (auto& d : enumerate_disks(C)) {
        if (d.kind != ResidueDisk::Kind::affine) continue;
        auto c0 = disk_center(C, d, 10);
        if (!c0.x.is_exact_zero()) {
            auto fixed = c0.x.pow(3) - c0.x;
            CHECK(fixed.is_zero_to_precision());
        }
    }
}

TEST_CASE("on-curve validation rejects off-curve points") {
    auto C = kms31();
    CHECK_THROWS_AS(CurvePoint::affine_exact(C, QuadExt(mpq_class(1)), QuadExt(mpq_class(3)), 12),
                    DomainError);
}
