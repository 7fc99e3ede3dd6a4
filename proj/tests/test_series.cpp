#include "doctest.h"

#include <random>

#include "padicqc/series.hpp"

using namespace padicqc;

static RatSeries rat_monomial(const mpq_class& c, long e, long tr) {
    return RatSeries::monomial(c, e, tr);
}

TEST_CASE("basic arithmetic over Q") {
    // (1+t)(1-t) mod t^5 = 1 - t^2
    RatSeries one_plus(mpq_class(0), 5), one_minus(mpq_class(0), 5);
    one_plus.set(0, 1);
    one_plus.set(1, 1);
    one_minus.set(0, 1);
    one_minus.set(1, -1);
    auto prod = one_plus * one_minus;
    CHECK(prod.get(0) == 1);
    CHECK(prod.get(1) == 0);
    CHECK(prod.get(2) == -1);
    CHECK(prod.get(3) == 0);
    CHECK(prod.truncation_order() == 5);

    // derivative(t^3) = 3t^2
    auto d = rat_monomial(1, 3, 9).derivative();
    CHECK(d.get(2) == 3);
}

TEST_CASE("compose 1/(1-u) with u = t+t^2") {
    // oracle: 1 + u + u^2 + u^3 with u = t+t^2, mod t^4 -> 1 + t + 2t^2 + 3t^3
    RatSeries outer(mpq_class(0), 4);
    for (int k = 0; k < 4; ++k) outer.set(k, 1);
    RatSeries inner(mpq_class(0), 4);
    inner.set(1, 1);
    inner.set(2, 1);
    auto comp = outer.compose(inner);
    CHECK(comp.get(0) == 1);
    CHECK(comp.get(1) == 1);
    CHECK(comp.get(2) == 2);
    CHECK(comp.get(3) == 3);

    RatSeries unit_inner(mpq_class(0), 4);
    unit_inner.set(0, 1);
    unit_inner.set(1, 1);
    CHECK_THROWS_AS(outer.compose(unit_inner), DomainError);
}

TEST_CASE("formal integration") {
    auto i1 = rat_monomial(1, 2, 8).formal_integrate();
    CHECK(i1.get(3) == mpq_class(1, 3));

    // I(3 t^-3 - 2 t^-2) = -(3/2) t^-2 + 2 t^-1
    RatSeries s(mpq_class(0), 4);
    s.set(-3, 3);
    s.set(-2, -2);
    auto i2 = s.formal_integrate();
    CHECK(i2.get(-2) == mpq_class(-3, 2));
    CHECK(i2.get(-1) == 2);
    CHECK(i2.min_exp() >= -2); // stays in negative exponents

    RatSeries bad(mpq_class(0), 4);
    bad.set(-1, 5);
    CHECK_THROWS_AS(bad.formal_integrate(), ResidueError);
}

TEST_CASE("tail section") {
    RatSeries s(mpq_class(0), 5);
    s.set(-3, 1);
    s.set(-1, 1);
    s.set(0, 1);
    s.set(1, 1);
    auto t = s.tail_section();
    CHECK(t.get(-3) == 1);
    CHECK(t.get(-1) == 0);
    CHECK(t.get(0) == 0);

    RatSeries pow(mpq_class(0), 5);
    pow.set(0, 2);
    pow.set(3, 4);
    CHECK(pow.tail_section().is_exactly_zero());

    RatSeries u(mpq_class(0), 5);
    u.set(-5, 2);
    u.set(-2, 7);
    u.set(-1, 4);
    auto tu = u.tail_section();
    CHECK(tu.get(-5) == 2);
    CHECK(tu.get(-2) == 7);
    CHECK(tu.get(-1) == 0);

    // idempotent + linear (spot check)
    auto t2 = tu.tail_section();
    CHECK((t2 - tu).is_exactly_zero());
}

TEST_CASE("series sqrt") {
    // sqrt(1+u^2) mod u^5 = 1 + u^2/2 - u^4/8
    RatSeries s(mpq_class(0), 5);
    s.set(0, 1);
    s.set(2, 1);
    auto r = s.series_sqrt(mpq_class(1));
    CHECK(r.get(0) == 1);
    CHECK(r.get(2) == mpq_class(1, 2));
    CHECK(r.get(4) == mpq_class(-1, 8));

    auto u2 = rat_monomial(1, 2, 8).series_sqrt(mpq_class(1));
    CHECK(u2.get(1) == 1);

    // x^6 f(1/x) for f = x^6+31x^4+31x^2+1: sqrt round-trips mod u^10
    RatSeries g(mpq_class(0), 10);
    g.set(0, 1);
    g.set(2, 31);
    g.set(4, 31);
    g.set(6, 1);
    auto h = g.series_sqrt(mpq_class(1));
    auto sq = h * h;
    for (long e = 0; e < sq.truncation_order(); ++e) CHECK(sq.get(e) == g.get(e));

    RatSeries ns(mpq_class(0), 4);
    ns.set(0, 2); // 2 is not a rational square; no honest branch root exists
    CHECK_THROWS_AS(ns.series_sqrt(mpq_class(1)), DomainError);
}

TEST_CASE("derivative of integral returns the series") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int iter = 0; iter < 40; ++iter) {
        RatSeries s(mpq_class(0), 9);
        for (long e = -4; e < 9; ++e)
            if (e != -1) {
                mpq_class q(d(rng), 1 + (iter % 3));
                q.canonicalize();
                s.set(e, q);
            }
        auto back = s.formal_integrate().derivative();
        for (long e = s.min_exp(); e < back.truncation_order(); ++e) CHECK(back.get(e) == s.get(e));
    }
}

TEST_CASE("p-adic series: inverse and evaluation with certified tail") {
    long p = 3, N = 12;
    PadicElement proto = PadicElement::exact_zero(p);
    PadicSeries s(proto, 14);
    s.set(0, PadicElement::one(p, N));
    s.set(1, -PadicElement::one(p, N));
    auto inv = s.inverse(); // 1/(1-t) = 1 + t + t^2 + ...
    for (long e = 0; e < 10; ++e) CHECK(inv.get(e) == PadicElement::one(p, N));

    // evaluated at t = 3: 1/(1-3) = -1/2
    inv.set_tail_bound(0, 0);
    auto v = inv.evaluate(PadicElement::from_mpz(p, 3, N));
    auto expect = PadicElement::from_rational(p, mpq_class(-1, 2), v.abs_precision());
    CHECK(v == expect);
    CHECK(v.abs_precision() >= 10);
}

TEST_CASE("sqrt over Q_p with residue branch") {
    long p = 3, N = 10;
    PadicSeries s(PadicElement::exact_zero(p), 8);
    s.set(0, PadicElement::from_mpz(p, 4, N));
    s.set(1, PadicElement::from_mpz(p, 12, N));
    auto r = s.series_sqrt(PadicElement::from_mpz(p, 4, N).sqrt(1)); // branch 1 mod 3
    auto sq = r * r;
    for (long e = 0; e < sq.truncation_order(); ++e) {
        auto diff = sq.get(e) - s.get(e);
        if (!diff.is_exact_zero()) CHECK(diff.is_zero_to_precision());
    }
}

TEST_CASE("randomized sqrt round trip over Q") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> d(-12, 12);
    for (int iter = 0; iter < 30; ++iter) {
        RatSeries s(mpq_class(0), 8);
        s.set(0, 1); // unit square leading term
        for (long e = 1; e < 8; ++e) {
            mpq_class q(d(rng), 1 + (iter % 4));
            q.canonicalize();
            s.set(e, q);
        }
        auto r = s.series_sqrt(mpq_class(1));
        auto sq = r * r;
        for (long e = 0; e < sq.truncation_order(); ++e) CHECK(sq.get(e) == s.get(e));
    }
}
