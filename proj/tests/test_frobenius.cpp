#include "doctest.h"

#include <functional>
#include <random>

#include "padicqc/frobenius.hpp"

using namespace padicqc;

static PadicElement char_poly_coeff(const PadicMatrix& m, long k);

TEST_CASE("reduce_odd basics") {
    auto C = HyperellipticCurve::kms(31, PadicContext(3, 10));
    MWContext ctx(C, 10);
    long p = 3, g = 2;

    // omega_3 is already basic
    PolyZp half(p, 10);
    half.set_rep(0, 1);
    MWElem form;
    form.p = p;
    form.add_level(-1, half.shift_x(3).times_padic(PadicElement::from_rational(p, mpq_class(1, 2), 12)));
    auto red = reduce_odd(form, ctx);
    for (long i = 0; i <= 2 * g; ++i) {
        if (i == 3) CHECK(red.basis[i] == PadicElement::one(p, red.basis[i].abs_precision()));
        else CHECK(red.basis[i].is_zero_to_precision());
    }
    CHECK(red.primitive.lev.empty());

    // d(x/y) reduces with zero cohomology coefficients
    MWElem xy;
    xy.p = p;
    PolyZp xpoly(p, 10);
    xpoly.set_rep(1, 1);
    xy.add_level(-1, xpoly);
    MWElem dxy = xy.differential_coefficient(ctx);
    auto red2 = reduce_odd(dxy, ctx);
    for (long i = 0; i <= 2 * g; ++i) CHECK(red2.basis[i].is_zero_to_precision());
    auto P = disk_center(C, ResidueDisk{ResidueDisk::Kind::affine, 1, 2, true}, 10);
    auto val = red2.primitive.eval(P.x, P.y);
    auto expect = P.x / P.y;
    CHECK((val - expect).is_zero_to_precision());

    // x^(2g+1) dx/(2y): one x-degree reduction step, verified by re-expanding
    MWElem high;
    high.p = p;
    high.add_level(-1, half.shift_x(2 * g + 1).times_padic(PadicElement::from_rational(p, mpq_class(1, 2), 12)));
    auto red3 = reduce_odd(high, ctx);
    ResidueDisk d{ResidueDisk::Kind::affine, 1, 2, true};
    auto le = local_expansion(C, d, 14, 10);
    auto dF = red3.primitive.differential_coefficient(ctx);
    PadicSeries lhs = dF.expand(le, 10, -40, 9);
    PadicSeries xp = le.x;
    PadicSeries xpow(PadicElement::exact_zero(p), 10);
    xpow.set(0, PadicElement::one(p, 12));
    xpow.set_tail_bound(0, 0);
    PadicSeries two_y_inv = (le.y + le.y).inverse();
    two_y_inv.set_tail_bound(0, 0);
    for (long i = 0; i <= 2 * g; ++i) {
        if (i > 0) xpow = (xpow * xp).truncated(10);
        if (!red3.basis[i].is_zero_to_precision())
            lhs = lhs + (xpow * two_y_inv).truncated(10).times_coeff(red3.basis[i]);
    }
    PadicSeries x5(PadicElement::exact_zero(p), 10);
    x5.set(0, PadicElement::one(p, 12));
    x5.set_tail_bound(0, 0);
    for (long i = 0; i < 2 * g + 1; ++i) x5 = (x5 * xp).truncated(10);
    PadicSeries rhs = (x5 * two_y_inv).truncated(10);
    auto diff = lhs - rhs;
    for (long e = diff.min_exp(); e < diff.truncation_order(); ++e) {
        auto c = diff.get(e);
        if (!c.is_exact_zero()) CHECK(c.valuation_floor() >= 7);
    }
}

TEST_CASE("frobenius matrix: defining identity in two disks") {
    auto C = HyperellipticCurve::kms(31, PadicContext(3, 9));
    long p = 3, prec = 9;
    auto fd = frobenius_matrix(C, prec);
    MWContext ctx(C, prec);

    std::vector<ResidueDisk> test_disks = {ResidueDisk{ResidueDisk::Kind::affine, 1, 2, true},
                                           ResidueDisk{ResidueDisk::Kind::affine, 2, 2, true}};
    long order = 8;
    for (auto& d : test_disks) {
        auto le = local_expansion(C, d, order + 2 * p, prec);
        PadicSeries Ex = fd.fxp_minus_fp.eval_series<PadicSeries>(le.x, order);
        PadicSeries y2p = le.y;
        for (int i = 1; i < 2 * p; ++i) y2p = (y2p * le.y).truncated(order);
        PadicSeries E = (Ex * y2p.inverse()).truncated(order);
        PadicSeries one_plus(PadicElement::exact_zero(p), order);
        one_plus.set(0, PadicElement::one(p, prec));
        one_plus = one_plus + E;
        PadicSeries sq = one_plus.series_sqrt(one_plus.get(0).sqrt(1));
        PadicSeries phi_y = le.y;
        for (int i = 1; i < p; ++i) phi_y = (phi_y * le.y).truncated(order);
        phi_y = (phi_y * sq).truncated(order);
        PadicSeries phi_x = le.x;
        for (int i = 1; i < p; ++i) phi_x = (phi_x * le.x).truncated(order);
        PadicSeries dphi_x = phi_x.derivative();

        for (long i = 0; i <= 2 * C.genus(); ++i) {
            PadicSeries lhs(PadicElement::exact_zero(p), order);
            lhs.set(0, PadicElement::from_rational(p, mpq_class(1, 2), prec));
            lhs.set_tail_bound(0, 0);
            for (long k = 0; k < i; ++k) lhs = (lhs * phi_x).truncated(order - 1);
            lhs = (lhs * dphi_x).truncated(order - 1);
            lhs = (lhs * phi_y.inverse()).truncated(order - 1);
            auto dF = fd.F[i].differential_coefficient(ctx);
            lhs = lhs - dF.expand(le, order - 1, -60, prec - 2);
            PadicSeries xpow(PadicElement::exact_zero(p), order);
            xpow.set(0, PadicElement::one(p, prec));
            xpow.set_tail_bound(0, 0);
            PadicSeries two_y_inv = (le.y + le.y).inverse();
            two_y_inv.set_tail_bound(0, 0);
            for (long j = 0; j <= 2 * C.genus(); ++j) {
                if (j > 0) xpow = (xpow * le.x).truncated(order);
                lhs = lhs - (xpow * two_y_inv).truncated(order - 1).times_coeff(fd.M.at(j, i));
            }
            for (long e = lhs.min_exp(); e < lhs.truncation_order(); ++e) {
                auto c = lhs.get(e);
                if (c.is_exact_zero()) continue;
                CHECK(c.is_zero_to_precision());
                CHECK(c.valuation_floor() >= 3);
            }
        }
    }
}

TEST_CASE("trace and determinant against brute-force point counts") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> adist(-30, 60);
    std::vector<long> primes = {3, 5, 7, 11};
    int done = 0;
    long idx = 0;
    while (done < 10) {
        long p = primes[idx % primes.size()];
        long a = adist(rng);
        ++idx;
        RatPoly f;
        f.set(6, 1);
        f.set(4, a);
        f.set(2, a);
        f.set(0, 1);
        mpq_class disc = f.discriminant();
        if (disc == 0 || detail::valuation_mpz(disc.get_num(), p) != 0) continue;
        HyperellipticCurve C(f, PadicContext(p, 8));
        long prec = 8;
        auto fd = frobenius_matrix(C, prec);
        REQUIRE(fd.certified >= 4);

        auto bc = general_basis_change(C);
        PadicMatrix Cm(5, 5, p), MC(5, 5, p);
        for (long j = 0; j < 5; ++j)
            for (long i = 0; i < 5; ++i)
                Cm.at(i, j) = PadicElement::from_rational(p, bc.cols[j][i], prec + 4);
        MC = fd.M * Cm;
        auto N = solve_linear(Cm, MC);

        for (long jcol = 0; jcol < 4; ++jcol) {
            auto e = N.at(4, jcol);
            if (!e.is_exact_zero() && !e.is_zero_to_precision()) CHECK(e.valuation() >= 4);
        }
        auto e44 = N.at(4, 4) - PadicElement::from_mpz(p, p, prec);
        CHECK(e44.valuation_floor() >= 4);

        PadicElement tr = PadicElement::exact_zero(p);
        for (long i = 0; i < 4; ++i) tr += N.at(i, i);
        long count = C.point_count_fp();
        auto diff = tr - PadicElement::from_mpz(p, p + 1 - count, prec);
        CHECK(diff.valuation_floor() >= std::min(fd.certified - 1, diff.abs_precision()));

        PadicMatrix blk(4, 4, p);
        for (long i = 0; i < 4; ++i)
            for (long j = 0; j < 4; ++j) blk.at(i, j) = N.at(i, j);
        PadicElement det = char_poly_coeff(blk, 0);
        auto dd = det - PadicElement::from_mpz(p, p * p, prec);
        CHECK(dd.valuation_floor() >= 4);

        // functional equation: for genus 2, c1 = p * c3
        PadicElement c1 = char_poly_coeff(blk, 1), c3 = char_poly_coeff(blk, 3);
        auto fe = c1 - c3 * PadicElement::from_mpz(p, p, prec);
        CHECK(fe.valuation_floor() >= 3);

        ++done;
    }
}

static PadicElement char_poly_coeff(const PadicMatrix& m, long k) {
    long n = m.rows();
    long p = 0;
    for (long i = 0; i < n && !p; ++i)
        for (long j = 0; j < n && !p; ++j) p = m.at(i, j).prime();
    PadicElement acc = PadicElement::exact_zero(p);
    long mlen = n - k;
    std::vector<long> comb(mlen);
    for (long i = 0; i < mlen; ++i) comb[i] = i;
    auto det_minor = [&](const std::vector<long>& rows) {
        std::vector<std::vector<PadicElement>> a(rows.size(),
                                                 std::vector<PadicElement>(rows.size(), PadicElement::exact_zero(p)));
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < rows.size(); ++j) a[i][j] = m.at(rows[i], rows[j]);
        std::function<PadicElement(std::vector<std::vector<PadicElement>>&)> det =
            [&](std::vector<std::vector<PadicElement>>& mm) -> PadicElement {
            size_t nn = mm.size();
            if (nn == 1) return mm[0][0];
            PadicElement s = PadicElement::exact_zero(p);
            for (size_t c = 0; c < nn; ++c) {
                std::vector<std::vector<PadicElement>> sub(nn - 1,
                                                           std::vector<PadicElement>(nn - 1, PadicElement::exact_zero(p)));
                for (size_t i = 1; i < nn; ++i) {
                    size_t jj = 0;
                    for (size_t j = 0; j < nn; ++j) {
                        if (j == c) continue;
                        sub[i - 1][jj++] = mm[i][j];
                    }
                }
                PadicElement term = mm[0][c] * det(sub);
                if (c % 2) term = -term;
                s += term;
            }
            return s;
        };
        return det(a);
    };
    while (true) {
        acc += det_minor(comb);
        long i = mlen - 1;
        while (i >= 0 && comb[i] == n - mlen + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (long j = i + 1; j < mlen; ++j) comb[j] = comb[j - 1] + 1;
    }
    if ((n - k) % 2) acc = -acc;
    return acc;
}
