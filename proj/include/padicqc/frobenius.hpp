#pragma once

// Frobenius action on the first Monsky-Washnitzer cohomology of the affine
// curve y^2 = f(x) (even degree model, y inverted).  The lift is the usual
// x -> x^p,  1/y -> y^-p (1 + E)^(-1/2)  with  E = (f(x^p) - f(x)^p) y^(-2p),
// expanded p-adically and reduced against the basis omega_i = x^i dx/(2y),
// i = 0..2g:
//     phi^* omega_i = d F_i + sum_j M_ji omega_j.
// Truncation of the binomial series at k = prec is sound: v_p(E^k) >= k and
// the shared representative precision is prec.

#include <vector>

#include "padicqc/curve.hpp"
#include "padicqc/mw.hpp"
#include "padicqc/padic_linalg.hpp"

namespace padicqc {

struct FrobeniusData {
    long p = 0;
    long g = 0;
    long prec = 0;       // representative precision of the computation
    long certified = 0;  // min certified absolute precision across M entries
    PadicMatrix M;       // (2g+1)x(2g+1); column i holds phi^* omega_i
    std::vector<MWElem> F; // primitives, one per column
    PolyZp fxp_minus_fp;   // f(x^p) - f(x)^p (drives phi(y) expansions on disks)
    std::vector<mpq_class> binom_half; // binom(-1/2, k), k = 0..K
};

namespace detail_frob {

inline mpq_class binom_minus_half(long k) {
    // (-1)^k C(2k, k) / 4^k
    mpz_class num;
    mpz_bin_uiui(num.get_mpz_t(), 2 * k, k);
    mpq_class r(num);
    mpq_class four_k(mpz_class(1), detail::pow_p(2, 2 * k));
    r *= four_k;
    if (k % 2) r = -r;
    return r;
}

} // namespace detail_frob

// phi(1/y) truncated: levels y^(-p(2k+1)) with coefficient binom(-1/2,k) B^k,
// B = f(x^p) - f(x)^p.
inline MWElem frobenius_one_over_y(const HyperellipticCurve& C, const MWContext& ctx,
                                   const PolyZp& B, const std::vector<mpq_class>& binoms) {
    long p = ctx.p;
    MWElem phi_inv_y;
    phi_inv_y.p = p;
    PolyZp Bk(p, ctx.prec);
    Bk.set_rep(0, 1);
    for (long k = 0; k < static_cast<long>(binoms.size()); ++k) {
        if (k > 0) Bk = Bk * B;
        PolyZp term = Bk.times_padic(PadicElement::from_rational(p, binoms[k], ctx.prec + 8));
        phi_inv_y.add_level(-p * (2 * k + 1), term);
    }
    return phi_inv_y;
}

inline FrobeniusData frobenius_matrix(const HyperellipticCurve& C, long prec) {
    long p = C.p(), g = C.genus();
    MWContext ctx(C, prec);

    FrobeniusData out;
    out.p = p;
    out.g = g;
    out.prec = prec;
    out.M = PadicMatrix(2 * g + 1, 2 * g + 1, p);

    // B = f(x^p) - f(x)^p
    PolyZp fzp = PolyZp::from_rat_poly(C.f(), p, prec);
    PolyZp f_of_xp(p, prec);
    for (long e = 0; e <= C.f().degree(); ++e) {
        PadicElement c = PadicElement::from_rational(p, C.f().get(e), prec);
        if (!c.is_exact_zero()) f_of_xp.set_coeff(e * p, c);
    }
    PolyZp f_pow(p, prec);
    f_pow.set_rep(0, 1);
    for (long i = 0; i < p; ++i) f_pow = f_pow * fzp;
    PolyZp B = f_of_xp - f_pow;
    out.fxp_minus_fp = B;

    out.binom_half.resize(prec + 1);
    for (long k = 0; k <= prec; ++k) out.binom_half[k] = detail_frob::binom_minus_half(k);

    MWElem phi_inv_y = frobenius_one_over_y(C, ctx, B, out.binom_half);

    long cert = PREC_INF;
    for (long i = 0; i <= 2 * g; ++i) {
        // phi^* omega_i = (p/2) x^(p(i+1)-1) phi(1/y) dx
        MWElem form = phi_inv_y.shift_x(p * (i + 1) - 1)
                          .times_padic(PadicElement::from_rational(p, mpq_class(p, 2), prec + 8));
        OddReduction red = reduce_odd(std::move(form), ctx);
        for (long j = 0; j <= 2 * g; ++j) {
            out.M.at(j, i) = red.basis[j];
            const PadicElement& e = out.M.at(j, i);
            cert = std::min(cert, e.is_exact_zero() ? PREC_INF : e.abs_precision());
        }
        out.F.push_back(std::move(red.primitive));
    }
    out.certified = cert;
    return out;
}

// Basis change to eta_0..eta_(2g-1) spanning the residue-free classes plus the
// residue carrier eta_2g.  Exact rational: residues of omega_i at infinity are
// read off the expansion of 1/sqrt(u^(2g+2) f(1/u)).
struct CohomologyBasisChange {
    // columns express eta_j in the omega basis; (2g+1) x (2g+1), exact
    std::vector<std::vector<mpq_class>> cols;
};

inline RatSeries rat_inf_sqrt_inverse(const HyperellipticCurve& C, long order) {
    // 1/h(u) with h = sqrt(u^(2g+2) f(1/u)), h(0) = 1
    RatSeries hh(mpq_class(0), order);
    for (long e = 0; e <= C.f().degree(); ++e) hh.set(C.f().degree() - e, C.f().get(e));
    return hh.series_sqrt(mpq_class(1)).inverse();
}

// residue at inf+ of omega_i (exact); the residue at inf- is its negative
inline mpq_class residue_at_infinity(const HyperellipticCurve& C, long i, const RatSeries& hinv) {
    long g = C.genus();
    // omega_i = -u^(1-i) / (2 h(u)) du at inf+; residue = u^(-1) coefficient
    long want = i - g; // index into 1/h after the monomial shift below
    // loc(omega_i) = -(1/2) u^(g-1-i... ) see curve.hpp; coefficient of u^-1:
    // -(1/2) [u^(i-g)] (1/h)
    if (want < 0) return 0;
    if (want >= hinv.truncation_order()) throw DomainError("residue_at_infinity: order too small");
    return mpq_class(-1, 2) * hinv.get(want);
}

inline CohomologyBasisChange kms_basis_change(const HyperellipticCurve& C) {
    auto a = C.kms_a();
    if (!a) throw DomainError("kms_basis_change: not a KMS curve");
    CohomologyBasisChange bc;
    bc.cols.assign(5, std::vector<mpq_class>(5, 0));
    bc.cols[0][0] = 1;            // eta0 = omega0
    bc.cols[1][1] = 1;            // eta1 = omega1
    bc.cols[2][2] = *a;           // eta2 = a omega2 + 2 omega4
    bc.cols[2][4] = 2;
    bc.cols[3][3] = 1;            // eta3 = omega3
    bc.cols[4][4] = 1;            // eta4 = omega4 (residue carrier)
    return bc;
}

inline CohomologyBasisChange general_basis_change(const HyperellipticCurve& C) {
    long g = C.genus(), n = 2 * g + 1;
    RatSeries hinv = rat_inf_sqrt_inverse(C, n + 4);
    std::vector<mpq_class> res(n);
    for (long i = 0; i < n; ++i) res[i] = residue_at_infinity(C, i, hinv);
    long carrier = -1;
    for (long i = n - 1; i >= 0; --i)
        if (res[i] != 0) { carrier = i; break; }
    CohomologyBasisChange bc;
    bc.cols.assign(n, std::vector<mpq_class>(n, 0));
    if (carrier < 0) throw DomainError("general_basis_change: no residue carrier found");
    for (long i = 0; i < n - 1; ++i) {
        long src = i < carrier ? i : i + 1;
        bc.cols[i][src] = 1;
        if (res[src] != 0) bc.cols[i][carrier] -= res[src] / res[carrier];
    }
    bc.cols[n - 1][carrier] = 1;
    return bc;
}

} // namespace padicqc
