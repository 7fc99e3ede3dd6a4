#pragma once

// Laurent series extended by powers of the symbol L = log(t), degree <= 2.
// Antiderivatives of t^-1 terms produce L; the branch never materializes
// because parameter changes under the Frobenius lift send L -> p L exactly
// (t -> t^p at the infinite points) and the assembled locus functions are
// L-free, which is asserted where it is relied upon.

#include "padicqc/series.hpp"

namespace padicqc {

// Drop exponents below `lo`; every dropped term must sit at or above p^cap,
// and surviving coefficients are capped at precision cap to account for it.
inline PadicSeries clip_series_below(const PadicSeries& s, long lo, long cap) {
    if (s.min_exp() >= lo) return s;
    long p = s.proto().prime();
    PadicSeries r(PadicElement::exact_zero(p), s.truncation_order());
    bool dropped = false;
    for (long e = s.min_exp(); e < lo; ++e) {
        auto c = s.get(e);
        if (c.is_exact_zero()) continue;
        if (c.valuation_floor() < cap)
            throw PrecisionError("clip_series_below: significant deep-pole term (widen window)");
        dropped = true;
    }
    for (long e = lo; e < s.truncation_order(); ++e) {
        auto c = s.get(e);
        if (!c.is_exact_zero()) r.set(e, dropped ? c.with_abs_precision(cap) : c);
    }
    if (s.has_tail_bound()) r.set_tail_bound(s.tail_mu(), s.tail_slack());
    return r;
}

// outer(inner) for a power-series outer and a Laurent inner whose negative
// exponents carry positive valuations (Frobenius transport on a bad disk).
// Exponents outside [lo, trunc) are clipped against `cap`.
inline PadicSeries compose_laurent(const PadicSeries& outer, const PadicSeries& inner, long lo,
                                   long cap) {
    if (outer.min_exp() < 0) throw DomainError("compose_laurent: Laurent outer unsupported");
    long p = outer.proto().prime();
    long tr = std::min(outer.truncation_order() * 1L, inner.truncation_order());
    tr = std::max(tr, 1L);
    PadicSeries acc(PadicElement::exact_zero(p), tr);
    acc.set_tail_bound(PREC_INF / 2, 0);
    PadicSeries pw(PadicElement::exact_zero(p), tr);
    pw.set(0, PadicElement::one(p, EXACT_PREC));
    pw.set_tail_bound(PREC_INF / 2, 0);
    for (long k = 0; k < outer.truncation_order(); ++k) {
        if (k > 0) pw = clip_series_below((pw * inner).truncated(tr), lo, cap);
        if (k >= outer.min_exp() && outer.stored_nonzero(k)) acc = acc + pw.times_coeff(outer.get(k));
        // once every term of pw sits above the cap nothing more can contribute
        bool dead = true;
        for (long e = pw.min_exp(); e < pw.truncation_order(); ++e) {
            auto c = pw.get(e);
            if (!c.is_exact_zero() && c.valuation_floor() < cap) {
                dead = false;
                break;
            }
        }
        if (dead && k > 0) break;
    }
    acc.clear_tail_bound();
    return acc;
}

struct LogSeries {
    PadicSeries c0, c1, c2; // coefficients of L^0, L^1, L^2

    LogSeries() = default;
    explicit LogSeries(PadicSeries s) : c0(std::move(s)) { init_rest(); }
    LogSeries(PadicSeries a, PadicSeries b, PadicSeries c)
        : c0(std::move(a)), c1(std::move(b)), c2(std::move(c)) {}

    static LogSeries zero(long p, long trunc) {
        PadicSeries z(PadicElement::exact_zero(p), trunc);
        z.set_tail_bound(PREC_INF / 2, 0);
        return LogSeries(z, z, z);
    }

    long prime() const { return c0.proto().prime(); }

    bool log_free(long min_val = 0) const {
        auto ok = [&](const PadicSeries& s) {
            for (long e = s.min_exp(); e < s.truncation_order(); ++e) {
                auto c = s.get(e);
                if (c.is_exact_zero()) continue;
                if (!c.is_zero_to_precision()) return false;
                if (c.valuation_floor() < min_val) return false;
            }
            return true;
        };
        return ok(c1) && ok(c2);
    }

    friend LogSeries operator+(const LogSeries& a, const LogSeries& b) {
        return LogSeries(a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2);
    }
    friend LogSeries operator-(const LogSeries& a, const LogSeries& b) {
        return LogSeries(a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2);
    }
    LogSeries operator-() const { return LogSeries(-c0, -c1, -c2); }

    friend LogSeries operator*(const LogSeries& a, const LogSeries& b) {
        // degree-2 cap; overflow into L^3 or L^4 must be absent
        auto req_zero = [](const PadicSeries& s, const char* what) {
            for (long e = s.min_exp(); e < s.truncation_order(); ++e) {
                auto c = s.get(e);
                if (!c.is_exact_zero() && !c.is_zero_to_precision())
                    throw DomainError(std::string("LogSeries: product exceeds log degree 2 (") + what + ")");
            }
        };
        req_zero(a.c2 * b.c1 + a.c1 * b.c2, "L^3");
        req_zero(a.c2 * b.c2, "L^4");
        return LogSeries(a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0,
                         a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0);
    }

    LogSeries times_coeff(const PadicElement& x) const {
        return LogSeries(c0.times_coeff(x), c1.times_coeff(x), c2.times_coeff(x));
    }
    LogSeries times_rational(const mpq_class& q) const {
        return LogSeries(c0.times_rational(q), c1.times_rational(q), c2.times_rational(q));
    }
    LogSeries truncated(long tr) const {
        return LogSeries(c0.truncated(tr), c1.truncated(tr), c2.truncated(tr));
    }

    // Zero-constant antiderivative; picks up L from t^-1 coefficients.
    LogSeries antiderivative() const {
        long p = prime();
        long tr = std::min({c0.truncation_order(), c1.truncation_order(), c2.truncation_order()}) + 1;
        PadicSeries r0(PadicElement::exact_zero(p), tr), r1 = r0, r2 = r0;
        auto slack = [](const PadicSeries& s) { return s.has_tail_bound() ? s.tail_slack() : 0; };
        auto mu = [](const PadicSeries& s) { return s.has_tail_bound() ? s.tail_mu() : 0; };
        bool certs = c0.has_tail_bound() && c1.has_tail_bound() && c2.has_tail_bound();
        // L^0 part
        for (long e = c0.min_exp(); e < c0.truncation_order(); ++e) {
            auto c = c0.get(e);
            if (c.is_exact_zero()) continue;
            if (e == -1) {
                r1.set(0, r1_get0(r1) + c);
            } else {
                mpq_class q(1, e + 1);
                q.canonicalize();
                r0.set(e + 1, r0.get(e + 1) + coeff_times_rat(c, q));
            }
        }
        // L^1 part: int t^e L = t^(e+1)/(e+1) L - t^(e+1)/(e+1)^2, e != -1; int t^-1 L = L^2/2
        for (long e = c1.min_exp(); e < c1.truncation_order(); ++e) {
            auto c = c1.get(e);
            if (c.is_exact_zero()) continue;
            if (e == -1) {
                auto half = coeff_times_rat(c, mpq_class(1, 2));
                r2.set(0, r2.get(0) + half);
            } else {
                mpq_class q1(1, e + 1), q2(1, (e + 1) * (e + 1));
                q1.canonicalize();
                q2.canonicalize();
                r1.set(e + 1, r1.get(e + 1) + coeff_times_rat(c, q1));
                r0.set(e + 1, r0.get(e + 1) - coeff_times_rat(c, q2));
            }
        }
        // L^2 part
        for (long e = c2.min_exp(); e < c2.truncation_order(); ++e) {
            auto c = c2.get(e);
            if (c.is_exact_zero()) continue;
            if (e == -1) throw ResidueError("LogSeries: antiderivative would need log degree 3");
            long k1 = e + 1;
            mpq_class q1(1, k1), q2(2, mpz_class(k1) * k1), q3(2, mpz_class(k1) * k1 * k1);
            q1.canonicalize();
            q2.canonicalize();
            q3.canonicalize();
            r2.set(e + 1, r2.get(e + 1) + coeff_times_rat(c, q1));
            r1.set(e + 1, r1.get(e + 1) - coeff_times_rat(c, q2));
            r0.set(e + 1, r0.get(e + 1) + coeff_times_rat(c, q3));
        }
        if (certs) {
            long m = std::min({mu(c0), mu(c1), mu(c2)});
            long s = std::max({slack(c0), slack(c1), slack(c2)}) + 3;
            r0.set_tail_bound(m, s);
            r1.set_tail_bound(m, s);
            r2.set_tail_bound(m, s);
        }
        // normalize: drop the constant term of the L^0 part
        if (r0.stored_nonzero(0)) r0.set(0, PadicElement::exact_zero(p));
        return LogSeries(r0, r1, r2);
    }

    // substitute t -> t^k (so L -> k L)
    LogSeries compose_power(long k) const {
        PadicSeries a = c0.compose_power(k);
        PadicSeries b = c1.compose_power(k).times_rational(mpq_class(k));
        PadicSeries c = c2.compose_power(k).times_rational(mpq_class(k) * k);
        return LogSeries(a, b, c);
    }

    PadicElement constant_term() const {
        if (c0.truncation_order() <= 0)
            throw PrecisionError("LogSeries: constant term beyond truncation");
        return c0.get(0);
    }

    PadicElement evaluate(const PadicElement& t) const {
        if (!log_free())
            throw DomainError("LogSeries: evaluation of a series with log terms");
        return c0.evaluate(t);
    }

  private:
    void init_rest() {
        PadicSeries z(c0.proto(), c0.truncation_order());
        z.set_tail_bound(PREC_INF / 2, 0);
        c1 = z;
        c2 = z;
    }
    static PadicElement r1_get0(const PadicSeries& s) {
        if (s.truncation_order() <= 0) return PadicElement::exact_zero(s.proto().prime());
        return s.get(0);
    }
};

} // namespace padicqc
