#pragma once

// Truncated power / Laurent series over exact rationals or over Q_p.
//
// A series holds coefficients for exponents in [min_exp, trunc); exponents
// >= trunc are unknown.  Arithmetic propagates the truncation order
// pessimistically.  For Q_p coefficients a series may carry a tail
// certificate (mu, logslack) asserting
//     v(c_k) >= mu - logslack * ceil(log_p(k+2))   for all k >= trunc,
// which is what evaluation at a point of positive valuation needs to bound
// the unseen tail (the k*v(t) growth of the evaluated terms does the
// converging; the certificate only has to stop the coefficients from
// sinking faster than logarithmically).

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "padicqc/errors.hpp"
#include "padicqc/padic.hpp"

namespace padicqc {

// --- coefficient shims -------------------------------------------------------

inline bool coeff_is_exact_zero(const mpq_class& c) { return c == 0; }
inline bool coeff_is_exact_zero(const PadicElement& c) { return c.is_exact_zero(); }

inline mpq_class coeff_zero_like(const mpq_class&) { return mpq_class(0); }
inline PadicElement coeff_zero_like(const PadicElement& c) { return PadicElement::exact_zero(c.prime()); }

inline mpq_class coeff_inv(const mpq_class& c) {
    if (c == 0) throw DomainError("inverse of zero coefficient");
    return 1 / c;
}
inline PadicElement coeff_inv(const PadicElement& c) { return c.inverse(); }

inline mpq_class coeff_times_rat(const mpq_class& c, const mpq_class& q) { return c * q; }
inline PadicElement coeff_times_rat(const PadicElement& c, const mpq_class& q) {
    if (q == 0) return PadicElement::exact_zero(c.prime());
    if (c.is_exact_zero()) return c;
    long p = c.prime();
    long rel = c.rel_precision();
    if (rel >= PREC_INF) { // apparent zero handled below
        rel = 64;
    }
    return c * PadicElement::from_rational(p, q, detail::valuation_mpz(q.get_num(), p) -
                                                      detail::valuation_mpz(q.get_den(), p) + rel + 1);
}

inline long coeff_vfloor(const mpq_class&) { return 0; } // unused for exact coefficients
inline long coeff_vfloor(const PadicElement& c) { return c.valuation_floor(); }

template <class C>
class TruncatedSeries {
  public:
    TruncatedSeries() : min_(0), trunc_(0) {}
    // zero series known mod t^trunc
    TruncatedSeries(C proto, long trunc) : min_(trunc), trunc_(trunc), proto_(std::move(proto)) {}

    static TruncatedSeries monomial(const C& c, long e, long trunc) {
        TruncatedSeries s(coeff_zero_like(c), trunc);
        s.set(e, c);
        return s;
    }

    long min_exp() const { return min_; }
    long truncation_order() const { return trunc_; }
    const C& proto() const { return proto_; }

    C get(long e) const {
        if (e >= trunc_) throw PrecisionError("series coefficient beyond truncation order");
        if (e < min_ || e >= min_ + static_cast<long>(c_.size())) return proto_;
        return c_[e - min_];
    }
    bool stored_nonzero(long e) const {
        return e >= min_ && e < min_ + static_cast<long>(c_.size()) && !coeff_is_exact_zero(c_[e - min_]);
    }

    void set(long e, const C& v) {
        if (e >= trunc_) return;
        reserve_exp(e);
        c_[e - min_] = v;
    }

    // --- tail certificate (Q_p only) ---
    bool has_tail_bound() const { return tail_valid_; }
    void set_tail_bound(long mu, long logslack) {
        tail_valid_ = true;
        tail_mu_ = mu;
        tail_slack_ = logslack;
    }
    void clear_tail_bound() { tail_valid_ = false; }
    long tail_mu() const { return tail_mu_; }
    long tail_slack() const { return tail_slack_; }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        TruncatedSeries r(a.proto_or(b), std::min(a.trunc_, b.trunc_));
        for (long e = std::min(a.min_, b.min_); e < r.trunc_; ++e) {
            bool ha = a.stored(e), hb = b.stored(e);
            if (!ha && !hb) continue;
            if (ha && hb) r.set(e, a.c_[e - a.min_] + b.c_[e - b.min_]);
            else if (ha) r.set(e, a.c_[e - a.min_]);
            else r.set(e, b.c_[e - b.min_]);
        }
        if (a.tail_valid_ && b.tail_valid_) {
            r.set_tail_bound(std::min(a.mu_all(), b.mu_all()), std::max(a.tail_slack_, b.tail_slack_));
        }
        r.trim();
        return r;
    }

    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        long tr = std::min(a.trunc_ + b.min_, b.trunc_ + a.min_);
        TruncatedSeries r(a.proto_or(b), tr);
        if (!a.c_.empty() && !b.c_.empty()) {
            r.min_ = a.min_ + b.min_;
            r.c_.assign(std::max<long>(0, std::min(tr, a.max_stored() + b.max_stored() + 1) - r.min_),
                        r.proto_);
            for (size_t i = 0; i < a.c_.size(); ++i) {
                if (coeff_is_exact_zero(a.c_[i])) continue;
                long ea = a.min_ + static_cast<long>(i);
                for (size_t j = 0; j < b.c_.size(); ++j) {
                    long e = ea + b.min_ + static_cast<long>(j);
                    if (e >= tr) break;
                    if (coeff_is_exact_zero(b.c_[j])) continue;
                    long idx = e - r.min_;
                    if (idx >= static_cast<long>(r.c_.size())) break;
                    r.c_[idx] += a.c_[i] * b.c_[j];
                }
            }
        }
        if (a.tail_valid_ && b.tail_valid_) {
            long negspan = std::max<long>({0, -a.min_, -b.min_});
            long s = a.tail_slack_ + b.tail_slack_;
            long mu = a.mu_all() + b.mu_all() - s * logp_bound(negspan + 2, a.proto_or(b));
            r.set_tail_bound(mu, s);
        }
        r.trim();
        return r;
    }

    TruncatedSeries times_coeff(const C& c) const {
        TruncatedSeries r = *this;
        for (auto& x : r.c_) x = x * c;
        if (tail_valid_) r.tail_mu_ = tail_mu_ + coeff_vfloor(c);
        return r;
    }
    TruncatedSeries times_rational(const mpq_class& q) const {
        TruncatedSeries r = *this;
        for (auto& x : r.c_) x = coeff_times_rat(x, q);
        if (tail_valid_) {
            if (q == 0) return TruncatedSeries(proto_, trunc_);
            long v = 0;
            if constexpr (std::is_same_v<C, PadicElement>) {
                v = detail::valuation_mpz(q.get_num(), proto_.prime()) -
                    detail::valuation_mpz(q.get_den(), proto_.prime());
            }
            r.tail_mu_ = tail_mu_ + v;
        }
        return r;
    }
    TruncatedSeries shift_exponent(long k) const { // multiply by t^k
        TruncatedSeries r = *this;
        r.min_ += k;
        r.trunc_ += k;
        if (tail_valid_ && k < 0) r.tail_mu_ = tail_mu_ - tail_slack_ * logp_bound(-k + 2, proto_);
        return r;
    }
    TruncatedSeries truncated(long tr) const {
        if (tr >= trunc_) return *this;
        TruncatedSeries r(proto_, tr);
        r.min_ = std::min(min_, tr);
        long n = std::max<long>(0, std::min(tr, max_stored() + 1) - r.min_);
        r.c_.assign(c_.begin(), c_.begin() + std::min<size_t>(c_.size(), n));
        r.tail_valid_ = tail_valid_;
        r.tail_mu_ = tail_mu_;
        r.tail_slack_ = tail_slack_;
        r.trim();
        return r;
    }

    TruncatedSeries derivative() const {
        TruncatedSeries r(proto_, trunc_ - 1);
        for (long e = min_; e < trunc_; ++e) {
            if (!stored(e) || e == 0) continue;
            r.set(e - 1, coeff_times_rat(c_[e - min_], mpq_class(e)));
        }
        if (tail_valid_) r.set_tail_bound(tail_mu_ - tail_slack_, tail_slack_);
        r.trim();
        return r;
    }

    // Termwise a_i t^i -> a_i/(i+1) t^(i+1).  A nonzero t^-1 coefficient is a
    // residue obstruction.
    TruncatedSeries formal_integrate() const {
        if (stored_nonzero(-1)) throw ResidueError("formal_integrate: nonzero t^-1 coefficient");
        TruncatedSeries r(proto_, trunc_ + 1);
        for (long e = min_; e < trunc_; ++e) {
            if (!stored(e) || e == -1) continue;
            mpq_class q(1, e + 1);
            q.canonicalize();
            r.set(e + 1, coeff_times_rat(c_[e - min_], q));
        }
        if (tail_valid_) r.set_tail_bound(tail_mu_, tail_slack_ + 1);
        r.trim();
        return r;
    }

    // The section S: keep only exponents <= -2.
    TruncatedSeries tail_section() const {
        TruncatedSeries r(proto_, std::max(trunc_, -1L));
        for (long e = min_; e < std::min(trunc_, -1L); ++e)
            if (stored(e)) r.set(e, c_[e - min_]);
        if constexpr (std::is_same_v<C, PadicElement>) r.set_tail_bound(PREC_INF / 2, 0);
        else r.set_tail_bound(0, 0);
        r.trim();
        return r;
    }

    // multiplicative inverse; leading coefficient must be invertible
    TruncatedSeries inverse() const {
        long lead = leading_exponent();
        long n = trunc_ - lead; // relative precision in t
        TruncatedSeries r(proto_, -lead + n);
        C l_inv = coeff_inv(c_[lead - min_]);
        r.set(-lead, l_inv);
        for (long k = 1; k < n; ++k) {
            // coefficient of t^(-lead+k): -l_inv * sum_{i=1..k} a_{lead+i} * r_{-lead+k-i}
            C acc = proto_;
            bool any = false;
            for (long i = 1; i <= k; ++i) {
                if (!stored(lead + i) || !r.stored(-lead + k - i)) continue;
                C term = c_[lead + i - min_] * r.c_[k - i];
                if (any) acc = acc + term;
                else acc = term;
                any = true;
            }
            if (any) r.set(-lead + k, -(l_inv * acc));
        }
        r.clear_tail_bound();
        return r;
    }

    // Square root to truncation order; the caller fixes the branch by giving
    // a root of the leading coefficient.
    TruncatedSeries series_sqrt(const C& leading_root) const {
        long lead = leading_exponent();
        if (lead % 2 != 0) throw DomainError("series_sqrt: odd leading exponent");
        const C& a0 = c_[lead - min_];
        {
            C chk = leading_root * leading_root - a0;
            if (!coeff_is_exact_zero(chk)) {
                if constexpr (std::is_same_v<C, PadicElement>) {
                    if (!chk.is_zero_to_precision())
                        throw DomainError("series_sqrt: branch is not a root of the leading coefficient");
                } else {
                    throw DomainError("series_sqrt: branch is not a root of the leading coefficient");
                }
            }
        }
        long n = trunc_ - lead;
        TruncatedSeries r(proto_, lead / 2 + n);
        r.set(lead / 2, leading_root);
        C denom_inv = coeff_inv(leading_root + leading_root);
        for (long k = 1; k < n; ++k) {
            // a_{lead+k} = sum_{i+j=k} s_i s_j (s indexed from lead/2)
            C acc = stored(lead + k) ? c_[lead + k - min_] : proto_;
            for (long i = 1; i < k; ++i) {
                if (!r.stored(lead / 2 + i) || !r.stored(lead / 2 + k - i)) continue;
                acc = acc - r.c_[i] * r.c_[k - i];
            }
            r.set(lead / 2 + k, acc * denom_inv);
        }
        r.clear_tail_bound();
        return r;
    }

    // Composition outer(inner); inner must have min_exp >= 1.
    TruncatedSeries compose(const TruncatedSeries& inner) const {
        if (inner.leading_exponent_or(1) < 1)
            throw DomainError("compose: inner series must have positive leading exponent");
        if (min_ < 0) throw DomainError("compose: Laurent outer series unsupported");
        long vin = inner.leading_exponent_or(1);
        long tr = std::min(inner.trunc_, trunc_ * vin);
        TruncatedSeries r(proto_or(inner), tr);
        // Horner from the top stored exponent
        for (long e = std::min(trunc_, max_stored() + 1) - 1; e >= min_; --e) {
            r = r * inner.truncated(tr);
            if (stored(e)) {
                TruncatedSeries cst(proto_or(inner), tr);
                cst.set(0, c_[e - min_]);
                r = r + cst;
            }
            r = r.truncated(tr);
        }
        r.clear_tail_bound();
        r.trim();
        return r;
    }

    // Substitute t -> t^k (k >= 1).
    TruncatedSeries compose_power(long k) const {
        TruncatedSeries r(proto_, trunc_ * k);
        for (long e = min_; e < trunc_; ++e)
            if (stored(e)) r.set(e * k, c_[e - min_]);
        if (tail_valid_) r.set_tail_bound(tail_mu_, tail_slack_);
        r.trim();
        return r;
    }

    long leading_exponent() const {
        for (long e = min_; e < min_ + static_cast<long>(c_.size()); ++e)
            if (!coeff_is_exact_zero(c_[e - min_])) return e;
        throw DomainError("leading exponent of (apparently) zero series");
    }
    long leading_exponent_or(long fallback) const {
        for (long e = min_; e < min_ + static_cast<long>(c_.size()); ++e)
            if (!coeff_is_exact_zero(c_[e - min_])) return e;
        return fallback;
    }

    bool is_exactly_zero() const {
        for (auto& x : c_)
            if (!coeff_is_exact_zero(x)) return false;
        return true;
    }

    std::string to_string(const std::string& var = "t") const {
        std::string out;
        for (long e = min_; e < min_ + static_cast<long>(c_.size()); ++e) {
            if (coeff_is_exact_zero(c_[e - min_])) continue;
            if (!out.empty()) out += " + ";
            std::string cs;
            if constexpr (std::is_same_v<C, mpq_class>) cs = c_[e - min_].get_str();
            else cs = "(" + c_[e - min_].to_string() + ")";
            if (e == 0) out += cs;
            else out += cs + "*" + var + "^" + std::to_string(e);
        }
        if (out.empty()) out = "0";
        return out + " + O(" + var + "^" + std::to_string(trunc_) + ")";
    }

    // Lower bound for v(sum_{k>=trunc} c_k t^k) given v(t) >= vt (vt >= 1
    // unless the tail has no log slack).
    long tail_value_floor(long vt) const {
        if (!tail_valid_) throw PrecisionError("series has no tail certificate");
        if (vt < 1 && tail_slack_ > 0)
            throw PrecisionError("tail bound needs a point of positive valuation");
        long best = PREC_INF;
        long K = trunc_ + 96 + 8 * (tail_slack_ + 1);
        for (long k = std::max(trunc_, 0L); k <= K; ++k)
            best = std::min(best, tail_mu_ + k * vt - tail_slack_ * logp_bound(k + 2, proto_));
        // beyond the window the linear term k*vt dominates the log term
        return best;
    }

    // Evaluate at a point (Q_p instantiation).
    template <class X = C>
    std::enable_if_t<std::is_same_v<X, PadicElement>, PadicElement> evaluate(const PadicElement& t) const {
        long vt = t.valuation_floor();
        if (vt < 0) throw DomainError("series evaluation: negative-valuation point");
        PadicElement acc = PadicElement::exact_zero(t.prime());
        long prec_floor = tail_value_floor(vt);
        // positive part by Horner, Laurent part directly
        PadicElement pos = PadicElement::exact_zero(t.prime());
        for (long e = std::min(trunc_, max_stored() + 1) - 1; e >= std::max(min_, 0L); --e) {
            pos = pos * t;
            if (stored(e)) pos += c_[e - min_];
        }
        acc = pos;
        if (min_ < 0) {
            PadicElement tinv = t.inverse(), powneg = PadicElement::one(t.prime(), PREC_INF / 2);
            for (long e = -1; e >= min_; --e) {
                powneg *= tinv;
                if (stored(e)) acc += c_[e - min_] * powneg;
            }
        }
        return acc.with_abs_precision(prec_floor);
    }

    // recompute a floor mu with v(c_i) >= mu + i - slack*log(.) over stored
    // coefficients as well as the certified tail
    long mu_all() const {
        long mu = tail_valid_ ? tail_mu_ : PREC_INF / 2;
        for (long e = min_; e < min_ + static_cast<long>(c_.size()); ++e) {
            const C& x = c_[e - min_];
            if (coeff_is_exact_zero(x)) continue;
            mu = std::min(mu, coeff_vfloor(x));
        }
        return mu;
    }

  private:
    long min_;
    long trunc_;
    std::vector<C> c_;
    C proto_{};
    bool tail_valid_ = false;
    long tail_mu_ = 0;
    long tail_slack_ = 0;

    bool stored(long e) const { return e >= min_ && e < min_ + static_cast<long>(c_.size()); }
    long max_stored() const { return min_ + static_cast<long>(c_.size()) - 1; }

    C proto_or(const TruncatedSeries& other) const {
        if constexpr (std::is_same_v<C, PadicElement>) {
            return proto_.prime() ? proto_ : other.proto_;
        } else {
            (void)other;
            return proto_;
        }
    }

    static long logp_bound(long k, const C& proto) {
        long p = 3;
        if constexpr (std::is_same_v<C, PadicElement>) {
            if (proto.prime()) p = proto.prime();
        }
        long b = 0;
        long acc = 1;
        while (acc < k && b < 64) {
            acc *= p;
            ++b;
        }
        return b;
    }

    void reserve_exp(long e) {
        if (c_.empty()) {
            min_ = e;
            c_.assign(1, proto_);
            return;
        }
        if (e < min_) {
            std::vector<C> fresh(min_ - e, proto_);
            c_.insert(c_.begin(), fresh.begin(), fresh.end());
            min_ = e;
        } else if (e >= min_ + static_cast<long>(c_.size())) {
            c_.resize(e - min_ + 1, proto_);
        }
    }

    void trim() {
        while (!c_.empty() && coeff_is_exact_zero(c_.front())) {
            c_.erase(c_.begin());
            ++min_;
        }
        while (!c_.empty() && coeff_is_exact_zero(c_.back())) c_.pop_back();
        if (c_.empty()) min_ = trunc_;
    }
};

using RatSeries = TruncatedSeries<mpq_class>;
using PadicSeries = TruncatedSeries<PadicElement>;

} // namespace padicqc
