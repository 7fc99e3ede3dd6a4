#pragma once

// Arithmetic in Q_p with explicitly tracked absolute precision.
//
// An element is stored as  unit * p^val  known modulo p^abs, i.e. the unit is
// a canonical representative in [0, p^(abs-val)) coprime to p.  Every
// operation computes the precision of its result from the precisions of its
// inputs; nothing is ever reported beyond what the inputs certify.
//
// Two flavours of zero are kept apart:
//   * exact zero          — unit = 0, abs = +inf,
//   * O(p^m) ("apparent") — unit = 0, abs = m: some value of valuation >= m.
// Asking a question whose answer depends on digits beyond abs raises
// PrecisionError instead of guessing.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "padicqc/errors.hpp"

namespace padicqc {

inline constexpr long PREC_INF = std::numeric_limits<long>::max() / 4;

// Precision used for integers that are exactly known but still need a finite
// working modulus.  Far above anything the pipelines certify.
inline constexpr long EXACT_PREC = 320;

namespace detail {

inline bool is_prime_word(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline mpz_class pow_p(long p, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

inline long valuation_mpz(const mpz_class& n, long p) {
    // n != 0
    mpz_class q = n, r;
    long v = 0;
    while (mpz_divisible_ui_p(q.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

inline mpz_class mod_pow(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

} // namespace detail

struct PadicContext {
    long p = 3;
    long N = 10; // default absolute precision for embeddings

    PadicContext() = default;
    PadicContext(long p_, long N_) : p(p_), N(N_) {
        if (p < 3 || p % 2 == 0 || !detail::is_prime_word(p))
            throw DomainError("PadicContext: p must be an odd prime");
        if (N < 1) throw DomainError("PadicContext: precision must be >= 1");
    }
    bool operator==(const PadicContext& o) const { return p == o.p && N == o.N; }
};

class PadicElement {
  public:
    PadicElement() : p_(0), val_(PREC_INF), abs_(PREC_INF), unit_(0) {} // exact zero, prime-less

    static PadicElement exact_zero(long p) {
        PadicElement z;
        z.p_ = p;
        return z;
    }
    static PadicElement zero_to_precision(long p, long abs) {
        PadicElement z;
        z.p_ = p;
        z.val_ = abs;
        z.abs_ = abs;
        return z;
    }
    static PadicElement one(long p, long abs) { return from_mpz(p, 1, abs); }

    // value * p^shift known mod p^abs
    static PadicElement from_mpz(long p, mpz_class value, long abs, long shift = 0) {
        if (abs >= PREC_INF) throw DomainError("PadicElement: non-finite precision");
        PadicElement x;
        x.p_ = p;
        if (value == 0) return zero_to_precision(p, abs);
        long v = detail::valuation_mpz(value, p) + shift;
        if (v >= abs) return zero_to_precision(p, abs);
        x.val_ = v;
        x.abs_ = abs;
        mpz_class u = value / detail::pow_p(p, v - shift);
        mpz_class m = detail::pow_p(p, abs - v);
        mpz_mod(x.unit_.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
        if (x.unit_ == 0) return zero_to_precision(p, abs);
        return x;
    }

    static PadicElement from_rational(const PadicContext& ctx, const mpq_class& q) {
        return from_rational(ctx.p, q, ctx.N);
    }
    static PadicElement from_rational(long p, const mpq_class& q, long abs) {
        if (q == 0) return exact_zero(p);
        mpz_class num = q.get_num(), den = q.get_den();
        long vn = detail::valuation_mpz(num, p);
        long vd = detail::valuation_mpz(den, p);
        long v = vn - vd;
        if (v >= abs) return zero_to_precision(p, abs);
        mpz_class un = num / detail::pow_p(p, vn);
        mpz_class ud = den / detail::pow_p(p, vd);
        mpz_class m = detail::pow_p(p, abs - v);
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), m.get_mpz_t()) == 0)
            throw DomainError("PadicElement: denominator not invertible");
        PadicElement x;
        x.p_ = p;
        x.val_ = v;
        x.abs_ = abs;
        x.unit_ = (un * inv) % m;
        if (x.unit_ < 0) x.unit_ += m;
        return x;
    }

    long prime() const { return p_; }
    bool is_exact_zero() const { return unit_ == 0 && abs_ >= PREC_INF; }
    bool is_zero_to_precision() const { return unit_ == 0; }
    long abs_precision() const { return abs_; }
    // Known relative precision; PREC_INF for exact zero, 0 for apparent zero.
    long rel_precision() const { return unit_ == 0 ? (is_exact_zero() ? PREC_INF : 0) : abs_ - val_; }
    const mpz_class& unit() const { return unit_; }

    long valuation() const {
        if (unit_ == 0) {
            if (is_exact_zero()) return PREC_INF;
            throw PrecisionError("valuation of an element indistinguishable from zero");
        }
        return val_;
    }
    // lower bound on the valuation, always available
    long valuation_floor() const { return unit_ == 0 ? abs_ : val_; }

    // canonical integer representative of unit*p^(val) / p^(val), i.e. unit
    mpz_class lift() const {
        // value as integer times p^val (val may be negative)
        return unit_;
    }

    PadicElement with_abs_precision(long m) const {
        if (m >= abs_) return *this; // never invent digits
        if (unit_ == 0) return zero_to_precision(p_, m);
        if (val_ >= m) return zero_to_precision(p_, m);
        PadicElement x;
        x.p_ = p_;
        x.val_ = val_;
        x.abs_ = m;
        mpz_class mod = detail::pow_p(p_, m - val_);
        mpz_mod(x.unit_.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
        if (x.unit_ == 0) return zero_to_precision(p_, m);
        return x;
    }

    PadicElement operator-() const {
        if (unit_ == 0) return *this;
        PadicElement x = *this;
        mpz_class m = detail::pow_p(p_, abs_ - val_);
        x.unit_ = m - unit_;
        return x;
    }

    friend PadicElement operator+(const PadicElement& a, const PadicElement& b) {
        check_same(a, b);
        if (a.is_exact_zero()) return b;
        if (b.is_exact_zero()) return a;
        long p = a.p_;
        long m = std::min(a.abs_, b.abs_);
        if (a.unit_ == 0) return b.with_abs_precision(m);
        if (b.unit_ == 0) return a.with_abs_precision(m);
        long v = std::min(a.val_, b.val_);
        if (v >= m) return zero_to_precision(p, m);
        mpz_class s = a.unit_ * detail::pow_p(p, a.val_ - v) + b.unit_ * detail::pow_p(p, b.val_ - v);
        return from_mpz(p, s, m, v);
    }
    friend PadicElement operator-(const PadicElement& a, const PadicElement& b) { return a + (-b); }

    friend PadicElement operator*(const PadicElement& a, const PadicElement& b) {
        check_same(a, b);
        long p = a.p_ ? a.p_ : b.p_;
        if (a.is_exact_zero() || b.is_exact_zero()) return exact_zero(p);
        if (a.unit_ == 0 || b.unit_ == 0) {
            // O(p^ma) * (unit p^vb + O(..)) = O(p^(ma+vb))
            long va = a.unit_ == 0 ? a.abs_ : a.val_;
            long vb = b.unit_ == 0 ? b.abs_ : b.val_;
            long floor = va + vb;
            return zero_to_precision(p, std::min(floor, PREC_INF / 2));
        }
        long val = a.val_ + b.val_;
        long rel = std::min(a.abs_ - a.val_, b.abs_ - b.val_);
        PadicElement x;
        x.p_ = p;
        x.val_ = val;
        x.abs_ = val + rel;
        mpz_class m = detail::pow_p(p, rel);
        x.unit_ = (a.unit_ * b.unit_) % m;
        if (x.unit_ == 0) return zero_to_precision(p, x.abs_);
        return x;
    }

    PadicElement inverse() const {
        if (is_exact_zero()) throw DomainError("division by exact zero");
        if (unit_ == 0) throw PrecisionError("division by an element indistinguishable from zero");
        long rel = abs_ - val_;
        PadicElement x;
        x.p_ = p_;
        x.val_ = -val_;
        x.abs_ = -val_ + rel;
        mpz_class m = detail::pow_p(p_, rel);
        if (mpz_invert(x.unit_.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t()) == 0)
            throw DomainError("PadicElement: unit not invertible (internal)");
        return x;
    }
    friend PadicElement operator/(const PadicElement& a, const PadicElement& b) { return a * b.inverse(); }

    PadicElement& operator+=(const PadicElement& o) { return *this = *this + o; }
    PadicElement& operator-=(const PadicElement& o) { return *this = *this - o; }
    PadicElement& operator*=(const PadicElement& o) { return *this = *this * o; }
    PadicElement& operator/=(const PadicElement& o) { return *this = *this / o; }

    // multiply by p^k (exact)
    PadicElement shift(long k) const {
        if (unit_ == 0) {
            if (is_exact_zero()) return *this;
            return zero_to_precision(p_, abs_ + k);
        }
        PadicElement x = *this;
        x.val_ += k;
        x.abs_ += k;
        return x;
    }

    PadicElement pow(long e) const {
        if (e == 0) return one(p_, unit_ == 0 ? abs_ : abs_ - val_);
        if (e < 0) return inverse().pow(-e);
        PadicElement base = *this, acc = PadicElement::exact_zero(p_);
        bool started = false;
        while (e > 0) {
            if (e & 1) acc = started ? acc * base : (started = true, base);
            e >>= 1;
            if (e) base = base * base;
        }
        return acc;
    }

    // Agreement of all certified digits at the shared precision.  Comparing
    // against an apparent zero (0 known only mod p^m) raises: the answer
    // would depend on digits nobody holds.
    friend bool operator==(const PadicElement& a, const PadicElement& b) {
        check_same(a, b);
        if (a.is_exact_zero() && b.is_exact_zero()) return true;
        if (a.is_exact_zero() || b.is_exact_zero()) {
            const PadicElement& other = a.is_exact_zero() ? b : a;
            if (other.unit_ != 0) return false; // provably nonzero digit
            throw PrecisionError("equality with indistinguishable-from-zero is undecidable");
        }
        if (a.unit_ == 0 || b.unit_ == 0) {
            const PadicElement& z = a.unit_ == 0 ? a : b;
            const PadicElement& other = a.unit_ == 0 ? b : a;
            if (other.unit_ != 0 && other.val_ < z.abs_) return false;
            throw PrecisionError("equality with indistinguishable-from-zero is undecidable");
        }
        if (a.val_ != b.val_) return false;
        long rel = std::min(a.abs_, b.abs_) - a.val_;
        mpz_class m = detail::pow_p(a.p_, rel);
        return a.unit_ % m == b.unit_ % m;
    }
    friend bool operator!=(const PadicElement& a, const PadicElement& b) { return !(a == b); }

    // Square root with the branch fixed by its residue mod p.
    PadicElement sqrt(long residue_mod_p) const {
        if (unit_ == 0) throw PrecisionError("sqrt of element indistinguishable from zero");
        if (val_ % 2 != 0) throw DomainError("sqrt: odd valuation");
        long p = p_, rel = abs_ - val_;
        mpz_class u0 = unit_ % p;
        mpz_class r0 = tonelli_shanks(u0, p); // may throw DomainError
        long r = mpz_class(r0 % p).get_si();
        long want = ((residue_mod_p % p) + p) % p;
        if (r != want) {
            r = p - r;
            if (r != want) throw DomainError("sqrt: requested residue is not a square root mod p");
        }
        // Newton lift r <- (r + u/r)/2, doubling digits
        mpz_class rr(r);
        long k = 1;
        mpz_class inv2, mod;
        while (k < rel) {
            k = std::min(2 * k, rel);
            mod = detail::pow_p(p, k);
            mpz_class um = unit_ % mod;
            mpz_class rinv;
            mpz_invert(rinv.get_mpz_t(), rr.get_mpz_t(), mod.get_mpz_t());
            mpz_invert(inv2.get_mpz_t(), mpz_class(2).get_mpz_t(), mod.get_mpz_t());
            rr = ((rr + um * rinv) % mod * inv2) % mod;
        }
        PadicElement x;
        x.p_ = p;
        x.val_ = val_ / 2;
        x.abs_ = x.val_ + rel;
        x.unit_ = rr;
        return x;
    }

    // The (p-1)-st root of unity congruent to this unit mod p.
    PadicElement teichmuller() const {
        if (unit_ == 0) throw PrecisionError("teichmuller of element indistinguishable from zero");
        if (val_ != 0) throw DomainError("teichmuller: valuation must be 0");
        long rel = abs_ - val_;
        mpz_class mod = detail::pow_p(p_, rel);
        mpz_class x = unit_ % mod, prev;
        // x -> x^p gains at least one digit per step
        for (long i = 0; i <= rel + 1; ++i) {
            prev = x;
            x = detail::mod_pow(x, mpz_class(p_), mod);
            if (x == prev) break;
        }
        PadicElement t;
        t.p_ = p_;
        t.val_ = 0;
        t.abs_ = rel;
        t.unit_ = x;
        return t;
    }

    // residue in F_p (needs val >= 0 known)
    long residue() const {
        if (unit_ == 0) {
            if (abs_ >= 1) return 0;
            throw PrecisionError("residue unknown");
        }
        if (val_ < 0) throw DomainError("residue of element with negative valuation");
        if (val_ > 0) return 0;
        return mpz_class(unit_ % p_).get_si();
    }

    std::string to_string() const; // "s*p^v + O(p^m)"
    std::string to_digit_string() const; // "2*3^-1 + 1 + 2*3 + O(3^7)"
    static PadicElement parse(long p, const std::string& s);

  private:
    long p_;
    long val_;
    long abs_;
    mpz_class unit_;

    static void check_same(const PadicElement& a, const PadicElement& b) {
        if (a.p_ && b.p_ && a.p_ != b.p_)
            throw DomainError("PadicElement: context mismatch (different primes)");
    }

    static mpz_class tonelli_shanks(const mpz_class& a, long p) {
        mpz_class pp(p);
        if (a % pp == 0) throw DomainError("sqrt: unit reduces to 0 mod p (internal)");
        if (detail::mod_pow(a, (pp - 1) / 2, pp) != 1)
            throw DomainError("sqrt: unit is not a quadratic residue mod p");
        if (p % 4 == 3) return detail::mod_pow(a, (pp + 1) / 4, pp);
        // general Tonelli-Shanks
        mpz_class q = pp - 1;
        long s = 0;
        while (q % 2 == 0) { q /= 2; ++s; }
        mpz_class z = 2;
        while (detail::mod_pow(z, (pp - 1) / 2, pp) == 1) ++z;
        mpz_class m(s), c = detail::mod_pow(z, q, pp);
        mpz_class t = detail::mod_pow(a, q, pp);
        mpz_class r = detail::mod_pow(a, (q + 1) / 2, pp);
        while (t != 1) {
            mpz_class tt = t;
            long i = 0;
            while (tt != 1) { tt = (tt * tt) % pp; ++i; }
            mpz_class b = c;
            for (long j = 0; j < m.get_si() - i - 1; ++j) b = (b * b) % pp;
            m = i;
            c = (b * b) % pp;
            t = (t * c) % pp;
            r = (r * b) % pp;
        }
        return r;
    }
};

// --- printing / parsing -----------------------------------------------------

inline std::string PadicElement::to_string() const {
    if (is_exact_zero()) return "0";
    if (unit_ == 0) return "O(" + std::to_string(p_) + "^" + std::to_string(abs_) + ")";
    std::string s = unit_.get_str();
    s += "*" + std::to_string(p_) + "^" + std::to_string(val_);
    s += " + O(" + std::to_string(p_) + "^" + std::to_string(abs_) + ")";
    return s;
}

inline std::string PadicElement::to_digit_string() const {
    if (is_exact_zero()) return "0";
    std::string tail = "O(" + std::to_string(p_) + "^" + std::to_string(abs_) + ")";
    if (unit_ == 0) return tail;
    std::string out;
    mpz_class u = unit_;
    long e = val_;
    while (u != 0) {
        long d = mpz_class(u % p_).get_si();
        if (d != 0) {
            if (!out.empty()) out += " + ";
            if (e == 0) out += std::to_string(d);
            else if (e == 1) out += (d == 1 ? "" : std::to_string(d) + "*") + std::to_string(p_);
            else out += (d == 1 ? "" : std::to_string(d) + "*") + std::to_string(p_) + "^" + std::to_string(e);
        }
        u /= p_;
        ++e;
    }
    if (out.empty()) return tail;
    return out + " + " + tail;
}

inline PadicElement PadicElement::parse(long p, const std::string& str) {
    // Accepts the canonical "s*p^v + O(p^m)" form, the digit form, a plain
    // integer/rational, and "O(p^m)".
    auto fail = [&]() -> PadicElement { throw DomainError("cannot parse p-adic string: " + str); };
    std::string s;
    for (char c : str)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail();
    if (s == "0") return exact_zero(p);
    long abs = PREC_INF;
    auto opos = s.find("+O(");
    std::string body = s;
    if (opos != std::string::npos) {
        std::string otail = s.substr(opos + 3);
        body = s.substr(0, opos);
    } else if (s.rfind("O(", 0) == 0) {
        body.clear();
    }
    // extract O(p^m)
    auto obeg = s.find("O(");
    if (obeg != std::string::npos) {
        auto caret = s.find('^', obeg);
        auto close = s.find(')', obeg);
        if (caret == std::string::npos || close == std::string::npos) fail();
        abs = std::stol(s.substr(caret + 1, close - caret - 1));
        long pp = std::stol(s.substr(obeg + 2, caret - obeg - 2));
        if (pp != p) throw DomainError("p-adic string has prime " + std::to_string(pp));
    }
    if (body.empty()) {
        if (abs >= PREC_INF) fail();
        return zero_to_precision(p, abs);
    }
    if (abs >= PREC_INF) abs = 0; // computed below from terms; plain rationals get caller default
    // split into '+'-separated terms (minus signs stay attached to coefficients)
    std::vector<std::string> terms;
    std::string cur;
    for (size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '+' && !cur.empty()) {
            terms.push_back(cur);
            cur.clear();
        } else
            cur += body[i];
    }
    if (!cur.empty()) terms.push_back(cur);
    mpq_class total = 0;
    long max_e = 0, min_e = 0;
    bool have_e = false;
    for (auto& t : terms) {
        mpq_class coeff;
        long e = 0;
        auto star = t.find('*');
        std::string cpart = t, ppart;
        if (star != std::string::npos) {
            cpart = t.substr(0, star);
            ppart = t.substr(star + 1);
        } else {
            // maybe bare "p^e" or bare number
            auto caret = t.find('^');
            if (caret != std::string::npos) {
                cpart = "1";
                ppart = t;
            }
        }
        coeff.set_str(cpart, 10);
        coeff.canonicalize();
        if (!ppart.empty()) {
            auto caret = ppart.find('^');
            long pp = std::stol(caret == std::string::npos ? ppart : ppart.substr(0, caret));
            if (pp != p) throw DomainError("p-adic term has prime " + std::to_string(pp));
            e = caret == std::string::npos ? 1 : std::stol(ppart.substr(caret + 1));
        }
        mpq_class pw;
        if (e >= 0) pw = mpq_class(detail::pow_p(p, e));
        else pw = mpq_class(1, detail::pow_p(p, -e));
        total += coeff * pw;
        max_e = have_e ? std::max(max_e, e) : e;
        min_e = have_e ? std::min(min_e, e) : e;
        have_e = true;
    }
    if (abs == 0) abs = max_e + 1; // plain value with no O(): certify stated digits only
    return from_rational(p, total, abs);
}

} // namespace padicqc
