#pragma once

// Exact helpers over Q: dense polynomials (for curve validation and the
// Hodge-stage linear algebra) and the quadratic scalars a + b*sqrt(d) used to
// feed points with coordinates in a real quadratic field into Q_p.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "padicqc/errors.hpp"
#include "padicqc/padic.hpp"

namespace padicqc {

class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }
    static RatPoly monomial(const mpq_class& c, long e) {
        std::vector<mpq_class> v(e + 1, mpq_class(0));
        v[e] = c;
        return RatPoly(std::move(v));
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    mpq_class get(long e) const { return e >= 0 && e < static_cast<long>(c_.size()) ? c_[e] : mpq_class(0); }
    void set(long e, const mpq_class& v) {
        if (e >= static_cast<long>(c_.size())) c_.resize(e + 1, mpq_class(0));
        c_[e] = v;
        trim();
    }
    mpq_class leading() const {
        if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
        return c_.back();
    }

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = a.get(i) + b.get(i);
        return RatPoly(std::move(r));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
        std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
        for (size_t i = 0; i < r.size(); ++i) r[i] = a.get(i) - b.get(i);
        return RatPoly(std::move(r));
    }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return RatPoly();
        std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1, mpq_class(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return RatPoly(std::move(r));
    }
    RatPoly times(const mpq_class& q) const {
        RatPoly r = *this;
        for (auto& x : r.c_) x *= q;
        r.trim();
        return r;
    }

    RatPoly derivative() const {
        if (c_.size() <= 1) return RatPoly();
        std::vector<mpq_class> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * mpq_class(static_cast<long>(i));
        return RatPoly(std::move(r));
    }

    mpq_class eval(const mpq_class& x) const {
        mpq_class acc = 0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    PadicElement eval_padic(const PadicElement& x, long prec) const {
        PadicElement acc = PadicElement::exact_zero(x.prime());
        for (size_t i = c_.size(); i-- > 0;)
            acc = acc * x + PadicElement::from_rational(x.prime(), c_[i], prec);
        return acc;
    }

    // divide, returning (quotient, remainder)
    std::pair<RatPoly, RatPoly> divmod(const RatPoly& d) const {
        if (d.is_zero()) throw DomainError("polynomial division by zero");
        RatPoly q, r = *this;
        mpq_class lead_inv = 1 / d.leading();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            long sh = r.degree() - d.degree();
            mpq_class f = r.leading() * lead_inv;
            q.set(sh, q.get(sh) + f);
            r = r - d * RatPoly::monomial(f, sh);
        }
        return {q, r};
    }

    friend RatPoly operator%(const RatPoly& a, const RatPoly& b) { return a.divmod(b).second; }
    friend RatPoly operator/(const RatPoly& a, const RatPoly& b) { return a.divmod(b).first; }

    static mpq_class resultant(RatPoly a, RatPoly b) {
        if (a.is_zero() || b.is_zero()) return 0;
        mpq_class acc = 1;
        while (true) {
            if (b.degree() == 0) {
                mpq_class lb = b.leading();
                mpq_class r = acc;
                for (long i = 0; i < a.degree(); ++i) r *= lb;
                return r;
            }
            RatPoly rem = a % b;
            if (rem.is_zero()) return 0;
            long da = a.degree(), db = b.degree(), dr = rem.degree();
            if ((da * db) % 2 == 1) acc = -acc;
            mpq_class lb = b.leading();
            for (long i = 0; i < da - dr; ++i) acc *= lb;
            a = b;
            b = rem;
        }
    }

    mpq_class discriminant() const {
        long n = degree();
        mpq_class res = resultant(*this, derivative());
        mpq_class d = res / leading();
        if (((n * (n - 1)) / 2) % 2 == 1) d = -d;
        return d;
    }

    // Bezout pair (u, v) with u*a + v*b = gcd (monic); throws if gcd != 1
    static std::pair<RatPoly, RatPoly> bezout_coprime(const RatPoly& a, const RatPoly& b) {
        RatPoly r0 = a, r1 = b;
        RatPoly u0 = RatPoly::monomial(1, 0), u1;
        RatPoly v0, v1 = RatPoly::monomial(1, 0);
        while (!r1.is_zero()) {
            auto [q, r] = r0.divmod(r1);
            RatPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u2;
            v0 = v1;
            v1 = v2;
        }
        if (r0.degree() != 0) throw DomainError("bezout_coprime: inputs share a factor");
        mpq_class inv = 1 / r0.leading();
        return {u0.times(inv), v0.times(inv)};
    }

    const std::vector<mpq_class>& coeffs() const { return c_; }

    std::string to_string(const std::string& var = "x") const {
        std::string out;
        for (long e = degree(); e >= 0; --e) {
            if (get(e) == 0) continue;
            if (!out.empty()) out += " + ";
            if (e == 0 || get(e) != 1) out += get(e).get_str();
            if (e > 0) {
                if (get(e) != 1) out += "*";
                out += var;
                if (e > 1) out += "^" + std::to_string(e);
            }
        }
        return out.empty() ? "0" : out;
    }

  private:
    std::vector<mpq_class> c_;
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

// a + b*sqrt(d) with a, b exact rationals; d squarefree-ish nonsquare (or the
// degenerate d = 0 for plain rationals).
struct QuadExt {
    mpq_class a, b;
    long d = 0;

    QuadExt() = default;
    QuadExt(mpq_class a_) : a(std::move(a_)) {}
    QuadExt(mpq_class a_, mpq_class b_, long d_) : a(std::move(a_)), b(std::move(b_)), d(b_ == 0 ? 0 : d_) {}

    bool is_rational() const { return b == 0; }

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
        check(x, y);
        return QuadExt(x.a + y.a, x.b + y.b, x.d ? x.d : y.d);
    }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
        check(x, y);
        return QuadExt(x.a - y.a, x.b - y.b, x.d ? x.d : y.d);
    }
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        check(x, y);
        long d = x.d ? x.d : y.d;
        return QuadExt(x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d);
    }
    QuadExt conj() const { return QuadExt(a, -b, d); }
    mpq_class norm() const { return a * a - b * b * d; }
    QuadExt inverse() const {
        mpq_class n = norm();
        if (n == 0) throw DomainError("QuadExt: inverse of zero");
        return QuadExt(a / n, -b / n, d);
    }
    friend QuadExt operator/(const QuadExt& x, const QuadExt& y) { return x * y.inverse(); }
    friend bool operator==(const QuadExt& x, const QuadExt& y) { return x.a == y.a && x.b == y.b && (x.b == 0 || x.d == y.d); }

    // Embed into Q_p by the square root of d whose residue mod p is given.
    PadicElement embed(long p, long abs, long sqrt_d_residue = 0) const {
        PadicElement av = PadicElement::from_rational(p, a, abs);
        if (b == 0) return av;
        if (sqrt_d_residue == 0) throw DomainError("QuadExt::embed: a residue for sqrt(d) is required");
        PadicElement rd = PadicElement::from_rational(p, mpq_class(d), abs).sqrt(sqrt_d_residue);
        return av + PadicElement::from_rational(p, b, abs) * rd;
    }

    std::string to_string() const {
        if (b == 0) return a.get_str();
        std::string s = a == 0 ? "" : a.get_str();
        std::string bs = b == 1 ? "" : (b == -1 ? "-" : b.get_str() + "*");
        if (!s.empty() && b > 0) s += "+";
        return s + bs + "sqrt(" + std::to_string(d) + ")";
    }

  private:
    static void check(const QuadExt& x, const QuadExt& y) {
        if (x.d && y.d && x.d != y.d) throw DomainError("QuadExt: mixed radicands");
    }
};

} // namespace padicqc
