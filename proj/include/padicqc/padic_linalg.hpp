#pragma once

// Dense matrices over Q_p and valuation-aware Gaussian elimination.  Output
// precision falls out of the tracked element arithmetic; pivots are chosen by
// minimal valuation (then maximal relative precision).

#include <vector>

#include "padicqc/padic.hpp"

namespace padicqc {

class PadicMatrix {
  public:
    PadicMatrix() : rows_(0), cols_(0) {}
    PadicMatrix(long rows, long cols, long p)
        : rows_(rows), cols_(cols), e_(rows * cols, PadicElement::exact_zero(p)) {}

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    PadicElement& at(long i, long j) { return e_[i * cols_ + j]; }
    const PadicElement& at(long i, long j) const { return e_[i * cols_ + j]; }

    friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product: shape mismatch");
        long p = 0;
        for (auto& x : a.e_)
            if (x.prime()) { p = x.prime(); break; }
        for (auto& x : b.e_)
            if (p == 0 && x.prime()) { p = x.prime(); break; }
        PadicMatrix c(a.rows_, b.cols_, p);
        for (long i = 0; i < a.rows_; ++i)
            for (long k = 0; k < a.cols_; ++k) {
                const PadicElement& aik = a.at(i, k);
                if (aik.is_exact_zero()) continue;
                for (long j = 0; j < b.cols_; ++j)
                    c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }

    friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DomainError("matrix difference: shape mismatch");
        PadicMatrix c = a;
        for (size_t i = 0; i < c.e_.size(); ++i) c.e_[i] -= b.e_[i];
        return c;
    }

    PadicMatrix transpose() const {
        PadicMatrix t(cols_, rows_, 0);
        t.e_.assign(cols_ * rows_, PadicElement());
        for (long i = 0; i < rows_; ++i)
            for (long j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

  private:
    long rows_, cols_;
    std::vector<PadicElement> e_;
};

// Solve A x = rhs (A square, rhs may have several columns).
inline PadicMatrix solve_linear(PadicMatrix a, PadicMatrix rhs) {
    if (a.rows() != a.cols()) throw DomainError("solve_linear: matrix not square");
    if (rhs.rows() != a.rows()) throw DomainError("solve_linear: rhs shape mismatch");
    long n = a.rows(), m = rhs.cols();
    std::vector<long> perm(n);
    for (long i = 0; i < n; ++i) perm[i] = i;

    for (long col = 0; col < n; ++col) {
        long best = -1, best_val = PREC_INF, best_rel = -1;
        for (long r = col; r < n; ++r) {
            const PadicElement& x = a.at(r, col);
            if (x.is_zero_to_precision()) continue;
            long v = x.valuation(), rel = x.rel_precision();
            if (v < best_val || (v == best_val && rel > best_rel)) {
                best = r;
                best_val = v;
                best_rel = rel;
            }
        }
        if (best < 0) throw SingularError("solve_linear: apparently singular at working precision");
        if (best != col) {
            for (long j = 0; j < n; ++j) std::swap(a.at(col, j), a.at(best, j));
            for (long j = 0; j < m; ++j) std::swap(rhs.at(col, j), rhs.at(best, j));
        }
        PadicElement piv_inv = a.at(col, col).inverse();
        for (long r = col + 1; r < n; ++r) {
            const PadicElement& x = a.at(r, col);
            if (x.is_exact_zero()) continue;
            PadicElement factor = x * piv_inv;
            a.at(r, col) = PadicElement::exact_zero(factor.prime());
            for (long j = col + 1; j < n; ++j) a.at(r, j) -= factor * a.at(col, j);
            for (long j = 0; j < m; ++j) rhs.at(r, j) -= factor * rhs.at(col, j);
        }
    }
    // back substitution
    for (long col = n - 1; col >= 0; --col) {
        PadicElement piv_inv = a.at(col, col).inverse();
        for (long j = 0; j < m; ++j) {
            PadicElement s = rhs.at(col, j);
            for (long k = col + 1; k < n; ++k) s -= a.at(col, k) * rhs.at(k, j);
            rhs.at(col, j) = s * piv_inv;
        }
    }
    return rhs;
}

} // namespace padicqc
