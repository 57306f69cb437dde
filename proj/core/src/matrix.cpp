#include "qsieve/matrix.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace qsieve {

IMat IMat::identity(int n) {
    IMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IMat imat_mul(const IMat& x, const IMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("imat_mul: shape mismatch");
    IMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Int& v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

IMat imat_transpose(const IMat& x) {
    IMat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

Int det_bareiss(IMat m) {
    if (m.rows != m.cols) throw std::invalid_argument("det_bareiss: not square");
    int n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = t / prev; // exact division (Bareiss)
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

int rank_rational(const IMat& m) {
    // Fraction-free elimination with full pivot search.
    IMat w = m;
    int rank = 0;
    int row = 0;
    for (int col = 0; col < w.cols && row < w.rows; ++col) {
        int piv = -1;
        for (int i = row; i < w.rows; ++i)
            if (w.at(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < w.cols; ++j) std::swap(w.at(row, j), w.at(piv, j));
        for (int i = row + 1; i < w.rows; ++i) {
            if (w.at(i, col) == 0) continue;
            Int f1 = w.at(row, col), f2 = w.at(i, col);
            for (int j = col; j < w.cols; ++j)
                w.at(i, j) = w.at(i, j) * f1 - w.at(row, j) * f2;
        }
        ++row;
        ++rank;
    }
    return rank;
}

int rank_mod_p(const IMat& m, i64 p) {
    std::vector<std::vector<i64>> w(m.rows, std::vector<i64>(m.cols));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            w[i][j] = static_cast<i64>(m.at(i, j) % p);
    for (auto& r : w)
        for (auto& v : r) v = mod_pos(v, p);
    int rank = 0, row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int i = row; i < m.rows; ++i)
            if (w[i][col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(w[row], w[piv]);
        i64 inv = invmod64(w[row][col], p);
        for (int j = col; j < m.cols; ++j) w[row][j] = mulmod64(w[row][j], inv, p);
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || w[i][col] == 0) continue;
            i64 f = w[i][col];
            for (int j = col; j < m.cols; ++j)
                w[i][j] = mod_pos(w[i][j] - mulmod64(f, w[row][j], p), p);
        }
        ++row;
        ++rank;
    }
    return rank;
}

IMat hnf_columns(IMat A, IMat* transform, int* rank_out) {
    int k = A.cols;
    IMat U = IMat::identity(k);
    auto col_swap = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, i), A.at(r, j));
        for (int r = 0; r < k; ++r) std::swap(U.at(r, i), U.at(r, j));
    };
    auto col_axpy = [&](int dst, int src, const Int& f) {
        // column[dst] -= f * column[src]
        if (f == 0) return;
        for (int r = 0; r < A.rows; ++r) A.at(r, dst) -= f * A.at(r, src);
        for (int r = 0; r < k; ++r) U.at(r, dst) -= f * U.at(r, src);
    };
    auto col_negate = [&](int j) {
        for (int r = 0; r < A.rows; ++r) A.at(r, j) = -A.at(r, j);
        for (int r = 0; r < k; ++r) U.at(r, j) = -U.at(r, j);
    };

    int pivots = 0;
    for (int row = 0; row < A.rows && pivots < k; ++row) {
        // Gcd-eliminate across the active columns until at most one nonzero
        // entry remains in this row.
        while (true) {
            int jmin = -1;
            for (int j = pivots; j < k; ++j) {
                if (A.at(row, j) == 0) continue;
                if (jmin < 0 || abs(A.at(row, j)) < abs(A.at(row, jmin))) jmin = j;
            }
            if (jmin < 0) break; // row has no pivot among active columns
            col_swap(pivots, jmin);
            bool others = false;
            for (int j = pivots + 1; j < k; ++j) {
                if (A.at(row, j) == 0) continue;
                Int q = A.at(row, j) / A.at(row, pivots);
                col_axpy(j, pivots, q);
                if (A.at(row, j) != 0) others = true;
            }
            if (!others) {
                if (A.at(row, pivots) < 0) col_negate(pivots);
                // Canonical reduction of earlier pivot columns against this one.
                for (int j = 0; j < pivots; ++j) {
                    Int v = A.at(row, j);
                    Int p = A.at(row, pivots);
                    Int q = v / p;
                    if (v - q * p < 0) q -= 1; // floor division
                    col_axpy(j, pivots, q);
                }
                ++pivots;
                break;
            }
        }
    }
    if (transform) *transform = std::move(U);
    if (rank_out) *rank_out = pivots;
    return A;
}

IMat integer_kernel(const IMat& A) {
    IMat U;
    int rank = 0;
    hnf_columns(A, &U, &rank);
    IMat K(A.cols, A.cols - rank);
    for (int r = 0; r < A.cols; ++r)
        for (int j = rank; j < A.cols; ++j) K.at(r, j - rank) = U.at(r, j);
    return K;
}

void inverse_rational(const IMat& B, IMat& num, Int& den) {
    if (B.rows != B.cols) throw std::invalid_argument("inverse_rational: not square");
    int n = B.rows;
    std::vector<std::vector<Rat>> w(n, std::vector<Rat>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w[i][j] = Rat(B.at(i, j));
        w[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (w[i][col] != 0) { piv = i; break; }
        if (piv < 0) throw std::invalid_argument("inverse_rational: singular");
        std::swap(w[col], w[piv]);
        Rat d = w[col][col];
        for (int j = 0; j < 2 * n; ++j) w[col][j] /= d;
        for (int i = 0; i < n; ++i) {
            if (i == col || w[i][col] == 0) continue;
            Rat f = w[i][col];
            for (int j = col; j < 2 * n; ++j) w[i][j] -= f * w[col][j];
        }
    }
    den = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            den = boost::multiprecision::lcm(den, rat_den(w[i][n + j]));
    num = IMat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            num.at(i, j) = rat_num(w[i][n + j]) * (den / rat_den(w[i][n + j]));
}

IMat left_inverse_primitive(const IMat& M) {
    int n = M.rows, k = M.cols;
    // Row-style Hermite form via the transpose: U^T * M = [R; 0] with R
    // upper triangular k x k. Saturation means |det R| = 1.
    IMat U;
    int rank = 0;
    hnf_columns(imat_transpose(M), &U, &rank);
    if (rank != k) throw std::invalid_argument("left_inverse_primitive: columns dependent");
    IMat V = imat_transpose(U); // V * M has top k rows upper triangular
    IMat R(k, k);
    IMat VM = imat_mul(V, M);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) R.at(i, j) = VM.at(i, j);
    Int d = 1;
    for (int i = 0; i < k; ++i) d *= R.at(i, i);
    if (d != 1 && d != -1)
        throw std::invalid_argument("left_inverse_primitive: lattice not saturated");
    // Invert the unimodular triangular R over Z by back substitution.
    IMat Rinv(k, k);
    for (int col = 0; col < k; ++col) {
        for (int i = k - 1; i >= 0; --i) {
            Int s = (i == col) ? Int(1) : Int(0);
            for (int j = i + 1; j < k; ++j) s -= R.at(i, j) * Rinv.at(j, col);
            Rinv.at(i, col) = s / R.at(i, i); // diag is +-1
        }
    }
    IMat P(k, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) P.at(i, j) = V.at(i, j);
    return imat_mul(Rinv, P);
}

} // namespace qsieve
