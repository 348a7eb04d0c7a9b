// Dense exact linear algebra over Q and Z at desk scale: elimination,
// nullspaces, determinants, and the Smith normal form used for kernel
// lattices and saturations.
#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "torick/errors.hpp"
#include "torick/rational.hpp"

namespace torick {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;  // row-major
using IVec = std::vector<Int>;
using IMat = std::vector<IVec>;

inline Rational dot(const Vec& a, const Vec& b) {
    Rational s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rational dot(const Vec& a, const IVec& b) {
    Rational s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rational(b[i]);
    return s;
}

inline Int idot(const IVec& a, const IVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec to_vec(const IVec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
    return r;
}

inline IVec ivec_add(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IVec ivec_scale(const Int& s, const IVec& a) {
    IVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

// Divides by the gcd of the entries; the zero vector is rejected.
inline IVec primitive(IVec v) {
    Int g = 0;
    for (const auto& x : v) g = int_gcd(g, x);
    if (g == 0) throw PreconditionError("primitive: zero vector");
    for (auto& x : v) x /= g;
    return v;
}

inline bool is_primitive(const IVec& v) {
    Int g = 0;
    for (const auto& x : v) g = int_gcd(g, x);
    return g == 1;
}

// Scales a rational vector to a primitive integer vector (same ray).
inline IVec rational_ray_to_primitive(const Vec& v) {
    Int l = 1;
    for (const auto& x : v) l = int_lcm(l, den(x));
    IVec iv(v.size());
    for (size_t i = 0; i < v.size(); ++i) iv[i] = num(v[i]) * (l / den(v[i]));
    return primitive(std::move(iv));
}

inline IMat identity_matrix(size_t n) {
    IMat m(n, IVec(n, Int(0)));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

// Row-reduced echelon form; returns pivot column per pivot row.
struct Echelon {
    Mat rows;
    std::vector<size_t> pivot_cols;
    size_t rank() const { return pivot_cols.size(); }
};

inline Echelon rref(Mat a) {
    size_t m = a.size(), n = m ? a[0].size() : 0;
    Echelon e;
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t piv = row;
        while (piv < m && a[piv][col] == 0) ++piv;
        if (piv == m) continue;
        std::swap(a[row], a[piv]);
        Rational inv = Rational(1) / a[row][col];
        for (size_t j = col; j < n; ++j) a[row][j] *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
        }
        e.pivot_cols.push_back(col);
        ++row;
    }
    a.resize(row);
    e.rows = std::move(a);
    return e;
}

inline size_t rank(const Mat& a) { return rref(a).rank(); }

inline size_t rank_of_ivecs(const std::vector<IVec>& rows) {
    Mat m;
    m.reserve(rows.size());
    for (const auto& r : rows) m.push_back(to_vec(r));
    return rank(m);
}

// One solution of A x = b, if consistent.
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
    size_t m = a.size(), n = m ? a[0].size() : 0;
    Mat aug(m, Vec(n + 1));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n] = b[i];
    }
    Echelon e = rref(std::move(aug));
    for (size_t r = 0; r < e.rank(); ++r)
        if (e.pivot_cols[r] == n) return std::nullopt;  // 0 = 1 row
    Vec x(n, Rational(0));
    for (size_t r = 0; r < e.rank(); ++r) x[e.pivot_cols[r]] = e.rows[r][n];
    return x;
}

// Basis of the (right) nullspace of A.
inline std::vector<Vec> nullspace(const Mat& a) {
    size_t n = a.empty() ? 0 : a[0].size();
    Echelon e = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (size_t c : e.pivot_cols) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        Vec v(n, Rational(0));
        v[free_col] = 1;
        for (size_t r = 0; r < e.rank(); ++r) v[e.pivot_cols[r]] = -e.rows[r][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Rational det(Mat a) {
    size_t n = a.size();
    Rational d(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) { std::swap(a[piv], a[col]); d = -d; }
        d *= a[col][col];
        Rational inv = Rational(1) / a[col][col];
        for (size_t i = col + 1; i < n; ++i) {
            if (a[i][col] == 0) continue;
            Rational f = a[i][col] * inv;
            for (size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    return d;
}

inline Int idet(const IMat& a) {
    Mat m;
    m.reserve(a.size());
    for (const auto& r : a) m.push_back(to_vec(r));
    Rational d = det(std::move(m));
    return num(d) / den(d);
}

// Smith normal form: U * A * V = S with U, V unimodular and S diagonal
// with s_1 | s_2 | ... .  Only V (and S) are tracked; that is all the
// kernel-lattice computations need.
struct Smith {
    IMat s;  // m x n
    IMat v;  // n x n unimodular (columns transform the source lattice)
    size_t rank = 0;
};

inline Smith smith_normal_form(IMat a) {
    size_t m = a.size(), n = m ? a[0].size() : 0;
    Smith out;
    out.v.assign(n, IVec(n, Int(0)));
    for (size_t i = 0; i < n; ++i) out.v[i][i] = 1;
    if (m == 0 || n == 0) { out.s = a; return out; }

    auto col_op = [&](size_t c1, size_t c2, const Int& f) {
        // col c2 -= f * col c1  (applied to both A and V)
        for (size_t i = 0; i < m; ++i) a[i][c2] -= f * a[i][c1];
        for (size_t i = 0; i < n; ++i) out.v[i][c2] -= f * out.v[i][c1];
    };
    auto col_swap = [&](size_t c1, size_t c2) {
        for (size_t i = 0; i < m; ++i) std::swap(a[i][c1], a[i][c2]);
        for (size_t i = 0; i < n; ++i) std::swap(out.v[i][c1], out.v[i][c2]);
    };
    auto row_op = [&](size_t r1, size_t r2, const Int& f) {
        for (size_t j = 0; j < n; ++j) a[r2][j] -= f * a[r1][j];
    };

    size_t t = 0;
    while (t < m && t < n) {
        // find a nonzero pivot in the lower-right block
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < m && !found; ++i)
            for (size_t j = t; j < n && !found; ++j)
                if (a[i][j] != 0) { pi = i; pj = j; found = true; }
        if (!found) break;
        if (pi != t) std::swap(a[pi], a[t]);
        if (pj != t) col_swap(pj, t);

        // clear row and column t by gcd reduction
        for (;;) {
            bool dirty = false;
            for (size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                Int q = a[i][t] / a[t][t];
                row_op(t, i, q);
                if (a[i][t] != 0) { std::swap(a[i], a[t]); dirty = true; }
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Int q = a[t][j] / a[t][t];
                col_op(t, j, q);
                if (a[t][j] != 0) { col_swap(j, t); dirty = true; }
            }
            if (!dirty) break;
        }
        // enforce divisibility s_t | a[i][j] for the rest
        bool redo = false;
        for (size_t i = t + 1; i < m && !redo; ++i)
            for (size_t j = t + 1; j < n && !redo; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    // add row i to row t and restart the reduction of t
                    for (size_t jj = 0; jj < n; ++jj) a[t][jj] += a[i][jj];
                    redo = true;
                }
        if (redo) continue;
        if (a[t][t] < 0) {
            for (size_t j = 0; j < n; ++j) a[t][j] = -a[t][j];
        }
        ++t;
    }
    out.rank = t;
    out.s = std::move(a);
    return out;
}

// Basis (as columns of V beyond the rank) of the saturated kernel lattice
// {x in Z^n : A x = 0}.
inline std::vector<IVec> integer_kernel_basis(const IMat& a) {
    Smith s = smith_normal_form(a);
    size_t n = s.v.size();
    std::vector<IVec> basis;
    for (size_t j = s.rank; j < n; ++j) {
        IVec col(n);
        for (size_t i = 0; i < n; ++i) col[i] = s.v[i][j];
        basis.push_back(std::move(col));
    }
    return basis;
}

// Integer coordinates of v in terms of basis columns B (n x k), if any.
inline std::optional<IVec> integer_coordinates(const std::vector<IVec>& basis, const IVec& v) {
    if (basis.empty()) return std::nullopt;
    size_t n = v.size(), k = basis.size();
    Mat a(n, Vec(k));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) a[i][j] = Rational(basis[j][i]);
    auto x = solve(a, to_vec(v));
    if (!x) return std::nullopt;
    IVec out(k);
    for (size_t j = 0; j < k; ++j) {
        if (den((*x)[j]) != 1) return std::nullopt;
        out[j] = num((*x)[j]);
    }
    // verify (solve returns one solution; basis columns are independent)
    for (size_t i = 0; i < n; ++i) {
        Int s = 0;
        for (size_t j = 0; j < k; ++j) s += out[j] * basis[j][i];
        if (s != v[i]) return std::nullopt;
    }
    return out;
}

// True when the vectors extend to a Z-basis of the ambient lattice.
inline bool spans_saturated_sublattice(const std::vector<IVec>& vecs) {
    if (vecs.empty()) return true;
    IMat a(vecs.size(), IVec(vecs[0].size()));
    for (size_t i = 0; i < vecs.size(); ++i) a[i] = vecs[i];
    Smith s = smith_normal_form(std::move(a));
    if (s.rank != vecs.size()) return false;
    for (size_t i = 0; i < s.rank; ++i)
        if (s.s[i][i] != 1) return false;
    return true;
}

}  // namespace torick
