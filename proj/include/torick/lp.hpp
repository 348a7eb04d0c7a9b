// Exact rational linear programming: a two-phase tableau simplex with
// Bland's rule.  Deterministic (fixed pivoting order), exact, and sized for
// desk-scale feasibility questions: strict convexity of support functions,
// cone membership, strong convexity of cones.
#pragma once

#include <algorithm>
#include <vector>

#include "torick/errors.hpp"
#include "torick/linalg.hpp"
#include "torick/rational.hpp"

namespace torick {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Vec x;            // values of the structural (free) variables
    Rational value;   // objective value at the optimum
};

// maximize objective . x  subject to rows a . x <= / >= / = b, x free.
class LinearProgram {
public:
    explicit LinearProgram(size_t num_vars) : n_(num_vars), objective_(num_vars, Rational(0)) {}

    void set_objective(size_t var, const Rational& coeff) { objective_[var] = coeff; }

    void add_le(Vec a, Rational b) { rows_.push_back({std::move(a), std::move(b), false}); }
    void add_ge(Vec a, Rational b) {
        for (auto& c : a) c = -c;
        add_le(std::move(a), -b);
    }
    void add_eq(Vec a, Rational b) { rows_.push_back({std::move(a), std::move(b), true}); }

    size_t num_vars() const { return n_; }

    LPResult solve() const;

private:
    struct Row {
        Vec a;
        Rational b;
        bool eq;
    };
    size_t n_;
    Vec objective_;
    std::vector<Row> rows_;
};

namespace lp_detail {

// Tableau for: maximize c.y s.t. A y <= b, y >= 0.  A secondary objective
// row rides along so phase 2 can continue from the phase-1 basis.  Column
// layout: [structural y | slacks | artificial? | rhs].
struct Tableau {
    size_t m, ncols;                  // constraints, total variable columns
    std::vector<Vec> t;               // m rows x (ncols + 1)
    Vec z, z2;
    Rational zval, z2val;
    std::vector<size_t> basis;
    size_t banned = static_cast<size_t>(-1);
    bool unbounded = false;

    Tableau(const std::vector<Vec>& a, const Vec& b, size_t nstruct, bool artificial)
        : m(a.size()), ncols(nstruct + a.size() + (artificial ? 1 : 0)),
          t(a.size(), Vec(ncols + 1, Rational(0))), z(ncols, Rational(0)), z2(ncols, Rational(0)),
          zval(0), z2val(0), basis(a.size()) {
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < nstruct; ++j) t[i][j] = a[i][j];
            t[i][nstruct + i] = 1;
            if (artificial) t[i][ncols - 1] = -1;
            t[i][ncols] = b[i];
            basis[i] = nstruct + i;
        }
    }

    void pivot(size_t row, size_t col) {
        Rational inv = Rational(1) / t[row][col];
        for (auto& v : t[row]) v *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || t[i][col] == 0) continue;
            Rational f = t[i][col];
            for (size_t j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
        }
        if (z[col] != 0) {
            Rational f = z[col];
            for (size_t j = 0; j < ncols; ++j) z[j] -= f * t[row][j];
            zval += f * t[row][ncols];
        }
        if (z2[col] != 0) {
            Rational f = z2[col];
            for (size_t j = 0; j < ncols; ++j) z2[j] -= f * t[row][j];
            z2val += f * t[row][ncols];
        }
        basis[row] = col;
    }

    // One Bland step; returns false at optimality, sets `unbounded` if the
    // objective has no upper bound.
    bool step() {
        size_t col = ncols;
        for (size_t j = 0; j < ncols; ++j)
            if (j != banned && z[j] > 0) { col = j; break; }
        if (col == ncols) return false;
        size_t row = m;
        Rational best;
        for (size_t i = 0; i < m; ++i) {
            if (t[i][col] <= 0) continue;
            Rational ratio = t[i][ncols] / t[i][col];
            if (row == m || ratio < best || (ratio == best && basis[i] < basis[row])) {
                row = i;
                best = ratio;
            }
        }
        if (row == m) { unbounded = true; return false; }
        pivot(row, col);
        return true;
    }

    void run() {
        while (step()) {}
    }
};

}  // namespace lp_detail

inline LPResult LinearProgram::solve() const {
    // Split free variables x_j = u_j - w_j and expand equalities into
    // opposite inequality pairs.
    size_t ny = 2 * n_;
    std::vector<Vec> a;
    Vec b;
    for (const auto& r : rows_) {
        Vec row(ny, Rational(0));
        for (size_t j = 0; j < n_; ++j) {
            row[2 * j] = r.a[j];
            row[2 * j + 1] = -r.a[j];
        }
        if (r.eq) {
            Vec neg(ny);
            for (size_t j = 0; j < ny; ++j) neg[j] = -row[j];
            a.push_back(std::move(neg));
            b.push_back(-r.b);
        }
        a.push_back(std::move(row));
        b.push_back(r.b);
    }
    size_t m = a.size();

    Vec c(ny, Rational(0));
    for (size_t j = 0; j < n_; ++j) {
        c[2 * j] = objective_[j];
        c[2 * j + 1] = -objective_[j];
    }

    bool need_phase1 = false;
    for (const auto& v : b)
        if (v < 0) { need_phase1 = true; break; }

    LPResult res;
    lp_detail::Tableau t(a, b, ny, need_phase1);
    if (need_phase1) {
        size_t art = t.ncols - 1;
        t.z[art] = -1;  // maximize -x0
        for (size_t j = 0; j < ny; ++j) t.z2[j] = c[j];
        size_t worst = 0;
        for (size_t i = 1; i < m; ++i)
            if (b[i] < b[worst]) worst = i;
        t.pivot(worst, art);
        t.run();
        if (t.unbounded) throw Error("lp: phase-1 unbounded (internal)");
        if (t.zval < 0) {
            res.status = LPStatus::Infeasible;
            return res;
        }
        for (size_t i = 0; i < m; ++i) {
            if (t.basis[i] != art) continue;
            for (size_t j = 0; j < art; ++j)
                if (t.t[i][j] != 0) { t.pivot(i, j); break; }
            break;
        }
        t.banned = art;
        t.z = t.z2;
        t.zval = t.z2val;
    } else {
        for (size_t j = 0; j < ny; ++j) t.z[j] = c[j];
    }
    t.run();
    if (t.unbounded) {
        res.status = LPStatus::Unbounded;
        return res;
    }
    res.status = LPStatus::Optimal;
    res.value = t.zval;
    res.x.assign(n_, Rational(0));
    for (size_t i = 0; i < m; ++i) {
        if (t.basis[i] >= ny) continue;
        size_t j = t.basis[i];
        Rational v = t.t[i][t.ncols];
        if (j % 2 == 0) res.x[j / 2] += v; else res.x[j / 2] -= v;
    }
    return res;
}

}  // namespace torick
