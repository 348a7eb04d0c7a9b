// Torus-invariant divisors D = sum a_rho D_rho with their piecewise-linear
// support functions.  Conventions: psi_D(v_rho) = -a_rho, the polytope is
// P_D = {m : <m, v_rho> >= -a_rho}, nef means the support function is the
// minimum of its linear pieces (checked against every ray), ample means the
// minimum is strict away from the defining cone.
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torick/errors.hpp"
#include "torick/fan.hpp"
#include "torick/linalg.hpp"
#include "torick/lp.hpp"
#include "torick/polytope.hpp"
#include "torick/rational.hpp"

namespace torick {

using FanPtr = std::shared_ptr<Fan>;

struct SupportFunction {
    std::vector<Vec> pieces;  // m_sigma per max cone
    Int cartier_index = 1;    // lcm of coordinate denominators
};

class TorusDivisor {
public:
    TorusDivisor(FanPtr fan, Vec coeffs) : fan_(std::move(fan)), coeffs_(std::move(coeffs)) {
        if (!fan_) throw PreconditionError("TorusDivisor: null fan");
        if (coeffs_.size() != fan_->rays().size())
            throw PreconditionError("TorusDivisor: one coefficient per ray required");
    }

    const FanPtr& fan() const { return fan_; }
    const Vec& coeffs() const { return coeffs_; }
    const Rational& coeff(size_t ray) const { return coeffs_[ray]; }

    bool same_fan(const TorusDivisor& o) const {
        return fan_ == o.fan_ || fan_->structural_key() == o.fan_->structural_key();
    }

    friend TorusDivisor operator+(const TorusDivisor& a, const TorusDivisor& b) {
        if (!a.same_fan(b)) throw PreconditionError("divisor sum: fans differ");
        Vec c(a.coeffs_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
        return TorusDivisor(a.fan_, std::move(c));
    }
    friend TorusDivisor operator-(const TorusDivisor& a, const TorusDivisor& b) {
        if (!a.same_fan(b)) throw PreconditionError("divisor difference: fans differ");
        Vec c(a.coeffs_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] - b.coeffs_[i];
        return TorusDivisor(a.fan_, std::move(c));
    }
    friend TorusDivisor operator*(const Rational& s, const TorusDivisor& d) {
        Vec c(d.coeffs_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = s * d.coeffs_[i];
        return TorusDivisor(d.fan_, std::move(c));
    }
    TorusDivisor operator-() const { return Rational(-1) * *this; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    std::string structural_key() const {
        std::string s;
        for (const auto& c : coeffs_) s += rational_to_string(c) + ",";
        return s;
    }

private:
    FanPtr fan_;
    Vec coeffs_;
};

inline TorusDivisor zero_divisor(const FanPtr& f) {
    return TorusDivisor(f, Vec(f->rays().size(), Rational(0)));
}

// K_X = -sum of all prime invariant divisors.
inline TorusDivisor canonical_divisor(const FanPtr& f) {
    return TorusDivisor(f, Vec(f->rays().size(), Rational(-1)));
}

// ---------------------------------------------------------------------------
// support functions
// ---------------------------------------------------------------------------

inline SupportFunction support_function(const TorusDivisor& d) {
    const Fan& f = *d.fan();
    SupportFunction sf;
    for (size_t ci = 0; ci < f.max_cones().size(); ++ci) {
        const auto& cone = f.max_cones()[ci];
        Mat a(cone.size(), Vec(f.rank()));
        Vec b(cone.size());
        for (size_t i = 0; i < cone.size(); ++i) {
            for (size_t j = 0; j < f.rank(); ++j) a[i][j] = Rational(f.rays()[cone[i]][j]);
            b[i] = -d.coeff(cone[i]);
        }
        auto m = solve(a, b);
        if (!m)
            throw PreconditionError("support_function: divisor not Q-Cartier on cone " +
                                    std::to_string(ci));
        for (const auto& x : *m) sf.cartier_index = int_lcm(sf.cartier_index, den(x));
        sf.pieces.push_back(std::move(*m));
    }
    return sf;
}

// psi_D(v) evaluated through the piece of a cone containing v.
inline Rational support_value(const TorusDivisor& d, const SupportFunction& sf, const IVec& v) {
    auto ci = d.fan()->containing_cone(v);
    if (!ci) throw PreconditionError("support_value: vector outside fan support");
    return dot(sf.pieces[*ci], v);
}

inline bool is_nef(const TorusDivisor& d) {
    SupportFunction sf = support_function(d);
    const Fan& f = *d.fan();
    for (const auto& m : sf.pieces)
        for (size_t r = 0; r < f.rays().size(); ++r)
            if (dot(m, f.rays()[r]) < -d.coeff(r)) return false;
    return true;
}

inline bool is_ample(const TorusDivisor& d) {
    SupportFunction sf = support_function(d);
    const Fan& f = *d.fan();
    if (!f.complete()) return false;
    for (size_t ci = 0; ci < f.max_cones().size(); ++ci) {
        const auto& cone = f.max_cones()[ci];
        for (size_t r = 0; r < f.rays().size(); ++r) {
            bool in_cone = std::find(cone.begin(), cone.end(), r) != cone.end();
            Rational v = dot(sf.pieces[ci], f.rays()[r]) + d.coeff(r);
            if (in_cone ? (v != 0) : (v <= 0)) return false;
        }
    }
    return true;
}

// Convexity excess across a wall: min over rays of the far cone, not in the
// ridge, of <m_near, v> + a_v.  Nonnegative iff the divisor is nef across
// the wall; positive iff strictly convex there.  The effective intersection
// number with the wall curve has the same sign.
inline Rational wall_bend(const TorusDivisor& d, const SupportFunction& sf, const Wall& w) {
    if (!w.interior()) throw PreconditionError("wall_bend: boundary wall");
    const Fan& f = *d.fan();
    const auto& far = f.max_cones()[w.cone_b];
    std::optional<Rational> bend;
    for (size_t r : far) {
        if (std::find(w.ridge.begin(), w.ridge.end(), r) != w.ridge.end()) continue;
        Rational v = dot(sf.pieces[w.cone_a], f.rays()[r]) + d.coeff(r);
        if (!bend || v < *bend) bend = v;
    }
    if (!bend) throw Error("wall_bend: wall has no opposite ray");
    return *bend;
}

inline bool is_nef_across_walls(const TorusDivisor& d, const std::vector<size_t>& wall_indices) {
    SupportFunction sf = support_function(d);
    for (size_t wi : wall_indices)
        if (wall_bend(d, sf, d.fan()->walls()[wi]) < 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// polytopes and pullbacks
// ---------------------------------------------------------------------------

// P_D = {m : <m, v_rho> >= -a_rho} for nef D on a complete fan, realized as
// the hull of the support-function pieces.
inline RationalPolytope polytope_of(const TorusDivisor& d) {
    const Fan& f = *d.fan();
    if (!f.complete()) throw PreconditionError("polytope_of: fan not complete");
    SupportFunction sf = support_function(d);
    for (const auto& m : sf.pieces)
        for (size_t r = 0; r < f.rays().size(); ++r)
            if (dot(m, f.rays()[r]) < -d.coeff(r))
                throw PreconditionError("polytope_of: divisor is not nef");
    return RationalPolytope::hull(sf.pieces);
}

// Pullback along a refinement: the support function is unchanged as a
// function; coefficients read off as -psi(v) at every fine ray.
inline TorusDivisor pullback_divisor(const TorusDivisor& d, const FanPtr& fine) {
    SupportFunction sf = support_function(d);
    Vec coeffs(fine->rays().size());
    for (size_t r = 0; r < fine->rays().size(); ++r)
        coeffs[r] = -support_value(d, sf, fine->rays()[r]);
    return TorusDivisor(fine, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// ample witnesses and nef decomposition
// ---------------------------------------------------------------------------

// Searches for a divisor whose support function is strictly convex across
// the given walls (all interior walls = ample on a complete fan).  Exact LP:
// variables are ray coefficients and one linear functional per max cone,
// maximizing the worst strictness margin within a coefficient box.
inline std::optional<TorusDivisor> find_strictly_convex(const FanPtr& fan,
                                                        const std::vector<size_t>& wall_indices) {
    const Fan& f = *fan;
    size_t nr = f.rays().size();
    size_t nc = f.max_cones().size();
    size_t n = f.rank();
    // vars: a_0..a_{nr-1}, then m_sigma blocks of size n, then t
    size_t mvars = nr + nc * n;
    LinearProgram lp(mvars + 1);
    lp.set_objective(mvars, Rational(1));
    auto mvar = [&](size_t cone, size_t j) { return nr + cone * n + j; };
    for (size_t ci = 0; ci < nc; ++ci)
        for (size_t local : f.max_cones()[ci]) {
            Vec row(mvars + 1, Rational(0));
            for (size_t j = 0; j < n; ++j) row[mvar(ci, j)] = Rational(f.rays()[local][j]);
            row[local] = 1;  // <m_sigma, v> + a_v = 0
            lp.add_eq(std::move(row), Rational(0));
        }
    for (size_t wi : wall_indices) {
        const Wall& w = f.walls()[wi];
        if (!w.interior()) continue;
        for (int side = 0; side < 2; ++side) {
            size_t near = side ? w.cone_b : w.cone_a;
            size_t far = side ? w.cone_a : w.cone_b;
            for (size_t r : f.max_cones()[far]) {
                if (std::find(w.ridge.begin(), w.ridge.end(), r) != w.ridge.end()) continue;
                Vec row(mvars + 1, Rational(0));
                for (size_t j = 0; j < n; ++j) row[mvar(near, j)] = Rational(f.rays()[r][j]);
                row[r] += 1;
                row[mvars] = -1;  // <m_near, v_r> + a_r >= t
                lp.add_ge(std::move(row), Rational(0));
            }
        }
    }
    for (size_t r = 0; r < nr; ++r) {
        Vec row(mvars + 1, Rational(0));
        row[r] = 1;
        lp.add_le(row, Rational(1));
        for (auto& x : row) x = -x;
        lp.add_le(std::move(row), Rational(1));
    }
    {
        Vec row(mvars + 1, Rational(0));
        row[mvars] = 1;
        lp.add_le(std::move(row), Rational(1));
    }
    auto res = lp.solve();
    if (res.status != LPStatus::Optimal || res.value <= 0) return std::nullopt;
    Vec coeffs(res.x.begin(), res.x.begin() + static_cast<long>(nr));
    return TorusDivisor(fan, std::move(coeffs));
}

inline std::optional<TorusDivisor> find_ample(const FanPtr& fan) {
    std::vector<size_t> all;
    for (size_t i = 0; i < fan->walls().size(); ++i)
        if (fan->walls()[i].interior()) all.push_back(i);
    return find_strictly_convex(fan, all);
}

// The fan's stored witness, computing one by LP on first use.
inline TorusDivisor ample_witness(const FanPtr& fan) {
    if (fan->ample_witness()) return TorusDivisor(fan, *fan->ample_witness());
    auto d = find_ample(fan);
    if (!d) throw PreconditionError("ample_witness: fan has no projectivity witness");
    fan->set_ample_witness(d->coeffs());
    return *d;
}

struct NefDecomposition {
    TorusDivisor positive;  // D + k H, nef
    TorusDivisor negative;  // k H, nef (ample multiple)
    Rational k;
};

// D = positive - negative with both parts nef; k is the smallest
// nonnegative rational making D + kH nef, from the finitely many convexity
// inequalities (linear in k).
inline NefDecomposition nef_decomposition(const TorusDivisor& d) {
    TorusDivisor h = ample_witness(d.fan());
    SupportFunction sd = support_function(d);
    SupportFunction sh = support_function(h);
    const Fan& f = *d.fan();
    Rational k(0);
    for (size_t ci = 0; ci < f.max_cones().size(); ++ci)
        for (size_t r = 0; r < f.rays().size(); ++r) {
            Rational a = dot(sd.pieces[ci], f.rays()[r]) + d.coeff(r);
            if (a >= 0) continue;
            Rational b = dot(sh.pieces[ci], f.rays()[r]) + h.coeff(r);
            if (b <= 0)
                throw PreconditionError("nef_decomposition: witness not strictly convex");
            Rational need = -a / b;
            if (need > k) k = need;
        }
    return {d + k * h, k * h, k};
}

// Transports an ample witness across a star subdivision: mu*H - eps*E is
// strictly convex for small eps > 0 because -E is relatively ample over the
// coarse fan.  The exact eps comes from the finitely many wall bends; the
// result is verified and the caller may fall back to the LP on failure.
inline std::optional<TorusDivisor> ample_after_subdivision(const TorusDivisor& coarse_ample,
                                                           const FanPtr& fine, size_t new_ray) {
    TorusDivisor mu = pullback_divisor(coarse_ample, fine);
    Vec ec(fine->rays().size(), Rational(0));
    ec[new_ray] = 1;
    TorusDivisor e(fine, std::move(ec));
    SupportFunction smu = support_function(mu);
    SupportFunction se = support_function(e);
    std::optional<Rational> upper;
    for (const auto& w : fine->walls()) {
        if (!w.interior()) continue;
        Rational bh = wall_bend(mu, smu, w);
        Rational be = wall_bend(e, se, w);
        // need bh - eps*be > 0
        if (bh == 0) {
            if (be >= 0) return std::nullopt;
        } else if (be > 0) {
            Rational bound = bh / be;
            if (!upper || bound < *upper) upper = bound;
        }
    }
    Rational eps = upper ? *upper / 2 : Rational(1);
    TorusDivisor cand = mu - eps * e;
    if (!is_ample(cand)) return std::nullopt;
    return cand;
}

// Star subdivision that keeps the projectivity witness alive when one is
// stored on the coarse fan.
inline FanPtr star_subdivide_with_witness(const FanPtr& f, const IVec& v) {
    FanPtr out = std::make_shared<Fan>(star_subdivision(*f, v));
    if (f->ample_witness()) {
        if (out->rays().size() == f->rays().size()) {
            out->set_ample_witness(*f->ample_witness());
        } else {
            auto w = ample_after_subdivision(TorusDivisor(f, *f->ample_witness()), out,
                                             out->rays().size() - 1);
            if (w) out->set_ample_witness(w->coeffs());
        }
    }
    return out;
}

// Is the divisor class numerically trivial (= principal on a complete fan)?
inline bool numerically_trivial(const TorusDivisor& d) {
    const Fan& f = *d.fan();
    Mat a;
    Vec b;
    for (size_t r = 0; r < f.rays().size(); ++r) {
        a.push_back(to_vec(f.rays()[r]));
        b.push_back(-d.coeff(r));
    }
    return solve(a, b).has_value();
}

}  // namespace torick
