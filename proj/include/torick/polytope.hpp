// Exact rational polytopes: convex hulls with an incremental triangulation
// (giving volumes as determinant sums), Minkowski sums, and the mixed
// volume defined by inclusion-exclusion.  The normalization is pinned by
// the diagonal identity mixed_intersection(P,...,P) = normalized_volume(P)
// = n! * vol(P).
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "torick/errors.hpp"
#include "torick/linalg.hpp"
#include "torick/rational.hpp"

namespace torick {

// <normal, x> <= offset
struct HalfSpace {
    IVec normal;
    Rational offset;
};

// <normal, x> = offset
struct AffineEquation {
    IVec normal;
    Rational offset;
};

namespace hull_detail {

// Full-dimensional incremental hull in R^k, k >= 1.  Points are inserted
// one at a time; the triangulation is kept implicitly through its boundary
// (XOR bookkeeping of facet simplices: a facet shared by two simplices is
// interior and cancels), and the volume accumulates as |det| of each added
// simplex.  Points lying exactly on a boundary hyperplane are not visible
// from it, so degenerate simplices are never created.
struct FullDimHull {
    size_t k;
    const std::vector<Vec>& pts;
    Rational vol_times_kfact = 0;

    struct BFacet {
        Vec normal;       // outward for the creating simplex: <n, x> <= offset inside
        Rational offset;
    };
    std::map<std::vector<size_t>, BFacet> boundary;

    FullDimHull(size_t k_, const std::vector<Vec>& pts_) : k(k_), pts(pts_) {}

    // Hyperplane through the facet's vertices, oriented away from `opposite`
    // (the remaining vertex of the simplex the facet came from).
    BFacet make_facet(const std::vector<size_t>& idx, size_t opposite) const {
        BFacet f;
        if (k == 1) {
            f.normal = Vec{Rational(1)};
            f.offset = pts[idx[0]][0];
        } else {
            Mat diffs(k - 1, Vec(k));
            for (size_t i = 1; i < k; ++i)
                for (size_t j = 0; j < k; ++j) diffs[i - 1][j] = pts[idx[i]][j] - pts[idx[0]][j];
            auto ns = nullspace(diffs);
            if (ns.size() != 1) throw Error("hull: degenerate facet");
            f.normal = std::move(ns[0]);
            f.offset = dot(f.normal, pts[idx[0]]);
        }
        Rational side = dot(f.normal, pts[opposite]) - f.offset;
        if (side > 0) {
            for (auto& v : f.normal) v = -v;
            f.offset = -f.offset;
        } else if (side == 0) {
            throw Error("hull: degenerate simplex");
        }
        return f;
    }

    void toggle_facet(std::vector<size_t> idx, size_t opposite) {
        std::sort(idx.begin(), idx.end());
        auto it = boundary.find(idx);
        if (it != boundary.end()) {
            boundary.erase(it);
        } else {
            BFacet f = make_facet(idx, opposite);
            boundary.emplace(std::move(idx), std::move(f));
        }
    }

    void add_simplex(const std::vector<size_t>& verts /* size k+1 */) {
        Mat m(k, Vec(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) m[i][j] = pts[verts[i]][j] - pts[verts[k]][j];
        vol_times_kfact += rat_abs(det(std::move(m)));
        for (size_t omit = 0; omit <= k; ++omit) {
            std::vector<size_t> f;
            f.reserve(k);
            for (size_t i = 0; i <= k; ++i)
                if (i != omit) f.push_back(verts[i]);
            toggle_facet(std::move(f), verts[omit]);
        }
    }

    // seed: indices of k+1 affinely independent points
    void run(const std::vector<size_t>& seed, const std::vector<size_t>& rest) {
        add_simplex(seed);
        for (size_t p : rest) {
            std::vector<std::vector<size_t>> visible;
            for (const auto& [idx, f] : boundary)
                if (dot(f.normal, pts[p]) > f.offset) visible.push_back(idx);
            for (auto& idx : visible) {
                idx.push_back(p);
                add_simplex(idx);
            }
        }
    }
};

}  // namespace hull_detail

class RationalPolytope {
public:
    // Convex hull of a nonempty list of rational points.  Lower-dimensional
    // hulls are legal; they carry their intrinsic dimension and affine-hull
    // equations, and have normalized volume 0.
    static RationalPolytope hull(const std::vector<Vec>& points) {
        if (points.empty()) throw PreconditionError("hull: empty point list");
        RationalPolytope p;
        p.ambient_ = points[0].size();
        if (p.ambient_ == 0) throw PreconditionError("hull: ambient dimension 0");
        for (const auto& q : points)
            if (q.size() != p.ambient_) throw PreconditionError("hull: mixed ambient dimensions");

        std::vector<Vec> pts = points;
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

        // affine basis through pts[0]
        const Vec& p0 = pts[0];
        std::vector<size_t> seed{0};
        Mat diffs;
        for (size_t i = 1; i < pts.size() && diffs.size() < p.ambient_; ++i) {
            Mat trial = diffs;
            Vec d(p.ambient_);
            for (size_t j = 0; j < p.ambient_; ++j) d[j] = pts[i][j] - p0[j];
            trial.push_back(std::move(d));
            if (rank(trial) > diffs.size()) {
                diffs = std::move(trial);
                seed.push_back(i);
            }
        }
        size_t k = diffs.size();
        p.intrinsic_ = k;

        // affine-hull equations from the orthogonal complement of the span
        {
            Mat dm = diffs;
            if (dm.empty()) dm.push_back(Vec(p.ambient_, Rational(0)));
            for (const auto& nsv : nullspace(dm)) {
                IVec n = rational_ray_to_primitive(nsv);
                p.equations_.push_back({n, dot(to_vec(n), p0)});
            }
        }

        if (k == 0) {
            p.vertices_.push_back(p0);
            return p;
        }

        // Full-dimensional polytopes work in ambient coordinates; lower
        // dimensional ones go through intrinsic coordinates that keep the
        // hull combinatorics (volumes there are only used as "nonzero").
        bool fulldim = (k == p.ambient_);
        std::vector<Vec> local;
        if (fulldim) {
            local = pts;
        } else {
            Mat bt(p.ambient_, Vec(k));
            for (size_t c = 0; c < k; ++c)
                for (size_t r = 0; r < p.ambient_; ++r) bt[r][c] = diffs[c][r];
            local.assign(pts.size(), Vec(k));
            for (size_t i = 0; i < pts.size(); ++i) {
                Vec rhs(p.ambient_);
                for (size_t j = 0; j < p.ambient_; ++j) rhs[j] = pts[i][j] - p0[j];
                auto x = solve(bt, rhs);
                if (!x) throw Error("hull: point outside computed affine hull");
                local[i] = std::move(*x);
            }
        }

        hull_detail::FullDimHull h(k, local);
        std::vector<size_t> rest;
        for (size_t i = 0; i < pts.size(); ++i)
            if (std::find(seed.begin(), seed.end(), i) == seed.end()) rest.push_back(i);
        h.run(seed, rest);
        p.volume_normalized_intrinsic_ = h.vol_times_kfact;

        // distinct facet hyperplanes in intrinsic coordinates
        std::vector<std::pair<Vec, Rational>> planes;
        {
            std::map<std::pair<IVec, Rational>, bool> seen;
            for (const auto& [idx, f] : h.boundary) {
                IVec n = rational_ray_to_primitive(f.normal);
                Rational scale;
                for (size_t j = 0; j < k; ++j)
                    if (f.normal[j] != 0) { scale = f.normal[j] / Rational(n[j]); break; }
                Rational b = f.offset / scale;
                if (seen.emplace(std::make_pair(n, b), true).second)
                    planes.push_back({to_vec(n), b});
            }
        }

        // a point is a vertex iff its tight facet normals span intrinsically
        for (size_t i = 0; i < pts.size(); ++i) {
            Mat tight;
            for (const auto& [n, b] : planes)
                if (dot(n, local[i]) == b) tight.push_back(n);
            if (tight.size() >= k && rank(tight) == k) p.vertices_.push_back(pts[i]);
        }

        if (fulldim) {
            for (const auto& [n, b] : planes) {
                IVec ni = rational_ray_to_primitive(n);
                p.facets_.push_back({std::move(ni), b});
            }
            return p;
        }

        // ambient H-rep via the left inverse C = (B^T B)^{-1} B^T
        {
            Mat gram(k, Vec(k));
            for (size_t i = 0; i < k; ++i)
                for (size_t j = 0; j < k; ++j) gram[i][j] = dot(diffs[i], diffs[j]);
            Mat ginv(k, Vec(k));
            for (size_t i = 0; i < k; ++i) {
                Vec e(k, Rational(0));
                e[i] = 1;
                auto ci = solve(gram, e);
                if (!ci) throw Error("hull: singular Gram matrix");
                ginv[i] = std::move(*ci);
            }
            for (const auto& [n, b] : planes) {
                Vec w(k, Rational(0));
                for (size_t j = 0; j < k; ++j)
                    for (size_t i = 0; i < k; ++i) w[i] += n[j] * ginv[j][i];
                Vec an(p.ambient_, Rational(0));
                for (size_t i = 0; i < k; ++i)
                    for (size_t j = 0; j < p.ambient_; ++j) an[j] += w[i] * diffs[i][j];
                Rational ab = b + dot(an, p0);
                IVec ani = rational_ray_to_primitive(an);
                Rational scale;
                for (size_t j = 0; j < p.ambient_; ++j)
                    if (an[j] != 0) { scale = an[j] / Rational(ani[j]); break; }
                p.facets_.push_back({ani, ab / scale});
            }
        }
        return p;
    }

    size_t ambient_dim() const { return ambient_; }
    size_t intrinsic_dim() const { return intrinsic_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<HalfSpace>& facets() const { return facets_; }
    const std::vector<AffineEquation>& equations() const { return equations_; }

    bool full_dimensional() const { return intrinsic_ == ambient_; }

    // n! times the Euclidean volume when full-dimensional, else 0.
    Rational normalized_volume() const {
        return full_dimensional() ? volume_normalized_intrinsic_ : Rational(0);
    }

    Rational euclidean_volume() const {
        if (!full_dimensional()) return Rational(0);
        Rational f(1);
        for (size_t i = 2; i <= ambient_; ++i) f *= Rational(static_cast<long>(i));
        return volume_normalized_intrinsic_ / f;
    }

    bool contains(const Vec& x) const {
        for (const auto& e : equations_)
            if (dot(to_vec(e.normal), x) != e.offset) return false;
        for (const auto& f : facets_)
            if (dot(to_vec(f.normal), x) > f.offset) return false;
        return true;
    }

private:
    size_t ambient_ = 0;
    size_t intrinsic_ = 0;
    std::vector<Vec> vertices_;
    std::vector<HalfSpace> facets_;
    std::vector<AffineEquation> equations_;
    Rational volume_normalized_intrinsic_ = 0;
};

inline RationalPolytope hull(const std::vector<Vec>& points) {
    return RationalPolytope::hull(points);
}

inline Rational normalized_volume(const RationalPolytope& p) { return p.normalized_volume(); }

inline RationalPolytope minkowski_sum(const RationalPolytope& p, const RationalPolytope& q) {
    if (p.ambient_dim() != q.ambient_dim())
        throw PreconditionError("minkowski_sum: ambient dimension mismatch");
    std::vector<Vec> sums;
    sums.reserve(p.vertices().size() * q.vertices().size());
    for (const auto& a : p.vertices())
        for (const auto& b : q.vertices()) {
            Vec s(a.size());
            for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
            sums.push_back(std::move(s));
        }
    return RationalPolytope::hull(sums);
}

// Mixed volume of n polytopes in R^n, normalized so the diagonal equals
// normalized_volume: MV(P_1..P_n) = sum_{S != 0} (-1)^(n-|S|) vol(sum_S P_i).
inline Rational mixed_intersection(const std::vector<RationalPolytope>& ps) {
    if (ps.empty()) throw PreconditionError("mixed_intersection: no polytopes");
    size_t n = ps[0].ambient_dim();
    if (ps.size() != n)
        throw PreconditionError("mixed_intersection: need exactly ambient-dim many polytopes");
    for (const auto& p : ps)
        if (p.ambient_dim() != n)
            throw PreconditionError("mixed_intersection: ambient dimension mismatch");

    std::vector<std::optional<RationalPolytope>> sums(size_t(1) << n);
    for (size_t i = 0; i < n; ++i) sums[size_t(1) << i] = ps[i];
    Rational total(0);
    for (size_t s = 1; s < sums.size(); ++s) {
        if (!sums[s]) {
            size_t low = s & (~s + 1);
            sums[s] = minkowski_sum(*sums[s & ~low], *sums[low]);
        }
        int bits = 0;
        for (size_t t = s; t; t >>= 1) bits += static_cast<int>(t & 1);
        Rational v = sums[s]->euclidean_volume();
        if ((static_cast<int>(n) - bits) % 2 == 0) total += v; else total -= v;
    }
    return total;
}

}  // namespace torick
