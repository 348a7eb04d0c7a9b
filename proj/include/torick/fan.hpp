// Cones and fans: the combinatorial carriers of the toric models.  Cones
// are lists of primitive integer ray generators; duals come from an
// all-integer double description method, membership and face tests from
// exact LPs.  Fans know their walls (codimension-one faces with the cones
// on each side), which drive nefness, curve classes, and completeness.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torick/errors.hpp"
#include "torick/linalg.hpp"
#include "torick/lp.hpp"
#include "torick/polytope.hpp"
#include "torick/rational.hpp"

namespace torick {

struct Cone {
    std::vector<IVec> rays;

    size_t ambient_dim() const {
        if (rays.empty()) throw PreconditionError("Cone: no rays");
        return rays[0].size();
    }
};

// ---------------------------------------------------------------------------
// double description: generators of {x : <a, x> >= 0 for all a}
// ---------------------------------------------------------------------------

struct GeneratorDescription {
    std::vector<IVec> rays;       // extreme rays (primitive)
    std::vector<IVec> lineality;  // basis of the lineality space
};

inline GeneratorDescription cone_from_halfspaces(size_t n, const std::vector<IVec>& normals) {
    GeneratorDescription dd;
    for (size_t i = 0; i < n; ++i) {
        IVec e(n, Int(0));
        e[i] = 1;
        dd.lineality.push_back(std::move(e));
    }
    std::vector<std::vector<bool>> tight;  // per ray, over processed constraints
    std::vector<IVec> processed;

    // keep only extreme rays: tight normals must span codimension one in
    // the pointed quotient; dedupe coincident rays
    auto filter_extreme = [&]() {
        std::vector<IVec> filtered;
        std::vector<std::vector<bool>> filtered_tight;
        std::set<IVec> seen;
        if (n < dd.lineality.size() + 1) {
            dd.rays.clear();
            tight.clear();
            return;
        }
        size_t want = n - dd.lineality.size() - 1;
        for (size_t r = 0; r < dd.rays.size(); ++r) {
            if (!seen.insert(dd.rays[r]).second) continue;
            std::vector<IVec> tn;
            for (size_t j = 0; j < processed.size(); ++j)
                if (tight[r][j]) tn.push_back(processed[j]);
            size_t rk = tn.empty() ? 0 : rank_of_ivecs(tn);
            if (rk >= want) {
                filtered.push_back(dd.rays[r]);
                filtered_tight.push_back(tight[r]);
            }
        }
        dd.rays = std::move(filtered);
        tight = std::move(filtered_tight);
    };

    for (const IVec& a : normals) {
        size_t ci = processed.size();
        size_t l0 = dd.lineality.size();
        for (size_t i = 0; i < dd.lineality.size(); ++i)
            if (idot(a, dd.lineality[i]) != 0) { l0 = i; break; }
        if (l0 != dd.lineality.size()) {
            IVec v0 = dd.lineality[l0];
            Int p0 = idot(a, v0);
            if (p0 < 0) { for (auto& x : v0) x = -x; p0 = -p0; }
            std::vector<IVec> nl;
            for (size_t i = 0; i < dd.lineality.size(); ++i) {
                if (i == l0) continue;
                Int pi = idot(a, dd.lineality[i]);
                IVec l = ivec_add(ivec_scale(p0, dd.lineality[i]), ivec_scale(-pi, v0));
                nl.push_back(primitive(std::move(l)));
            }
            for (size_t r = 0; r < dd.rays.size(); ++r) {
                Int pr = idot(a, dd.rays[r]);
                if (pr != 0) {
                    dd.rays[r] = primitive(ivec_add(ivec_scale(p0, dd.rays[r]), ivec_scale(-pr, v0)));
                }
                tight[r].push_back(true);
            }
            dd.lineality = std::move(nl);
            dd.rays.push_back(std::move(v0));
            std::vector<bool> t(ci + 1, true);
            t[ci] = false;
            tight.push_back(std::move(t));
        } else {
            // lineality untouched: split rays by sign against a
            std::vector<IVec> keep;
            std::vector<std::vector<bool>> keep_tight;
            std::vector<size_t> pos, neg;
            for (size_t r = 0; r < dd.rays.size(); ++r) {
                Int pr = idot(a, dd.rays[r]);
                if (pr > 0) pos.push_back(r);
                else if (pr < 0) neg.push_back(r);
            }
            for (size_t r = 0; r < dd.rays.size(); ++r) {
                Int pr = idot(a, dd.rays[r]);
                if (pr >= 0) {
                    keep.push_back(dd.rays[r]);
                    auto t = tight[r];
                    t.push_back(pr == 0);
                    keep_tight.push_back(std::move(t));
                }
            }
            for (size_t p : pos)
                for (size_t m : neg) {
                    Int pp = idot(a, dd.rays[p]);
                    Int pm = idot(a, dd.rays[m]);
                    IVec w = ivec_add(ivec_scale(pp, dd.rays[m]), ivec_scale(-pm, dd.rays[p]));
                    bool zero = true;
                    for (const auto& x : w)
                        if (x != 0) { zero = false; break; }
                    if (zero) continue;
                    w = primitive(std::move(w));
                    std::vector<bool> t(ci + 1, false);
                    for (size_t j = 0; j < ci; ++j) t[j] = tight[p][j] && tight[m][j];
                    t[ci] = true;
                    keep.push_back(std::move(w));
                    keep_tight.push_back(std::move(t));
                }
            dd.rays = std::move(keep);
            tight = std::move(keep_tight);
        }
        processed.push_back(a);
        filter_extreme();
    }
    return dd;
}

// Extreme rays of the dual cone (= facet normals when the cone is
// full-dimensional) plus the lineality of the dual (= the orthogonal
// complement of the cone's span).
inline GeneratorDescription dual_description(const Cone& c) {
    return cone_from_halfspaces(c.ambient_dim(), c.rays);
}

// ---------------------------------------------------------------------------
// membership and face tests
// ---------------------------------------------------------------------------

inline size_t cone_dim(const Cone& c) { return rank_of_ivecs(c.rays); }

inline bool cone_is_simplicial(const Cone& c) { return cone_dim(c) == c.rays.size(); }

inline bool cone_contains(const Cone& c, const IVec& v) {
    size_t n = c.ambient_dim();
    size_t k = c.rays.size();
    if (cone_is_simplicial(c)) {
        Mat a(n, Vec(k));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j) a[i][j] = Rational(c.rays[j][i]);
        auto x = solve(a, to_vec(v));
        if (!x) return false;
        for (size_t j = 0; j < k; ++j)
            if ((*x)[j] < 0) return false;
        // solve() returns one solution; verify (system can be underdetermined
        // only if rays are dependent, excluded by simpliciality)
        for (size_t i = 0; i < n; ++i) {
            Rational s(0);
            for (size_t j = 0; j < k; ++j) s += (*x)[j] * Rational(c.rays[j][i]);
            if (s != Rational(v[i])) return false;
        }
        return true;
    }
    LinearProgram lp(k);
    for (size_t i = 0; i < n; ++i) {
        Vec row(k);
        for (size_t j = 0; j < k; ++j) row[j] = Rational(c.rays[j][i]);
        lp.add_eq(std::move(row), Rational(v[i]));
    }
    for (size_t j = 0; j < k; ++j) {
        Vec row(k, Rational(0));
        row[j] = 1;
        lp.add_ge(std::move(row), Rational(0));
    }
    return lp.solve().status == LPStatus::Optimal;
}

inline bool cone_contains_in_relint(const Cone& c, const IVec& v) {
    size_t n = c.ambient_dim();
    size_t k = c.rays.size();
    // vars: lambda_1..k, t ; maximize t s.t. sum lambda_i rays_i = v,
    // lambda_i >= t, t <= 1
    LinearProgram lp(k + 1);
    lp.set_objective(k, Rational(1));
    for (size_t i = 0; i < n; ++i) {
        Vec row(k + 1, Rational(0));
        for (size_t j = 0; j < k; ++j) row[j] = Rational(c.rays[j][i]);
        lp.add_eq(std::move(row), Rational(v[i]));
    }
    for (size_t j = 0; j < k; ++j) {
        Vec row(k + 1, Rational(0));
        row[j] = 1;
        row[k] = -1;
        lp.add_ge(std::move(row), Rational(0));
    }
    {
        Vec row(k + 1, Rational(0));
        row[k] = 1;
        lp.add_le(std::move(row), Rational(1));
    }
    auto r = lp.solve();
    return r.status == LPStatus::Optimal && r.value > 0;
}

inline bool cone_strongly_convex(const Cone& c) {
    size_t n = c.ambient_dim();
    // exists m with <m, v_i> >= t for all rays, t maximized and capped at 1
    LinearProgram lp(n + 1);
    lp.set_objective(n, Rational(1));
    for (const auto& v : c.rays) {
        Vec row(n + 1);
        for (size_t i = 0; i < n; ++i) row[i] = Rational(v[i]);
        row[n] = -1;
        lp.add_ge(std::move(row), Rational(0));
    }
    {
        Vec row(n + 1, Rational(0));
        row[n] = 1;
        lp.add_le(std::move(row), Rational(1));
    }
    auto r = lp.solve();
    return r.status == LPStatus::Optimal && r.value > 0;
}

// Is cone(sub) a face of c?  (sub given as ray indices into c.)
inline bool is_face_of(const Cone& c, const std::vector<size_t>& sub) {
    size_t n = c.ambient_dim();
    std::vector<bool> in_sub(c.rays.size(), false);
    for (size_t i : sub) in_sub[i] = true;
    LinearProgram lp(n + 1);
    lp.set_objective(n, Rational(1));
    for (size_t i = 0; i < c.rays.size(); ++i) {
        Vec row(n + 1, Rational(0));
        for (size_t j = 0; j < n; ++j) row[j] = Rational(c.rays[i][j]);
        if (in_sub[i]) {
            lp.add_eq(std::move(row), Rational(0));
        } else {
            row[n] = -1;
            lp.add_ge(std::move(row), Rational(0));
        }
    }
    {
        Vec row(n + 1, Rational(0));
        row[n] = 1;
        lp.add_le(std::move(row), Rational(1));
    }
    auto r = lp.solve();
    return r.status == LPStatus::Optimal && r.value > 0;
}

// Codimension-one faces, as sorted index sets into c.rays.
inline std::vector<std::vector<size_t>> cone_facets(const Cone& c) {
    GeneratorDescription dual = dual_description(c);
    std::set<std::vector<size_t>> out;
    for (const auto& w : dual.rays) {
        std::vector<size_t> f;
        for (size_t i = 0; i < c.rays.size(); ++i)
            if (idot(w, c.rays[i]) == 0) f.push_back(i);
        out.insert(std::move(f));
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Fan
// ---------------------------------------------------------------------------

struct Wall {
    std::vector<size_t> ridge;  // ray indices (into the fan) of the shared facet
    size_t cone_a;
    size_t cone_b;  // npos for boundary facets
    static constexpr size_t npos = static_cast<size_t>(-1);

    bool interior() const { return cone_b != npos; }
};

class Fan {
public:
    Fan(size_t rank, std::vector<IVec> rays, std::vector<std::vector<size_t>> max_cones)
        : rank_(rank), rays_(std::move(rays)), max_cones_(std::move(max_cones)) {
        if (rank_ == 0) throw SchemaError("Fan: rank must be positive");
        std::set<IVec> seen;
        for (const auto& v : rays_) {
            if (v.size() != rank_) throw SchemaError("Fan: ray dimension mismatch");
            bool zero = true;
            for (const auto& x : v)
                if (x != 0) { zero = false; break; }
            if (zero) throw SchemaError("Fan: zero ray");
            if (!is_primitive(v)) throw SchemaError("Fan: non-primitive ray");
            if (!seen.insert(v).second) throw SchemaError("Fan: duplicate ray");
        }
        for (auto& c : max_cones_) {
            if (c.empty()) throw SchemaError("Fan: empty cone");
            std::sort(c.begin(), c.end());
            if (std::adjacent_find(c.begin(), c.end()) != c.end())
                throw SchemaError("Fan: repeated ray index in cone");
            for (size_t i : c)
                if (i >= rays_.size()) throw SchemaError("Fan: ray index out of range");
        }
        compute_walls();
    }

    size_t rank() const { return rank_; }
    const std::vector<IVec>& rays() const { return rays_; }
    const std::vector<std::vector<size_t>>& max_cones() const { return max_cones_; }
    const std::vector<Wall>& walls() const { return walls_; }

    Cone cone(size_t i) const {
        Cone c;
        for (size_t j : max_cones_[i]) c.rays.push_back(rays_[j]);
        return c;
    }

    std::optional<size_t> ray_index(const IVec& v) const {
        for (size_t i = 0; i < rays_.size(); ++i)
            if (rays_[i] == v) return i;
        return std::nullopt;
    }

    std::optional<size_t> containing_cone(const IVec& v) const {
        for (size_t i = 0; i < max_cones_.size(); ++i)
            if (cone_contains(cone(i), v)) return i;
        return std::nullopt;
    }

    // Every facet of a full-dimensional max cone two-sided <=> support is
    // all of R^rank (valid fans only).
    bool complete() const {
        for (size_t i = 0; i < max_cones_.size(); ++i)
            if (cone_dim(cone(i)) != rank_) return false;
        for (const auto& w : walls_)
            if (!w.interior()) return false;
        return !max_cones_.empty();
    }

    // Optional projectivity witness: per-ray coefficients of a divisor with
    // strictly convex support function.
    void set_ample_witness(Vec coeffs) { ample_ = std::move(coeffs); }
    const std::optional<Vec>& ample_witness() const { return ample_; }

    std::string structural_key() const {
        std::string s = std::to_string(rank_) + ";";
        for (const auto& r : rays_) {
            for (const auto& x : r) s += x.str() + ",";
            s += "|";
        }
        s += ";";
        for (const auto& c : max_cones_) {
            for (size_t i : c) s += std::to_string(i) + ",";
            s += "|";
        }
        return s;
    }

private:
    size_t rank_;
    std::vector<IVec> rays_;
    std::vector<std::vector<size_t>> max_cones_;
    std::vector<Wall> walls_;
    std::optional<Vec> ample_;

    void compute_walls() {
        std::map<std::vector<size_t>, std::vector<size_t>> owner;
        for (size_t i = 0; i < max_cones_.size(); ++i) {
            Cone c = cone(i);
            for (const auto& f : cone_facets(c)) {
                std::vector<size_t> key;
                for (size_t local : f) key.push_back(max_cones_[i][local]);
                std::sort(key.begin(), key.end());
                owner[key].push_back(i);
            }
        }
        for (const auto& [key, cones] : owner) {
            if (cones.size() == 1) {
                walls_.push_back({key, cones[0], Wall::npos});
            } else if (cones.size() == 2) {
                walls_.push_back({key, cones[0], cones[1]});
            } else {
                // more than two cones on one facet: invalid fan; keep the
                // first two so diagnostics can point at the overlap
                walls_.push_back({key, cones[0], cones[1]});
            }
        }
    }
};

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

struct FanDiagnostics {
    bool valid = true;
    bool complete = false;
    bool simplicial = true;
    bool smooth = true;
    std::vector<bool> cone_simplicial;
    std::vector<bool> cone_smooth;
    std::vector<std::string> violations;
};

inline FanDiagnostics fan_validate(const Fan& f) {
    FanDiagnostics d;
    auto fail = [&](std::string msg) {
        d.valid = false;
        d.violations.push_back(std::move(msg));
    };

    std::vector<bool> used(f.rays().size(), false);
    for (const auto& c : f.max_cones())
        for (size_t i : c) used[i] = true;
    for (size_t i = 0; i < used.size(); ++i)
        if (!used[i]) fail("ray " + std::to_string(i) + " belongs to no max cone");

    for (size_t i = 0; i < f.max_cones().size(); ++i) {
        Cone c = f.cone(i);
        if (!cone_strongly_convex(c))
            fail("cone " + std::to_string(i) + " is not strongly convex");
        bool simp = cone_is_simplicial(c);
        d.cone_simplicial.push_back(simp);
        if (!simp) d.simplicial = false;
        bool smooth = simp && spans_saturated_sublattice(c.rays);
        d.cone_smooth.push_back(smooth);
        if (!smooth) d.smooth = false;
        // generator irredundancy: no ray inside the cone of the others
        for (size_t j = 0; j < c.rays.size(); ++j) {
            Cone rest;
            for (size_t l = 0; l < c.rays.size(); ++l)
                if (l != j) rest.rays.push_back(c.rays[l]);
            if (!rest.rays.empty() && cone_contains(rest, c.rays[j]))
                fail("cone " + std::to_string(i) + ": redundant generator");
        }
    }

    // pairwise face axiom
    for (size_t i = 0; i < f.max_cones().size(); ++i) {
        for (size_t j = i + 1; j < f.max_cones().size(); ++j) {
            const auto& ci = f.max_cones()[i];
            const auto& cj = f.max_cones()[j];
            std::vector<size_t> common;
            std::set_intersection(ci.begin(), ci.end(), cj.begin(), cj.end(),
                                  std::back_inserter(common));
            if (common == ci && common == cj) {
                fail("cones " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
                continue;
            }
            // compute the geometric intersection via a joint H-rep
            Cone a = f.cone(i), b = f.cone(j);
            GeneratorDescription da = dual_description(a), db = dual_description(b);
            std::vector<IVec> halfspaces;
            for (const auto& w : da.rays) halfspaces.push_back(w);
            for (const auto& w : da.lineality) {
                halfspaces.push_back(w);
                IVec neg = w;
                for (auto& x : neg) x = -x;
                halfspaces.push_back(std::move(neg));
            }
            for (const auto& w : db.rays) halfspaces.push_back(w);
            for (const auto& w : db.lineality) {
                halfspaces.push_back(w);
                IVec neg = w;
                for (auto& x : neg) x = -x;
                halfspaces.push_back(std::move(neg));
            }
            GeneratorDescription inter = cone_from_halfspaces(f.rank(), halfspaces);
            if (!inter.lineality.empty()) {
                fail("cones " + std::to_string(i) + " and " + std::to_string(j) +
                     " overlap in a non-pointed set");
                continue;
            }
            Cone common_cone;
            for (size_t k : common) common_cone.rays.push_back(f.rays()[k]);
            bool match = true;
            for (const auto& g : inter.rays) {
                if (common_cone.rays.empty() || !cone_contains(common_cone, g)) {
                    match = false;
                    break;
                }
            }
            if (!match) {
                fail("cones " + std::to_string(i) + " and " + std::to_string(j) +
                     " intersect beyond their common face (overlapping cones)");
                continue;
            }
            // the shared ray set must be a face of each
            std::vector<size_t> local_i, local_j;
            for (size_t k : common) {
                local_i.push_back(static_cast<size_t>(
                    std::find(ci.begin(), ci.end(), k) - ci.begin()));
                local_j.push_back(static_cast<size_t>(
                    std::find(cj.begin(), cj.end(), k) - cj.begin()));
            }
            if (!is_face_of(a, local_i) || !is_face_of(b, local_j))
                fail("common rays of cones " + std::to_string(i) + " and " +
                     std::to_string(j) + " do not form a face (non-face intersection)");
        }
    }

    if (d.valid) d.complete = f.complete();
    return d;
}

// ---------------------------------------------------------------------------
// star subdivision and refinement
// ---------------------------------------------------------------------------

inline Fan star_subdivision(const Fan& f, const IVec& v) {
    if (!is_primitive(v)) throw PreconditionError("star_subdivision: vector not primitive");
    if (f.ray_index(v)) return f;  // subdividing at an existing ray changes nothing
    if (!f.containing_cone(v))
        throw PreconditionError("star_subdivision: vector outside the fan support");

    std::vector<IVec> rays = f.rays();
    size_t vi = rays.size();
    rays.push_back(v);
    std::vector<std::vector<size_t>> cones;
    for (size_t i = 0; i < f.max_cones().size(); ++i) {
        Cone c = f.cone(i);
        if (!cone_contains(c, v)) {
            cones.push_back(f.max_cones()[i]);
            continue;
        }
        for (const auto& facet : cone_facets(c)) {
            Cone fc;
            for (size_t local : facet) fc.rays.push_back(c.rays[local]);
            if (!fc.rays.empty() && cone_contains(fc, v)) continue;
            std::vector<size_t> nc;
            for (size_t local : facet) nc.push_back(f.max_cones()[i][local]);
            nc.push_back(vi);
            std::sort(nc.begin(), nc.end());
            cones.push_back(std::move(nc));
        }
    }
    return Fan(f.rank(), std::move(rays), std::move(cones));
}

struct RefinementResult {
    bool ok = false;
    // max cone index of the coarse fan containing each fine max cone
    std::vector<size_t> assignment;
    std::string reason;
};

// True iff every cone of `fine` sits inside a cone of `coarse` and the
// supports agree; tiling is certified by truncated-cone volumes.
inline RefinementResult is_refinement(const Fan& fine, const Fan& coarse) {
    RefinementResult res;
    if (fine.rank() != coarse.rank()) {
        res.reason = "rank mismatch";
        return res;
    }
    for (size_t i = 0; i < coarse.max_cones().size(); ++i)
        if (cone_dim(coarse.cone(i)) != coarse.rank()) {
            res.reason = "coarse fan has a lower-dimensional max cone";
            return res;
        }

    std::vector<std::vector<size_t>> contained(coarse.max_cones().size());
    for (size_t i = 0; i < fine.max_cones().size(); ++i) {
        Cone ci = fine.cone(i);
        bool assigned = false;
        for (size_t j = 0; j < coarse.max_cones().size(); ++j) {
            Cone cj = coarse.cone(j);
            bool inside = true;
            for (const auto& r : ci.rays)
                if (!cone_contains(cj, r)) { inside = false; break; }
            if (inside) {
                if (!assigned) {
                    res.assignment.push_back(j);
                    assigned = true;
                }
                contained[j].push_back(i);
            }
        }
        if (!assigned) {
            res.reason = "fine cone " + std::to_string(i) + " not contained in any coarse cone";
            res.assignment.clear();
            return res;
        }
    }

    // support equality: volumes of truncated cones must match per coarse cone
    for (size_t j = 0; j < coarse.max_cones().size(); ++j) {
        Cone cj = coarse.cone(j);
        GeneratorDescription dual = dual_description(cj);
        Vec m(coarse.rank(), Rational(0));
        for (const auto& w : dual.rays)
            for (size_t t = 0; t < m.size(); ++t) m[t] += Rational(w[t]);
        auto truncated = [&](const Cone& c) {
            std::vector<Vec> pts{Vec(c.ambient_dim(), Rational(0))};
            for (const auto& r : c.rays) {
                Rational h = dot(m, r);
                if (h <= 0) throw Error("is_refinement: truncation functional not positive");
                Vec p(r.size());
                for (size_t t = 0; t < r.size(); ++t) p[t] = Rational(r[t]) / h;
                pts.push_back(std::move(p));
            }
            return RationalPolytope::hull(pts).normalized_volume();
        };
        Rational total = truncated(cj);
        Rational sum(0);
        // count each fine cone once, at its assigned owner (full-dimensional
        // cones have a unique containing coarse cone; lower-dimensional ones
        // contribute zero volume)
        for (size_t i : contained[j])
            if (res.assignment[i] == j) sum += truncated(fine.cone(i));
        if (sum != total) {
            res.reason = "coarse cone " + std::to_string(j) + " is not exactly tiled";
            return res;
        }
    }
    res.ok = true;
    return res;
}

}  // namespace torick
