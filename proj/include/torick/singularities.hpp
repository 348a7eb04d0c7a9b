// Toric singularities of a Q-Gorenstein cone: the Gorenstein functional,
// terminal/canonical classification by lattice points in the height slab,
// discrepancies of star refinements, and the destabilizer search that looks
// for birational models over the cone with negative Donaldson-Futaki
// invariant.  DF here uses the generically-finite convention
// DF = n (L^{n-1}.K_{X/B}); the intersection number is localized on the
// exceptional locus by completing the fan, which does not change the value.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torick/divisor.hpp"
#include "torick/errors.hpp"
#include "torick/fan.hpp"
#include "torick/intersection.hpp"
#include "torick/linalg.hpp"
#include "torick/model.hpp"
#include "torick/rational.hpp"

namespace torick {

// The rational covector with <m, v_i> = 1 on all primitive generators.
inline Vec gorenstein_functional(const Cone& c) {
    Mat a;
    Vec b;
    for (const auto& v : c.rays) {
        a.push_back(to_vec(v));
        b.push_back(Rational(1));
    }
    auto m = solve(a, b);
    if (!m) throw PreconditionError("gorenstein_functional: cone is not Q-Gorenstein");
    return *m;
}

struct DiscrepancyRecord {
    IVec ray;
    Rational discrepancy;  // <m, v> - 1
};

enum class SingularityType { Terminal, CanonicalNotTerminal, NotCanonical };

inline std::string singularity_type_name(SingularityType t) {
    switch (t) {
        case SingularityType::Terminal: return "terminal";
        case SingularityType::CanonicalNotTerminal: return "canonical-not-terminal";
        default: return "not-canonical";
    }
}

struct ClassifyResult {
    SingularityType type;
    Vec functional;
    // nonzero lattice points of the cone with 0 < <m, v> <= 1, other than
    // the generators, with their discrepancies
    std::vector<DiscrepancyRecord> slab_points;
};

// Enumerates the lattice points of {x in cone : <m, x> <= 1} = conv(0, v_i).
inline std::vector<IVec> slab_lattice_points(const Cone& c, const Vec& m) {
    size_t n = c.ambient_dim();
    std::vector<Int> lo(n, Int(0)), hi(n, Int(0));
    for (const auto& v : c.rays)
        for (size_t j = 0; j < n; ++j) {
            lo[j] = std::min(lo[j], v[j]);
            hi[j] = std::max(hi[j], v[j]);
        }
    std::vector<IVec> out;
    IVec x(n);
    for (size_t j = 0; j < n; ++j) x[j] = lo[j];
    for (;;) {
        Rational pairing = dot(m, x);
        if (pairing > 0 && pairing <= 1 && cone_contains(c, x)) out.push_back(x);
        size_t j = 0;
        while (j < n && x[j] == hi[j]) {
            x[j] = lo[j];
            ++j;
        }
        if (j == n) break;
        x[j] += 1;
    }
    return out;
}

inline ClassifyResult classify(const Cone& c) {
    if (!cone_strongly_convex(c)) throw PreconditionError("classify: cone not strongly convex");
    ClassifyResult res;
    res.functional = gorenstein_functional(c);
    bool canonical = true, terminal = true;
    for (const auto& v : slab_lattice_points(c, res.functional)) {
        if (std::find(c.rays.begin(), c.rays.end(), v) != c.rays.end()) continue;
        Rational pairing = dot(res.functional, v);
        res.slab_points.push_back({v, pairing - 1});
        terminal = false;
        if (pairing < 1) canonical = false;
    }
    res.type = !canonical ? SingularityType::NotCanonical
               : terminal ? SingularityType::Terminal
                          : SingularityType::CanonicalNotTerminal;
    return res;
}

inline FanPtr face_fan(const Cone& c) {
    std::vector<size_t> all(c.rays.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return std::make_shared<Fan>(c.ambient_dim(), c.rays, std::vector<std::vector<size_t>>{all});
}

// Discrepancies of the new rays of a refinement of the face fan: the
// coefficients of K_{X'/U_sigma} on the exceptional divisors.
inline std::vector<DiscrepancyRecord> discrepancies(const Cone& c, const Fan& refinement) {
    auto ref = is_refinement(refinement, *face_fan(c));
    if (!ref.ok) throw PreconditionError("discrepancies: not a refinement of the cone");
    Vec m = gorenstein_functional(c);
    std::vector<DiscrepancyRecord> out;
    for (const auto& v : refinement.rays()) {
        if (std::find(c.rays.begin(), c.rays.end(), v) != c.rays.end()) continue;
        out.push_back({v, dot(m, v) - 1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// localized DF over the cone
// ---------------------------------------------------------------------------

namespace search_detail {

// Completes a fan supported on the cone by adding cones over its boundary
// facets from -v0 for an interior v0.
inline FanPtr complete_over_cone(const Fan& f, const IVec& v0) {
    IVec apex(v0.size());
    for (size_t j = 0; j < v0.size(); ++j) apex[j] = -v0[j];
    std::vector<IVec> rays = f.rays();
    size_t ai = rays.size();
    rays.push_back(primitive(apex));
    std::vector<std::vector<size_t>> cones = f.max_cones();
    for (const auto& w : f.walls()) {
        if (w.interior()) continue;
        std::vector<size_t> c = w.ridge;
        c.push_back(ai);
        std::sort(c.begin(), c.end());
        cones.push_back(std::move(c));
    }
    return std::make_shared<Fan>(f.rank(), std::move(rays), std::move(cones));
}

inline std::string canonical_fan_key(const Fan& f) {
    std::vector<std::string> cone_keys;
    for (const auto& c : f.max_cones()) {
        std::vector<std::string> rk;
        for (size_t i : c) {
            std::string s;
            for (const auto& x : f.rays()[i]) s += x.str() + ",";
            rk.push_back(std::move(s));
        }
        std::sort(rk.begin(), rk.end());
        std::string joined;
        for (auto& s : rk) joined += s + "|";
        cone_keys.push_back(std::move(joined));
    }
    std::sort(cone_keys.begin(), cone_keys.end());
    std::string out;
    for (auto& s : cone_keys) out += s + ";";
    return out;
}

}  // namespace search_detail

// n (L^{n-1} . K_{X/U_sigma}) for a refinement of the face fan of the cone,
// with a relatively ample polarization; computed on a completion, which is
// legitimate because K is supported on the exceptional (complete) locus.
inline Rational localized_df(const Cone& c, const FanPtr& refinement, const Vec& rel_ample,
                             const IVec& interior_v0) {
    size_t n = c.ambient_dim();
    Vec m = gorenstein_functional(c);
    FanPtr completed = search_detail::complete_over_cone(*refinement, interior_v0);
    Vec lbar(completed->rays().size(), Rational(0));
    Vec kbar(completed->rays().size(), Rational(0));
    for (size_t r = 0; r < completed->rays().size(); ++r) {
        const IVec& v = completed->rays()[r];
        if (r < refinement->rays().size()) lbar[r] = rel_ample[r];
        bool original = std::find(c.rays.begin(), c.rays.end(), v) != c.rays.end();
        if (!original && r < refinement->rays().size()) kbar[r] = dot(m, v) - 1;
    }
    TorusDivisor l(completed, std::move(lbar));
    TorusDivisor k(completed, std::move(kbar));
    std::vector<TorusDivisor> prod(n, l);
    prod[n - 1] = k;
    return Rational(static_cast<long>(n)) * intersection_number(prod);
}

// ---------------------------------------------------------------------------
// destabilizer search
// ---------------------------------------------------------------------------

struct SearchEntry {
    std::vector<IVec> chain;      // star subdivision centers, in order
    FanPtr fan;                   // the refinement of the face fan
    std::vector<DiscrepancyRecord> discrepancy_table;
    std::vector<Rational> df_candidates;  // one per polarization candidate
    Rational df;                          // minimum over candidates
};

struct SearchReport {
    ClassifyResult classification;
    std::vector<SearchEntry> models;      // deterministic enumeration order
    std::optional<size_t> best;           // minimal-DF model
    bool negative_found = false;
};

// Enumerates chains (length <= bound) of star subdivisions at primitive
// lattice points of pairing <= 1 inside a coordinate box of size `bound`,
// equips each distinct nontrivial model with deterministic relatively ample
// polarizations (the LP vertex and its integer clearing), and reports the
// localized DF of each.
inline SearchReport destabilizer_search(const Cone& c, unsigned bound) {
    SearchReport report;
    report.classification = classify(c);
    const Vec& m = report.classification.functional;
    size_t n = c.ambient_dim();

    // Candidate subdivision centers: primitive lattice points of the cone
    // inside the coordinate box.  Points of pairing < 1 carry the negative
    // discrepancies the refutation needs; larger points only add models
    // with positive exceptional discrepancy (they keep the terminal case
    // non-vacuous).
    std::vector<IVec> candidates;
    {
        long b = static_cast<long>(bound);
        IVec x(n, Int(-b));
        for (;;) {
            if (!is_zero_vector(x) && is_primitive(x) &&
                std::find(c.rays.begin(), c.rays.end(), x) == c.rays.end() &&
                cone_contains(c, x))
                candidates.push_back(x);
            size_t j = 0;
            while (j < n && x[j] == Int(b)) {
                x[j] = Int(-b);
                ++j;
            }
            if (j == n) break;
            x[j] += 1;
        }
    }
    std::sort(candidates.begin(), candidates.end());

    IVec v0(n, Int(0));
    for (const auto& r : c.rays) v0 = ivec_add(v0, r);
    v0 = primitive(std::move(v0));

    FanPtr base_fan = face_fan(c);
    std::map<std::string, bool> seen;
    seen[search_detail::canonical_fan_key(*base_fan)] = true;  // identity model is trivial

    struct Node {
        FanPtr fan;
        std::vector<IVec> chain;
    };
    std::vector<Node> frontier{{base_fan, {}}};
    for (unsigned depth = 0; depth < bound; ++depth) {
        std::vector<Node> next;
        for (const auto& node : frontier) {
            for (const auto& v : candidates) {
                if (node.fan->ray_index(v)) continue;  // no-op subdivision
                FanPtr sub = std::make_shared<Fan>(star_subdivision(*node.fan, v));
                auto chain = node.chain;
                chain.push_back(v);
                std::string key = search_detail::canonical_fan_key(*sub);
                next.push_back({sub, chain});
                if (seen.emplace(key, true).second) {
                    SearchEntry entry;
                    entry.chain = chain;
                    entry.fan = sub;
                    for (const auto& d : discrepancies(c, *sub)) entry.discrepancy_table.push_back(d);

                    FiberedModel model("search", sub, Vec(sub->rays().size(), Rational(0)),
                                       identity_matrix(n), base_fan, 0);
                    TorusDivisor rel = find_relatively_ample(model);
                    entry.df_candidates.push_back(localized_df(c, sub, rel.coeffs(), v0));
                    // integer clearing of the LP vertex
                    Int lcm_den = 1;
                    for (const auto& x : rel.coeffs()) lcm_den = int_lcm(lcm_den, den(x));
                    if (lcm_den != 1) {
                        Vec cleared = rel.coeffs();
                        for (auto& x : cleared) x *= Rational(lcm_den);
                        entry.df_candidates.push_back(localized_df(c, sub, cleared, v0));
                    }
                    entry.df = entry.df_candidates[0];
                    for (const auto& d : entry.df_candidates)
                        if (d < entry.df) entry.df = d;
                    report.models.push_back(std::move(entry));
                }
            }
        }
        frontier = std::move(next);
    }

    for (size_t i = 0; i < report.models.size(); ++i)
        if (!report.best || report.models[i].df < report.models[*report.best].df)
            report.best = i;
    report.negative_found = report.best && report.models[*report.best].df < 0;
    return report;
}

}  // namespace torick
