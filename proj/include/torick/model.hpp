// Fibered models pi: (X, L) -> B: a total fan, a polarization, a lattice
// projection onto the base fan, and a marked base ray.  This file carries
// the fibration combinatorics: generic fibers through the kernel lattice,
// vertical rays, contracted wall curves, relative canonical divisors, and
// the normalized base changes of families over a curve.
#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torick/divisor.hpp"
#include "torick/errors.hpp"
#include "torick/fan.hpp"
#include "torick/linalg.hpp"
#include "torick/rational.hpp"

namespace torick {

inline IVec apply_matrix(const IMat& m, const IVec& v) {
    IVec out(m.size(), Int(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline bool is_zero_vector(const IVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

struct ToricMorphism {
    IMat matrix;  // maps the source lattice onto the target lattice
    FanPtr source;
    FanPtr target;
};

// Every source cone must map into some target cone.
inline void validate_morphism(const ToricMorphism& f) {
    if (f.matrix.size() != f.target->rank())
        throw PreconditionError("morphism: matrix row count must equal target rank");
    for (const auto& row : f.matrix)
        if (row.size() != f.source->rank())
            throw PreconditionError("morphism: matrix column count must equal source rank");
    for (size_t ci = 0; ci < f.source->max_cones().size(); ++ci) {
        std::vector<IVec> images;
        for (size_t r : f.source->max_cones()[ci]) {
            IVec w = apply_matrix(f.matrix, f.source->rays()[r]);
            if (!is_zero_vector(w)) images.push_back(std::move(w));
        }
        if (images.empty()) continue;
        bool found = false;
        for (size_t tj = 0; tj < f.target->max_cones().size() && !found; ++tj) {
            Cone tc = f.target->cone(tj);
            bool all = true;
            for (const auto& w : images)
                if (!cone_contains(tc, w)) { all = false; break; }
            found = all;
        }
        if (!found)
            throw PreconditionError("morphism: source cone " + std::to_string(ci) +
                                    " does not map into any target cone");
    }
}

class FiberedModel {
public:
    FiberedModel(std::string id, FanPtr total, Vec polarization_coeffs, IMat projection,
                 FanPtr base, size_t base_ray_p)
        : id_(std::move(id)),
          total_(std::move(total)),
          polarization_(total_, std::move(polarization_coeffs)),
          projection_(std::move(projection)),
          base_(std::move(base)),
          base_ray_p_(base_ray_p) {
        if (base_ray_p_ >= base_->rays().size())
            throw SchemaError("model: base ray index out of range");
        validate_morphism(morphism());
        marked_cone_ = find_marked_cone();
    }

    const std::string& id() const { return id_; }
    const FanPtr& total() const { return total_; }
    const FanPtr& base() const { return base_; }
    const TorusDivisor& polarization() const { return polarization_; }
    const IMat& projection() const { return projection_; }
    size_t base_ray_p() const { return base_ray_p_; }

    ToricMorphism morphism() const { return {projection_, total_, base_}; }

    size_t total_dim() const { return total_->rank(); }
    size_t base_dim() const { return base_->rank(); }
    size_t fiber_dim() const { return total_dim() - base_dim(); }

    IVec project(const IVec& v) const { return apply_matrix(projection_, v); }

    // The marked point p is the torus-fixed point of the first
    // full-dimensional base cone having the marked ray as a face; for a
    // one-dimensional base this is the marked ray itself.
    size_t marked_cone() const { return marked_cone_; }

    // Vertical over p: the prime divisor maps into the point p, i.e. the
    // projected ray lies in the relative interior of the marked cone.
    bool ray_is_vertical(size_t ray_index) const {
        IVec w = project(total_->rays()[ray_index]);
        if (is_zero_vector(w)) return false;
        return cone_contains_in_relint(base_->cone(marked_cone_), w);
    }

    std::vector<size_t> vertical_rays() const {
        std::vector<size_t> out;
        for (size_t r = 0; r < total_->rays().size(); ++r)
            if (ray_is_vertical(r)) out.push_back(r);
        return out;
    }

    FiberedModel with_polarization(Vec coeffs) const {
        return FiberedModel(id_, total_, std::move(coeffs), projection_, base_, base_ray_p_);
    }

    FiberedModel with_id(std::string id) const {
        return FiberedModel(std::move(id), total_, polarization_.coeffs(), projection_, base_,
                            base_ray_p_);
    }

private:
    std::string id_;
    FanPtr total_;
    TorusDivisor polarization_;
    IMat projection_;
    FanPtr base_;
    size_t base_ray_p_;
    size_t marked_cone_ = 0;

    size_t find_marked_cone() const {
        for (size_t ci = 0; ci < base_->max_cones().size(); ++ci) {
            const auto& c = base_->max_cones()[ci];
            if (std::find(c.begin(), c.end(), base_ray_p_) == c.end()) continue;
            if (cone_dim(base_->cone(ci)) == base_->rank()) return ci;
        }
        throw PreconditionError("model: marked ray lies in no full-dimensional base cone");
    }
};

// ---------------------------------------------------------------------------
// generic fiber
// ---------------------------------------------------------------------------

struct GenericFiber {
    size_t dim = 0;                 // 0: generically finite, no fan
    FanPtr fan;                     // complete fan of F in the kernel lattice
    std::optional<TorusDivisor> restricted;  // L|_F
    std::vector<IVec> kernel_basis;          // basis of ker(projection) in N
    std::vector<size_t> fiber_ray_sources;   // total-fan ray index per fiber ray
};

inline GenericFiber generic_fiber(const FiberedModel& m) {
    // surjectivity of the lattice projection
    Smith s = smith_normal_form(m.projection());
    if (s.rank != m.base_dim())
        throw PreconditionError("generic_fiber: projection not dominant");
    for (size_t i = 0; i < s.rank; ++i)
        if (s.s[i][i] != 1)
            throw PreconditionError("generic_fiber: projection not surjective onto base lattice");

    GenericFiber out;
    out.dim = m.fiber_dim();
    out.kernel_basis = integer_kernel_basis(m.projection());
    if (out.dim == 0) return out;

    // fiber rays: total rays in the kernel, in kernel-basis coordinates
    std::vector<IVec> frays;
    std::vector<size_t> sources;
    std::vector<size_t> ray_map(m.total()->rays().size(), Wall::npos);
    for (size_t r = 0; r < m.total()->rays().size(); ++r) {
        if (!is_zero_vector(m.project(m.total()->rays()[r]))) continue;
        auto coords = integer_coordinates(out.kernel_basis, m.total()->rays()[r]);
        if (!coords) throw Error("generic_fiber: kernel ray without integer coordinates");
        ray_map[r] = frays.size();
        frays.push_back(std::move(*coords));
        sources.push_back(r);
    }
    // fiber cones: kernel faces of max cones, maximal ones only
    std::vector<std::vector<size_t>> cones;
    for (const auto& c : m.total()->max_cones()) {
        std::vector<size_t> fc;
        for (size_t r : c)
            if (ray_map[r] != Wall::npos) fc.push_back(ray_map[r]);
        if (fc.empty()) continue;
        std::sort(fc.begin(), fc.end());
        cones.push_back(std::move(fc));
    }
    std::sort(cones.begin(), cones.end());
    cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
    std::vector<std::vector<size_t>> maximal;
    for (const auto& c : cones) {
        bool contained = false;
        for (const auto& d : cones) {
            if (&c == &d || d.size() <= c.size()) continue;
            if (std::includes(d.begin(), d.end(), c.begin(), c.end())) { contained = true; break; }
        }
        if (!contained) maximal.push_back(c);
    }
    out.fan = std::make_shared<Fan>(out.dim, std::move(frays), std::move(maximal));
    Vec coeffs(sources.size());
    for (size_t i = 0; i < sources.size(); ++i) coeffs[i] = m.polarization().coeff(sources[i]);
    out.restricted = TorusDivisor(out.fan, std::move(coeffs));
    out.fiber_ray_sources = std::move(sources);
    return out;
}

// ---------------------------------------------------------------------------
// pullbacks from the base, relative canonical, contracted walls
// ---------------------------------------------------------------------------

inline TorusDivisor pullback_from_base(const FiberedModel& m, const TorusDivisor& on_base) {
    SupportFunction sf = support_function(on_base);
    Vec coeffs(m.total()->rays().size());
    for (size_t r = 0; r < coeffs.size(); ++r) {
        IVec w = m.project(m.total()->rays()[r]);
        if (is_zero_vector(w)) {
            coeffs[r] = 0;
            continue;
        }
        coeffs[r] = -support_value(on_base, sf, w);
    }
    return TorusDivisor(m.total(), std::move(coeffs));
}

// K_{X/B} = K_X - pi^* K_B.
inline TorusDivisor relative_canonical(const FiberedModel& m) {
    TorusDivisor kx = canonical_divisor(m.total());
    TorusDivisor kb = canonical_divisor(m.base());
    try {
        return kx - pullback_from_base(m, kb);
    } catch (const PreconditionError&) {
        throw PreconditionError("relative_canonical: base not Q-Gorenstein");
    }
}

// Interior walls whose curve is contracted by pi.  Over a complete base the
// test is the vanishing of the pullback of a base-ample bend; over an
// affine base every complete invariant curve is contracted.
inline std::vector<size_t> contracted_wall_indices(const FiberedModel& m) {
    std::vector<size_t> out;
    const auto& walls = m.total()->walls();
    if (!m.base()->complete()) {
        for (size_t i = 0; i < walls.size(); ++i)
            if (walls[i].interior()) out.push_back(i);
        return out;
    }
    TorusDivisor hb = ample_witness(m.base());
    TorusDivisor ph = pullback_from_base(m, hb);
    SupportFunction sf = support_function(ph);
    for (size_t i = 0; i < walls.size(); ++i) {
        if (!walls[i].interior()) continue;
        if (wall_bend(ph, sf, walls[i]) == 0) out.push_back(i);
    }
    return out;
}

inline bool is_relatively_nef(const FiberedModel& m, const TorusDivisor& d) {
    return is_nef_across_walls(d, contracted_wall_indices(m));
}

inline void require_relatively_nef_polarization(const FiberedModel& m) {
    SupportFunction sf = support_function(m.polarization());
    for (size_t wi : contracted_wall_indices(m)) {
        if (wall_bend(m.polarization(), sf, m.total()->walls()[wi]) < 0)
            throw PreconditionError("model " + m.id() + ": polarization not relatively nef (wall over cones " +
                                    std::to_string(m.total()->walls()[wi].cone_a) + "/" +
                                    std::to_string(m.total()->walls()[wi].cone_b) + ")");
    }
}

// A divisor with support function strictly convex across every contracted
// wall.  With nothing to contract the zero divisor qualifies.
inline TorusDivisor find_relatively_ample(const FiberedModel& m) {
    auto walls = contracted_wall_indices(m);
    if (walls.empty()) return zero_divisor(m.total());
    auto d = find_strictly_convex(m.total(), walls);
    if (!d)
        throw PreconditionError("find_relatively_ample: source not relatively projective");
    return *d;
}

// Star subdivision of the total fan with the polarization pulled back; the
// result is a model of the same family.
inline FiberedModel refine_model(const FiberedModel& m, const IVec& v) {
    FanPtr fine = star_subdivide_with_witness(m.total(), v);
    TorusDivisor pl = pullback_divisor(m.polarization(), fine);
    return FiberedModel(m.id(), fine, pl.coeffs(), m.projection(), m.base(), m.base_ray_p());
}

// ---------------------------------------------------------------------------
// families over a curve: multiplicities and base change
// ---------------------------------------------------------------------------

// Lattice height of pi(v_rho) over the marked base ray, per vertical ray.
inline std::vector<std::pair<size_t, Int>> central_fiber_multiplicities(const FiberedModel& m) {
    if (m.base_dim() != 1)
        throw PreconditionError("central_fiber_multiplicities: base must be a curve");
    std::vector<std::pair<size_t, Int>> out;
    const Int dir = m.base()->rays()[m.base_ray_p()][0];
    for (size_t r = 0; r < m.total()->rays().size(); ++r) {
        Int h = m.project(m.total()->rays()[r])[0] * dir;
        if (h > 0) out.emplace_back(r, h);
    }
    return out;
}

// Normalization of the fiber product with the degree-d cover of the base
// curve totally ramified over both fixed points: the total lattice becomes
// the kernel of (pi, -d) inside N x Z, cones transport along the real
// isomorphism, and central multiplicities divide by gcd(d, height).
inline FiberedModel base_change(const FiberedModel& m, const Int& d) {
    if (m.base_dim() != 1) throw PreconditionError("base_change: base must be a curve");
    if (d <= 0) throw PreconditionError("base_change: degree must be positive");

    size_t n = m.total_dim();
    // kernel of [pi | -d]: N~ = {(v, w) : pi(v) = d w}
    IMat glue(1, IVec(n + 1));
    for (size_t j = 0; j < n; ++j) glue[0][j] = m.projection()[0][j];
    glue[0][n] = -d;
    std::vector<IVec> basis = integer_kernel_basis(glue);  // n vectors in Z^{n+1}

    std::vector<IVec> new_rays;
    Vec new_coeffs;
    IMat new_proj(1, IVec(n, Int(0)));
    for (size_t r = 0; r < m.total()->rays().size(); ++r) {
        const IVec& v = m.total()->rays()[r];
        Int h = m.project(v)[0];
        Int k = d / int_gcd(d, h);  // smallest k with d | k h
        IVec pair(n + 1);
        for (size_t j = 0; j < n; ++j) pair[j] = k * v[j];
        pair[n] = k * h / d;
        auto coords = integer_coordinates(basis, pair);
        if (!coords) throw Error("base_change: lifted ray without integer coordinates");
        // primitive by minimality of k and saturation of the kernel
        if (!is_primitive(*coords)) throw Error("base_change: lifted ray not primitive");
        new_rays.push_back(std::move(*coords));
        new_coeffs.push_back(Rational(k) * m.polarization().coeff(r));
    }
    // new projection: w-coordinate of the pair, expressed on the basis
    for (size_t j = 0; j < n; ++j) new_proj[0][j] = basis[j][n];

    FanPtr nf = std::make_shared<Fan>(n, new_rays, m.total()->max_cones());
    FiberedModel out(m.id() + "+bc" + d.str(), nf, std::move(new_coeffs), std::move(new_proj),
                     m.base(), m.base_ray_p());
    return out;
}

}  // namespace torick
