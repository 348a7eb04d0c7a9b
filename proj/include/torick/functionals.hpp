// The invariants of a polarized fibered model: the normalized volume V, the
// generalized Donaldson-Futaki invariant with its two summands, the
// derivative-route consistency value, linear polarization paths toward the
// relative canonical divisor, concavity certificates for vertical
// directions, and degree-normalized DF for families over a curve.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torick/algebraic.hpp"
#include "torick/algpoly.hpp"
#include "torick/divisor.hpp"
#include "torick/errors.hpp"
#include "torick/intersection.hpp"
#include "torick/model.hpp"
#include "torick/rational.hpp"

namespace torick {

struct InvariantReport {
    std::string model_id;
    size_t n = 0;
    size_t dim_b = 0;
    size_t dim_f = 0;
    Int c = 1;
    std::optional<AlgebraicValue> volume;  // V; absent for localized searches
    AlgebraicValue df;
    AlgebraicValue term1;
    AlgebraicValue term2;
    int df_sign = 0;
};

namespace functional_detail {

struct Context {
    size_t n, dim_b, dim_f;
    Int c = 1;
    Rational l_top;                      // (L^n)
    GenericFiber fiber;
    std::optional<TorusDivisor> l_f;     // L|_F
    std::optional<Rational> fiber_kdeg;  // (L|_F^{q-1} . K_F)
};

inline Context make_context(const FiberedModel& m) {
    if (!m.total()->complete())
        throw PreconditionError("invariants: total fan must be complete");
    require_relatively_nef_polarization(m);
    Context ctx;
    ctx.n = m.total_dim();
    ctx.dim_b = m.base_dim();
    ctx.dim_f = m.fiber_dim();
    std::vector<TorusDivisor> tops(ctx.n, m.polarization());
    ctx.l_top = intersection_number(tops);
    ctx.fiber = generic_fiber(m);
    if (ctx.dim_f > 0) {
        ctx.l_f = ctx.fiber.restricted;
        std::vector<TorusDivisor> fl(ctx.dim_f, *ctx.l_f);
        Rational c_val = intersection_number(fl);
        if (den(c_val) != 1 || c_val <= 0)
            throw PreconditionError("invariants: (L|_F^dimF) = " + rational_to_string(c_val) +
                                    " is not a positive integer");
        ctx.c = num(c_val);
        std::vector<TorusDivisor> kf(ctx.dim_f, *ctx.l_f);
        kf[ctx.dim_f - 1] = canonical_divisor(ctx.fiber.fan);
        ctx.fiber_kdeg = intersection_number(kf);
    }
    return ctx;
}

// c^{k/q} as an exact ring element.
inline AlgebraicValue cpow(const Context& ctx, long long k) {
    return AlgebraicValue::root_power(ctx.c, static_cast<unsigned>(std::max<size_t>(ctx.dim_f, 1)),
                                      k);
}

}  // namespace functional_detail

// V = (L^n) / c^{(n-1)/dim F}; for generically finite families the
// denominator is 1.
inline AlgebraicValue normalized_volume_V(const FiberedModel& m) {
    auto ctx = functional_detail::make_context(m);
    if (ctx.dim_f == 0) return AlgebraicValue(ctx.l_top);
    return AlgebraicValue(ctx.l_top) *
           functional_detail::cpow(ctx, -static_cast<long long>(ctx.n - 1));
}

// DF = n (L^{n-1}.K_{X/B}) c^{(n-1)/q}
//    - (n-1) (L^n) (L|_F^{q-1}.K_F) c^{(dimB-1)/q},
// and DF = n (L^{n-1}.K_{X/B}) when dim F = 0.
inline InvariantReport donaldson_futaki(const FiberedModel& m) {
    auto ctx = functional_detail::make_context(m);
    InvariantReport rep;
    rep.model_id = m.id();
    rep.n = ctx.n;
    rep.dim_b = ctx.dim_b;
    rep.dim_f = ctx.dim_f;
    rep.c = ctx.c;
    rep.volume = normalized_volume_V(m);

    TorusDivisor krel = relative_canonical(m);
    std::vector<TorusDivisor> first(ctx.n, m.polarization());
    first[ctx.n - 1] = krel;
    Rational lk = intersection_number(first);

    if (ctx.dim_f == 0) {
        rep.term1 = AlgebraicValue(Rational(static_cast<long>(ctx.n)) * lk);
        rep.term2 = AlgebraicValue();
    } else {
        rep.term1 = AlgebraicValue(Rational(static_cast<long>(ctx.n)) * lk) *
                    functional_detail::cpow(ctx, static_cast<long long>(ctx.n - 1));
        rep.term2 = AlgebraicValue(Rational(static_cast<long>(ctx.n - 1)) * ctx.l_top *
                                   *ctx.fiber_kdeg) *
                    functional_detail::cpow(ctx, static_cast<long long>(ctx.dim_b) - 1);
    }
    rep.df = rep.term1 - rep.term2;
    rep.df_sign = rep.df.sign();
    return rep;
}

// DF through the derivative of V along K_{X/B}, computed from the two
// intersection polynomials N(t) = ((L+tK)^n) and D(t) = ((L|_F+tK_F)^q):
// d/dt [N / D^{(n-1)/q}] at t = 0, times c^{2(n-1)/q}.  Must agree exactly
// with the explicit formula.
inline AlgebraicValue df_via_derivative(const FiberedModel& m) {
    auto ctx = functional_detail::make_context(m);
    if (ctx.dim_f == 0)
        throw PreconditionError("df_via_derivative: derivative form degenerates for dim F = 0");
    TorusDivisor krel = relative_canonical(m);
    std::vector<Rational> ntotal = volume_polynomial(m.polarization(), krel);
    std::vector<Rational> dfiber =
        volume_polynomial(*ctx.l_f, canonical_divisor(ctx.fiber.fan));
    // N'(0) c^{(n-1)/q} - ((n-1)/q) N(0) D'(0) c^{(n-1)/q - 1}
    long long n1 = static_cast<long long>(ctx.n - 1);
    AlgebraicValue first = AlgebraicValue(ntotal[1]) * functional_detail::cpow(ctx, n1);
    AlgebraicValue second =
        AlgebraicValue(Rational(n1, static_cast<long>(ctx.dim_f)) * ntotal[0] * dfiber[1]) *
        functional_detail::cpow(ctx, n1 - static_cast<long long>(ctx.dim_f));
    return first - second;
}

// ---------------------------------------------------------------------------
// concavity certificate
// ---------------------------------------------------------------------------

// Requires E supported on rays over the marked point.  Returns the exact
// value n(n-1)(L^{n-2}.E^2)/c^{(n-1)/q} and its sign.
inline std::pair<AlgebraicValue, int> concavity_certificate(const FiberedModel& m,
                                                            const TorusDivisor& e) {
    auto ctx = functional_detail::make_context(m);
    if (ctx.n < 2) throw PreconditionError("concavity_certificate: total dimension >= 2 required");
    for (size_t r = 0; r < e.coeffs().size(); ++r)
        if (e.coeff(r) != 0 && !m.ray_is_vertical(r))
            throw PreconditionError("concavity_certificate: divisor not vertical over the marked point");
    std::vector<TorusDivisor> prod(ctx.n, m.polarization());
    prod[ctx.n - 1] = e;
    prod[ctx.n - 2] = e;
    Rational le2 = intersection_number(prod);
    AlgebraicValue value =
        AlgebraicValue(Rational(static_cast<long>(ctx.n * (ctx.n - 1))) * le2);
    if (ctx.dim_f > 0)
        value = value * functional_detail::cpow(ctx, -static_cast<long long>(ctx.n - 1));
    return {value, value.sign()};
}

// (L^{n-2}.E.pi^*H) for the base ample witness H; vanishes exactly for
// vertical E because the pushforward of the curve class is zero.
inline Rational hodge_vanishing_product(const FiberedModel& m, const TorusDivisor& e) {
    size_t n = m.total_dim();
    if (n < 2) throw PreconditionError("hodge_vanishing_product: dimension >= 2 required");
    TorusDivisor ph = pullback_from_base(m, ample_witness(m.base()));
    std::vector<TorusDivisor> prod(n, m.polarization());
    prod[n - 1] = e;
    prod[n - 2] = ph;
    return intersection_number(prod);
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

struct PathReport {
    std::string model_id;
    Vec direction;                     // ray coefficients of E
    std::optional<Rational> t_max;     // nef boundary; absent = unbounded
    std::vector<AlgebraicValue> df_poly;
    bool derivative_nonpositive = false;  // certified on [0, t_max]
    std::vector<std::pair<Rational, int>> derivative_signs;  // samples
};

// a with K_F = a L|_F up to a character, detected exactly on the fiber fan.
inline std::optional<Rational> fiber_proportionality(const FiberedModel& m) {
    GenericFiber gf = generic_fiber(m);
    if (gf.dim == 0) return std::nullopt;
    const Fan& f = *gf.fan;
    // unknowns (m, a): <m, v_rho> - a * L_rho = 1 for every fiber ray
    Mat rows;
    Vec rhs;
    for (size_t r = 0; r < f.rays().size(); ++r) {
        Vec row(f.rank() + 1);
        for (size_t j = 0; j < f.rank(); ++j) row[j] = Rational(f.rays()[r][j]);
        row[f.rank()] = -gf.restricted->coeff(r);
        rows.push_back(std::move(row));
        rhs.push_back(Rational(1));
    }
    auto sol = solve(rows, rhs);
    if (!sol) return std::nullopt;
    return (*sol)[f.rank()];
}

// K_{X/B} - a L with the detected proportionality constant.
inline TorusDivisor canonical_direction(const FiberedModel& m) {
    auto a = fiber_proportionality(m);
    if (!a)
        throw PreconditionError(
            "canonical_direction: K_F is not proportional to L|_F on the fiber");
    return relative_canonical(m) - *a * m.polarization();
}

// Exact largest t >= 0 with L + tE relatively nef (absent if unbounded).
inline std::optional<Rational> nef_interval_end(const FiberedModel& m, const TorusDivisor& e) {
    SupportFunction sl = support_function(m.polarization());
    SupportFunction se = support_function(e);
    const Fan& f = *m.total();
    std::optional<Rational> tmax;
    for (size_t wi : contracted_wall_indices(m)) {
        const Wall& w = f.walls()[wi];
        for (size_t r : f.max_cones()[w.cone_b]) {
            if (std::find(w.ridge.begin(), w.ridge.end(), r) != w.ridge.end()) continue;
            Rational a = dot(sl.pieces[w.cone_a], f.rays()[r]) + m.polarization().coeff(r);
            Rational b = dot(se.pieces[w.cone_a], f.rays()[r]) + e.coeff(r);
            if (b >= 0) continue;
            Rational bound = a / -b;
            if (!tmax || bound < *tmax) tmax = bound;
        }
    }
    return tmax;
}

// DF(L + tE) as an exact polynomial; E must restrict to a numerically
// trivial class on the generic fiber so that c stays constant.
inline PathReport df_path(const FiberedModel& m, const TorusDivisor& e,
                          size_t sample_count = 8) {
    auto ctx = functional_detail::make_context(m);
    if (ctx.dim_f > 0) {
        Vec fiber_coeffs(ctx.fiber.fan->rays().size());
        for (size_t i = 0; i < ctx.fiber.fiber_ray_sources.size(); ++i)
            fiber_coeffs[i] = e.coeff(ctx.fiber.fiber_ray_sources[i]);
        TorusDivisor ef(ctx.fiber.fan, std::move(fiber_coeffs));
        if (!numerically_trivial(ef))
            throw PreconditionError(
                "df_path: direction changes the fiber polarization class, c would vary");
    }

    TorusDivisor krel = relative_canonical(m);
    size_t n = ctx.n;
    // (L_t^{n-1} . K): coefficient k is binom(n-1, k) (L^{n-1-k} E^k . K)
    AlgPoly term1(n, AlgebraicValue());
    {
        Rational binom(1);
        for (size_t k = 0; k <= n - 1; ++k) {
            std::vector<TorusDivisor> factors;
            for (size_t i = 0; i < n - 1 - k; ++i) factors.push_back(m.polarization());
            for (size_t i = 0; i < k; ++i) factors.push_back(e);
            factors.push_back(krel);
            AlgebraicValue coeff(binom * Rational(static_cast<long>(n)) *
                                 intersection_number(factors));
            if (ctx.dim_f > 0)
                coeff = coeff * functional_detail::cpow(ctx, static_cast<long long>(n - 1));
            term1[k] = coeff;
            binom = binom * Rational(static_cast<long>(n - 1 - k)) /
                    Rational(static_cast<long>(k + 1));
        }
    }
    AlgPoly df_poly = term1;
    if (ctx.dim_f > 0) {
        std::vector<Rational> ntop = volume_polynomial(m.polarization(), e);
        AlgPoly term2(n + 1, AlgebraicValue());
        for (size_t k = 0; k <= n; ++k)
            term2[k] = AlgebraicValue(Rational(static_cast<long>(n - 1)) * ntop[k] *
                                      *ctx.fiber_kdeg) *
                       functional_detail::cpow(ctx, static_cast<long long>(ctx.dim_b) - 1);
        df_poly = poly_sub(term1, term2);
    }

    PathReport rep;
    rep.model_id = m.id();
    rep.direction = e.coeffs();
    rep.t_max = nef_interval_end(m, e);
    rep.df_poly = df_poly;

    AlgPoly ddf = poly_derivative(df_poly);
    Rational cert_end = rep.t_max ? *rep.t_max : Rational(1);
    rep.derivative_nonpositive = poly_is_zero(ddf) || poly_nonpositive_on(ddf, Rational(0), cert_end);
    if (sample_count > 0) {
        Rational end = cert_end;
        for (size_t j = 0; j <= sample_count; ++j) {
            Rational t = end * Rational(static_cast<long>(j), static_cast<long>(sample_count));
            rep.derivative_signs.emplace_back(t, poly_eval(ddf, t).sign());
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// families over a curve: normalized DF
// ---------------------------------------------------------------------------

inline AlgebraicValue ndf(const FiberedModel& m, const Int& base_change_degree) {
    if (m.base_dim() != 1) throw PreconditionError("ndf: base must be a curve");
    if (base_change_degree <= 0) throw PreconditionError("ndf: degree must be positive");
    InvariantReport rep = donaldson_futaki(m);
    return Rational(Int(1), base_change_degree) * rep.df;
}

}  // namespace torick
