// Dense univariate polynomials with coefficients in Q[c^(1/q)], plus the
// Sturm machinery that certifies sign conditions of DF(t) derivatives on a
// closed interval: every evaluation is exact, every root is bracketed, and
// nonpositivity is decided by sampling each root-free region once.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "torick/algebraic.hpp"
#include "torick/errors.hpp"
#include "torick/rational.hpp"

namespace torick {

using AlgPoly = std::vector<AlgebraicValue>;  // coefficient of t^i at index i

inline int poly_degree(const AlgPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (!p[static_cast<size_t>(i)].is_zero()) return i;
    return -1;
}

inline bool poly_is_zero(const AlgPoly& p) { return poly_degree(p) < 0; }

inline AlgPoly poly_derivative(const AlgPoly& p) {
    AlgPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(Rational(static_cast<long>(i)) * p[i]);
    if (d.empty()) d.push_back(AlgebraicValue());
    return d;
}

inline AlgebraicValue poly_eval(const AlgPoly& p, const Rational& t) {
    AlgebraicValue acc;
    for (size_t i = p.size(); i-- > 0;) acc = acc * AlgebraicValue(t) + p[i];
    return acc;
}

inline AlgPoly poly_sub(const AlgPoly& a, const AlgPoly& b) {
    AlgPoly out(std::max(a.size(), b.size()), AlgebraicValue());
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

inline AlgPoly poly_scale(const AlgebraicValue& s, const AlgPoly& p) {
    AlgPoly out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[i] = s * p[i];
    return out;
}

// Remainder of a by b over the coefficient field.
inline AlgPoly poly_rem(AlgPoly a, const AlgPoly& b) {
    int db = poly_degree(b);
    if (db < 0) throw PreconditionError("poly_rem: division by zero polynomial");
    AlgebraicValue lead = b[static_cast<size_t>(db)];
    for (int da = poly_degree(a); da >= db; da = poly_degree(a)) {
        AlgebraicValue f = a[static_cast<size_t>(da)] / lead;
        for (int i = 0; i <= db; ++i)
            a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
    }
    a.resize(static_cast<size_t>(std::max(db, 1)));
    return a;
}

inline AlgPoly poly_gcd(AlgPoly a, AlgPoly b) {
    while (!poly_is_zero(b)) {
        AlgPoly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline AlgPoly poly_div_exact(const AlgPoly& a, const AlgPoly& b) {
    int db = poly_degree(b), da = poly_degree(a);
    if (db < 0) throw PreconditionError("poly_div_exact: division by zero polynomial");
    AlgPoly rem = a;
    AlgPoly quo(static_cast<size_t>(std::max(da - db + 1, 1)), AlgebraicValue());
    AlgebraicValue lead = b[static_cast<size_t>(db)];
    for (int d = poly_degree(rem); d >= db; d = poly_degree(rem)) {
        AlgebraicValue f = rem[static_cast<size_t>(d)] / lead;
        quo[static_cast<size_t>(d - db)] = f;
        for (int i = 0; i <= db; ++i)
            rem[static_cast<size_t>(d - db + i)] -= f * b[static_cast<size_t>(i)];
    }
    if (!poly_is_zero(rem)) throw Error("poly_div_exact: inexact division");
    return quo;
}

inline AlgPoly squarefree_part(const AlgPoly& p) {
    if (poly_degree(p) <= 1) return p;
    AlgPoly g = poly_gcd(p, poly_derivative(p));
    if (poly_degree(g) <= 0) return p;
    return poly_div_exact(p, g);
}

namespace sturm_detail {

inline std::vector<AlgPoly> sturm_chain(const AlgPoly& p) {
    std::vector<AlgPoly> chain{p, poly_derivative(p)};
    while (poly_degree(chain.back()) > 0) {
        AlgPoly r = poly_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (poly_is_zero(r)) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_variations(const std::vector<AlgPoly>& chain, const Rational& x) {
    int vars = 0, prev = 0;
    for (const auto& p : chain) {
        int s = poly_eval(p, x).sign();
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

}  // namespace sturm_detail

// Number of distinct real roots in (a, b]; p(a) must be nonzero.
inline int count_roots_half_open(const AlgPoly& squarefree, const Rational& a, const Rational& b,
                                 const std::vector<AlgPoly>& chain) {
    return sturm_detail::sign_variations(chain, a) - sturm_detail::sign_variations(chain, b);
}

// Isolating intervals (l, r] for the distinct roots of p inside the open
// interval (a, b).  p must not vanish at a or b.  Intervals come back
// sorted and pairwise separated.
inline std::vector<std::pair<Rational, Rational>> isolate_roots(const AlgPoly& p,
                                                                const Rational& a,
                                                                const Rational& b) {
    AlgPoly sf = squarefree_part(p);
    if (poly_eval(sf, a).sign() == 0 || poly_eval(sf, b).sign() == 0)
        throw PreconditionError("isolate_roots: endpoint is a root");
    auto chain = sturm_detail::sturm_chain(sf);

    std::vector<std::pair<Rational, Rational>> done;
    std::vector<std::pair<Rational, Rational>> todo{{a, b}};
    while (!todo.empty()) {
        auto [l, r] = todo.back();
        todo.pop_back();
        int cnt = count_roots_half_open(sf, l, r, chain);
        if (cnt == 0) continue;
        if (cnt == 1) {
            done.push_back({l, r});
            continue;
        }
        // midpoints that land on a root are perturbed; at most deg(sf) many
        // retries since every candidate is distinct
        Rational mid = (l + r) / 2;
        while (poly_eval(sf, mid).sign() == 0) mid = (l + mid) / 2;
        todo.push_back({l, mid});
        todo.push_back({mid, r});
    }
    std::sort(done.begin(), done.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < done.size(); ++i) {
            bool crowd = (i + 1 < done.size() && done[i].second >= done[i + 1].first);
            if (!crowd) continue;
            auto& [l, r] = done[i];
            Rational mid = (l + r) / 2;
            while (poly_eval(sf, mid).sign() == 0) mid = (l + mid) / 2;
            if (count_roots_half_open(sf, l, mid, chain) == 1) r = mid; else l = mid;
            changed = true;
        }
    }
    return done;
}

// Certifies p(t) <= 0 for every t in [a, b].  Roots at the endpoints are
// divided out first (with the sign parity of the (t-b) factors folded in),
// so the isolation below runs on a polynomial free of endpoint roots; each
// maximal root-free region then contains a certified sample.
inline bool poly_nonpositive_on(AlgPoly p, const Rational& a, const Rational& b) {
    if (a > b) throw PreconditionError("poly_nonpositive_on: empty interval");
    if (poly_is_zero(p)) return true;
    if (a == b) return poly_eval(p, a).sign() <= 0;

    long beta_parity = 0;
    while (poly_eval(p, a).is_zero() && poly_degree(p) > 0)
        p = poly_div_exact(p, AlgPoly{AlgebraicValue(-a), AlgebraicValue(Rational(1))});
    while (poly_eval(p, b).is_zero() && poly_degree(p) > 0) {
        p = poly_div_exact(p, AlgPoly{AlgebraicValue(-b), AlgebraicValue(Rational(1))});
        beta_parity ^= 1;
    }
    if (beta_parity) for (auto& c : p) c = -c;
    if (poly_is_zero(p)) return true;

    if (poly_eval(p, a).sign() > 0 || poly_eval(p, b).sign() > 0) return false;
    auto intervals = isolate_roots(p, a, b);
    std::vector<Rational> samples;
    for (const auto& [l, r] : intervals) {
        samples.push_back(l);
        samples.push_back(r);
    }
    if (!intervals.empty()) {
        samples.push_back((intervals.back().second + b) / 2);
        for (size_t i = 0; i + 1 < intervals.size(); ++i)
            samples.push_back((intervals[i].second + intervals[i + 1].first) / 2);
    }
    for (const auto& s : samples) {
        if (s < a || s > b) continue;
        if (poly_eval(p, s).sign() > 0) return false;
    }
    return true;
}

}  // namespace torick
