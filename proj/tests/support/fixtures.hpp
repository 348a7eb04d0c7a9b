// In-memory copies of the standard models used across the test suites.
#pragma once

#include <memory>

#include "torick/divisor.hpp"
#include "torick/fan.hpp"
#include "torick/model.hpp"

namespace torick_test {

using torick::Fan;
using torick::FanPtr;
using torick::FiberedModel;
using torick::Int;
using torick::IVec;
using torick::Rational;
using torick::Vec;

inline IVec iv(std::initializer_list<long> xs) {
    IVec v;
    for (long x : xs) v.push_back(Int(x));
    return v;
}

inline Vec rv(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

inline FanPtr p2_fan() {
    auto f = std::make_shared<Fan>(2, std::vector<IVec>{iv({1, 0}), iv({0, 1}), iv({-1, -1})},
                                   std::vector<std::vector<size_t>>{{0, 1}, {1, 2}, {2, 0}});
    f->set_ample_witness(rv({0, 0, 1}));
    return f;
}

inline FanPtr p1_fan() {
    return std::make_shared<Fan>(1, std::vector<IVec>{iv({1}), iv({-1})},
                                 std::vector<std::vector<size_t>>{{0}, {1}});
}

inline FanPtr p1xp1_fan() {
    auto f = std::make_shared<Fan>(
        2, std::vector<IVec>{iv({1, 0}), iv({-1, 0}), iv({0, 1}), iv({0, -1})},
        std::vector<std::vector<size_t>>{{0, 2}, {1, 2}, {1, 3}, {0, 3}});
    f->set_ample_witness(rv({0, 1, 0, 1}));
    return f;
}

// P1 x P1 -> P1 (second coordinate), L = O(1,1), p over the ray +1.
inline FiberedModel p1xp1_model() {
    auto base = p1_fan();
    base->set_ample_witness(rv({0, 1}));
    return FiberedModel("p1xp1", p1xp1_fan(), rv({0, 1, 0, 1}),
                        torick::IMat{iv({0, 1})}, base, 0);
}

inline FanPtr p2xp1_fan() {
    auto f = std::make_shared<Fan>(
        3,
        std::vector<IVec>{iv({1, 0, 0}), iv({0, 1, 0}), iv({-1, -1, 0}), iv({0, 0, 1}),
                          iv({0, 0, -1})},
        std::vector<std::vector<size_t>>{{0, 1, 3}, {1, 2, 3}, {2, 0, 3},
                                         {0, 1, 4}, {1, 2, 4}, {2, 0, 4}});
    f->set_ample_witness(rv({0, 0, 1, 1, 0}));
    return f;
}

// P2 x P1 -> P1, L = O(1) x O(1).
inline FiberedModel p2xp1_model() {
    auto base = p1_fan();
    base->set_ample_witness(rv({0, 1}));
    return FiberedModel("p2xp1", p2xp1_fan(), rv({0, 0, 1, 1, 0}),
                        torick::IMat{iv({0, 0, 1})}, base, 0);
}

// Degeneration of P2 to the normal cone of a fixed point, over P1:
// P2 x P1 blown up at (pt, 0), polarization mu*(O(1) x O(1)) - E/2.
inline FiberedModel dnc_p2_model() {
    auto f = std::make_shared<Fan>(
        3,
        std::vector<IVec>{iv({1, 0, 0}), iv({0, 1, 0}), iv({-1, -1, 0}), iv({0, 0, 1}),
                          iv({0, 0, -1}), iv({1, 1, 1})},
        std::vector<std::vector<size_t>>{{1, 3, 5}, {0, 3, 5}, {0, 1, 5},
                                         {1, 2, 3}, {2, 0, 3},
                                         {0, 1, 4}, {1, 2, 4}, {2, 0, 4}});
    Vec pol = rv({0, 0, 1, 0, 1, 0});
    pol[5] = Rational(-1, 2);
    f->set_ample_witness(pol);
    auto base = p1_fan();
    base->set_ample_witness(rv({0, 1}));
    return FiberedModel("dnc-p2", f, pol, torick::IMat{iv({0, 0, 1})}, base, 0);
}

// Family over P1 with a multiplicity-2 central fiber component; the total
// space is P1 x P1 blown up twice, the polarization is relatively ample.
inline FiberedModel mult2_model() {
    auto f = std::make_shared<Fan>(
        2,
        std::vector<IVec>{iv({1, 0}), iv({1, 1}), iv({1, 2}), iv({0, 1}), iv({-1, 0}),
                          iv({0, -1})},
        std::vector<std::vector<size_t>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    Vec pol = rv({0, 0, 0, 0, 1, 1});
    pol[1] = Rational(-1, 2);
    pol[2] = Rational(-3, 4);
    f->set_ample_witness(pol);
    auto base = p1_fan();
    base->set_ample_witness(rv({0, 1}));
    return FiberedModel("mult2", f, pol, torick::IMat{iv({0, 1})}, base, 0);
}

// (P1 x P1) x P2 -> P2 with L = O(1,1) x O(1), blown up along the fiber
// over a fixed point of the marked stratum: dim B = 2, c = 2, so the
// invariants live in Q[sqrt(2)].
inline FiberedModel quadric_p2_model() {
    std::vector<IVec> rays{iv({1, 0, 0, 0}),  iv({-1, 0, 0, 0}), iv({0, 1, 0, 0}),
                           iv({0, -1, 0, 0}), iv({0, 0, 1, 0}),  iv({0, 0, 0, 1}),
                           iv({0, 0, -1, -1})};
    std::vector<std::vector<size_t>> cones;
    std::vector<std::vector<size_t>> fiber_cones{{0, 2}, {1, 2}, {1, 3}, {0, 3}};
    std::vector<std::vector<size_t>> base_cones{{4, 5}, {5, 6}, {6, 4}};
    for (const auto& fc : fiber_cones)
        for (const auto& bc : base_cones) {
            std::vector<size_t> c = fc;
            c.insert(c.end(), bc.begin(), bc.end());
            cones.push_back(c);
        }
    auto f0 = std::make_shared<Fan>(4, rays, cones);
    f0->set_ample_witness(rv({0, 1, 0, 1, 0, 0, 1}));
    auto fine = torick::star_subdivide_with_witness(f0, iv({0, 0, 1, 1}));
    auto base = p2_fan();
    torick::FiberedModel coarse("quadric-p2-coarse", f0, rv({0, 1, 0, 1, 0, 0, 1}),
                                torick::IMat{iv({0, 0, 1, 0}), iv({0, 0, 0, 1})}, base, 0);
    torick::TorusDivisor pl =
        torick::pullback_divisor(coarse.polarization(), fine);
    return FiberedModel("quadric-p2", fine, pl.coeffs(),
                        torick::IMat{iv({0, 0, 1, 0}), iv({0, 0, 0, 1})}, base, 0);
}

// Crepant resolution of the A1 surface cone, compactified, as a birational
// model (dim F = 0) marked at the singular point.
inline FiberedModel a1_crepant_model() {
    auto base = std::make_shared<Fan>(
        2, std::vector<IVec>{iv({1, 0}), iv({1, 2}), iv({-1, -1})},
        std::vector<std::vector<size_t>>{{0, 1}, {1, 2}, {2, 0}});
    auto total = std::make_shared<Fan>(
        2, std::vector<IVec>{iv({1, 0}), iv({1, 2}), iv({-1, -1}), iv({1, 1})},
        std::vector<std::vector<size_t>>{{0, 3}, {3, 1}, {1, 2}, {2, 0}});
    Vec pol(4, Rational(0));
    pol[3] = Rational(-1, 2);
    return FiberedModel("a1-crepant", total, pol, torick::IMat{iv({1, 0}), iv({0, 1})}, base, 0);
}

}  // namespace torick_test
