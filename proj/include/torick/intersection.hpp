// Exact multilinear intersection numbers on a complete projective toric
// variety.  Nef products are mixed volumes of divisor polytopes; arbitrary
// Q-Cartier products go through the nef decomposition of each factor and a
// signed multilinear expansion.  Volumes are cached by (fan, coefficients).
#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "torick/divisor.hpp"
#include "torick/errors.hpp"
#include "torick/fan.hpp"
#include "torick/rational.hpp"

namespace torick {

namespace intersection_detail {

struct VolumeCache {
    std::map<std::string, Rational> map;
    std::mutex mtx;

    static VolumeCache& instance() {
        static VolumeCache c;
        return c;
    }

    std::optional<Rational> get(const std::string& key) {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = map.find(key);
        if (it == map.end()) return std::nullopt;
        return it->second;
    }
    void put(const std::string& key, const Rational& v) {
        std::lock_guard<std::mutex> lock(mtx);
        map.emplace(key, v);
    }
};

inline Rational cached_polytope_volume(const TorusDivisor& d) {
    std::string key = d.fan()->structural_key() + "#" + d.structural_key();
    auto& cache = VolumeCache::instance();
    if (auto hit = cache.get(key)) return *hit;
    Rational v = polytope_of(d).euclidean_volume();
    cache.put(key, v);
    return v;
}

}  // namespace intersection_detail

// Mixed volume of nef divisors on one complete fan, normalized so that the
// diagonal is the normalized volume of the polytope = (D^n).
inline Rational mixed_volume_of_nef(const std::vector<TorusDivisor>& ds) {
    size_t n = ds[0].fan()->rank();
    if (ds.size() != n) throw PreconditionError("mixed_volume_of_nef: need rank-many divisors");
    size_t count = size_t(1) << n;
    Rational total(0);
    for (size_t s = 1; s < count; ++s) {
        Vec coeffs(ds[0].coeffs().size(), Rational(0));
        int bits = 0;
        for (size_t i = 0; i < n; ++i) {
            if (!(s & (size_t(1) << i))) continue;
            ++bits;
            for (size_t j = 0; j < coeffs.size(); ++j) coeffs[j] += ds[i].coeff(j);
        }
        TorusDivisor sum(ds[0].fan(), std::move(coeffs));
        Rational v = intersection_detail::cached_polytope_volume(sum);
        if ((static_cast<int>(n) - bits) % 2 == 0) total += v; else total -= v;
    }
    return total;
}

// (D_1 . ... . D_n) for Q-Cartier divisors on one complete projective fan.
inline Rational intersection_number(const std::vector<TorusDivisor>& ds) {
    if (ds.empty()) throw PreconditionError("intersection_number: no divisors");
    const FanPtr& fan = ds[0].fan();
    size_t n = fan->rank();
    if (ds.size() != n)
        throw PreconditionError("intersection_number: need exactly rank-many divisors");
    for (const auto& d : ds)
        if (!d.same_fan(ds[0]))
            throw PreconditionError("intersection_number: divisors on different fans");
    if (!fan->complete()) throw PreconditionError("intersection_number: fan not complete");

    std::vector<NefDecomposition> dec;
    dec.reserve(n);
    std::vector<size_t> nonzero;
    for (size_t i = 0; i < n; ++i) {
        dec.push_back(nef_decomposition(ds[i]));
        if (dec.back().k != 0) nonzero.push_back(i);
    }
    // expand over choices positive/negative part for factors with k != 0
    size_t count = size_t(1) << nonzero.size();
    Rational total(0);
    for (size_t s = 0; s < count; ++s) {
        std::vector<TorusDivisor> term;
        term.reserve(n);
        Rational sign(1);
        size_t bit = 0;
        for (size_t i = 0; i < n; ++i) {
            bool take_negative = false;
            if (bit < nonzero.size() && nonzero[bit] == i) {
                take_negative = (s & (size_t(1) << bit)) != 0;
                ++bit;
            }
            if (take_negative) {
                term.push_back(dec[i].negative);
                sign = -sign;
            } else {
                term.push_back(dec[i].positive);
            }
        }
        total += sign * mixed_volume_of_nef(term);
    }
    return total;
}

// Coefficients c_0..c_n of ((L + tE)^n) = sum_k binom(n,k) (L^{n-k}.E^k) t^k.
inline std::vector<Rational> volume_polynomial(const TorusDivisor& l, const TorusDivisor& e) {
    size_t n = l.fan()->rank();
    std::vector<Rational> coeffs(n + 1);
    Rational binom(1);
    for (size_t k = 0; k <= n; ++k) {
        std::vector<TorusDivisor> factors;
        for (size_t i = 0; i < n - k; ++i) factors.push_back(l);
        for (size_t i = 0; i < k; ++i) factors.push_back(e);
        coeffs[k] = binom * intersection_number(factors);
        binom = binom * Rational(static_cast<long>(n - k)) / Rational(static_cast<long>(k + 1));
    }
    return coeffs;
}

inline Rational eval_polynomial(const std::vector<Rational>& coeffs, const Rational& t) {
    Rational acc(0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
    return acc;
}

}  // namespace torick
