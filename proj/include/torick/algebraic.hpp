// Values in Q[c^(1/q)] for a positive integer c: the ring every invariant
// lives in.  Representation is canonical, so structural equality is value
// equality, and sign determination is certified by interval refinement
// around the unique positive real root of x^q = c.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "torick/errors.hpp"
#include "torick/rational.hpp"

namespace torick {

class AlgebraicValue {
public:
    // Zero, as a plain rational.
    AlgebraicValue() : base_(1), root_(1), coeffs_{Rational(0)} {}

    AlgebraicValue(const Rational& r) : base_(1), root_(1), coeffs_{r} {}
    AlgebraicValue(long n) : AlgebraicValue(Rational(n)) {}

    // sum_i coeffs[i] * c^(i/q).  coeffs may have any length <= q; missing
    // entries are zero.
    static AlgebraicValue in_ring(Int c, unsigned q, std::vector<Rational> coeffs) {
        if (c <= 0) throw PreconditionError("AlgebraicValue: base must be positive");
        if (q < 1) throw PreconditionError("AlgebraicValue: root_index must be >= 1");
        if (coeffs.size() > q) throw PreconditionError("AlgebraicValue: too many coefficients");
        coeffs.resize(q, Rational(0));
        AlgebraicValue v;
        v.base_ = std::move(c);
        v.root_ = q;
        v.coeffs_ = std::move(coeffs);
        v.canonicalize();
        return v;
    }

    // c^(k/q) for any integer k (negative allowed: c is a positive integer,
    // so negative powers stay in the ring as rational multiples).
    static AlgebraicValue root_power(const Int& c, unsigned q, long long k) {
        if (c <= 0) throw PreconditionError("root_power: base must be positive");
        if (q < 1) throw PreconditionError("root_power: root_index must be >= 1");
        long long a = k >= 0 ? k / static_cast<long long>(q)
                             : -((-k + static_cast<long long>(q) - 1) / static_cast<long long>(q));
        long long b = k - a * static_cast<long long>(q);  // 0 <= b < q
        Rational scalar(1);
        Int cp = 1;
        for (long long i = 0; i < (a >= 0 ? a : -a); ++i) cp *= c;
        if (a >= 0) scalar = Rational(cp); else scalar = Rational(1, cp);
        std::vector<Rational> coeffs(q, Rational(0));
        coeffs[static_cast<size_t>(b)] = scalar;
        return in_ring(c, q, std::move(coeffs));
    }

    const Int& base() const { return base_; }
    unsigned root_index() const { return root_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_rational() const { return root_ == 1; }
    bool is_zero() const {
        for (const auto& r : coeffs_) if (r != 0) return false;
        return true;
    }

    const Rational& as_rational() const {
        if (!is_rational()) throw PreconditionError("AlgebraicValue: not a rational value");
        return coeffs_[0];
    }

    friend AlgebraicValue operator+(const AlgebraicValue& a, const AlgebraicValue& b) {
        auto [x, y] = align(a, b);
        for (unsigned i = 0; i < x.root_; ++i) x.coeffs_[i] += y.coeffs_[i];
        x.canonicalize();
        return x;
    }
    friend AlgebraicValue operator-(const AlgebraicValue& a, const AlgebraicValue& b) {
        auto [x, y] = align(a, b);
        for (unsigned i = 0; i < x.root_; ++i) x.coeffs_[i] -= y.coeffs_[i];
        x.canonicalize();
        return x;
    }
    AlgebraicValue operator-() const {
        AlgebraicValue r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend AlgebraicValue operator*(const AlgebraicValue& a, const AlgebraicValue& b) {
        auto [x, y] = align(a, b);
        unsigned q = x.root_;
        std::vector<Rational> prod(q, Rational(0));
        Rational c_rat(x.base_);
        for (unsigned i = 0; i < q; ++i) {
            if (x.coeffs_[i] == 0) continue;
            for (unsigned j = 0; j < q; ++j) {
                if (y.coeffs_[j] == 0) continue;
                Rational term = x.coeffs_[i] * y.coeffs_[j];
                unsigned e = i + j;
                if (e >= q) { term *= c_rat; e -= q; }  // c^(q/q) = c
                prod[e] += term;
            }
        }
        return in_ring(x.base_, q, std::move(prod));
    }
    friend AlgebraicValue operator*(const Rational& s, const AlgebraicValue& a) {
        AlgebraicValue r = a;
        for (auto& c : r.coeffs_) c *= s;
        r.canonicalize();
        return r;
    }
    friend AlgebraicValue operator*(const AlgebraicValue& a, const Rational& s) { return s * a; }

    AlgebraicValue& operator+=(const AlgebraicValue& o) { return *this = *this + o; }
    AlgebraicValue& operator-=(const AlgebraicValue& o) { return *this = *this - o; }
    AlgebraicValue& operator*=(const AlgebraicValue& o) { return *this = *this * o; }

    // Multiplicative inverse.  The modulus x^q - c is irreducible after
    // canonicalization, so every nonzero value is invertible.
    AlgebraicValue inverse() const {
        if (is_zero()) throw PreconditionError("AlgebraicValue: division by zero");
        if (is_rational()) return AlgebraicValue(Rational(1) / coeffs_[0]);
        // modulus m(x) = x^q - c
        std::vector<Rational> m(root_ + 1, Rational(0));
        m[root_] = 1;
        m[0] = -Rational(base_);
        auto inv = poly_modular_inverse(coeffs_, m);
        return in_ring(base_, root_, std::move(inv));
    }
    friend AlgebraicValue operator/(const AlgebraicValue& a, const AlgebraicValue& b) {
        return a * b.inverse();
    }

    friend bool operator==(const AlgebraicValue& a, const AlgebraicValue& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.base_ == b.base_ && a.root_ == b.root_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const AlgebraicValue& a, const AlgebraicValue& b) { return !(a == b); }

    // Exact sign of the real number obtained by evaluating at the positive
    // real q-th root of c.  Zero is decided structurally first; nonzero
    // values are separated from 0 by interval halving, which terminates
    // because x^q - c is irreducible, so no nonzero polynomial of degree
    // < q vanishes at the root.
    int sign() const {
        if (is_zero()) return 0;
        if (is_rational()) return sign_of(coeffs_[0]);
        Rational lo(1), hi(base_);  // base >= 2 here, so root lies in [1, c]
        for (;;) {
            auto [vlo, vhi] = eval_interval(lo, hi);
            if (vlo > 0) return 1;
            if (vhi < 0) return -1;
            Rational mid = (lo + hi) / 2;
            Rational p(1);
            for (unsigned i = 0; i < root_; ++i) p *= mid;
            if (p < Rational(base_)) lo = mid; else hi = mid;
        }
    }

    double to_double() const {
        double theta = std::pow(to_double_int(base_), 1.0 / static_cast<double>(root_));
        double acc = 0, p = 1;
        for (unsigned i = 0; i < root_; ++i) { acc += torick::to_double(coeffs_[i]) * p; p *= theta; }
        return acc;
    }

    // Human-readable form, e.g. "3 + 1/2*c^(1/2) [c=2]" or plain "3/4".
    std::string str() const {
        if (is_rational()) return rational_to_string(coeffs_[0]);
        std::string s;
        bool first = true;
        for (unsigned i = 0; i < root_; ++i) {
            if (coeffs_[i] == 0) continue;
            if (!first) s += " + ";
            s += rational_to_string(coeffs_[i]);
            if (i > 0) s += "*c^(" + std::to_string(i) + "/" + std::to_string(root_) + ")";
            first = false;
        }
        s += " [c=" + base_.str() + "]";
        return s;
    }

private:
    Int base_;
    unsigned root_;
    std::vector<Rational> coeffs_;

    static double to_double_int(const Int& n) { return n.convert_to<double>(); }

    // Canonical form: first pull q-th-power factors out of the base
    // (c = s^q r gives theta = s * r^(1/q), folded into the coefficients),
    // then reduce perfect-power bases against the root index, and collapse
    // to a plain rational when only the constant coefficient survives.
    void canonicalize() {
        if (root_ > 1 && base_ > 1) {
            auto [s, r] = extract_qth_power(base_, root_);
            if (s > 1) {
                Rational sr(s);
                Rational scale(1);
                for (unsigned i = 0; i < root_; ++i) {
                    coeffs_[i] *= scale;
                    scale *= sr;
                }
                base_ = r;
            }
        }
        if (root_ > 1 && base_ == 1) {
            Rational s(0);
            for (auto& c : coeffs_) s += c;
            coeffs_.assign(1, s);
            root_ = 1;
        }
        if (root_ > 1) {
            auto [d, k] = largest_perfect_power(base_);
            unsigned g = static_cast<unsigned>(int_gcd(Int(k), Int(root_)).convert_to<unsigned long>());
            if (g > 1) {
                unsigned q2 = root_ / g;
                Int c2 = 1;
                for (unsigned i = 0; i < k / g; ++i) c2 *= d;
                // theta = base^(1/root) equals c2^(1/q2); re-fold exponents.
                std::vector<Rational> nc(q2, Rational(0));
                Rational c2r(c2);
                for (unsigned i = 0; i < root_; ++i) {
                    if (coeffs_[i] == 0) continue;
                    unsigned a = i / q2, b = i % q2;
                    Rational scale(1);
                    for (unsigned j = 0; j < a; ++j) scale *= c2r;
                    nc[b] += coeffs_[i] * scale;
                }
                base_ = c2;
                root_ = q2;
                coeffs_ = std::move(nc);
            }
        }
        if (root_ > 1) {
            bool tail_zero = true;
            for (unsigned i = 1; i < root_; ++i) if (coeffs_[i] != 0) { tail_zero = false; break; }
            if (tail_zero) {
                coeffs_.resize(1);
                root_ = 1;
            }
        }
        if (root_ == 1) base_ = 1;
    }

    // Brings two values into a common ring, or throws.  Rationals promote
    // into any ring; otherwise (base, root_index) must agree.
    static std::pair<AlgebraicValue, AlgebraicValue> align(const AlgebraicValue& a,
                                                           const AlgebraicValue& b) {
        if (a.root_ == 1 && b.root_ == 1) return {a, b};
        if (a.root_ == 1) {
            AlgebraicValue p = b;
            for (auto& c : p.coeffs_) c = 0;
            p.coeffs_[0] = a.coeffs_[0];
            return {p, b};
        }
        if (b.root_ == 1) {
            auto [y, x] = align(b, a);
            return {x, y};
        }
        if (a.base_ != b.base_ || a.root_ != b.root_)
            throw IncompatibleBaseError(
                "AlgebraicValue: incompatible rings Q[" + a.base_.str() + "^(1/" +
                std::to_string(a.root_) + ")] vs Q[" + b.base_.str() + "^(1/" +
                std::to_string(b.root_) + ")]");
        return {a, b};
    }

    // Interval evaluation at theta in [lo, hi], 0 < lo <= hi.
    std::pair<Rational, Rational> eval_interval(const Rational& lo, const Rational& hi) const {
        Rational vlo(0), vhi(0), plo(1), phi(1);
        for (unsigned i = 0; i < root_; ++i) {
            const Rational& c = coeffs_[i];
            if (c > 0) { vlo += c * plo; vhi += c * phi; }
            else if (c < 0) { vlo += c * phi; vhi += c * plo; }
            plo *= lo;
            phi *= hi;
        }
        return {vlo, vhi};
    }

    // --- small dense polynomial helpers over Q (for the modular inverse) ---
    static int poly_deg(const std::vector<Rational>& p) {
        for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
            if (p[static_cast<size_t>(i)] != 0) return i;
        return -1;
    }

    static std::vector<Rational> poly_rem(std::vector<Rational> a, const std::vector<Rational>& b) {
        int db = poly_deg(b);
        for (int da = poly_deg(a); da >= db; da = poly_deg(a)) {
            Rational f = a[static_cast<size_t>(da)] / b[static_cast<size_t>(db)];
            for (int i = 0; i <= db; ++i)
                a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
        }
        return a;
    }

    // Inverse of p modulo m via extended Euclid; gcd(p, m) = 1 is assumed.
    static std::vector<Rational> poly_modular_inverse(std::vector<Rational> p,
                                                      std::vector<Rational> m) {
        std::vector<Rational> r0 = m, r1 = p;
        std::vector<Rational> t0{Rational(0)}, t1{Rational(1)};
        while (poly_deg(r1) > 0) {
            // quotient of r0 by r1
            std::vector<Rational> q(static_cast<size_t>(std::max(0, poly_deg(r0) - poly_deg(r1) + 1)),
                                    Rational(0));
            std::vector<Rational> rem = r0;
            int d1 = poly_deg(r1);
            for (int d0 = poly_deg(rem); d0 >= d1; d0 = poly_deg(rem)) {
                Rational f = rem[static_cast<size_t>(d0)] / r1[static_cast<size_t>(d1)];
                q[static_cast<size_t>(d0 - d1)] = f;
                for (int i = 0; i <= d1; ++i)
                    rem[static_cast<size_t>(d0 - d1 + i)] -= f * r1[static_cast<size_t>(i)];
            }
            // (r0, r1) <- (r1, rem); (t0, t1) <- (t1, t0 - q t1)
            std::vector<Rational> t2(std::max(t0.size(), q.size() + t1.size()), Rational(0));
            for (size_t i = 0; i < t0.size(); ++i) t2[i] = t0[i];
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < t1.size(); ++j) t2[i + j] -= q[i] * t1[j];
            r0 = std::move(r1);
            r1 = std::move(rem);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (poly_deg(r1) != 0)
            throw PreconditionError("AlgebraicValue: non-invertible element");
        Rational unit = r1[static_cast<size_t>(0)];
        for (auto& c : t1) c /= unit;
        t1 = poly_rem(std::move(t1), m);
        t1.resize(m.size() - 1, Rational(0));  // deg < deg m
        return t1;
    }
};

}  // namespace torick
