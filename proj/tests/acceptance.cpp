// Acceptance suite: every release gate in one binary, one PASS/FAIL line
// per criterion, exact arithmetic throughout.  Run it through ctest or
// directly; a nonzero exit means at least one criterion failed.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "torick/functionals.hpp"
#include "torick/io.hpp"
#include "torick/rng.hpp"
#include "torick/singularities.hpp"

#ifndef TORICK_BIN
#error "TORICK_BIN must point at the CLI binary"
#endif
#ifndef TORICK_FIXTURE_DIR
#error "TORICK_FIXTURE_DIR must point at the fixture directory"
#endif

using namespace torick;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture(const std::string& name) {
    return std::string(TORICK_FIXTURE_DIR) + "/" + name;
}

FiberedModel load_model(const std::string& name) {
    return model_from_json(load_json_file(fixture(name)), name);
}

Cone load_cone(const std::string& name) {
    return cone_from_json(load_json_file(fixture(name)));
}

IVec random_center(SplitMix64& rng, const Fan& f) {
    for (;;) {
        const auto& cone =
            f.max_cones()[static_cast<size_t>(rng.range(0, static_cast<long>(f.max_cones().size()) - 1))];
        IVec v(f.rank(), Int(0));
        bool nz = false;
        for (size_t idx : cone) {
            long c = rng.range(0, 2);
            if (c) nz = true;
            for (size_t j = 0; j < v.size(); ++j) v[j] += Int(c) * f.rays()[idx][j];
        }
        if (!nz) continue;
        v = primitive(std::move(v));
        if (!f.ray_index(v)) return v;
    }
}

// --- criterion 1: mixed-volume diagonal --------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(101);
    bool ok = true;
    for (int iter = 0; iter < 50; ++iter) {
        size_t dim = static_cast<size_t>(rng.range(2, 3));
        std::vector<Vec> pts;
        for (size_t i = 0; i < dim + 4; ++i) {
            Vec p(dim);
            for (auto& x : p) x = Rational(rng.range(-3, 3));
            pts.push_back(std::move(p));
        }
        auto poly = RationalPolytope::hull(pts);
        std::vector<RationalPolytope> diag(dim, poly);
        if (mixed_intersection(diag) != poly.normalized_volume()) ok = false;
    }
    double dt = seconds_since(t0);
    report(1, "mixed-volume diagonal on 50 random lattice polytopes", ok && dt < 60,
           "elapsed " + std::to_string(dt) + " s");
}

// --- criterion 2: pullback invariance ----------------------------------

void criterion_2() {
    SplitMix64 rng(202);
    bool ok = true;
    std::string detail;
    for (const char* name : {"p1xp1.model", "p2xp1.model", "dnc-p2.model", "mult2.model"}) {
        FiberedModel m = load_model(name);
        AlgebraicValue v0 = normalized_volume_V(m);
        AlgebraicValue df0 = donaldson_futaki(m).df;
        for (int iter = 0; iter < 30; ++iter) {
            FiberedModel cur = refine_model(m, random_center(rng, *m.total()));
            if (rng.range(0, 1)) cur = refine_model(cur, random_center(rng, *cur.total()));
            if (normalized_volume_V(cur) != v0 || donaldson_futaki(cur).df != df0) {
                ok = false;
                detail = std::string(name) + " iteration " + std::to_string(iter);
            }
        }
    }
    report(2, "V and DF invariant under 30 random refinements of 4 fixtures", ok, detail);
}

// --- criterion 3: homogeneity ------------------------------------------

void criterion_3() {
    bool ok = true;
    for (const char* name :
         {"p1xp1.model", "p2xp1.model", "dnc-p2.model", "mult2.model", "quadric-p2.model"}) {
        FiberedModel m = load_model(name);
        if (m.fiber_dim() == 0) continue;
        AlgebraicValue v0 = normalized_volume_V(m);
        AlgebraicValue df0 = donaldson_futaki(m).df;
        for (long a : {2L, 3L, 5L}) {
            Vec scaled = m.polarization().coeffs();
            for (auto& x : scaled) x *= a;
            FiberedModel ma = m.with_polarization(scaled);
            if (normalized_volume_V(ma) != Rational(a) * v0) ok = false;
            Rational factor(1);
            for (size_t i = 0; i < 2 * (m.total_dim() - 1); ++i) factor *= a;
            if (donaldson_futaki(ma).df != factor * df0) ok = false;
        }
    }
    report(3, "V(aL) = a V(L) and DF(aL) = a^{2(n-1)} DF(L) for a in {2,3,5}", ok);
}

// --- criterion 4: concavity and Hodge vanishing ------------------------

void criterion_4() {
    SplitMix64 rng(404);
    bool ok = true;
    std::string detail;
    for (const char* name :
         {"p1xp1.model", "p2xp1.model", "dnc-p2.model", "mult2.model", "quadric-p2.model"}) {
        FiberedModel m = load_model(name);
        auto vert = m.vertical_rays();
        for (int iter = 0; iter < 50; ++iter) {
            Vec coeffs(m.total()->rays().size(), Rational(0));
            for (size_t r : vert)
                coeffs[r] = Rational(rng.range(-6, 6), 1 + rng.range(0, 2));
            TorusDivisor e(m.total(), coeffs);
            if (concavity_certificate(m, e).second > 0) {
                ok = false;
                detail = std::string(name) + ": positive certificate";
            }
            if (hodge_vanishing_product(m, e) != 0) {
                ok = false;
                detail = std::string(name) + ": Hodge product nonzero";
            }
        }
    }
    report(4, "n(n-1)(L^{n-2}.E^2) <= 0 and (L^{n-2}.E.pi*H) = 0 for vertical E", ok, detail);
}

// --- criterion 5: derivative identity ----------------------------------

void criterion_5() {
    bool ok = true;
    for (const char* name :
         {"p1xp1.model", "p2xp1.model", "dnc-p2.model", "mult2.model", "quadric-p2.model"}) {
        FiberedModel m = load_model(name);
        if (m.fiber_dim() == 0) continue;
        if (df_via_derivative(m) != donaldson_futaki(m).df) ok = false;
    }
    report(5, "df_via_derivative equals donaldson_futaki on every fibered fixture", ok);
}

// --- criterion 6: product models ---------------------------------------

void criterion_6() {
    auto r1 = donaldson_futaki(load_model("p1xp1.model"));
    auto r2 = donaldson_futaki(load_model("p2xp1.model"));
    bool ok = r1.df == AlgebraicValue() && r2.df == AlgebraicValue() &&
              r1.term1 == AlgebraicValue(Rational(-4)) &&
              r1.term2 == AlgebraicValue(Rational(-4)) &&
              r2.term1 == AlgebraicValue(Rational(-18)) &&
              r2.term2 == AlgebraicValue(Rational(-18));
    report(6, "product models have DF = 0 (term1 = term2 = -4 and -18)", ok);
}

// --- criterion 7: DF decrease along the canonical path -----------------

void criterion_7() {
    FiberedModel m = load_model("dnc-p2.model");
    TorusDivisor e = canonical_direction(m);
    PathReport rep = df_path(m, e);
    bool ok = rep.t_max && *rep.t_max == 1 && rep.derivative_nonpositive;
    report(7, "d/dt DF(L+tE) <= 0 on [0, t_max] for the degeneration, by Sturm analysis", ok,
           rep.t_max ? "t_max = " + rational_to_string(*rep.t_max) : "t_max unbounded");
}

// --- criterion 8: the Prop-3.2 shadow ----------------------------------

void criterion_8() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    auto a1 = destabilizer_search(load_cone("a1.cone"), 3);
    if (a1.classification.type != SingularityType::CanonicalNotTerminal) ok = false;
    if (!a1.best || a1.models[*a1.best].df != 0 || a1.negative_found) {
        ok = false;
        detail += "a1 minimum not 0; ";
    }

    auto q3 = destabilizer_search(load_cone("q3.cone"), 3);
    if (q3.classification.type != SingularityType::NotCanonical) ok = false;
    if (!q3.negative_found) {
        ok = false;
        detail += "q3 witness missing; ";
    }

    auto sm = destabilizer_search(load_cone("smooth.cone"), 3);
    if (sm.classification.type != SingularityType::Terminal) ok = false;
    for (const auto& e : sm.models)
        if (e.df <= 0) {
            ok = false;
            detail += "smooth cone nonpositive model; ";
        }

    double dt = seconds_since(t0);
    report(8, "classification matches the bound-3 destabilizer searches", ok && dt < 300,
           "elapsed " + std::to_string(dt) + " s");
}

// --- criterion 9: base change of the non-reduced family ----------------

void criterion_9() {
    FiberedModel m = load_model("mult2.model");
    bool nonreduced = false;
    for (auto& [ray, h] : central_fiber_multiplicities(m))
        if (h > 1) nonreduced = true;
    FiberedModel changed = base_change(m, 2);
    bool reduced = true;
    for (auto& [ray, h] : central_fiber_multiplicities(changed))
        if (h != 1) reduced = false;
    AlgebraicValue before = ndf(m, 1);
    AlgebraicValue after = ndf(changed, 2);
    bool ok = nonreduced && reduced && (before - after).sign() == 1;
    report(9, "degree-2 base change reduces the fibers and strictly lowers nDF", ok,
           "nDF " + before.str() + " -> " + after.str());
}

// --- criterion 10: determinism of the CLI reports ----------------------

std::string run_suite_once(const std::string& tag) {
    std::vector<std::string> commands{
        "volume " + fixture("p1xp1.model"),
        "volume " + fixture("quadric-p2.model"),
        "df " + fixture("p1xp1.model"),
        "df " + fixture("p2xp1.model"),
        "df " + fixture("dnc-p2.model") + " --derivative-check",
        "df " + fixture("mult2.model"),
        "path " + fixture("dnc-p2.model") + " canonical --samples 6 --out /tmp/acc_" + tag + ".csv",
        "classify " + fixture("a1.cone"),
        "classify " + fixture("q3.cone"),
        "classify " + fixture("smooth.cone"),
        "search " + fixture("q3.cone") + " --bound 2",
        "pullback-check " + fixture("p1xp1.model") + " --trials 10 --seed 1729",
        "pullback-check " + fixture("dnc-p2.model") + " --trials 5 --seed 1729",
    };
    std::string all;
    for (const auto& c : commands) {
        std::string out = "/tmp/acc_cmd_" + tag + ".txt";
        std::string cmd = std::string(TORICK_BIN) + " " + c + " > " + out + " 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) all += "[nonzero exit] ";
        std::ifstream in(out);
        std::stringstream ss;
        ss << in.rdbuf();
        all += ss.str();
        std::remove(out.c_str());
        std::ifstream csv("/tmp/acc_" + tag + ".csv");
        if (csv) {
            std::stringstream cs;
            cs << csv.rdbuf();
            all += cs.str();
        }
    }
    return all;
}

void criterion_10() {
    std::string a = run_suite_once("a");
    std::string b = run_suite_once("b");
    report(10, "two runs of the report suite are byte-identical", !a.empty() && a == b,
           std::to_string(a.size()) + " bytes compared");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("acceptance: %d criterion(s) failed, %.1f s total\n", g_failures,
                seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
