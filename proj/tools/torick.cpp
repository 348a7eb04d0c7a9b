// torick: command-line workbench for exact toric Donaldson-Futaki
// computations.  Standard output carries machine-readable JSON only;
// diagnostics go to standard error.  Exit codes: 0 success, 2 schema
// violation, 3 violated mathematical precondition, 4 failed consistency
// check.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "torick/functionals.hpp"
#include "torick/io.hpp"
#include "torick/rng.hpp"
#include "torick/singularities.hpp"

using namespace torick;

namespace {

std::string resolve_input(const std::string& path) {
    if (std::ifstream(path).good()) return path;
    const char* dir = std::getenv("TORICK_FIXTURES");
    if (dir) {
        std::string alt = std::string(dir) + "/" + path;
        if (std::ifstream(alt).good()) return alt;
    }
    throw SchemaError("cannot open file: " + path);
}

std::string stem_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

FiberedModel load_model(const std::string& path) {
    std::string real = resolve_input(path);
    return model_from_json(load_json_file(real), stem_of(real));
}

Cone load_cone(const std::string& path) {
    return cone_from_json(load_json_file(resolve_input(path)));
}

void emit(const Json& j, const std::string& out) {
    std::string s = j.dump(2) + "\n";
    std::cout << s;
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw SchemaError("cannot write file: " + out);
        f << s;
    }
}

std::string decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// A primitive vector inside a pseudo-randomly chosen max cone.
IVec random_subdivision_center(SplitMix64& rng, const Fan& f) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const auto& cone =
            f.max_cones()[static_cast<size_t>(rng.range(0, static_cast<long>(f.max_cones().size()) - 1))];
        IVec v(f.rank(), Int(0));
        bool nonzero = false;
        for (size_t idx : cone) {
            long coeff = rng.range(0, 2);
            if (coeff) nonzero = true;
            for (size_t j = 0; j < v.size(); ++j) v[j] += Int(coeff) * f.rays()[idx][j];
        }
        if (!nonzero) continue;
        v = primitive(std::move(v));
        if (!f.ray_index(v)) return v;
    }
    throw Error("could not draw a fresh subdivision center");
}

int cmd_volume(const std::string& file, const std::string& out) {
    FiberedModel m = load_model(file);
    InvariantReport rep;
    rep.model_id = m.id();
    rep.n = m.total_dim();
    rep.dim_b = m.base_dim();
    rep.dim_f = m.fiber_dim();
    rep.volume = normalized_volume_V(m);
    if (rep.dim_f > 0) {
        auto full = donaldson_futaki(m);
        rep.c = full.c;
    }
    emit(invariant_report_json(rep, /*include_df=*/false), out);
    return 0;
}

int cmd_df(const std::string& file, bool derivative_check, const std::string& out) {
    FiberedModel m = load_model(file);
    InvariantReport rep = donaldson_futaki(m);
    Json j = invariant_report_json(rep);
    if (derivative_check) {
        AlgebraicValue alt = df_via_derivative(m);
        j["derivative_check"] = algebraic_json(alt);
        j["derivative_check_ok"] = (alt == rep.df);
        if (alt != rep.df) {
            emit(j, out);
            std::cerr << "df: derivative route disagrees with the explicit formula\n";
            return 4;
        }
    }
    emit(j, out);
    return 0;
}

int cmd_path(const std::string& file, const std::string& espec, size_t samples,
             const std::string& out) {
    FiberedModel m = load_model(file);
    TorusDivisor e = zero_divisor(m.total());
    if (espec == "canonical") {
        e = canonical_direction(m);
    } else if (espec != "zero") {
        Json j = load_json_file(resolve_input(espec));
        Vec coeffs = coeffs_from_json(j.at("coeffs"));
        if (coeffs.size() != m.total()->rays().size())
            throw SchemaError("direction has the wrong number of coefficients");
        e = TorusDivisor(m.total(), coeffs);
    }
    PathReport rep = df_path(m, e, samples);
    emit(path_report_json(rep), "");
    if (!out.empty()) {
        std::ofstream csv(out);
        if (!csv) throw SchemaError("cannot write file: " + out);
        csv << "t,DF,dDF_sign\n";
        AlgPoly ddf = poly_derivative(rep.df_poly);
        Rational end = rep.t_max ? *rep.t_max : Rational(1);
        for (size_t j = 0; j <= samples; ++j) {
            Rational t = samples == 0
                             ? Rational(0)
                             : end * Rational(static_cast<long>(j), static_cast<long>(samples));
            csv << decimal(to_double(t)) << "," << decimal(poly_eval(rep.df_poly, t).to_double())
                << "," << poly_eval(ddf, t).sign() << "\n";
        }
    }
    return 0;
}

int cmd_classify(const std::string& file, const std::string& out) {
    Cone c = load_cone(file);
    emit(classify_report_json(c, classify(c)), out);
    return 0;
}

int cmd_search(const std::string& file, unsigned bound, const std::string& out) {
    Cone c = load_cone(file);
    emit(search_report_json(c, destabilizer_search(c, bound), bound), out);
    return 0;
}

int cmd_pullback_check(const std::string& file, unsigned trials, std::uint64_t seed,
                       bool inject_corruption, const std::string& out) {
    FiberedModel m = load_model(file);
    InvariantReport base = donaldson_futaki(m);
    AlgebraicValue v0 = normalized_volume_V(m);
    SplitMix64 rng(seed);
    Json checks = Json::array();
    bool all_equal = true;
    for (unsigned i = 0; i < trials; ++i) {
        FiberedModel cur = m;
        long chain = 1 + rng.range(0, 2);
        for (long s = 0; s < chain; ++s)
            cur = refine_model(cur, random_subdivision_center(rng, *cur.total()));
        if (inject_corruption && i + 1 == trials) {
            // doubled polarization: still a valid model, different invariants
            Vec coeffs = cur.polarization().coeffs();
            for (auto& x : coeffs) x *= 2;
            cur = cur.with_polarization(coeffs);
        }
        AlgebraicValue v = normalized_volume_V(cur);
        AlgebraicValue df = donaldson_futaki(cur).df;
        bool okv = (v == v0), okdf = (df == base.df);
        all_equal = all_equal && okv && okdf;
        checks.push_back(Json{{"trial", i},
                              {"chain_length", chain},
                              {"total_rays", cur.total()->rays().size()},
                              {"V_equal", okv},
                              {"DF_equal", okdf}});
    }
    Json j;
    j["schema"] = kSchemaTag;
    j["model"] = m.id();
    j["trials"] = trials;
    j["seed"] = seed;
    j["V"] = algebraic_json(v0);
    j["DF"] = algebraic_json(base.df);
    j["checks"] = checks;
    j["all_equal"] = all_equal;
    emit(j, out);
    if (!all_equal) {
        std::cerr << "pullback-check: invariance violated\n";
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torick: exact Donaldson-Futaki and volume computations on toric models"};
    app.require_subcommand(1);

    std::string file, out, espec;
    bool derivative_check = false, inject_corruption = false;
    size_t samples = 8;
    unsigned bound = 3, trials = 20;
    std::uint64_t seed = 1729;

    auto* vol = app.add_subcommand("volume", "normalized volume of a model");
    vol->add_option("model-file", file)->required();
    vol->add_option("--out", out, "also write the JSON report to a file");

    auto* df = app.add_subcommand("df", "Donaldson-Futaki invariant of a model");
    df->add_option("model-file", file)->required();
    df->add_flag("--derivative-check", derivative_check,
                 "also compute DF through the derivative of V and compare");
    df->add_option("--out", out, "also write the JSON report to a file");

    auto* path = app.add_subcommand("path", "DF along the polarization path L + tE");
    path->add_option("model-file", file)->required();
    path->add_option("E-spec", espec,
                     "direction: 'canonical', 'zero', or a JSON divisor file")
        ->required();
    path->add_option("--samples", samples, "number of CSV sample steps");
    path->add_option("--out", out, "write t,DF,dDF_sign samples as CSV");

    auto* cls = app.add_subcommand("classify", "terminal/canonical classification of a cone");
    cls->add_option("cone-file", file)->required();
    cls->add_option("--out", out, "also write the JSON report to a file");

    auto* search = app.add_subcommand("search", "destabilizer search over a cone");
    search->add_option("cone-file", file)->required();
    search->add_option("--bound", bound, "box size and maximal subdivision chain length");
    search->add_option("--out", out, "also write the JSON report to a file");

    auto* pc = app.add_subcommand("pullback-check",
                                  "verify V and DF invariance under random refinements");
    pc->add_option("model-file", file)->required();
    pc->add_option("--trials", trials, "number of random refinements");
    pc->add_option("--seed", seed, "RNG seed");
    pc->add_flag("--inject-corruption", inject_corruption,
                 "negative control: corrupt the last pullback on purpose");
    pc->add_option("--out", out, "also write the JSON report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*vol) return cmd_volume(file, out);
        if (*df) return cmd_df(file, derivative_check, out);
        if (*path) return cmd_path(file, espec, samples, out);
        if (*cls) return cmd_classify(file, out);
        if (*search) return cmd_search(file, bound, out);
        if (*pc) return cmd_pullback_check(file, trials, seed, inject_corruption, out);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const MismatchError& e) {
        std::cerr << "mismatch: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
