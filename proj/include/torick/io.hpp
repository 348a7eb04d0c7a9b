// JSON schemas for every value that crosses the CLI boundary: fans, cones,
// models, invariant and path reports, classification and search reports.
// Output uses ordered JSON so identical inputs give byte-identical bytes.
#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "torick/algebraic.hpp"
#include "torick/divisor.hpp"
#include "torick/errors.hpp"
#include "torick/fan.hpp"
#include "torick/functionals.hpp"
#include "torick/model.hpp"
#include "torick/rational.hpp"
#include "torick/singularities.hpp"

namespace torick {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "torick/1";

// ---------------------------------------------------------------------------
// primitives
// ---------------------------------------------------------------------------

inline Json rational_json(const Rational& q) { return rational_to_string(q); }

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw SchemaError("expected a rational as \"p/q\" string or integer");
}

inline Json ivec_json(const IVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(static_cast<long long>(x.convert_to<long long>()));
    return a;
}

inline IVec ivec_from_json(const Json& j) {
    if (!j.is_array()) throw SchemaError("expected an integer vector");
    IVec v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw SchemaError("expected an integer coordinate");
        v.push_back(Int(x.get<long long>()));
    }
    return v;
}

inline Json coeffs_json(const Vec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rational_json(x));
    return a;
}

inline Vec coeffs_from_json(const Json& j) {
    if (!j.is_array()) throw SchemaError("expected a coefficient list");
    Vec v;
    for (const auto& x : j) v.push_back(rational_from_json(x));
    return v;
}

inline Json algebraic_json(const AlgebraicValue& v) {
    Json j;
    j["base"] = static_cast<long long>(v.base().convert_to<long long>());
    j["root_index"] = v.root_index();
    j["coeffs"] = coeffs_json(v.coeffs());
    return j;
}

inline AlgebraicValue algebraic_from_json(const Json& j) {
    try {
        Int base(j.at("base").get<long long>());
        unsigned root = j.at("root_index").get<unsigned>();
        Vec coeffs = coeffs_from_json(j.at("coeffs"));
        return AlgebraicValue::in_ring(base, root, coeffs);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("malformed algebraic value: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// fans, cones, models
// ---------------------------------------------------------------------------

inline Json fan_json(const Fan& f) {
    Json j;
    j["rank"] = f.rank();
    Json rays = Json::array();
    for (const auto& r : f.rays()) rays.push_back(ivec_json(r));
    j["rays"] = rays;
    Json cones = Json::array();
    for (const auto& c : f.max_cones()) {
        Json cc = Json::array();
        for (size_t i : c) cc.push_back(i);
        cones.push_back(cc);
    }
    j["max_cones"] = cones;
    if (f.ample_witness()) j["ample"] = coeffs_json(*f.ample_witness());
    return j;
}

inline FanPtr fan_from_json(const Json& j) {
    try {
        size_t rank = j.at("rank").get<size_t>();
        std::vector<IVec> rays;
        for (const auto& r : j.at("rays")) rays.push_back(ivec_from_json(r));
        std::vector<std::vector<size_t>> cones;
        for (const auto& c : j.at("max_cones")) {
            std::vector<size_t> cc;
            for (const auto& i : c) {
                if (!i.is_number_unsigned() && !i.is_number_integer())
                    throw SchemaError("cone entries must be ray indices");
                long long v = i.get<long long>();
                if (v < 0) throw SchemaError("negative ray index");
                cc.push_back(static_cast<size_t>(v));
            }
            cones.push_back(std::move(cc));
        }
        auto f = std::make_shared<Fan>(rank, std::move(rays), std::move(cones));
        if (j.contains("ample")) f->set_ample_witness(coeffs_from_json(j.at("ample")));
        return f;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("malformed fan: ") + e.what());
    }
}

inline Json cone_json(const Cone& c) {
    Json j;
    j["rank"] = c.ambient_dim();
    Json rays = Json::array();
    for (const auto& r : c.rays) rays.push_back(ivec_json(r));
    j["rays"] = rays;
    return j;
}

inline Cone cone_from_json(const Json& j) {
    try {
        size_t rank = j.at("rank").get<size_t>();
        Cone c;
        for (const auto& r : j.at("rays")) {
            IVec v = ivec_from_json(r);
            if (v.size() != rank) throw SchemaError("cone ray dimension mismatch");
            c.rays.push_back(std::move(v));
        }
        if (c.rays.empty()) throw SchemaError("cone without rays");
        return c;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("malformed cone: ") + e.what());
    }
}

inline Json model_json(const FiberedModel& m) {
    Json j;
    j["id"] = m.id();
    j["total"] = fan_json(*m.total());
    j["base"] = fan_json(*m.base());
    Json proj;
    Json rows = Json::array();
    for (const auto& r : m.projection()) rows.push_back(ivec_json(r));
    proj["matrix"] = rows;
    j["projection"] = proj;
    j["polarization"] = Json{{"coeffs", coeffs_json(m.polarization().coeffs())}};
    j["base_ray_p"] = m.base_ray_p();
    return j;
}

inline FiberedModel model_from_json(const Json& j, const std::string& fallback_id) {
    try {
        std::string id = j.contains("id") ? j.at("id").get<std::string>() : fallback_id;
        FanPtr total = fan_from_json(j.at("total"));
        FanPtr base = fan_from_json(j.at("base"));
        IMat proj;
        for (const auto& r : j.at("projection").at("matrix")) proj.push_back(ivec_from_json(r));
        Vec coeffs = coeffs_from_json(j.at("polarization").at("coeffs"));
        size_t p = j.at("base_ray_p").get<size_t>();
        return FiberedModel(id, total, coeffs, proj, base, p);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("malformed model: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline Json invariant_report_json(const InvariantReport& r, bool include_df = true) {
    Json j;
    j["schema"] = kSchemaTag;
    j["model"] = r.model_id;
    j["n"] = r.n;
    j["dim_B"] = r.dim_b;
    j["dim_F"] = r.dim_f;
    j["c"] = static_cast<long long>(r.c.convert_to<long long>());
    j["V"] = r.volume ? algebraic_json(*r.volume) : Json(nullptr);
    if (include_df) {
        j["DF"] = algebraic_json(r.df);
        j["term1"] = algebraic_json(r.term1);
        j["term2"] = algebraic_json(r.term2);
        j["df_sign"] = r.df_sign;
    }
    return j;
}

inline Json path_report_json(const PathReport& r) {
    Json j;
    j["schema"] = kSchemaTag;
    j["model"] = r.model_id;
    j["direction"] = coeffs_json(r.direction);
    j["t_max"] = r.t_max ? Json(rational_to_string(*r.t_max)) : Json(nullptr);
    Json coeffs = Json::array();
    for (const auto& c : r.df_poly) coeffs.push_back(algebraic_json(c));
    j["df_coefficients"] = coeffs;
    j["derivative_nonpositive"] = r.derivative_nonpositive;
    Json signs = Json::array();
    for (const auto& [t, s] : r.derivative_signs)
        signs.push_back(Json{{"t", rational_to_string(t)}, {"sign", s}});
    j["derivative_signs"] = signs;
    return j;
}

inline Json classify_report_json(const Cone& c, const ClassifyResult& r) {
    Json j;
    j["schema"] = kSchemaTag;
    j["cone"] = cone_json(c);
    j["type"] = singularity_type_name(r.type);
    j["gorenstein_functional"] = coeffs_json(r.functional);
    Json pts = Json::array();
    for (const auto& rec : r.slab_points)
        pts.push_back(Json{{"ray", ivec_json(rec.ray)},
                           {"discrepancy", rational_json(rec.discrepancy)}});
    j["slab_points"] = pts;
    return j;
}

inline Json search_report_json(const Cone& c, const SearchReport& r, unsigned bound) {
    Json j;
    j["schema"] = kSchemaTag;
    j["cone"] = cone_json(c);
    j["bound"] = bound;
    j["type"] = singularity_type_name(r.classification.type);
    Json models = Json::array();
    for (const auto& e : r.models) {
        Json me;
        Json chain = Json::array();
        for (const auto& v : e.chain) chain.push_back(ivec_json(v));
        me["chain"] = chain;
        Json discs = Json::array();
        for (const auto& rec : e.discrepancy_table)
            discs.push_back(Json{{"ray", ivec_json(rec.ray)},
                                 {"discrepancy", rational_json(rec.discrepancy)}});
        me["discrepancies"] = discs;
        Json cands = Json::array();
        for (const auto& d : e.df_candidates) cands.push_back(rational_json(d));
        me["df_candidates"] = cands;
        me["DF"] = rational_json(e.df);
        models.push_back(std::move(me));
    }
    j["models"] = models;
    j["negative_found"] = r.negative_found;
    if (r.best) {
        const auto& e = r.models[*r.best];
        Json best;
        Json chain = Json::array();
        for (const auto& v : e.chain) chain.push_back(ivec_json(v));
        best["chain"] = chain;
        best["fan"] = fan_json(*e.fan);
        best["DF"] = rational_json(e.df);
        // the localized convention: DF = n (L^{n-1}.K), term2 = 0, V undefined
        InvariantReport rep;
        rep.model_id = "search-best";
        rep.n = c.ambient_dim();
        rep.dim_b = c.ambient_dim();
        rep.dim_f = 0;
        rep.df = AlgebraicValue(e.df);
        rep.term1 = rep.df;
        rep.term2 = AlgebraicValue();
        rep.df_sign = rep.df.sign();
        best["report"] = invariant_report_json(rep);
        j["best"] = best;
    } else {
        j["best"] = nullptr;
    }
    return j;
}

// ---------------------------------------------------------------------------
// file loading
// ---------------------------------------------------------------------------

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path);
    try {
        Json j;
        in >> j;
        return j;
    } catch (const Json::exception& e) {
        throw SchemaError("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace torick
