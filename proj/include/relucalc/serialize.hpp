#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relucalc/approx.hpp"
#include "relucalc/cpwl.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/network.hpp"
#include "relucalc/simplicial.hpp"

// Document formats. Networks round-trip bit-exactly: plain numbers use the
// shortest decimal that parses back to the same double; the optional
// "hexfloat" flag switches every entry to a hex-float string.

namespace relucalc {

using json = nlohmann::json;

namespace detail {

inline json encode_number(double v, bool hexfloat) {
    if (!hexfloat) return v;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return std::string(buf);
}

inline double decode_number(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == nullptr || *end != '\0')
            throw ParseError(where + ": cannot parse number '" + s + "'");
        return v;
    }
    throw ParseError(where + ": expected a number");
}

} // namespace detail

inline json network_to_json(const ReluNetwork& net, bool hexfloat = false) {
    json doc;
    doc["input_dim"] = net.input_dim();
    if (hexfloat) doc["hexfloat"] = true;
    json layers = json::array();
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const LayerParams& lay = net.layer(l);
        json rows = json::array();
        for (std::size_t r = 0; r < lay.out_dim(); ++r) {
            json row = json::array();
            for (double v : lay.weights.row_dense(r)) row.push_back(detail::encode_number(v, hexfloat));
            rows.push_back(std::move(row));
        }
        json bias = json::array();
        for (double v : lay.bias) bias.push_back(detail::encode_number(v, hexfloat));
        layers.push_back(json{{"weights", std::move(rows)}, {"bias", std::move(bias)}});
    }
    doc["layers"] = std::move(layers);
    return doc;
}

inline ReluNetwork network_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("input_dim") || !doc.contains("layers"))
        throw ParseError("network document: expected {input_dim, layers}");
    const std::size_t input_dim = doc["input_dim"].get<std::size_t>();
    if (!doc["layers"].is_array() || doc["layers"].empty())
        throw ParseError("network document: layers must be a nonempty array");

    std::vector<LayerParams> layers;
    std::size_t expected_in = input_dim;
    for (std::size_t l = 0; l < doc["layers"].size(); ++l) {
        const std::string where = "layer " + std::to_string(l);
        const json& jl = doc["layers"][l];
        if (!jl.contains("weights") || !jl.contains("bias"))
            throw ParseError(where + ": expected {weights, bias}");
        const json& rows = jl["weights"];
        const json& bias = jl["bias"];
        if (!rows.is_array() || rows.empty()) throw ParseError(where + ": weights must be a nonempty array");
        if (!bias.is_array() || bias.size() != rows.size())
            throw ParseError(where + ": bias length " + std::to_string(bias.size()) +
                             " does not match weight rows " + std::to_string(rows.size()));
        Matrix w(rows.size(), expected_in);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != expected_in)
                throw ParseError(where + ": weight row " + std::to_string(r) + " has " +
                                 std::to_string(rows[r].size()) + " entries, expected " +
                                 std::to_string(expected_in));
            for (std::size_t c = 0; c < expected_in; ++c)
                w.set(r, c, detail::decode_number(rows[r][c], where));
        }
        std::vector<double> b(bias.size());
        for (std::size_t r = 0; r < bias.size(); ++r)
            b[r] = detail::decode_number(bias[r], where);
        expected_in = rows.size();
        try {
            layers.emplace_back(std::move(w), std::move(b));
        } catch (const InputError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    try {
        return ReluNetwork(input_dim, std::move(layers));
    } catch (const InputError& e) {
        throw ParseError(std::string("network document: ") + e.what());
    }
}

inline json cpwl_spec_to_json(const CpwlSpec& spec) {
    json doc;
    doc["dim"] = spec.dim;
    json pieces = json::array();
    for (const AffineMap& g : spec.pieces) pieces.push_back(json{{"w", g.w}, {"b", g.b}});
    doc["pieces"] = std::move(pieces);
    if (!spec.maxmin.empty()) {
        json sets = json::array();
        for (const auto& s : spec.maxmin) {
            json set = json::array();
            for (std::size_t i : s) set.push_back(i + 1); // 1-based in documents
            sets.push_back(std::move(set));
        }
        doc["maxmin"] = std::move(sets);
    }
    if (spec.domain) doc["domain"] = json{{"lo", spec.domain->lo}, {"hi", spec.domain->hi}};
    return doc;
}

inline CpwlSpec cpwl_spec_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("pieces"))
        throw ParseError("cpwl document: expected {dim, pieces[, maxmin]}");
    CpwlSpec spec;
    spec.dim = doc["dim"].get<std::size_t>();
    for (std::size_t p = 0; p < doc["pieces"].size(); ++p) {
        const json& jp = doc["pieces"][p];
        if (!jp.contains("w") || !jp.contains("b"))
            throw ParseError("cpwl document: piece " + std::to_string(p + 1) +
                             " must carry {w, b}");
        std::vector<double> w(jp["w"].size());
        for (std::size_t c = 0; c < w.size(); ++c)
            w[c] = detail::decode_number(jp["w"][c], "piece " + std::to_string(p + 1));
        if (w.size() != spec.dim)
            throw ParseError("cpwl document: piece " + std::to_string(p + 1) + " has dim " +
                             std::to_string(w.size()) + ", expected " + std::to_string(spec.dim));
        spec.pieces.emplace_back(std::move(w),
                                 detail::decode_number(jp["b"], "piece " + std::to_string(p + 1)));
    }
    if (doc.contains("maxmin")) {
        for (const json& js : doc["maxmin"]) {
            std::vector<std::size_t> s;
            for (const json& ji : js) {
                const std::size_t one_based = ji.get<std::size_t>();
                if (one_based == 0 || one_based > spec.pieces.size())
                    throw ParseError("cpwl document: max-min index " + std::to_string(one_based) +
                                     " out of range");
                s.push_back(one_based - 1);
            }
            spec.maxmin.push_back(std::move(s));
        }
    }
    if (doc.contains("domain")) {
        Box box;
        box.lo = doc["domain"]["lo"].get<std::vector<double>>();
        box.hi = doc["domain"]["hi"].get<std::vector<double>>();
        if (box.lo.size() != spec.dim || box.hi.size() != spec.dim)
            throw ParseError("cpwl document: domain dimension mismatch");
        spec.domain = std::move(box);
    }
    return spec;
}

inline json cpwl1d_to_json(const Cpwl1D& f) {
    return json{{"breakpoints", f.breakpoints()},
                {"values", f.values()},
                {"left_slope", f.left_slope()},
                {"right_slope", f.right_slope()}};
}

inline Cpwl1D cpwl1d_from_json(const json& doc) {
    for (const char* key : {"breakpoints", "values", "left_slope", "right_slope"})
        if (!doc.contains(key))
            throw ParseError(std::string("breakpoint document: missing '") + key + "'");
    try {
        return Cpwl1D(doc["breakpoints"].get<std::vector<double>>(),
                      doc["values"].get<std::vector<double>>(),
                      detail::decode_number(doc["left_slope"], "left_slope"),
                      detail::decode_number(doc["right_slope"], "right_slope"));
    } catch (const InputError& e) {
        throw ParseError(std::string("breakpoint document: ") + e.what());
    }
}

inline json mesh_to_json(const Triangulation& mesh) {
    return json{{"dim", mesh.dim},
                {"vertices", mesh.vertices},
                {"simplices", mesh.simplices},
                {"values", mesh.values}};
}

inline Triangulation mesh_from_json(const json& doc) {
    for (const char* key : {"dim", "vertices", "simplices", "values"})
        if (!doc.contains(key)) throw ParseError(std::string("mesh document: missing '") + key + "'");
    Triangulation mesh;
    mesh.dim = doc["dim"].get<std::size_t>();
    mesh.vertices = doc["vertices"].get<std::vector<std::vector<double>>>();
    mesh.simplices = doc["simplices"].get<std::vector<std::vector<std::size_t>>>();
    mesh.values = doc["values"].get<std::vector<double>>();
    try {
        mesh.validate();
    } catch (const InputError& e) {
        throw ParseError(std::string("mesh document: ") + e.what());
    }
    return mesh;
}

inline json lipschitz_to_json(const LipschitzSample& sample) {
    return json{{"points", sample.points}, {"values", sample.values}, {"M", sample.budget}};
}

inline LipschitzSample lipschitz_from_json(const json& doc) {
    for (const char* key : {"points", "values", "M"})
        if (!doc.contains(key))
            throw ParseError(std::string("lipschitz document: missing '") + key + "'");
    LipschitzSample sample;
    sample.points = doc["points"].get<std::vector<std::vector<double>>>();
    sample.values = doc["values"].get<std::vector<double>>();
    sample.budget = detail::decode_number(doc["M"], "M");
    return sample; // budget precondition is checked by the consumers
}

inline json metrics_to_json(const NetworkMetrics& m) {
    return json{{"size", m.size}, {"width", m.width}, {"depth", m.depth}};
}

inline json certificate_to_json(const BoundCertificate& c) {
    return json{{"claimed_size_bound", c.claimed_size_bound},
                {"claimed_width_bound", c.claimed_width_bound},
                {"claimed_depth_value", c.claimed_depth_value},
                {"actual", metrics_to_json(c.actual)}};
}

inline json parse_document(const std::string& text, const std::string& name) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(name + ": not valid JSON");
    return doc;
}

inline json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str(), path);
}

inline void save_document(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << doc.dump(2) << '\n';
}

} // namespace relucalc
