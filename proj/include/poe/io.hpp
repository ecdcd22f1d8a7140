#pragma once

// JSON, CSV and SVG serialization of models, moment sequences, certificates and results.

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ident.hpp"
#include "model.hpp"
#include "poly.hpp"
#include "recover.hpp"
#include "rootlab.hpp"

namespace poe {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// models

template <class T>
json scalar_json(const T& v) {
    if constexpr (is_exact_v<T>)
        return to_string(v);
    else
        return to_double(v);
}

template <class T>
T scalar_from_json(const json& j) {
    if (j.is_string()) {
        Rational r = parse_rational(j.get<std::string>());
        if constexpr (is_exact_v<T>)
            return r;
        else
            return T(to_double(r));
    }
    if (!j.is_number()) throw InvalidArgument("expected a number or a \"p/q\" string");
    if constexpr (is_exact_v<T>)
        return from_double<Rational>(j.get<double>());
    else
        return T(j.get<double>());
}

template <class T>
json model_to_json(const BasicPoEParams<T>& p) {
    json j;
    j["l"] = p.ell();
    j["factors"] = json::array();
    for (const auto& f : p.factors)
        j["factors"].push_back({{"alpha0", scalar_json(f.alpha0)}, {"alpha1", scalar_json(f.alpha1)}, {"pi", scalar_json(f.pi)}});
    return j;
}

template <class T>
BasicPoEParams<T> model_from_json(const json& j) {
    if (!j.contains("factors") || !j["factors"].is_array()) throw InvalidArgument("model JSON needs a \"factors\" array");
    BasicPoEParams<T> p;
    for (const auto& f : j["factors"]) {
        BasicFactor<T> fac;
        fac.alpha0 = scalar_from_json<T>(f.at("alpha0"));
        fac.alpha1 = scalar_from_json<T>(f.at("alpha1"));
        fac.pi = f.contains("pi") ? scalar_from_json<T>(f["pi"]) : T(1) / T(2);
        p.factors.push_back(fac);
    }
    if (j.contains("l") && j["l"].get<int>() != p.ell()) throw InvalidArgument("\"l\" does not match the factor count");
    validate_probabilistic(p);
    return p;
}

// ---------------------------------------------------------------------------
// moment sequences

template <class T>
std::string moments_to_csv(const BasicMomentSeq<T>& m) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += std::to_string(m.indices[i]) + ",";
        if constexpr (is_exact_v<T>)
            out += to_string(m.values[i]);
        else if constexpr (std::is_same_v<T, double>)
            out += format_double(m.values[i]);
        else
            out += m.values[i].str(40, std::ios_base::scientific);
        out += "\n";
    }
    return out;
}

template <class T>
BasicMomentSeq<T> moments_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<int, T>> rows;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("index", 0) == 0) continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidArgument("moment CSV row without a comma: " + line);
        int idx = std::stoi(line.substr(0, comma));
        std::string v = line.substr(comma + 1);
        if constexpr (is_exact_v<T>)
            rows.emplace_back(idx, parse_rational(v));
        else if constexpr (std::is_same_v<T, double>)
            rows.emplace_back(idx, std::stod(v));
        else if (v.find('/') != std::string::npos)
            rows.emplace_back(idx, convert<T>(parse_rational(v)));
        else
            rows.emplace_back(idx, T(v));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    BasicMomentSeq<T> m;
    for (auto& [i, v] : rows) {
        if (!m.indices.empty() && m.indices.back() == i) throw InvalidArgument("duplicate moment index " + std::to_string(i));
        m.indices.push_back(i);
        m.values.push_back(v);
    }
    return m;
}

// ---------------------------------------------------------------------------
// polynomials

template <class T>
json poly_to_json(const UniPoly<T>& p, const Rational& gamma) {
    json c = json::array();
    for (const auto& v : p.coeffs()) c.push_back(scalar_json(v));
    return {{"gamma", to_string(gamma)}, {"coeffs", c}};
}

template <class T>
json poly_to_json(const BiPoly<T>& p, const Rational& gamma) {
    json rows = json::array();
    for (int i = 0; i <= p.degree_x(); ++i) {
        json row = json::array();
        for (int j = 0; j <= p.degree_y(); ++j) row.push_back(scalar_json(p.coeff(i, j)));
        rows.push_back(row);
    }
    return {{"gamma", to_string(gamma)}, {"coeffs", rows}};
}

// ---------------------------------------------------------------------------
// certificates and results

inline json certificate_to_json(const IdentCertificate& c, const std::string& backend = "rational") {
    json j;
    j["case"] = c.case_name;
    j["ell"] = c.ell;
    j["gamma"] = c.gamma;
    j["verdict"] = c.certified ? "certified" : "not certified";
    j["certified"] = c.certified;
    j["moment_indices"] = c.moment_indices;
    j["eval_point"] = c.eval_point;
    j["det_or_rank"] = c.det_or_rank;
    j["matrix"] = c.matrix;
    json d = json::object();
    for (const auto& [k, v] : c.diagnostics) d[k] = v;
    j["diagnostics"] = d;
    json e = json::object();
    for (const auto& [k, v] : c.exact_values) e[k] = v;
    j["exact_values"] = e;
    if (!c.multiplicity.empty()) j["multiplicity"] = c.multiplicity;
    if (!c.elimination_N.empty()) {
        j["elimination"]["N"] = c.elimination_N;
        j["elimination"]["D"] = c.elimination_D;
    }
    j["notes"] = c.notes;
    j["provenance"] = {{"software", "poe"}, {"version", kVersion}, {"backend", backend}};
    return j;
}

inline json recovery_to_json(const RecoveryResult& r) {
    json j;
    j["method"] = r.method;
    j["gamma"] = r.gamma;
    j["indices"] = r.indices;
    j["residual"] = r.residual;
    j["starts_tried"] = r.starts_tried;
    j["converged"] = r.converged;
    j["infeasible"] = r.infeasible;
    j["recovered"] = model_to_json(r.recovered);
    j["preimages_found"] = json::array();
    for (std::size_t i = 0; i < r.preimages_found.size(); ++i) {
        json p = model_to_json(r.preimages_found[i]);
        p["residual"] = r.preimage_residuals[i];
        j["preimages_found"].push_back(p);
    }
    return j;
}

inline json spectrum_to_json(const LumpedSpectrum& s) {
    return {{"method", "prony_lumped"},
            {"support", s.support},
            {"weights", s.weights},
            {"reconstruction_error", s.reconstruction_error}};
}

// ---------------------------------------------------------------------------
// tables and figures

inline std::string economy_to_csv(const std::vector<EconomyRow>& rows) {
    std::string out = "ell,general_count,general_max_index,prony_count,prony_max_index\n";
    for (const auto& r : rows)
        out += std::to_string(r.ell) + "," + std::to_string(r.general_count) + "," + std::to_string(r.general_max_index) +
               "," + std::to_string(r.prony_count) + "," + std::to_string(r.prony_max_index) + "\n";
    return out;
}

inline std::string fig2_to_csv(const std::vector<Fig2Row>& rows) {
    std::string out = "root,log_neg_root,atomic_tag\n";
    for (const auto& r : rows)
        out += format_double(r.root) + "," + format_double(r.log_neg_root) + ",h_" + std::to_string(r.atomic_index) + "\n";
    return out;
}

/// Static scatter of log(-root) against the atomic tag.
inline std::string fig2_to_svg(const std::vector<Fig2Row>& rows) {
    const double w = 480, h = 200, pad = 40;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : rows) {
        lo = std::min(lo, r.log_neg_root);
        hi = std::max(hi, r.log_neg_root);
    }
    if (!(hi > lo)) hi = lo + 1;
    auto px = [&](double v) { return pad + (v - lo) / (hi - lo) * (w - 2 * pad); };
    auto color = [](int tag) { return tag == 3 ? "#1b9e77" : tag == 5 ? "#d95f02" : "#7570b3"; };
    auto lane = [&](int tag) { return tag == 3 ? h * 0.3 : tag == 5 ? h * 0.5 : h * 0.7; };
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << pad << "\" y1=\"" << h - pad / 2 << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad / 2
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"" << h - 4 << "\" font-size=\"12\" text-anchor=\"middle\">log(-x), roots of s_15</text>\n";
    for (int tag : {3, 5, 15})
        s << "<text x=\"4\" y=\"" << lane(tag) + 4 << "\" font-size=\"12\">h_" << tag << "</text>\n";
    for (const auto& r : rows)
        s << "<circle cx=\"" << format_double(px(r.log_neg_root)) << "\" cy=\"" << lane(r.atomic_index)
          << "\" r=\"5\" fill=\"" << color(r.atomic_index) << "\"/>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace poe
