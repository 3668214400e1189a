#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratedist/errors.hpp"
#include "ratedist/problem.hpp"

namespace ratedist::io {

/// Shortest exact decimal form that round-trips a double: 17 significant
/// digits, '.' decimal point, no grouping.
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Instance document schema:
///   {"p": [...], "d": [[...], ...], "source_labels": [...]?, "repro_labels": [...]?}
inline ProblemInstance instance_from_json(const nlohmann::json& doc) {
    if (!doc.contains("p") || !doc.contains("d"))
        raise(Errc::ShapeMismatch, "instance document requires fields \"p\" and \"d\"");
    ProblemInstance inst;
    inst.p = doc.at("p").get<std::vector<double>>();
    inst.num_source = inst.p.size();

    const auto& d = doc.at("d");
    if (!d.is_array() || d.empty() || !d.front().is_array())
        raise(Errc::ShapeMismatch, "\"d\" must be a non-empty array of rows");
    inst.num_repro = d.front().size();
    inst.d.reserve(d.size() * inst.num_repro);
    for (const auto& row : d) {
        const auto vals = row.get<std::vector<double>>();
        if (vals.size() != inst.num_repro)
            raise(Errc::ShapeMismatch, "rows of \"d\" have inconsistent lengths");
        inst.d.insert(inst.d.end(), vals.begin(), vals.end());
    }
    if (d.size() != inst.num_source)
        raise(Errc::ShapeMismatch, "\"d\" has " + std::to_string(d.size()) +
                                       " rows, expected " + std::to_string(inst.num_source));
    if (doc.contains("source_labels"))
        inst.source_labels = doc.at("source_labels").get<std::vector<double>>();
    if (doc.contains("repro_labels"))
        inst.repro_labels = doc.at("repro_labels").get<std::vector<double>>();
    return validate_instance(std::move(inst));
}

inline nlohmann::json instance_to_json(const ProblemInstance& inst) {
    nlohmann::json doc;
    doc["p"] = inst.p;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.num_source; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < inst.num_repro; ++j) row.push_back(inst.dist(i, j));
        rows.push_back(std::move(row));
    }
    doc["d"] = std::move(rows);
    if (!inst.source_labels.empty()) doc["source_labels"] = inst.source_labels;
    if (!inst.repro_labels.empty()) doc["repro_labels"] = inst.repro_labels;
    return doc;
}

inline ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ShapeMismatch, "cannot open instance file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::ShapeMismatch, "invalid JSON in " + path + ": " + e.what());
    }
    return instance_from_json(doc);
}

inline void save_instance(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::ShapeMismatch, "cannot open output file " + path);
    out << instance_to_json(inst).dump(2) << '\n';
}

} // namespace ratedist::io
