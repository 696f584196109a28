#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gheat/graph.hpp"

namespace gheat {

/**
 * Graph file format: a JSON object with
 *   vertices  integer n >= 1
 *   mu        array of n positive reals
 *   edges     array of [i, j, weight] triples with 0 <= i < j < n
 *   labels    optional array of n strings
 * Non-edges are encoded by absence; zero or negative weights are invalid,
 * and a pair listed twice with different weights is rejected as
 * asymmetric.
 */
inline Graph parse_graph_json(const std::string& text, const std::string& origin = "<input>") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(errc::parse_error, origin + ": " + e.what());
    }
    require(doc.is_object(), errc::malformed_input, origin + ": top level must be a JSON object");
    require(doc.contains("vertices") && doc["vertices"].is_number_integer(), errc::malformed_input,
            origin + ": missing integer field 'vertices'");
    require(doc.contains("mu") && doc["mu"].is_array(), errc::malformed_input,
            origin + ": missing array field 'mu'");
    require(doc.contains("edges") && doc["edges"].is_array(), errc::malformed_input,
            origin + ": missing array field 'edges'");

    const int n = doc["vertices"].get<int>();
    std::vector<double> mu;
    mu.reserve(doc["mu"].size());
    for (const auto& v : doc["mu"]) {
        require(v.is_number(), errc::malformed_input, origin + ": 'mu' entries must be numbers");
        mu.push_back(v.get<double>());
    }
    std::vector<Edge> edges;
    edges.reserve(doc["edges"].size());
    for (const auto& row : doc["edges"]) {
        require(row.is_array() && row.size() == 3, errc::malformed_input,
                origin + ": each edge must be an [i, j, weight] triple");
        require(row[0].is_number_integer() && row[1].is_number_integer() && row[2].is_number(),
                errc::malformed_input, origin + ": edge entries must be [int, int, number]");
        edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        require(doc["labels"].is_array(), errc::malformed_input,
                origin + ": 'labels' must be an array of strings");
        for (const auto& v : doc["labels"]) {
            require(v.is_string(), errc::malformed_input, origin + ": labels must be strings");
            labels.push_back(v.get<std::string>());
        }
    }
    return Graph(n, std::move(mu), std::move(edges), std::move(labels));
}

inline Graph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail(errc::io_error, "read from " + path.string() + " failed");
    return parse_graph_json(buf.str(), path.string());
}

/// Serialize with canonical edge order and shortest round-trip reals, so
/// the same graph always produces the same bytes and load(save(g))
/// reproduces g exactly.
inline std::string graph_to_json(const Graph& g) {
    std::string out;
    out += "{\n";
    out += "  \"vertices\": " + std::to_string(g.vertex_count()) + ",\n";
    out += "  \"mu\": [";
    for (int x = 0; x < g.vertex_count(); ++x) {
        if (x) out += ", ";
        out += format_double(g.mu(x));
    }
    out += "],\n";
    out += "  \"edges\": [";
    const auto& edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        out += (k ? ",\n            " : "\n            ");
        out += "[" + std::to_string(edges[k].i) + ", " + std::to_string(edges[k].j) + ", " +
               format_double(edges[k].weight) + "]";
    }
    out += edges.empty() ? "]" : "\n           ]";
    if (!g.labels().empty()) {
        out += ",\n  \"labels\": [";
        for (int x = 0; x < g.vertex_count(); ++x) {
            if (x) out += ", ";
            out += nlohmann::json(g.labels()[x]).dump();
        }
        out += "]";
    }
    out += "\n}\n";
    return out;
}

inline void save_graph(const Graph& g, const std::filesystem::path& path) {
    write_file_atomic(path, graph_to_json(g));
}

}  // namespace gheat
