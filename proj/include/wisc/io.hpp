#pragma once

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "wisc/cutset.hpp"
#include "wisc/graph.hpp"
#include "wisc/modular.hpp"
#include "wisc/numeric.hpp"
#include "wisc/permanent.hpp"

namespace wisc {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kGraphFormat = "wisc-graph/1";

// Serialized graph document: ids, "p/q" weights, edge pairs, and an optional
// provenance object written by the generators.
inline Json graph_to_json(const WeightedGraph& g, const Json& provenance = nullptr) {
    Json doc;
    doc["format"] = kGraphFormat;
    Json verts = Json::array();
    for (int v : g.vertices())
        verts.push_back(Json{{"id", v}, {"weight", weight_str(g.weight(v))}});
    doc["vertices"] = std::move(verts);
    Json edges = Json::array();
    for (auto [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
    doc["edges"] = std::move(edges);
    if (!provenance.is_null()) doc["provenance"] = provenance;
    return doc;
}

inline WeightedGraph graph_from_json(const Json& doc) {
    try {
        if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
            throw ParseError("graph document needs 'vertices' and 'edges'");
        if (doc.contains("format") && doc["format"] != kGraphFormat)
            throw ParseError("unknown graph format");
        WeightedGraph g;
        for (const auto& v : doc["vertices"]) {
            int id = v.at("id").get<int>();
            Weight w = v.contains("weight") ? parse_weight(v["weight"].get<std::string>())
                                            : Weight(1);
            g.add_vertex(id, w);
        }
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair");
            g.add_edge(e[0].get<int>(), e[1].get<int>());
        }
        return g;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ParseError(std::string("bad graph document: ") + ex.what());
    }
}

inline std::string graph_to_string(const WeightedGraph& g, const Json& provenance = nullptr) {
    return graph_to_json(g, provenance).dump(2) + "\n";
}

inline WeightedGraph graph_from_string(const std::string& text) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("invalid JSON");
    return graph_from_json(doc);
}

// DIMACS-like edge lists ("p edge n m" header, "e u v" lines, 1-based ids)
// are imported read-only with unit weights.
inline WeightedGraph graph_from_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    WeightedGraph g;
    bool seen_header = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string kind;
            long n = 0, m = 0;
            if (!(ls >> kind >> n >> m)) throw ParseError("bad DIMACS header");
            for (long v = 1; v <= n; ++v) g.add_vertex(static_cast<int>(v));
            seen_header = true;
        } else if (tag == "e") {
            long u = 0, v = 0;
            if (!seen_header || !(ls >> u >> v)) throw ParseError("bad DIMACS edge line");
            g.add_edge(static_cast<int>(u), static_cast<int>(v));
        } else {
            throw ParseError("unknown DIMACS line tag '" + tag + "'");
        }
    }
    if (!seen_header) throw ParseError("missing DIMACS header");
    return g;
}

// Dense row-major matrix with "p/q" entries, for offline permanent debugging.
inline Json permanent_to_json(const PermanentInstance& inst) {
    Json doc;
    doc["dim"] = inst.dim();
    Json rows = Json::array();
    for (const auto& row : inst.a) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(weight_str(e));
        rows.push_back(std::move(r));
    }
    doc["entries"] = std::move(rows);
    return doc;
}

inline PermanentInstance permanent_from_json(const Json& doc) {
    try {
        std::vector<std::vector<Weight>> rows;
        for (const auto& r : doc.at("entries")) {
            std::vector<Weight> row;
            for (const auto& e : r) row.push_back(parse_weight(e.get<std::string>()));
            rows.push_back(std::move(row));
        }
        return PermanentInstance::of(std::move(rows));
    } catch (const std::exception& ex) {
        throw ParseError(std::string("bad permanent document: ") + ex.what());
    }
}

// --- DOT renderings --------------------------------------------------------

namespace detail {

inline std::string id_set_label(const std::vector<int>& vs) {
    std::string s = "{";
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(vs[i]);
    }
    return s + "}";
}

}  // namespace detail

// Cutset tree drawing: cliques as circles along a path, atoms as boxes.
inline std::string cutset_tree_to_dot(const CutsetTree& tree) {
    std::ostringstream out;
    out << "graph cutset_tree {\n  rankdir=BT;\n";
    for (size_t i = 0; i < tree.atoms.size(); ++i)
        out << "  A" << i << " [shape=box,label=\"A" << i << " "
            << detail::id_set_label(tree.atoms[i]) << "\"];\n";
    for (size_t i = 0; i < tree.cliques.size(); ++i)
        out << "  K" << i + 1 << " [shape=circle,label=\"K" << i + 1 << " "
            << detail::id_set_label(tree.cliques[i]) << "\"];\n";
    if (!tree.cliques.empty()) {
        out << "  A0 -- K1;\n";
        for (size_t i = 1; i < tree.cliques.size(); ++i)
            out << "  K" << i << " -- K" << i + 1 << ";\n";
        for (size_t i = 1; i < tree.atoms.size(); ++i)
            out << "  K" << i << " -- A" << i << ";\n";
    }
    out << "}\n";
    return out.str();
}

// Standard tree plus the contraction chain of the extended tree.
inline std::string modular_trees_to_dot(const StandardModularTree& std_tree,
                                        const ExtendedModularTree& ext) {
    std::ostringstream out;
    out << "graph modular_trees {\n";
    out << "  subgraph cluster_standard {\n    label=\"standard\";\n";
    for (size_t i = 0; i < std_tree.nodes.size(); ++i)
        out << "    M" << i << " [shape=circle,label=\"M"
            << std_tree.nodes.size() - i << " "
            << detail::id_set_label(std_tree.nodes[i]) << "\"];\n";
    for (size_t i = 1; i < std_tree.nodes.size(); ++i)
        out << "    M" << std_tree.parent[i] << " -- M" << i << ";\n";
    out << "  }\n";
    out << "  subgraph cluster_extended {\n    label=\"extended\";\n";
    for (int i = 0; i <= ext.height(); ++i)
        out << "    G" << i << " [shape=circle,label=\"G" << i << "\"];\n";
    for (int i = 0; i < ext.height(); ++i) {
        out << "    L" << i + 1 << " [shape=box,label=\"M~" << i + 1 << " "
            << detail::id_set_label(ext.steps[i].leaf) << "\"];\n";
        out << "    G" << i << " -- L" << i + 1 << ";\n";
        out << "    G" << i << " -- G" << i + 1 << ";\n";
    }
    out << "  }\n}\n";
    return out.str();
}

}  // namespace wisc
