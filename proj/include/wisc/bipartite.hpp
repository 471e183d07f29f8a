#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "wisc/graph.hpp"
#include "wisc/numeric.hpp"
#include "wisc/permanent.hpp"
#include "wisc/trace.hpp"

namespace wisc {

// Edge-weighted simple bipartite graph; the target shape of root recovery.
struct WeightedBipartiteGraph {
    std::vector<int> left, right;                // sorted, disjoint id sets
    std::map<std::pair<int, int>, Weight> edges; // key (left id, right id), weight > 0

    int n_left() const { return static_cast<int>(left.size()); }
    int n_right() const { return static_cast<int>(right.size()); }

    bool has_edge(int l, int r) const { return edges.count({l, r}) > 0; }

    Weight edge_weight(int l, int r) const {
        auto it = edges.find({l, r});
        return it == edges.end() ? Weight(0) : it->second;
    }
};

// Root multigraphs are plain edge lists; parallel edges are repeated entries.
struct MultigraphEdge {
    int u, v;
    Weight w;
};

// Line graph of an arbitrary multigraph given by its edge list. The i-th
// edge becomes line vertex i; adjacency is sharing an endpoint.
inline WeightedGraph line_graph(const std::vector<MultigraphEdge>& root_edges) {
    WeightedGraph g;
    for (size_t i = 0; i < root_edges.size(); ++i)
        g.add_vertex(static_cast<int>(i), root_edges[i].w);
    for (size_t i = 0; i < root_edges.size(); ++i)
        for (size_t j = i + 1; j < root_edges.size(); ++j) {
            const auto& e = root_edges[i];
            const auto& f = root_edges[j];
            if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v)
                g.add_edge(static_cast<int>(i), static_cast<int>(j));
        }
    return g;
}

inline WeightedGraph line_graph(const WeightedBipartiteGraph& b) {
    std::vector<MultigraphEdge> es;
    for (const auto& [key, w] : b.edges) es.push_back({key.first, key.second, w});
    return line_graph(es);
}

// Collapses every class of true twins (identical closed neighborhoods) to a
// single vertex carrying the class's weight sum. Twins are adjacent, so at
// most one class member appears in any independent set and every W_k is
// preserved. In a line graph the classes are exactly the images of parallel
// root edges (plus pendant-edge bundles), so recovery afterwards can target
// a simple root.
inline WeightedGraph merge_parallel(const WeightedGraph& g) {
    WeightedGraph cur = g;
    for (;;) {
        std::map<std::vector<int>, std::vector<int>> classes;
        for (int v : cur.vertices()) classes[closed_neighborhood(cur, v)].push_back(v);
        bool any = false;
        for (const auto& [key, members] : classes)
            if (members.size() > 1) any = true;
        if (!any) return cur;
        WeightedGraph next;
        std::map<int, int> rep;  // vertex -> representative
        for (const auto& [key, members] : classes) {
            int r = *std::min_element(members.begin(), members.end());
            Weight w(0);
            for (int v : members) {
                rep[v] = r;
                w += cur.weight(v);
            }
            next.add_vertex(r, w);
        }
        for (auto [u, v] : cur.edges()) {
            int ru = rep[u], rv = rep[v];
            if (ru != rv) next.add_edge(ru, rv);
        }
        cur = next;
    }
}

struct RootRecovery {
    WeightedBipartiteGraph root;
    // line vertex -> its root edge, as (left endpoint, right endpoint)
    std::map<int, std::pair<int, int>> vertex_to_edge;
};

// Reconstructs a simple bipartite root graph whose line graph is g, via the
// clique partition of the edges: in a diamond-free graph every edge lies in
// a unique maximal clique, cliques become root vertices, and each line
// vertex becomes the root edge between its (at most two) cliques. Vertices
// covered by fewer than two cliques get private root endpoints. Returns
// nullopt when g is not the line graph of a simple bipartite graph.
// Precondition for faithful use in the pipeline: true twins already merged.
inline std::optional<RootRecovery> recover_bipartite_root(const WeightedGraph& g) {
    // unique maximal clique per edge
    std::map<std::vector<int>, int> clique_ids;
    std::map<std::pair<int, int>, int> edge_clique;
    for (auto [u, v] : g.edges()) {
        std::vector<int> q = set_intersection_sorted(g.neighbors(u), g.neighbors(v));
        q = set_union_sorted(q, std::vector<int>{std::min(u, v), std::max(u, v)});
        if (!is_clique(g, q)) return std::nullopt;  // diamond witness
        auto [it, fresh] = clique_ids.emplace(q, static_cast<int>(clique_ids.size()));
        edge_clique[{std::min(u, v), std::max(u, v)}] = it->second;
    }

    std::map<int, std::vector<int>> cliques_of;  // line vertex -> clique ids
    for (int v : g.vertices()) cliques_of[v] = {};
    for (const auto& [e, c] : edge_clique) {
        for (int endpoint : {e.first, e.second}) {
            auto& cs = cliques_of[endpoint];
            if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
        }
    }
    for (auto& [v, cs] : cliques_of) {
        std::sort(cs.begin(), cs.end());
        if (cs.size() > 2) return std::nullopt;  // Krausz condition fails
    }

    // root vertices: one per clique, then private endpoints as needed
    int n_root = static_cast<int>(clique_ids.size());
    std::map<int, std::pair<int, int>> root_edge_of;
    std::map<std::pair<int, int>, int> seen_pairs;
    std::vector<std::vector<int>> root_adj;
    root_adj.resize(n_root);
    auto fresh_root = [&]() {
        root_adj.emplace_back();
        return n_root++;
    };
    for (int v : g.vertices()) {
        auto cs = cliques_of[v];
        while (cs.size() < 2) cs.push_back(fresh_root());
        std::pair<int, int> re{std::min(cs[0], cs[1]), std::max(cs[0], cs[1])};
        if (seen_pairs.count(re)) return std::nullopt;  // unmerged twins
        seen_pairs[re] = v;
        root_edge_of[v] = re;
        root_adj[re.first].push_back(re.second);
        root_adj[re.second].push_back(re.first);
    }

    // 2-colour the root; odd cycle means the root is not bipartite
    std::vector<int> colour(n_root, -1);
    for (int s = 0; s < n_root; ++s) {
        if (colour[s] >= 0) continue;
        colour[s] = 0;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : root_adj[x]) {
                if (colour[y] < 0) {
                    colour[y] = 1 - colour[x];
                    stack.push_back(y);
                } else if (colour[y] == colour[x]) {
                    return std::nullopt;
                }
            }
        }
    }

    RootRecovery rec;
    for (int x = 0; x < n_root; ++x)
        (colour[x] == 0 ? rec.root.left : rec.root.right).push_back(x);
    for (const auto& [v, re] : root_edge_of) {
        std::pair<int, int> oriented =
            colour[re.first] == 0 ? re : std::make_pair(re.second, re.first);
        rec.root.edges[oriented] = g.weight(v);
        rec.vertex_to_edge[v] = oriented;
    }
    return rec;
}

// Embeds the k-matching weight of b into a perfect-matching problem: pad
// with n2-k extra left vertices complete to the right side and n1-k extra
// right vertices complete to the left side, all padding weights 1. The
// permanent of the result equals (n1-k)! (n2-k)! M_k(b).
inline PermanentInstance pad_for_k(const WeightedBipartiteGraph& b, int k) {
    int n1 = b.n_left(), n2 = b.n_right();
    if (k < 0 || k > std::min(n1, n2))
        throw std::invalid_argument("matching size out of range");
    int pad_left = n2 - k;
    int dim = n1 + pad_left;  // == n2 + (n1 - k)
    std::vector<std::vector<Weight>> rows(dim, std::vector<Weight>(dim, Weight(0)));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            rows[i][j] = b.edge_weight(b.left[i], b.right[j]);
    for (int i = n1; i < dim; ++i)
        for (int j = 0; j < n2; ++j) rows[i][j] = Weight(1);
    for (int i = 0; i < n1; ++i)
        for (int j = n2; j < dim; ++j) rows[i][j] = Weight(1);
    return PermanentInstance::of(std::move(rows));
}

inline int max_matching_size(const WeightedBipartiteGraph& b) {
    std::map<int, int> right_index;
    for (int i = 0; i < b.n_right(); ++i) right_index[b.right[i]] = i;
    std::vector<std::vector<int>> adj(b.n_left());
    for (int i = 0; i < b.n_left(); ++i)
        for (const auto& [key, w] : b.edges)
            if (key.first == b.left[i]) adj[i].push_back(right_index.at(key.second));
    return max_matching_size(b.n_left(), b.n_right(), adj);
}

// One W_k per matching size of the recovered root, exact rationals on the
// exact engine path.
struct MatchingWeights {
    WeightVector entries;  // index k holds W_k = M_k(root); entry 0 is 1
    double eps = 0.0;      // delivered accuracy label (max over the k calls)
    EngineKind engine = EngineKind::exact;
};

// Counts weighted independent sets of a line graph of a bipartite multigraph:
// merge parallel-edge twins, recover the simple bipartite root, and resolve
// each M_k through a padded permanent divided by (n1-k)! (n2-k)!.
// Throws NotInClassError when root recovery fails.
inline MatchingWeights line_graph_matching_weights(const WeightedGraph& g, double eps,
                                                   const EngineConfig& cfg, double delta,
                                                   std::uint64_t seed,
                                                   PipelineTrace* trace = nullptr) {
    WeightedGraph merged = merge_parallel(normalize(g));
    auto rec = recover_bipartite_root(merged);
    if (!rec)
        throw NotInClassError("root recovery failed: not a line graph of a bipartite multigraph");
    const auto& b = rec->root;
    int n1 = b.n_left(), n2 = b.n_right();
    int mu = max_matching_size(b);  // zero weight for any k above this

    MatchingWeights out;
    out.entries.assign(mu + 1, Weight(0));
    out.entries[0] = Weight(1);
    double delta_each = delta / std::max(1, mu);
    for (int k = 1; k <= mu; ++k) {
        PermanentInstance inst = pad_for_k(b, k);
        trace_add(trace, &PipelineTrace::permanent_calls);
        if (cfg.kind == EngineKind::exact && inst.dim() > cfg.exact_cap)
            trace_add(trace, &PipelineTrace::exact_cap_fallbacks);
        Estimate perm = evaluate_permanent(inst, cfg, eps, delta_each, mix_seed(seed, k));
        Weight denom(factorial(n1 - k) * factorial(n2 - k));
        out.entries[k] = perm.value / denom;
        out.entries[k].canonicalize();
        out.eps = std::max(out.eps, perm.eps);
        if (perm.engine == EngineKind::mcmc) out.engine = EngineKind::mcmc;
    }
    while (out.entries.size() > 1 && out.entries.back() == 0) out.entries.pop_back();
    return out;
}

inline Estimate line_graph_total_weight(const WeightedGraph& g, double eps,
                                        const EngineConfig& cfg, double delta,
                                        std::uint64_t seed,
                                        PipelineTrace* trace = nullptr) {
    MatchingWeights mw = line_graph_matching_weights(g, eps, cfg, delta, seed, trace);
    return Estimate{weight_vector_total(mw.entries), mw.eps, mw.engine};
}

// Exact total weight of k-edge matchings by recursion over left vertices;
// oracle-grade only.
inline Weight brute_matching_weight(const WeightedBipartiteGraph& b, int k, int cap = 18) {
    if (b.n_left() + b.n_right() > cap)
        throw CapExceededError("matching oracle cap exceeded");
    if (k < 0) throw std::invalid_argument("negative matching size");
    if (k > std::min(b.n_left(), b.n_right())) return Weight(0);
    int n2 = b.n_right();
    std::vector<std::vector<Weight>> w(b.n_left(), std::vector<Weight>(n2, Weight(0)));
    for (int i = 0; i < b.n_left(); ++i)
        for (int j = 0; j < n2; ++j) w[i][j] = b.edge_weight(b.left[i], b.right[j]);

    std::function<Weight(int, unsigned, int)> rec = [&](int i, unsigned used,
                                                        int left_k) -> Weight {
        if (left_k == 0) return Weight(1);
        if (i >= b.n_left() || b.n_left() - i < left_k) return Weight(0);
        Weight total = rec(i + 1, used, left_k);  // leave left[i] unmatched
        for (int j = 0; j < n2; ++j)
            if (!(used & (1u << j)) && w[i][j] > 0)
                total += w[i][j] * rec(i + 1, used | (1u << j), left_k - 1);
        return total;
    };
    return rec(0, 0u, k);
}

}  // namespace wisc
