#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wisc/bipartite.hpp"
#include "wisc/graph.hpp"
#include "wisc/numeric.hpp"
#include "wisc/trace.hpp"

namespace wisc {

// Direct enumeration of W_0..W_4. When W_4 = 0 the independence number is at
// most 3 (weights are positive after normalization) and the exact truncated
// vector is returned; otherwise the caller must take the elementary route.
inline std::optional<WeightVector> small_alpha_weight(const WeightedGraph& g) {
    const auto& vs = g.vertices();
    int n = g.n();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.adjacent(vs[i], vs[j])) adj[i][j] = adj[j][i] = 1;
    std::vector<Weight> w(n);
    for (int i = 0; i < n; ++i) w[i] = g.weight(vs[i]);

    Weight w1(0), w2(0), w3(0), w4(0);
    for (int i = 0; i < n; ++i) w1 += w[i];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (adj[i][j]) continue;
            Weight wij = w[i] * w[j];
            w2 += wij;
            for (int k = j + 1; k < n; ++k) {
                if (adj[i][k] || adj[j][k]) continue;
                Weight wijk = wij * w[k];
                w3 += wijk;
                for (int l = k + 1; l < n; ++l) {
                    if (adj[i][l] || adj[j][l] || adj[k][l]) continue;
                    w4 += wijk * w[l];
                    if (w4 > 0) return std::nullopt;
                }
            }
        }
    if (w4 > 0) return std::nullopt;
    WeightVector out{Weight(1), w1, w2, w3};
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

// Graph on the edges of g: two edges are adjacent exactly when they form an
// induced path on three vertices.
struct EdgeGraph {
    std::vector<std::pair<int, int>> edge_vertices;  // normalized (u < v), sorted
    std::vector<std::vector<int>> adj;               // indices into edge_vertices

    int index_of(int u, int v) const {
        std::pair<int, int> key{std::min(u, v), std::max(u, v)};
        auto it = std::lower_bound(edge_vertices.begin(), edge_vertices.end(), key);
        return static_cast<int>(it - edge_vertices.begin());
    }
};

inline EdgeGraph gallai_graph(const WeightedGraph& g) {
    EdgeGraph eg;
    eg.edge_vertices = g.edges();
    std::sort(eg.edge_vertices.begin(), eg.edge_vertices.end());
    eg.adj.resize(eg.edge_vertices.size());
    for (int y : g.vertices()) {
        const auto& nb = g.neighbors(y);
        for (size_t a = 0; a < nb.size(); ++a)
            for (size_t b = a + 1; b < nb.size(); ++b) {
                if (g.adjacent(nb[a], nb[b])) continue;  // (x, y, z) must be induced
                int e = eg.index_of(nb[a], y);
                int f = eg.index_of(nb[b], y);
                eg.adj[e].push_back(f);
                eg.adj[f].push_back(e);
            }
    }
    for (auto& a : eg.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return eg;
}

// Partial 2-colouring of the edges; edges isolated in the Gallai graph stay
// uncoloured.
struct ElementaryColouring {
    std::map<std::pair<int, int>, int> colour;  // values 1 and 2
};

// Exists iff the Gallai graph is bipartite; each Gallai component contributes
// one bipartition.
inline std::optional<ElementaryColouring> elementary_colouring(const WeightedGraph& g) {
    EdgeGraph eg = gallai_graph(g);
    int m = static_cast<int>(eg.edge_vertices.size());
    std::vector<int> col(m, 0);
    for (int s = 0; s < m; ++s) {
        if (col[s] != 0 || eg.adj[s].empty()) continue;
        col[s] = 1;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int e = stack.back();
            stack.pop_back();
            for (int f : eg.adj[e]) {
                if (col[f] == 0) {
                    col[f] = 3 - col[e];
                    stack.push_back(f);
                } else if (col[f] == col[e]) {
                    return std::nullopt;
                }
            }
        }
    }
    ElementaryColouring out;
    for (int e = 0; e < m; ++e)
        if (col[e] != 0) out.colour[eg.edge_vertices[e]] = col[e];
    return out;
}

// A cobipartite substructure standing in for an augmented flat edge: two
// cliques X, Y and the nonempty connecting edge set F, with every outside
// vertex complete or anticomplete to each clique and complete to at most one.
struct Augment {
    std::vector<int> x, y;                 // sorted, disjoint
    std::vector<std::pair<int, int>> f;    // edges of the (x, y) cut present in g
};

inline bool augment_valid(const WeightedGraph& g, const Augment& z) {
    if (z.x.empty() || z.y.empty()) return false;
    if (!set_intersection_sorted(z.x, z.y).empty()) return false;
    for (int v : z.x)
        if (!g.has_vertex(v)) return false;
    for (int v : z.y)
        if (!g.has_vertex(v)) return false;
    if (!is_clique(g, z.x) || !is_clique(g, z.y)) return false;
    bool any_cut_edge = false;
    for (int a : z.x)
        for (int b : z.y)
            if (g.adjacent(a, b)) any_cut_edge = true;
    if (!any_cut_edge) return false;
    std::vector<int> zone = set_union_sorted(z.x, z.y);
    for (int v : g.vertices()) {
        if (std::binary_search(zone.begin(), zone.end(), v)) continue;
        int hx = 0, hy = 0;
        for (int a : z.x) hx += g.adjacent(v, a);
        for (int b : z.y) hy += g.adjacent(v, b);
        bool cx = hx == static_cast<int>(z.x.size());
        bool cy = hy == static_cast<int>(z.y.size());
        if ((hx != 0 && !cx) || (hy != 0 && !cy)) return false;
        if (cx && cy) return false;  // would contradict flatness of the base edge
    }
    return true;
}

namespace detail {

// Grows an augment candidate around a seed cut edge by forced moves: a
// vertex distinguishing one clique can only join the other, and a vertex
// complete to both must join one of them (branching). Returns the fixpoint
// or nullopt.
inline std::optional<Augment> grow_augment(const WeightedGraph& g, std::set<int> xs,
                                           std::set<int> ys, int& branch_budget) {
    for (;;) {
        bool changed = false;
        for (int v : g.vertices()) {
            if (xs.count(v) || ys.count(v)) continue;
            int hx = 0, hy = 0;
            for (int a : xs) hx += g.adjacent(v, a);
            for (int b : ys) hy += g.adjacent(v, b);
            bool cx = hx == static_cast<int>(xs.size());
            bool cy = hy == static_cast<int>(ys.size());
            bool dx = hx > 0 && !cx;
            bool dy = hy > 0 && !cy;
            if (dx && dy) return std::nullopt;
            if (dx) {
                if (!cy) return std::nullopt;
                ys.insert(v);
                changed = true;
            } else if (dy) {
                if (!cx) return std::nullopt;
                xs.insert(v);
                changed = true;
            }
        }
        if (changed) continue;
        // forced fixpoint; resolve a both-complete vertex by branching
        int pending = -1;
        for (int v : g.vertices()) {
            if (xs.count(v) || ys.count(v)) continue;
            bool cx = true, cy = true;
            for (int a : xs) cx = cx && g.adjacent(v, a);
            for (int b : ys) cy = cy && g.adjacent(v, b);
            if (cx && cy) {
                pending = v;
                break;
            }
        }
        if (pending < 0) break;
        if (--branch_budget <= 0) return std::nullopt;
        auto xs2 = xs;
        xs2.insert(pending);
        if (auto r = grow_augment(g, std::move(xs2), ys, branch_budget)) return r;
        ys.insert(pending);
        continue;
    }
    Augment z;
    z.x.assign(xs.begin(), xs.end());
    z.y.assign(ys.begin(), ys.end());
    for (int a : z.x)
        for (int b : z.y)
            if (g.adjacent(a, b)) z.f.emplace_back(a, b);
    if (z.f.empty()) return std::nullopt;
    return z;
}

// External neighborhood shared by all members of a fixpoint clique.
inline std::vector<int> side_externals(const WeightedGraph& g, const std::vector<int>& side,
                                       const std::vector<int>& zone) {
    return set_difference_sorted(g.neighbors(side.front()), zone);
}

// Absorbs outside vertices that look exactly like additional clique members
// (complete to the side, anticomplete to the other, same externals), so the
// reported augment is maximal under inclusion.
inline void absorb_maximal(const WeightedGraph& g, Augment& z) {
    for (bool grown = true; grown;) {
        grown = false;
        std::vector<int> zone = set_union_sorted(z.x, z.y);
        for (int v : g.vertices()) {
            if (grown) break;  // zone changed; rescan from scratch
            if (std::binary_search(zone.begin(), zone.end(), v)) continue;
            for (int side = 0; side < 2 && !grown; ++side) {
                auto& mine = side == 0 ? z.x : z.y;
                auto& other = side == 0 ? z.y : z.x;
                bool cx = true, ay = true;
                for (int a : mine) cx = cx && g.adjacent(v, a);
                for (int b : other) ay = ay && !g.adjacent(v, b);
                if (!cx || !ay) continue;
                // externals must agree relative to the grown zone
                std::vector<int> grown_zone = set_union_sorted(zone, {v});
                std::vector<int> ext =
                    set_difference_sorted(g.neighbors(mine.front()), grown_zone);
                std::vector<int> vext = set_difference_sorted(g.neighbors(v), grown_zone);
                if (ext != vext) continue;
                Augment cand = z;
                auto& tgt = side == 0 ? cand.x : cand.y;
                tgt.insert(std::lower_bound(tgt.begin(), tgt.end(), v), v);
                if (!augment_valid(g, cand)) continue;
                z = cand;
                z.f.clear();
                for (int a : z.x)
                    for (int b : z.y)
                        if (g.adjacent(a, b)) z.f.emplace_back(a, b);
                grown = true;
            }
        }
    }
}

// A cut that is a matching (or empty) is already the local shape of a line
// graph of a bipartite multigraph: matched pairs share a private root vertex
// and unmatched clique members get fresh pendant endpoints. Only cuts with a
// doubly-covered vertex obstruct recovery and need the gadget.
inline bool cut_is_matching(const Augment& z) {
    std::map<int, int> deg;
    for (auto [a, b] : z.f) {
        if (++deg[a] > 1) return false;
        if (++deg[b] > 1) return false;
    }
    return true;
}

}  // namespace detail

// Detects pairwise disjoint maximal augments: every cut edge seeds a forced
// growth, fixpoints are validated against the augment invariants, and a
// disjoint family is selected in canonical order (minimum vertex id first).
// Candidates whose cut is a matching (in particular plain 1x1 flat edges)
// are omitted; they are already line-graph material. A missed augment can
// only lead to a rejection at root recovery, never a wrong count.
inline std::vector<Augment> find_augments(const WeightedGraph& g) {
    std::vector<Augment> candidates;
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (auto [a, b] : g.edges()) {
        for (int orient = 0; orient < 2; ++orient) {
            int x0 = orient == 0 ? a : b;
            int y0 = orient == 0 ? b : a;
            int budget = 64;
            auto grown = detail::grow_augment(g, {x0}, {y0}, budget);
            if (!grown) continue;
            detail::absorb_maximal(g, *grown);
            Augment z = *grown;
            if (detail::cut_is_matching(z)) continue;
            if (z.x.size() < z.y.size() || (z.x.size() == z.y.size() && z.y < z.x))
                std::swap(z.x, z.y);
            z.f.clear();
            for (int p : z.x)
                for (int q : z.y)
                    if (g.adjacent(p, q)) z.f.emplace_back(p, q);
            if (!augment_valid(g, z)) continue;
            if (seen.insert({z.x, z.y}).second) candidates.push_back(std::move(z));
        }
    }
    auto zone_min = [](const Augment& z) { return std::min(z.x.front(), z.y.front()); };
    auto zone_size = [](const Augment& z) { return z.x.size() + z.y.size(); };
    // prefer larger zones so the family is maximal under inclusion, then
    // settle ties canonically
    std::sort(candidates.begin(), candidates.end(), [&](const Augment& l, const Augment& r) {
        if (zone_size(l) != zone_size(r)) return zone_size(l) > zone_size(r);
        if (zone_min(l) != zone_min(r)) return zone_min(l) < zone_min(r);
        return std::tie(l.x, l.y) < std::tie(r.x, r.y);
    });
    std::vector<Augment> chosen;
    std::vector<int> taken;
    for (auto& z : candidates) {
        std::vector<int> zone = set_union_sorted(z.x, z.y);
        if (!set_intersection_sorted(zone, taken).empty()) continue;
        taken = set_union_sorted(taken, zone);
        chosen.push_back(std::move(z));
    }
    // replacements run in a fixed canonical order: minimum vertex id first
    std::sort(chosen.begin(), chosen.end(), [&](const Augment& l, const Augment& r) {
        return zone_min(l) < zone_min(r);
    });
    return chosen;
}

// The 3-4 vertex replacement weights. With the sigma = 0 choice the first
// Y-vertex disappears and the gadget keeps three vertices.
struct GadgetParams {
    Weight rho, rho_bar, sigma, sigma_bar;
};

inline GadgetParams gadget_params(const WeightedGraph& g, const Augment& z) {
    Weight w1x(0), w1y(0), w2z(0);
    for (int a : z.x) w1x += g.weight(a);
    for (int b : z.y) w1y += g.weight(b);
    for (int a : z.x)
        for (int b : z.y)
            if (!g.adjacent(a, b)) w2z += g.weight(a) * g.weight(b);
    GadgetParams p;
    p.sigma = Weight(0);
    p.sigma_bar = w1y;
    p.rho = w2z / w1y;
    p.rho.canonicalize();
    p.rho_bar = w1x - p.rho;  // nonnegative since W_2(Z) <= W_1(X) W_1(Y)
    return p;
}

// Swaps the augment for its equivalent gadget: vertices x1 (rho), x2
// (rho_bar), y2 (sigma_bar), edges x1-x2 and x2-y2, external adjacency
// inherited sidewise. Every W_k of the whole graph is preserved; a zero-rho
// x1 is dropped by normalization.
inline WeightedGraph replace_augment(const WeightedGraph& g, const Augment& z) {
    if (!augment_valid(g, z)) throw std::invalid_argument("augment invariants violated");
    GadgetParams p = gadget_params(g, z);
    std::vector<int> zone = set_union_sorted(z.x, z.y);
    std::vector<int> ext_x = detail::side_externals(g, z.x, zone);
    std::vector<int> ext_y = detail::side_externals(g, z.y, zone);

    int base = max_vertex_id(g) + 1;
    int x1 = base, x2 = base + 1, y2 = base + 2;
    WeightedGraph out;
    for (int v : g.vertices())
        if (!std::binary_search(zone.begin(), zone.end(), v)) out.add_vertex(v, g.weight(v));
    for (auto [u, v] : g.edges())
        if (out.has_vertex(u) && out.has_vertex(v)) out.add_edge(u, v);
    out.add_vertex(x1, p.rho);
    out.add_vertex(x2, p.rho_bar);
    out.add_vertex(y2, p.sigma_bar);
    out.add_edge(x1, x2);
    out.add_edge(x2, y2);
    for (int u : ext_x) {
        out.add_edge(x1, u);
        out.add_edge(x2, u);
    }
    for (int u : ext_y) out.add_edge(y2, u);
    return normalize(out);
}

// Counts an atom: the direct W_0..W_4 enumeration wins when the independence
// number is at most 3; otherwise the atom must be elementary, its augments
// are swapped for gadgets, and the matching/permanent route finishes the
// count. Rejections surface as NotInClassError.
inline MatchingWeights atom_weight_vector(const WeightedGraph& g, double eps,
                                          const EngineConfig& cfg, double delta,
                                          std::uint64_t seed,
                                          PipelineTrace* trace = nullptr) {
    WeightedGraph h = normalize(g);
    if (auto direct = small_alpha_weight(h)) {
        trace_add(trace, &PipelineTrace::atoms_small_alpha);
        return MatchingWeights{*direct, 0.0, EngineKind::exact};
    }
    if (!elementary_colouring(h))
        throw NotInClassError("atom is neither of independence number <= 3 nor elementary");
    trace_add(trace, &PipelineTrace::atoms_elementary);
    for (const Augment& z : find_augments(h)) {
        h = replace_augment(h, z);
        trace_add(trace, &PipelineTrace::augments_replaced);
    }
    return line_graph_matching_weights(h, eps, cfg, delta, seed, trace);
}

inline Estimate atom_weight(const WeightedGraph& g, double eps, const EngineConfig& cfg,
                            double delta, std::uint64_t seed,
                            PipelineTrace* trace = nullptr) {
    MatchingWeights mw = atom_weight_vector(g, eps, cfg, delta, seed, trace);
    return Estimate{weight_vector_total(mw.entries), mw.eps, mw.engine};
}

}  // namespace wisc
