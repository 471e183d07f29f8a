#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wisc/atoms.hpp"
#include "wisc/bipartite.hpp"
#include "wisc/graph.hpp"
#include "wisc/numeric.hpp"
#include "wisc/oracle.hpp"

namespace wisc {

enum class WeightStyle { unit, random_rational };

inline Weight random_weight(WeightStyle style, std::mt19937_64& rng) {
    if (style == WeightStyle::unit) return Weight(1);
    std::uniform_int_distribution<int> d(1, 6);
    return make_weight(d(rng), d(rng));
}

// --- line graphs of bipartite multigraphs --------------------------------

struct BipartiteRootSpec {
    int n_left = 4;
    int n_right = 4;
    double edge_prob = 0.5;
    double parallel_prob = 0.0;  // chance to duplicate a chosen root edge
};

inline std::vector<MultigraphEdge> random_bipartite_root(const BipartiteRootSpec& spec,
                                                         WeightStyle style,
                                                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<MultigraphEdge> edges;
    for (int i = 0; i < spec.n_left; ++i)
        for (int j = 0; j < spec.n_right; ++j) {
            if (unit(rng) >= spec.edge_prob) continue;
            edges.push_back({i, spec.n_left + j, random_weight(style, rng)});
            if (unit(rng) < spec.parallel_prob)
                edges.push_back({i, spec.n_left + j, random_weight(style, rng)});
        }
    if (edges.empty()) edges.push_back({0, spec.n_left, random_weight(style, rng)});
    return edges;
}

inline WeightedGraph generate_lg_bipartite(const BipartiteRootSpec& spec, WeightStyle style,
                                           std::mt19937_64& rng) {
    return line_graph(random_bipartite_root(spec, style, rng));
}

// --- augmented elementary graphs -----------------------------------------

struct AugmentedInstance {
    WeightedGraph base;               // line graph before augmentation
    WeightedGraph graph;              // after augmenting the flat edges
    std::vector<Augment> augments;    // ground truth, in the augmented graph
};

// Builds a line graph of a bipartite graph with designated degree-2 right
// vertices, then augments the corresponding flat edges with random cliques
// X, Y and a random nonempty cut F.
inline AugmentedInstance generate_augmented(int flat_count, const BipartiteRootSpec& spec,
                                            WeightStyle style, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<MultigraphEdge> edges = random_bipartite_root(spec, style, rng);
    const int base_edge_count = static_cast<int>(edges.size());
    int next_id = spec.n_left + spec.n_right;
    for (const auto& e : edges) next_id = std::max(next_id, std::max(e.u, e.v) + 1);
    // each flat site: a fresh degree-2 right vertex q with fresh left ends
    // p1, p2; one extra edge anchors p1 to the existing right side
    std::vector<std::pair<int, int>> flat_edge_indices;
    for (int t = 0; t < flat_count; ++t) {
        int p1 = next_id++, p2 = next_id++, q = next_id++;
        flat_edge_indices.push_back({static_cast<int>(edges.size()),
                                     static_cast<int>(edges.size()) + 1});
        edges.push_back({p1, q, random_weight(style, rng)});
        edges.push_back({p2, q, random_weight(style, rng)});
        int anchor_right =
            edges[std::uniform_int_distribution<int>(0, base_edge_count - 1)(rng)].v;
        edges.push_back({p1, anchor_right, random_weight(style, rng)});
    }
    WeightedGraph base = line_graph(edges);
    WeightedGraph g = base;
    AugmentedInstance out;
    out.base = base;

    for (auto [e1, e2] : flat_edge_indices) {
        std::uniform_int_distribution<int> size_d(1, 3);
        int kx = size_d(rng), ky = size_d(rng);
        if (kx == 1 && ky == 1) kx = 2;
        std::vector<int> ext_x, ext_y;
        for (int u : g.neighbors(e1))
            if (u != e2) ext_x.push_back(u);
        for (int u : g.neighbors(e2))
            if (u != e1) ext_y.push_back(u);
        int base_id = max_vertex_id(g) + 1;
        Augment z;
        WeightedGraph next;
        for (int v : g.vertices())
            if (v != e1 && v != e2) next.add_vertex(v, g.weight(v));
        for (auto [u, v] : g.edges())
            if (next.has_vertex(u) && next.has_vertex(v)) next.add_edge(u, v);
        for (int i = 0; i < kx; ++i) {
            z.x.push_back(base_id + i);
            next.add_vertex(base_id + i, random_weight(style, rng));
        }
        for (int j = 0; j < ky; ++j) {
            z.y.push_back(base_id + kx + j);
            next.add_vertex(base_id + kx + j, random_weight(style, rng));
        }
        for (size_t i = 0; i < z.x.size(); ++i)
            for (size_t j = i + 1; j < z.x.size(); ++j) next.add_edge(z.x[i], z.x[j]);
        for (size_t i = 0; i < z.y.size(); ++i)
            for (size_t j = i + 1; j < z.y.size(); ++j) next.add_edge(z.y[i], z.y[j]);
        for (int a : z.x)
            for (int b : z.y)
                if (coin(rng)) z.f.emplace_back(a, b);
        if (z.f.empty()) z.f.emplace_back(z.x.front(), z.y.front());
        // force a doubly-covered cut vertex so the augment is not already
        // line-graph shaped (a matching cut would be)
        std::map<int, int> cover;
        bool doubled = false;
        for (auto [a, b] : z.f) doubled = doubled || ++cover[a] > 1 || ++cover[b] > 1;
        if (!doubled) {
            auto [a0, b0] = z.f.front();
            if (z.y.size() >= 2) {
                for (int b : z.y)
                    if (b != b0 &&
                        std::find(z.f.begin(), z.f.end(), std::pair{a0, b}) == z.f.end()) {
                        z.f.emplace_back(a0, b);
                        break;
                    }
            } else if (z.x.size() >= 2) {
                for (int a : z.x)
                    if (a != a0 &&
                        std::find(z.f.begin(), z.f.end(), std::pair{a, b0}) == z.f.end()) {
                        z.f.emplace_back(a, b0);
                        break;
                    }
            }
        }
        std::sort(z.f.begin(), z.f.end());
        z.f.erase(std::unique(z.f.begin(), z.f.end()), z.f.end());
        for (auto [a, b] : z.f) next.add_edge(a, b);
        for (int a : z.x)
            for (int u : ext_x) next.add_edge(a, u);
        for (int b : z.y)
            for (int u : ext_y) next.add_edge(b, u);
        g = next;
        out.augments.push_back(std::move(z));
    }
    out.graph = g;
    return out;
}

// --- peculiar graphs ------------------------------------------------------

// Sizes of the nine parts plus which cut edges to remove; removal choices
// must be nonempty per designated cut.
struct PeculiarSpec {
    std::array<int, 3> a_sizes{1, 1, 1};
    std::array<int, 3> b_sizes{1, 1, 1};
    std::array<int, 3> k_sizes{1, 1, 1};
};

// Nine groups: A1 A2 A3 B1 B2 B3 form an initial clique with at least one
// edge removed from each of the cuts (A1,B2), (A2,B3), (A3,B1); corner
// cliques K1 K2 K3 attach to everything except their own A_i, B_i.
inline WeightedGraph generate_peculiar(const PeculiarSpec& spec, WeightStyle style,
                                       std::mt19937_64& rng) {
    for (int i = 0; i < 3; ++i)
        if (spec.a_sizes[i] < 1 || spec.b_sizes[i] < 1 || spec.k_sizes[i] < 1)
            throw std::invalid_argument("all nine peculiar groups must be nonempty");
    WeightedGraph g;
    std::array<std::vector<int>, 3> a, b, k;
    int id = 0;
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < spec.a_sizes[i]; ++t) {
            a[i].push_back(id);
            g.add_vertex(id++, random_weight(style, rng));
        }
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < spec.b_sizes[i]; ++t) {
            b[i].push_back(id);
            g.add_vertex(id++, random_weight(style, rng));
        }
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < spec.k_sizes[i]; ++t) {
            k[i].push_back(id);
            g.add_vertex(id++, random_weight(style, rng));
        }
    std::vector<int> core;
    for (int i = 0; i < 3; ++i) {
        core.insert(core.end(), a[i].begin(), a[i].end());
        core.insert(core.end(), b[i].begin(), b[i].end());
    }
    // removed cut edges: a random nonempty subset of each designated cut
    std::set<std::pair<int, int>> removed;
    std::uniform_int_distribution<int> coin(0, 1);
    auto choose_removed = [&](const std::vector<int>& xs, const std::vector<int>& ys) {
        std::vector<std::pair<int, int>> cut;
        for (int x : xs)
            for (int y : ys) cut.emplace_back(std::min(x, y), std::max(x, y));
        bool any = false;
        for (auto& e : cut)
            if (coin(rng)) {
                removed.insert(e);
                any = true;
            }
        if (!any) removed.insert(cut[std::uniform_int_distribution<size_t>(
            0, cut.size() - 1)(rng)]);
    };
    choose_removed(a[0], b[1]);
    choose_removed(a[1], b[2]);
    choose_removed(a[2], b[0]);
    for (size_t i = 0; i < core.size(); ++i)
        for (size_t j = i + 1; j < core.size(); ++j) {
            std::pair<int, int> e{std::min(core[i], core[j]), std::max(core[i], core[j])};
            if (!removed.count(e)) g.add_edge(core[i], core[j]);
        }
    for (int i = 0; i < 3; ++i) {
        for (size_t s = 0; s < k[i].size(); ++s)
            for (size_t t = s + 1; t < k[i].size(); ++t) g.add_edge(k[i][s], k[i][t]);
        for (int v : k[i])
            for (int u : core) {
                bool own = std::find(a[i].begin(), a[i].end(), u) != a[i].end() ||
                           std::find(b[i].begin(), b[i].end(), u) != b[i].end();
                if (!own) g.add_edge(v, u);
            }
    }
    return g;
}

// --- gluing along clique cutsets ------------------------------------------

// Chains parts together by identifying one vertex of each consecutive pair,
// which makes every shared vertex a one-clique cutset. Parts are relabeled
// into disjoint id ranges first.
inline WeightedGraph glue_at_vertices(const std::vector<WeightedGraph>& parts,
                                      std::mt19937_64& rng) {
    WeightedGraph g;
    int offset = 0;
    int prev_glue = -1;
    for (const auto& whole : parts) {
        if (whole.empty()) continue;
        // gluing needs connected pieces; keep each part's largest component
        std::vector<int> largest;
        for (const auto& comp : connected_components(whole))
            if (comp.size() > largest.size()) largest = comp;
        WeightedGraph part = induced_subgraph(whole, largest);
        std::map<int, int> relabel;
        const auto& vs = part.vertices();
        std::uniform_int_distribution<size_t> pick(0, vs.size() - 1);
        int local_glue_src = vs[pick(rng)];
        for (int v : vs) relabel[v] = v + offset;
        if (prev_glue >= 0) relabel[local_glue_src] = prev_glue;
        for (int v : vs)
            if (relabel[v] != prev_glue || prev_glue < 0)
                g.add_vertex(relabel[v], part.weight(v));
        for (auto [u, v] : part.edges()) g.add_edge(relabel[u], relabel[v]);
        int next_glue_src = vs[pick(rng)];
        prev_glue = relabel[next_glue_src];
        offset = max_vertex_id(g) + 1;
    }
    return g;
}

// --- module substitution ---------------------------------------------------

// Random cograph: repeatedly joins or unions smaller pieces. Cographs have
// no induced P4, hence neither forks nor odd holes.
inline WeightedGraph generate_cograph(int n, WeightStyle style, std::mt19937_64& rng) {
    std::vector<WeightedGraph> pool;
    for (int i = 0; i < n; ++i) {
        WeightedGraph v;
        v.add_vertex(i, random_weight(style, rng));
        pool.push_back(v);
    }
    std::uniform_int_distribution<int> coin(0, 1);
    while (pool.size() > 1) {
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        WeightedGraph merged;
        for (const auto* part : {&pool[i], &pool[j]})
            for (int v : part->vertices()) merged.add_vertex(v, part->weight(v));
        for (const auto* part : {&pool[i], &pool[j]})
            for (auto [u, v] : part->edges()) merged.add_edge(u, v);
        if (coin(rng))  // join
            for (int u : pool[i].vertices())
                for (int v : pool[j].vertices()) merged.add_edge(u, v);
        if (i < j) std::swap(i, j);
        pool.erase(pool.begin() + i);
        pool.erase(pool.begin() + j);
        pool.push_back(std::move(merged));
    }
    return pool.front();
}

// Substitutes a clique module of the given size for vertex v. Clique
// substitution preserves fork-freeness and odd-hole-freeness.
inline WeightedGraph substitute_clique(const WeightedGraph& g, int v, int size,
                                       WeightStyle style, std::mt19937_64& rng) {
    WeightedGraph out;
    int base = max_vertex_id(g) + 1;
    for (int u : g.vertices())
        if (u != v) out.add_vertex(u, g.weight(u));
    std::vector<int> fresh;
    for (int i = 0; i < size; ++i) {
        fresh.push_back(base + i);
        out.add_vertex(base + i, random_weight(style, rng));
    }
    for (auto [x, y] : g.edges())
        if (x != v && y != v) out.add_edge(x, y);
    for (size_t i = 0; i < fresh.size(); ++i)
        for (size_t j = i + 1; j < fresh.size(); ++j) out.add_edge(fresh[i], fresh[j]);
    for (int u : g.neighbors(v))
        for (int f : fresh) out.add_edge(u, f);
    return out;
}

// K_{n,n} minus a perfect matching ("crown"): fork-free, prime, and full of
// claws for n >= 3.
inline WeightedGraph generate_crown(int n, WeightStyle style, std::mt19937_64& rng) {
    WeightedGraph g;
    for (int i = 0; i < 2 * n; ++i) g.add_vertex(i, random_weight(style, rng));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) g.add_edge(i, n + j);
    return g;
}

// Fork-free instances with module structure: a cograph, a claw with a clique
// substituted into its centre, or a crown core, each further blown up by
// clique substitutions.
inline WeightedGraph generate_module_substituted(int target, WeightStyle style,
                                                 std::mt19937_64& rng) {
    std::uniform_int_distribution<int> which(0, 2);
    WeightedGraph g;
    switch (which(rng)) {
        case 0: g = generate_cograph(std::max(2, target / 2), style, rng); break;
        case 1: {
            g = WeightedGraph();
            for (int i = 0; i < 4; ++i) g.add_vertex(i, random_weight(style, rng));
            g.add_edge(0, 1);
            g.add_edge(0, 2);
            g.add_edge(0, 3);
            g = substitute_clique(g, 0, 2 + which(rng), style, rng);
            break;
        }
        default: g = generate_crown(3, style, rng); break;
    }
    std::uniform_int_distribution<int> size_d(2, 3);
    while (g.n() < target) {
        const auto& vs = g.vertices();
        std::uniform_int_distribution<size_t> pick(0, vs.size() - 1);
        g = substitute_clique(g, vs[pick(rng)], size_d(rng), style, rng);
    }
    return g;
}

// Random prime fork-free graph: evolve a seed by single edge toggles that
// keep it connected and fork-free, then insist on primality. Detector-checked
// rather than guaranteed by construction, so desk-scale sizes only.
inline WeightedGraph generate_prime_fork_free(int n, WeightStyle style,
                                              std::mt19937_64& rng,
                                              const OracleLimits& lim = {}) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        WeightedGraph g;
        if (attempt % 2 == 0 && n >= 6 && n % 2 == 0) {
            g = generate_crown(n / 2, style, rng);
        } else {
            // line graphs are claw-free, hence fork-free
            BipartiteRootSpec spec;
            spec.n_left = std::max(2, n / 3 + 1);
            spec.n_right = std::max(2, n / 3 + 1);
            spec.edge_prob = 0.8;
            std::vector<MultigraphEdge> edges;
            while (static_cast<int>(edges.size()) < n) {
                edges = random_bipartite_root(spec, style, rng);
                spec.edge_prob = std::min(1.0, spec.edge_prob + 0.05);
            }
            edges.resize(n);
            g = line_graph(edges);
        }
        std::uniform_int_distribution<size_t> pick(0, g.vertices().size() - 1);
        for (int flips = 0; flips < 3 * n; ++flips) {
            const auto& vs = g.vertices();
            int u = vs[pick(rng)], v = vs[pick(rng)];
            if (u == v) continue;
            WeightedGraph trial = g;
            if (trial.adjacent(u, v)) {
                WeightedGraph without;
                for (int x : trial.vertices()) without.add_vertex(x, trial.weight(x));
                for (auto [x, y] : trial.edges())
                    if (!(x == std::min(u, v) && y == std::max(u, v))) without.add_edge(x, y);
                trial = without;
            } else {
                trial.add_edge(u, v);
            }
            if (!is_connected(trial)) continue;
            if (contains_pattern(trial, PatternKind::fork, lim)) continue;
            g = trial;
        }
        if (is_connected(g) && is_prime(g) &&
            !contains_pattern(g, PatternKind::fork, lim))
            return g;
    }
    throw std::runtime_error("prime fork-free sampler did not converge");
}

}  // namespace wisc
