#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "wisc/graph.hpp"
#include "wisc/numeric.hpp"
#include "wisc/trace.hpp"

namespace wisc {

namespace detail {

// Minimum module of g containing seed: close under "an outside distinguisher
// must lie inside any module covering the seed".
inline std::vector<int> module_closure(const WeightedGraph& g, std::vector<int> m) {
    std::sort(m.begin(), m.end());
    bool grew = true;
    while (grew) {
        grew = false;
        for (int x : g.vertices()) {
            if (std::binary_search(m.begin(), m.end(), x)) continue;
            int hits = 0;
            for (int v : m)
                if (g.adjacent(x, v)) ++hits;
            if (hits != 0 && hits != static_cast<int>(m.size())) {
                m.insert(std::lower_bound(m.begin(), m.end(), x), x);
                grew = true;
            }
        }
    }
    return m;
}

// Children of a node whose induced graph and complement are both connected:
// the maximal proper modules, which are pairwise disjoint and partition the
// vertex set (growing the closure vertex by vertex and refusing steps that
// blow up to the whole set reaches each class).
inline std::vector<std::vector<int>> prime_children(const WeightedGraph& h) {
    const auto& vs = h.vertices();
    int n = h.n();
    std::set<int> assigned;
    std::vector<std::vector<int>> children;
    for (int v : vs) {
        if (assigned.count(v)) continue;
        std::vector<int> m{v};
        for (int u : vs) {
            if (u == v || assigned.count(u)) continue;
            if (std::binary_search(m.begin(), m.end(), u)) continue;
            std::vector<int> seed = m;
            seed.push_back(u);
            std::vector<int> m2 = module_closure(h, std::move(seed));
            if (static_cast<int>(m2.size()) < n) m = std::move(m2);
        }
        for (int u : m) assigned.insert(u);
        children.push_back(std::move(m));
    }
    return children;
}

}  // namespace detail

// Strong modules of size >= 2 with parent links by the cover relation;
// nodes[0] is the root V. Children are emitted in order of minimum vertex id.
struct StandardModularTree {
    std::vector<std::vector<int>> nodes;  // sorted vertex sets
    std::vector<int> parent;              // index into nodes; -1 at the root
};

inline StandardModularTree standard_modular_tree(const WeightedGraph& g) {
    StandardModularTree tree;
    if (g.n() < 2) return tree;
    std::function<void(std::vector<int>, int)> build = [&](std::vector<int> u, int par) {
        int self = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(u);
        tree.parent.push_back(par);
        WeightedGraph h = induced_subgraph(g, u);
        std::vector<std::vector<int>> children = connected_components(h);
        if (children.size() < 2) {
            children = connected_components(complement(h));
            if (children.size() < 2) children = detail::prime_children(h);
        }
        std::sort(children.begin(), children.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        for (auto& c : children)
            if (c.size() >= 2) build(std::move(c), self);
    };
    build(g.vertices(), -1);
    return tree;
}

// All strong modules of size >= 2 (V included, singletons excluded).
inline std::vector<std::vector<int>> strong_modules(const WeightedGraph& g) {
    return standard_modular_tree(g).nodes;
}

// Prime in the strong sense: no strong module other than the trivial ones.
inline bool is_prime(const WeightedGraph& g) {
    auto nodes = strong_modules(g);
    return nodes.size() <= 1;  // at most the root V itself
}

// The postorder-contracted form of the standard tree. Step i names the
// vertices of the contracted prime module in G_{i-1} and the id that stands
// for it afterwards (its minimum vertex id, which survives every earlier
// contraction). After the last step a connected graph has shrunk to a single
// vertex.
struct ExtendedModularTree {
    struct Step {
        std::vector<int> leaf;  // vertices of the module in the current graph
        int rep;                // id representing the contracted module
    };
    std::vector<Step> steps;

    int height() const { return static_cast<int>(steps.size()); }
};

inline ExtendedModularTree extended_tree(const WeightedGraph& g) {
    StandardModularTree std_tree = standard_modular_tree(g);
    ExtendedModularTree ext;
    if (std_tree.nodes.empty()) return ext;

    std::vector<std::vector<int>> children(std_tree.nodes.size());
    for (size_t i = 1; i < std_tree.nodes.size(); ++i)
        children[std_tree.parent[i]].push_back(static_cast<int>(i));

    std::set<int> alive(g.vertices().begin(), g.vertices().end());
    std::function<void(int)> walk = [&](int node) {
        for (int c : children[node]) walk(c);
        ExtendedModularTree::Step step;
        for (int v : std_tree.nodes[node])
            if (alive.count(v)) step.leaf.push_back(v);
        step.rep = step.leaf.front();
        for (int v : step.leaf)
            if (v != step.rep) alive.erase(v);
        ext.steps.push_back(std::move(step));
    };
    walk(0);
    return ext;
}

// Replaces a module by a single vertex (its minimum id) carrying the given
// weight and the module's external adjacency. W is conserved exactly when
// the weight is the total weight of the module's nonempty independent sets,
// W(G[M]) - 1.
inline WeightedGraph contract_module(const WeightedGraph& g, const std::vector<int>& m,
                                     const Weight& nonempty_weight) {
    std::vector<int> ms = m;
    std::sort(ms.begin(), ms.end());
    if (ms.empty()) throw std::invalid_argument("cannot contract an empty module");
    if (!is_module(g, ms)) throw std::invalid_argument("vertex set is not a module");
    int rep = ms.front();
    WeightedGraph out;
    out.add_vertex(rep, nonempty_weight);
    for (int v : g.vertices())
        if (!std::binary_search(ms.begin(), ms.end(), v)) out.add_vertex(v, g.weight(v));
    for (auto [u, v] : g.edges())
        if (out.has_vertex(u) && out.has_vertex(v) && (u != rep && v != rep))
            out.add_edge(u, v);
    for (int u : g.neighbors(rep))
        if (out.has_vertex(u)) out.add_edge(rep, u);
    return out;
}

// Bottom-up counting over the extended tree: count each prime leaf, contract
// it with weight W(leaf) - 1, and read the answer off the final vertex
// (adding back the weight of the global empty set).
inline Estimate count_with_modules(
    const WeightedGraph& g,
    const std::function<Estimate(const WeightedGraph&)>& prime_counter,
    PipelineTrace* trace = nullptr) {
    WeightedGraph cur = normalize(g);
    if (cur.empty()) return Estimate{Weight(1), 0.0, EngineKind::exact};
    Estimate acc{Weight(0), 0.0, EngineKind::exact};
    for (const auto& step : extended_tree(cur).steps) {
        trace_add(trace, &PipelineTrace::modular_leaves);
        Estimate leaf = prime_counter(induced_subgraph(cur, step.leaf));
        acc.eps = eps_mul(acc.eps, leaf.eps);
        if (leaf.engine == EngineKind::mcmc) acc.engine = EngineKind::mcmc;
        Weight w = leaf.value - 1;
        if (w < 0) w = 0;  // randomized undershoot near W = 1
        cur = contract_module(cur, step.leaf, w);
    }
    // the root step leaves exactly one vertex (or none ever existed)
    acc.value = cur.weight(cur.vertices().front()) + 1;
    acc.value.canonicalize();
    return acc;
}

}  // namespace wisc
