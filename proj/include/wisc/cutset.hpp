#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "wisc/atoms.hpp"
#include "wisc/graph.hpp"
#include "wisc/numeric.hpp"
#include "wisc/trace.hpp"

namespace wisc {

namespace detail {

struct EliminationData {
    std::vector<int> order;                     // elimination order, first out first
    std::map<int, std::vector<int>> madj;       // later neighbors in the filled graph
};

// Minimal elimination ordering by maximum-cardinality search with fill
// (weights bump along paths through lower-weight unnumbered vertices). The
// madj sets of a minimal ordering cover every clique minimal separator, which
// is what the cutset scan below relies on.
inline EliminationData mcs_m(const WeightedGraph& g) {
    const auto& vs = g.vertices();
    int n = g.n();
    std::map<int, int> pos;
    for (int i = 0; i < n; ++i) pos[vs[i]] = i;

    std::vector<long> wt(n, 0);
    std::vector<int> number(n, 0);  // n down to 1; 0 = unnumbered
    std::vector<std::set<int>> filled(n);  // fill edges by position
    for (int i = 0; i < n; ++i)
        for (int u : g.neighbors(vs[i])) filled[i].insert(pos[u]);

    for (int step = n; step >= 1; --step) {
        int v = -1;
        for (int i = 0; i < n; ++i)
            if (number[i] == 0 && (v < 0 || wt[i] > wt[v])) v = i;
        if (v < 0) break;
        number[v] = step;

        // bottleneck search: reach[u] = min over paths of the max weight of
        // an unnumbered interior vertex; u qualifies when reach[u] < wt[u]
        const long inf = static_cast<long>(n) + 2;
        std::vector<long> reach(n, inf);
        using Item = std::pair<long, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int u : g.neighbors(vs[v])) {
            int pu = pos[u];
            if (number[pu] == 0) {
                reach[pu] = -1;  // direct edge, no interior
                pq.push({-1, pu});
            }
        }
        std::vector<int> bumped;
        std::vector<char> done(n, 0);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (done[u] || d > reach[u]) continue;
            done[u] = 1;
            if (d < wt[u]) bumped.push_back(u);
            long through = std::max(d, wt[u]);  // u as interior vertex
            for (int w : g.neighbors(vs[u])) {
                int pw = pos[w];
                if (number[pw] != 0 || done[pw]) continue;
                if (through < reach[pw]) {
                    reach[pw] = through;
                    pq.push({through, pw});
                }
            }
        }
        for (int u : bumped) {
            ++wt[u];
            filled[u].insert(v);
            filled[v].insert(u);
        }
    }

    EliminationData out;
    std::vector<int> by_number(n + 1, -1);
    for (int i = 0; i < n; ++i) by_number[number[i]] = i;
    for (int k = 1; k <= n; ++k) {
        int i = by_number[k];
        out.order.push_back(vs[i]);
        std::vector<int> later;
        for (int j : filled[i])
            if (number[j] > number[i]) later.push_back(vs[j]);
        std::sort(later.begin(), later.end());
        out.madj[vs[i]] = std::move(later);
    }
    return out;
}

inline std::vector<int> component_of(const WeightedGraph& g, int start,
                                     const std::vector<int>& removed) {
    std::vector<int> comp, stack{start};
    std::set<int> seen{start};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (int u : g.neighbors(v)) {
            if (seen.count(u)) continue;
            if (std::binary_search(removed.begin(), removed.end(), u)) continue;
            seen.insert(u);
            stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    return comp;
}

inline std::vector<std::vector<int>> components_without(const WeightedGraph& g,
                                                        const std::vector<int>& removed) {
    std::vector<std::vector<int>> comps;
    std::set<int> seen(removed.begin(), removed.end());
    for (int s : g.vertices()) {
        if (seen.count(s)) continue;
        auto comp = component_of(g, s, removed);
        for (int v : comp) seen.insert(v);
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace detail

// Any clique whose removal disconnects g, or nullopt when g is an atom.
// Scans the madj sets of a minimal elimination ordering; a hit that is a
// clique in g and leaves vertices outside the scanned component is a valid
// clique cutset, and no clique cutset escapes the scan.
inline std::optional<std::vector<int>> find_clique_cutset(const WeightedGraph& g) {
    if (g.n() <= 2) return std::nullopt;
    detail::EliminationData e = detail::mcs_m(g);
    for (int v : e.order) {
        const auto& s = e.madj[v];
        if (static_cast<int>(s.size()) >= g.n() - 1) continue;
        if (!is_clique(g, s)) continue;
        auto comp = detail::component_of(g, v, s);
        if (static_cast<int>(comp.size() + s.size()) < g.n()) return s;
    }
    return std::nullopt;
}

inline bool is_atom(const WeightedGraph& g) { return !find_clique_cutset(g); }

// Path-shaped clique cutset decomposition: atoms A_0..A_h and cliques
// K_1..K_h, where removing K_i from G_i (the graph left after deleting
// A_{i+1} \ K_{i+1}, ..., A_h \ K_h) splits off A_i \ K_i.
struct CutsetTree {
    std::vector<std::vector<int>> atoms;    // A_0..A_h, sorted vertex ids
    std::vector<std::vector<int>> cliques;  // K_1..K_h; cliques[i-1] pairs atoms[i]

    int height() const { return static_cast<int>(cliques.size()); }
};

namespace detail {

// Finds a clique K and component C of cur - K with cur[C + K] an atom, by
// descending into non-atom blocks; each descent strictly shrinks the block.
inline std::pair<std::vector<int>, std::vector<int>> find_peelable(
    const WeightedGraph& cur, std::vector<int> k) {
    auto comps = components_without(cur, k);
    std::vector<int> c = comps.front();
    for (const auto& cc : comps)
        if (cc.size() < c.size()) c = cc;
    for (;;) {
        WeightedGraph block = induced_subgraph(cur, set_union_sorted(c, k));
        auto k2 = find_clique_cutset(block);
        if (!k2) return {k, c};
        auto parts = components_without(block, *k2);
        std::vector<int> best;
        for (const auto& d : parts) {
            if (!set_intersection_sorted(d, k).empty()) continue;
            if (best.empty() || d.size() < best.size()) best = d;
        }
        // K \ K2 is a clique, hence confined to one part; a part avoiding K
        // therefore always exists
        k = *k2;
        c = best;
    }
}

}  // namespace detail

// Decomposes a connected graph by peeling one atom at a time. Every reported
// atom is re-checked to contain no clique cutset.
inline CutsetTree decompose_cutsets(const WeightedGraph& g) {
    if (!is_connected(g))
        throw std::invalid_argument("cutset decomposition expects a connected graph");
    std::vector<std::vector<int>> atoms_rev, cliques_rev;
    WeightedGraph cur = g;
    while (auto k = find_clique_cutset(cur)) {
        auto [kk, cc] = detail::find_peelable(cur, *k);
        std::vector<int> block = set_union_sorted(cc, kk);
        // attach the block by its tight boundary: the block vertices with
        // neighbors outside it (a clique inside kk); everything else peels
        std::vector<int> boundary;
        for (int v : block)
            for (int u : cur.neighbors(v))
                if (!std::binary_search(block.begin(), block.end(), u)) {
                    boundary.push_back(v);
                    break;
                }
        atoms_rev.push_back(block);
        cliques_rev.push_back(boundary);
        cur = induced_subgraph(
            cur, set_difference_sorted(cur.vertices(),
                                       set_difference_sorted(block, boundary)));
    }
    CutsetTree tree;
    tree.atoms.push_back(cur.vertices());
    for (auto it = atoms_rev.rbegin(); it != atoms_rev.rend(); ++it)
        tree.atoms.push_back(*it);
    for (auto it = cliques_rev.rbegin(); it != cliques_rev.rend(); ++it)
        tree.cliques.push_back(*it);
    for (const auto& a : tree.atoms)
        if (!is_atom(induced_subgraph(g, a)))
            throw std::logic_error("decomposition produced a non-atom leaf");
    return tree;
}

// Counting over a cutset tree. Stage i multiplies in W(A'_i) and folds the
// independent sets meeting A'_i into revised weights on K_i:
//   w(v) <- w(v) * W(A'_i minus N(v)) / W(A'_i)   for v in K_i,
// so W(G_i) = W(A'_i) * W(G_{i-1}) and W(G) = W(A_0) * prod_i W(A'_i).
// The atom counter must be valid on every induced subgraph of every atom.
inline Estimate count_with_cutsets(
    const WeightedGraph& g,
    const std::function<Estimate(const WeightedGraph&)>& atom_counter,
    PipelineTrace* trace = nullptr) {
    if (g.empty()) return Estimate{Weight(1), 0.0, EngineKind::exact};
    CutsetTree tree = decompose_cutsets(g);
    WeightedGraph cur = g;
    Estimate total{Weight(1), 0.0, EngineKind::exact};
    auto absorb = [&](const Estimate& e) {
        total.eps = eps_mul(total.eps, e.eps);
        if (e.engine == EngineKind::mcmc) total.engine = EngineKind::mcmc;
    };
    for (int i = tree.height(); i >= 1; --i) {
        trace_add(trace, &PipelineTrace::cutset_stages);
        const auto& clique = tree.cliques[i - 1];
        std::vector<int> a_prime = set_difference_sorted(tree.atoms[i], clique);
        Estimate w_aprime = atom_counter(induced_subgraph(cur, a_prime));
        absorb(w_aprime);
        for (int v : clique) {
            std::vector<int> rest = set_difference_sorted(a_prime, cur.neighbors(v));
            Estimate w_rest = rest.empty() ? Estimate{Weight(1), 0.0, EngineKind::exact}
                                           : atom_counter(induced_subgraph(cur, rest));
            total.eps = eps_div(eps_mul(total.eps, w_rest.eps), w_aprime.eps);
            if (w_rest.engine == EngineKind::mcmc) total.engine = EngineKind::mcmc;
            Weight w = cur.weight(v) * w_rest.value / w_aprime.value;
            w.canonicalize();
            cur.set_weight(v, w);
        }
        total.value *= w_aprime.value;
        cur = induced_subgraph(cur, set_difference_sorted(cur.vertices(), a_prime));
    }
    Estimate base = atom_counter(cur);
    absorb(base);
    total.value *= base.value;
    total.value.canonicalize();
    return total;
}

// Top-level driver for (claw, odd hole)-free inputs: component product rule,
// cutset decomposition per component, atoms resolved by the atom engine at a
// per-call budget of eps / n^2. The pipeline is sound on a superset of the
// class: whenever it returns instead of rejecting, the value is W(G).
inline Estimate count_claw_odd_hole_free(const WeightedGraph& g, double eps,
                                         const EngineConfig& cfg,
                                         PipelineTrace* trace = nullptr,
                                         double delta_budget = 0.25) {
    WeightedGraph h = normalize(g);
    if (h.empty()) return Estimate{Weight(1), 0.0, EngineKind::exact};
    int n = h.n();
    double eps_atom = eps / std::max(1.0, static_cast<double>(n) * n);
    double delta_atom = delta_budget / std::max(1, n * (n + 2));
    std::uint64_t seq = 0;
    auto counter = [&](const WeightedGraph& sub) {
        return atom_weight(sub, eps_atom, cfg, delta_atom, mix_seed(cfg.seed, ++seq), trace);
    };
    Estimate total{Weight(1), 0.0, EngineKind::exact};
    for (const auto& comp : connected_components(h)) {
        Estimate part = count_with_cutsets(induced_subgraph(h, comp), counter, trace);
        total.value *= part.value;
        total.eps = eps_mul(total.eps, part.eps);
        if (part.engine == EngineKind::mcmc) total.engine = EngineKind::mcmc;
    }
    total.value.canonicalize();
    return total;
}

}  // namespace wisc
