#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "wisc/numeric.hpp"

namespace wisc {

// Simple undirected graph with exact rational vertex weights. Vertex ids are
// arbitrary nonnegative ints and survive induced-subgraph operations, so
// decomposition bookkeeping can always refer to original vertices.
// All operations on graphs are pure; a constructed graph is treated as
// immutable except through set_weight (used by counting recursions on their
// own private copies).
class WeightedGraph {
  public:
    WeightedGraph() = default;

    void add_vertex(int id, Weight w = Weight(1)) {
        if (id < 0) throw std::invalid_argument("vertex id must be nonnegative");
        if (w < 0) throw std::invalid_argument("vertex weight must be nonnegative");
        int pos = lower_pos(id);
        if (pos < n() && verts_[pos] == id)
            throw std::invalid_argument("duplicate vertex id " + std::to_string(id));
        verts_.insert(verts_.begin() + pos, id);
        adj_.insert(adj_.begin() + pos, std::vector<int>{});
        weights_.insert(weights_.begin() + pos, std::move(w));
    }

    void add_edge(int u, int v) {
        if (u == v) throw std::invalid_argument("self-loop rejected");
        int pu = pos_of(u), pv = pos_of(v);
        auto& au = adj_[pu];
        auto it = std::lower_bound(au.begin(), au.end(), v);
        if (it != au.end() && *it == v) return;  // already present; stay simple
        au.insert(it, v);
        auto& av = adj_[pv];
        av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    }

    int n() const { return static_cast<int>(verts_.size()); }

    long m() const {
        long deg = 0;
        for (const auto& a : adj_) deg += static_cast<long>(a.size());
        return deg / 2;
    }

    bool empty() const { return verts_.empty(); }

    const std::vector<int>& vertices() const { return verts_; }

    bool has_vertex(int v) const {
        int p = lower_pos(v);
        return p < n() && verts_[p] == v;
    }

    const std::vector<int>& neighbors(int v) const { return adj_[pos_of(v)]; }

    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

    bool adjacent(int u, int v) const {
        const auto& a = adj_[pos_of(u)];
        return std::binary_search(a.begin(), a.end(), v);
    }

    const Weight& weight(int v) const { return weights_[pos_of(v)]; }

    void set_weight(int v, Weight w) {
        if (w < 0) throw std::invalid_argument("vertex weight must be nonnegative");
        weights_[pos_of(v)] = std::move(w);
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> es;
        for (int i = 0; i < n(); ++i)
            for (int u : adj_[i])
                if (verts_[i] < u) es.emplace_back(verts_[i], u);
        return es;
    }

  private:
    int lower_pos(int id) const {
        return static_cast<int>(std::lower_bound(verts_.begin(), verts_.end(), id) -
                                verts_.begin());
    }
    int pos_of(int id) const {
        int p = lower_pos(id);
        if (p >= n() || verts_[p] != id)
            throw std::invalid_argument("unknown vertex id " + std::to_string(id));
        return p;
    }

    std::vector<int> verts_;            // sorted
    std::vector<std::vector<int>> adj_; // sorted neighbor ids, parallel to verts_
    std::vector<Weight> weights_;       // parallel to verts_
};

// W_0..W_alpha; entry 0 is always 1 and the length pins alpha(G).
using WeightVector = std::vector<Weight>;

inline Weight weight_vector_total(const WeightVector& wv) {
    Weight t(0);
    for (const auto& w : wv) t += w;
    return t;
}

inline int weight_vector_alpha(const WeightVector& wv) {
    return static_cast<int>(wv.size()) - 1;
}

// --- elementary operations ---------------------------------------------

inline WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<int>& u) {
    WeightedGraph s;
    for (int v : u) s.add_vertex(v, g.weight(v));  // pos_of validates membership
    for (int v : u)
        for (int w : g.neighbors(v))
            if (w > v && s.has_vertex(w)) s.add_edge(v, w);
    return s;
}

inline std::vector<int> closed_neighborhood(const WeightedGraph& g, int v) {
    std::vector<int> nv = g.neighbors(v);
    nv.insert(std::lower_bound(nv.begin(), nv.end(), v), v);
    return nv;
}

inline WeightedGraph delete_closed_neighborhood(const WeightedGraph& g, int v) {
    const auto& nv = g.neighbors(v);  // validates v
    std::vector<int> keep;
    for (int u : g.vertices())
        if (u != v && !std::binary_search(nv.begin(), nv.end(), u)) keep.push_back(u);
    return induced_subgraph(g, keep);
}

// Removes zero-weight vertices; every W_k is unchanged.
inline WeightedGraph normalize(const WeightedGraph& g) {
    std::vector<int> keep;
    for (int v : g.vertices())
        if (g.weight(v) > 0) keep.push_back(v);
    if (static_cast<int>(keep.size()) == g.n()) return g;
    return induced_subgraph(g, keep);
}

// Multiplies every weight by lambda > 0, so W_k scales by lambda^k.
inline WeightedGraph scale_weights(const WeightedGraph& g, const Weight& lambda) {
    if (lambda <= 0) throw std::invalid_argument("scale factor must be positive");
    WeightedGraph s = g;
    for (int v : s.vertices()) s.set_weight(v, s.weight(v) * lambda);
    return s;
}

inline std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
    std::vector<std::vector<int>> comps;
    std::map<int, bool> seen;
    for (int v : g.vertices()) seen[v] = false;
    for (int s : g.vertices()) {
        if (seen[s]) continue;
        std::vector<int> comp, stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int u : g.neighbors(v))
                if (!seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

inline bool is_connected(const WeightedGraph& g) {
    return g.n() <= 1 || connected_components(g).size() == 1;
}

inline WeightedGraph complement(const WeightedGraph& g) {
    WeightedGraph c;
    for (int v : g.vertices()) c.add_vertex(v, g.weight(v));
    const auto& vs = g.vertices();
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (!g.adjacent(vs[i], vs[j])) c.add_edge(vs[i], vs[j]);
    return c;
}

// --- small helpers shared across the decomposition modules --------------

inline bool is_clique(const WeightedGraph& g, const std::vector<int>& u) {
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j)
            if (!g.adjacent(u[i], u[j])) return false;
    return true;
}

inline bool is_independent_set(const WeightedGraph& g, const std::vector<int>& u) {
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j)
            if (g.adjacent(u[i], u[j])) return false;
    return true;
}

// True if every vertex outside m is complete or anticomplete to m.
inline bool is_module(const WeightedGraph& g, const std::vector<int>& m) {
    if (m.empty()) return true;
    for (int x : g.vertices()) {
        if (std::binary_search(m.begin(), m.end(), x)) continue;
        int hits = 0;
        for (int v : m)
            if (g.adjacent(x, v)) ++hits;
        if (hits != 0 && hits != static_cast<int>(m.size())) return false;
    }
    return true;
}

inline std::vector<int> set_difference_sorted(const std::vector<int>& a,
                                              const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> set_union_sorted(const std::vector<int>& a,
                                         const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> set_intersection_sorted(const std::vector<int>& a,
                                                const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline int max_vertex_id(const WeightedGraph& g) {
    return g.empty() ? -1 : g.vertices().back();
}

}  // namespace wisc
