#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wisc/bipartite.hpp"
#include "wisc/graph.hpp"
#include "wisc/numeric.hpp"
#include "wisc/permanent.hpp"

namespace wisc {

// Desk-scale caps for the brute-force reference computations. These are
// configuration, not constants, so suites can tune runtime.
struct OracleLimits {
    int weight_vector_cap = 20;
    int permanent_cap = 9;
    int matching_cap = 18;
    int oddhole_cap = 24;
};

// Exact W_0..W_alpha by enumerating all independent sets (include/exclude
// backtracking). alpha is structural, so the vector length is n-independent
// of the weights.
inline WeightVector brute_weight_vector(const WeightedGraph& g,
                                        const OracleLimits& lim = {}) {
    int n = g.n();
    if (n > lim.weight_vector_cap)
        throw CapExceededError("weight-vector oracle cap exceeded");
    const auto& vs = g.vertices();
    std::vector<WeightVector::value_type> sums(n + 1, Weight(0));
    int alpha = 0;
    std::vector<int> blocked(n, 0);
    std::vector<int> pos(n);
    // positions let the recursion mark neighbors in O(deg)
    std::function<int(int)> pos_of = [&](int id) {
        return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), id) - vs.begin());
    };
    std::function<void(int, int, Weight)> rec = [&](int i, int size, Weight prod) {
        if (i == n) {
            sums[size] += prod;
            alpha = std::max(alpha, size);
            return;
        }
        rec(i + 1, size, prod);  // exclude vs[i]
        if (blocked[i] == 0) {
            for (int u : g.neighbors(vs[i]))
                if (int p = pos_of(u); p > i) ++blocked[p];
            rec(i + 1, size + 1, prod * g.weight(vs[i]));
            for (int u : g.neighbors(vs[i]))
                if (int p = pos_of(u); p > i) --blocked[p];
        }
    };
    rec(0, 0, Weight(1));
    sums.resize(alpha + 1);
    return sums;
}

inline Weight brute_total_weight(const WeightedGraph& g, const OracleLimits& lim = {}) {
    return weight_vector_total(brute_weight_vector(g, lim));
}

enum class PatternKind { claw, diamond, gem, fork, wheel4, oddhole };

inline const char* pattern_name(PatternKind k) {
    switch (k) {
        case PatternKind::claw: return "claw";
        case PatternKind::diamond: return "diamond";
        case PatternKind::gem: return "gem";
        case PatternKind::fork: return "fork";
        case PatternKind::wheel4: return "4-wheel";
        case PatternKind::oddhole: return "odd hole";
    }
    return "?";
}

// The five fixed forbidden patterns as unit-weight graphs.
inline WeightedGraph pattern_graph(PatternKind k) {
    WeightedGraph p;
    auto build = [&](int n, std::vector<std::pair<int, int>> es) {
        for (int i = 0; i < n; ++i) p.add_vertex(i);
        for (auto [u, v] : es) p.add_edge(u, v);
    };
    switch (k) {
        case PatternKind::claw: build(4, {{0, 1}, {0, 2}, {0, 3}}); break;
        case PatternKind::diamond: build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}); break;
        case PatternKind::gem:
            build(5, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}});
            break;
        case PatternKind::fork: build(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}); break;
        case PatternKind::wheel4:
            build(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}, {2, 4}, {3, 4}});
            break;
        case PatternKind::oddhole:
            throw std::invalid_argument("odd hole has no single fixed pattern graph");
    }
    return p;
}

// Generic induced-subgraph-isomorphism witness by backtracking; pattern
// sizes here are at most five so this is cheap at desk scale.
inline std::optional<std::vector<int>> find_induced_copy(const WeightedGraph& g,
                                                         const WeightedGraph& pat) {
    const auto& pv = pat.vertices();
    const auto& gv = g.vertices();
    int k = static_cast<int>(pv.size());
    std::vector<int> image(k, -1);
    std::vector<char> used(gv.size(), 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == k) return true;
        for (size_t c = 0; c < gv.size(); ++c) {
            if (used[c]) continue;
            int cand = gv[c];
            bool ok = true;
            for (int j = 0; j < i && ok; ++j)
                ok = g.adjacent(cand, image[j]) == pat.adjacent(pv[i], pv[j]);
            if (!ok) continue;
            image[i] = cand;
            used[c] = 1;
            if (rec(i + 1)) return true;
            used[c] = 0;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    std::vector<int> witness = image;
    std::sort(witness.begin(), witness.end());
    return witness;
}

// Searches for an induced odd cycle of length >= 5 by growing chordless
// paths from each minimal start vertex.
inline std::optional<std::vector<int>> find_odd_hole(const WeightedGraph& g,
                                                     const OracleLimits& lim = {}) {
    if (g.n() > lim.oddhole_cap) throw CapExceededError("odd-hole oracle cap exceeded");
    std::optional<std::vector<int>> hit;
    std::vector<int> path;
    std::function<bool(int)> grow = [&](int start) -> bool {
        int last = path.back();
        for (int u : g.neighbors(last)) {
            if (u <= start) continue;
            bool interior_adjacent = false;
            for (size_t i = 1; i + 1 < path.size(); ++i)
                if (g.adjacent(u, path[i])) {
                    interior_adjacent = true;
                    break;
                }
            if (interior_adjacent) continue;
            if (std::find(path.begin(), path.end(), u) != path.end()) continue;
            if (path.size() >= 2 && g.adjacent(u, start)) {
                size_t len = path.size() + 1;
                if (len >= 5 && len % 2 == 1) {
                    std::vector<int> cyc = path;
                    cyc.push_back(u);
                    std::sort(cyc.begin(), cyc.end());
                    hit = cyc;
                    return true;
                }
                continue;  // chord to start forbids any longer induced cycle
            }
            path.push_back(u);
            if (grow(start)) return true;
            path.pop_back();
        }
        return false;
    };
    for (int s : g.vertices()) {
        path = {s};
        if (grow(s)) return hit;
    }
    return std::nullopt;
}

// Witness for an induced copy of the requested pattern, or nullopt.
inline std::optional<std::vector<int>> contains_pattern(const WeightedGraph& g,
                                                        PatternKind kind,
                                                        const OracleLimits& lim = {}) {
    if (kind == PatternKind::oddhole) return find_odd_hole(g, lim);
    if (kind == PatternKind::claw) {
        // centre with an independent triple in its neighborhood
        for (int v : g.vertices()) {
            const auto& nb = g.neighbors(v);
            for (size_t a = 0; a < nb.size(); ++a)
                for (size_t b = a + 1; b < nb.size(); ++b) {
                    if (g.adjacent(nb[a], nb[b])) continue;
                    for (size_t c = b + 1; c < nb.size(); ++c)
                        if (!g.adjacent(nb[a], nb[c]) && !g.adjacent(nb[b], nb[c])) {
                            std::vector<int> w{v, nb[a], nb[b], nb[c]};
                            std::sort(w.begin(), w.end());
                            return w;
                        }
                }
        }
        return std::nullopt;
    }
    return find_induced_copy(g, pattern_graph(kind));
}

inline bool is_free_of(const WeightedGraph& g, std::initializer_list<PatternKind> kinds,
                       const OracleLimits& lim = {}) {
    for (PatternKind k : kinds)
        if (contains_pattern(g, k, lim)) return false;
    return true;
}

}  // namespace wisc
