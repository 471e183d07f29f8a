#pragma once

#include <cassert>
#include <functional>
#include <vector>

#include "wisc/cutset.hpp"
#include "wisc/graph.hpp"
#include "wisc/modular.hpp"
#include "wisc/numeric.hpp"
#include "wisc/trace.hpp"

namespace wisc {

// W(G) for a prime graph by the pivot partition: with V = {v_1 < ... < v_n}
// and R_i = G[{v_i..v_n} minus N[v_i]],
//   W(G) = 1 + sum_i w(v_i) * W(R_i).
// Each R_i is counted through its own modular decomposition whose prime
// leaves go to leaf_counter; for fork-free prime G those leaves are always
// claw-free, so the (claw, odd hole)-free driver below fits. The terms
// partition the nonempty independent sets, so the identity holds for any
// graph whose leaves the counter accepts.
inline Estimate count_prime_fork_free(
    const WeightedGraph& g,
    const std::function<Estimate(const WeightedGraph&)>& leaf_counter,
    PipelineTrace* trace = nullptr) {
    WeightedGraph h = normalize(g);
    if (h.empty()) return Estimate{Weight(1), 0.0, EngineKind::exact};
#ifndef NDEBUG
    assert(h.n() <= 1 || is_prime(h));  // callers hand in extended-tree leaves
#endif
    Estimate total{Weight(1), 0.0, EngineKind::exact};
    const auto& vs = h.vertices();
    for (size_t i = 0; i < vs.size(); ++i) {
        trace_add(trace, &PipelineTrace::partition_terms);
        std::vector<int> rest;
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (!h.adjacent(vs[i], vs[j])) rest.push_back(vs[j]);
        Estimate wr = count_with_modules(induced_subgraph(h, rest), leaf_counter, trace);
        total.value += h.weight(vs[i]) * wr.value;
        total.eps = eps_mul(total.eps, wr.eps);
        if (wr.engine == EngineKind::mcmc) total.engine = EngineKind::mcmc;
    }
    total.value.canonicalize();
    return total;
}

// Top-level driver for (fork, odd hole)-free inputs: component product rule,
// modular decomposition down to prime graphs, the pivot partition on each,
// and the (claw, odd hole)-free driver on the leaves at a per-call budget of
// eps / (2 n^2). Rejections propagate; accepted answers are exact on the
// exact engine path.
inline Estimate count_fork_free(const WeightedGraph& g, double eps,
                                const EngineConfig& cfg, PipelineTrace* trace = nullptr) {
    WeightedGraph h = normalize(g);
    if (h.empty()) return Estimate{Weight(1), 0.0, EngineKind::exact};
    int n = h.n();
    double eps_leaf = eps / (2.0 * std::max(1.0, static_cast<double>(n) * n));
    double delta_leaf =
        0.25 / std::max(1.0, 2.0 * static_cast<double>(n) * n * n);
    std::uint64_t seq = 0;
    std::function<Estimate(const WeightedGraph&)> claw_leaf =
        [&](const WeightedGraph& leaf) {
            EngineConfig leaf_cfg = cfg;
            leaf_cfg.seed = mix_seed(cfg.seed, ++seq);
            return count_claw_odd_hole_free(leaf, eps_leaf, leaf_cfg, trace, delta_leaf);
        };
    std::function<Estimate(const WeightedGraph&)> prime_counter =
        [&](const WeightedGraph& prime) {
            return count_prime_fork_free(prime, claw_leaf, trace);
        };
    Estimate total{Weight(1), 0.0, EngineKind::exact};
    for (const auto& comp : connected_components(h)) {
        Estimate part =
            count_with_modules(induced_subgraph(h, comp), prime_counter, trace);
        total.value *= part.value;
        total.eps = eps_mul(total.eps, part.eps);
        if (part.engine == EngineKind::mcmc) total.engine = EngineKind::mcmc;
    }
    total.value.canonicalize();
    return total;
}

enum class DriverKind { claw_odd_hole_free, fork_odd_hole_free };

inline Estimate run_driver(DriverKind kind, const WeightedGraph& g, double eps,
                           const EngineConfig& cfg, PipelineTrace* trace = nullptr) {
    return kind == DriverKind::claw_odd_hole_free
               ? count_claw_odd_hole_free(g, eps, cfg, trace)
               : count_fork_free(g, eps, cfg, trace);
}

namespace detail {

// Independence number via one exact driver run on a heavily scaled copy:
// with B bounding both W(G) and 1/W_alpha(G) and L > B^2, the value W(LG)
// falls within a factor B of L^alpha, which pins alpha uniquely.
inline int alpha_by_scaling_probe(DriverKind kind, const WeightedGraph& h,
                                  const EngineConfig& cfg, PipelineTrace* trace) {
    int n = h.n();
    Weight wmax = h.weight(h.vertices().front());
    Weight wmin = wmax;
    for (int v : h.vertices()) {
        wmax = std::max(wmax, h.weight(v));
        wmin = std::min(wmin, h.weight(v));
    }
    Weight ratio = std::max(Weight(1), wmax) / std::min(Weight(1), wmin);
    ratio.canonicalize();
    Weight b = weight_pow(ratio, n);
    mpz_mul_2exp(b.get_num().get_mpz_t(), b.get_num().get_mpz_t(), n);  // b *= 2^n
    b.canonicalize();
    Weight big = ceil_to_int(b * b) + 1;

    EngineConfig probe_cfg = cfg;
    probe_cfg.kind = EngineKind::exact;
    probe_cfg.exact_cap = 62;  // the probe must stay exact
    Estimate west = run_driver(kind, scale_weights(h, big), 0.5, probe_cfg, trace);

    Weight power(1);
    for (int k = 0; k <= n; ++k) {
        if (west.value <= b * power && west.value * b >= power) return k;
        power *= big;
    }
    throw std::logic_error("scaling probe failed to isolate the independence number");
}

}  // namespace detail

// Total weight of maximum independent sets by weight scaling: multiply all
// weights by lambda large enough that the top-degree term dominates, then
// W(lambda G) / lambda^alpha lands within [W_alpha, W_alpha + W(G)/lambda).
// alpha itself comes from an exact scaling probe, so lambda is exact.
inline Estimate count_max_weight(const WeightedGraph& g, DriverKind kind, double eps,
                                 const EngineConfig& cfg, PipelineTrace* trace = nullptr) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0,1)");
    WeightedGraph h = normalize(g);
    if (h.empty()) return Estimate{Weight(1), 0.0, EngineKind::exact};  // alpha = 0
    int n = h.n();
    int alpha = detail::alpha_by_scaling_probe(kind, h, cfg, trace);
    if (alpha == 0) return Estimate{Weight(1), 0.0, EngineKind::exact};

    Weight wmax = h.weight(h.vertices().front());
    Weight wmin = wmax;
    for (int v : h.vertices()) {
        wmax = std::max(wmax, h.weight(v));
        wmin = std::min(wmin, h.weight(v));
    }
    // lambda >= W(G) / (eps' W_alpha) via W(G) <= 2^n max(1, wmax)^alpha and
    // W_alpha >= wmin^alpha, with eps' = eps/2 so scaling and counting errors
    // compose within eps
    Weight bound = weight_pow(std::max(Weight(1), wmax) / wmin, alpha);
    mpz_mul_2exp(bound.get_num().get_mpz_t(), bound.get_num().get_mpz_t(), n);
    bound.canonicalize();
    Weight lambda = Weight(ceil_to_int(bound * 2 / Weight(eps))) + 1;

    Estimate main = run_driver(kind, scale_weights(h, lambda), eps / 2, cfg, trace);
    Weight result = main.value / weight_pow(lambda, alpha);
    result.canonicalize();
    return Estimate{result, eps_mul(main.eps, eps / 2), main.engine};
}

}  // namespace wisc
