#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "wisc/numeric.hpp"

namespace wisc {

// Square nonnegative matrix handed to a permanent engine.
struct PermanentInstance {
    std::vector<std::vector<Weight>> a;  // row-major, all entries >= 0

    int dim() const { return static_cast<int>(a.size()); }

    static PermanentInstance of(std::vector<std::vector<Weight>> rows) {
        PermanentInstance inst{std::move(rows)};
        for (const auto& row : inst.a) {
            if (static_cast<int>(row.size()) != inst.dim())
                throw std::invalid_argument("permanent instance must be square");
            for (const auto& e : row)
                if (e < 0) throw std::invalid_argument("negative matrix entry");
        }
        return inst;
    }
};

// Maximum matching size of a bipartite support graph (Kuhn augmenting paths).
// adj[i] lists the right-side vertices reachable from left vertex i.
inline int max_matching_size(int n_left, int n_right,
                             const std::vector<std::vector<int>>& adj) {
    std::vector<int> match_right(n_right, -1);
    std::vector<char> used;
    std::function<bool(int)> try_kuhn = [&](int u) -> bool {
        for (int v : adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            if (match_right[v] < 0 || try_kuhn(match_right[v])) {
                match_right[v] = u;
                return true;
            }
        }
        return false;
    };
    int size = 0;
    for (int u = 0; u < n_left; ++u) {
        used.assign(n_right, 0);
        if (try_kuhn(u)) ++size;
    }
    return size;
}

inline bool has_nonzero_permutation(const PermanentInstance& inst) {
    int n = inst.dim();
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (inst.a[i][j] > 0) adj[i].push_back(j);
    return max_matching_size(n, n, adj) == n;
}

// Exact permanent by Ryser inclusion-exclusion with Gray-code column updates.
// Rows are cleared of denominators first so the inner loop runs on integers.
inline Weight permanent_ryser(const PermanentInstance& inst) {
    int n = inst.dim();
    if (n == 0) return Weight(1);
    if (n > 62) throw CapExceededError("ryser limited to dimension 62");
    if (!has_nonzero_permutation(inst)) return Weight(0);

    Int divisor(1);
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i) {
        Int d(1);
        for (int j = 0; j < n; ++j)
            mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), inst.a[i][j].get_den().get_mpz_t());
        for (int j = 0; j < n; ++j) {
            Weight e = inst.a[i][j] * d;
            m[i][j] = e.get_num();  // exact: d clears every denominator in the row
        }
        divisor *= d;
    }

    std::vector<Int> rowsum(n, Int(0));
    Int total(0), prod;
    int zero_rows = n;
    const std::uint64_t subsets = 1ULL << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        int j = __builtin_ctzll(k);
        std::uint64_t gray = k ^ (k >> 1);
        bool added = (gray >> j) & 1ULL;
        for (int i = 0; i < n; ++i) {
            bool was_zero = sgn(rowsum[i]) == 0;
            if (added)
                rowsum[i] += m[i][j];
            else
                rowsum[i] -= m[i][j];
            bool is_zero = sgn(rowsum[i]) == 0;
            zero_rows += int(is_zero) - int(was_zero);
        }
        if (zero_rows > 0) continue;
        prod = rowsum[0];
        for (int i = 1; i < n; ++i) prod *= rowsum[i];
        int popcnt = __builtin_popcountll(gray);
        if ((n - popcnt) % 2 == 0)
            total += prod;
        else
            total -= prod;
    }
    Weight result(total, divisor);
    result.canonicalize();
    return result;
}

// Brute permanent by expansion over all permutations; oracle-grade only.
inline Weight brute_permanent(const PermanentInstance& inst, int cap = 9) {
    int n = inst.dim();
    if (n > cap) throw CapExceededError("brute permanent cap exceeded");
    if (n == 0) return Weight(1);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Weight total(0);
    do {
        Weight p(1);
        for (int i = 0; i < n && p != 0; ++i) p *= inst.a[i][perm[i]];
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Tuning knobs of the annealed matchings chain. The chain cannot usefully
// chase arbitrarily small eps, so requests below eps_floor are served at the
// floor and the estimate reports the accuracy actually delivered.
struct McmcOptions {
    double rho = 1.25;            // activity growth per annealing level
    double eps_floor = 0.08;      // smallest accuracy the chain will promise
    int min_samples = 1500;       // ratio samples at each level, lower bound
    int max_samples = 120000;
    int final_sample_factor = 4;  // extra samples for the perfect fraction
    int level_cap = 600;          // annealing budget
    double stop_fraction = 0.25;  // anneal until this fraction is perfect

    int samples_per_level(int n, double eps) const {
        double s = 1.2 * (n + 6) / (eps * eps);
        return std::clamp(static_cast<int>(std::ceil(s)), min_samples, max_samples);
    }
};

namespace detail {

// One annealing run over the matchings of the support graph of b (entries in
// (0,1]). Returns an estimate of the permanent of b, or throws
// BudgetExceededError when the schedule runs out before perfect matchings
// carry enough probability mass.
inline double mcmc_single_run_log2(int n, const std::vector<std::array<int, 2>>& edge_ends,
                                   const std::vector<double>& edge_w, double eps,
                                   int samples, const McmcOptions& opt,
                                   std::mt19937_64& rng) {
    const int m = static_cast<int>(edge_ends.size());
    std::vector<int> row_match(n, -1), col_match(n, -1);  // edge index or -1
    int msize = 0;

    std::uniform_int_distribution<int> pick(0, m - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double lambda = eps / (16.0 * m);
    const double log_rho = std::log(opt.rho);
    (void)log_rho;

    auto step = [&](double lam) {
        int e = pick(rng);
        int i = edge_ends[e][0], j = edge_ends[e][1];
        double b = edge_w[e];
        int re = row_match[i], ce = col_match[j];
        if (re == e) {  // e is in the matching: propose removal
            double acc = 1.0 / (lam * b);
            if (acc >= 1.0 || unit(rng) < acc) {
                row_match[i] = col_match[j] = -1;
                --msize;
            }
        } else if (re < 0 && ce < 0) {  // both ends free: propose insertion
            double acc = lam * b;
            if (acc >= 1.0 || unit(rng) < acc) {
                row_match[i] = col_match[j] = e;
                ++msize;
            }
        } else if (re >= 0 && ce < 0) {  // slide along the row
            double acc = b / edge_w[re];
            if (acc >= 1.0 || unit(rng) < acc) {
                col_match[edge_ends[re][1]] = -1;
                row_match[i] = col_match[j] = e;
            }
        } else if (re < 0 && ce >= 0) {  // slide along the column
            double acc = b / edge_w[ce];
            if (acc >= 1.0 || unit(rng) < acc) {
                row_match[edge_ends[ce][0]] = -1;
                row_match[i] = col_match[j] = e;
            }
        }
        // both ends covered by distinct edges: stay put
    };

    const int stride = std::max(1, 2 * m);
    const int burn = 20 * m + 50;
    double log2_z = 0.0;  // log2 Z(lambda_0) ~ 0; bias folded into eps
    for (int level = 0; level < opt.level_cap; ++level) {
        for (int t = 0; t < burn; ++t) step(lambda);
        double ratio_sum = 0.0;
        int perfect = 0;
        for (int s = 0; s < samples; ++s) {
            for (int t = 0; t < stride; ++t) step(lambda);
            ratio_sum += std::pow(opt.rho, msize);
            perfect += (msize == n);
        }
        double frac = double(perfect) / samples;
        if (frac >= opt.stop_fraction || level == opt.level_cap - 1) {
            if (frac < opt.stop_fraction)
                throw BudgetExceededError("matchings chain: annealing budget exhausted");
            int finals = opt.final_sample_factor * samples;
            int hits = 0;
            for (int s = 0; s < finals; ++s) {
                for (int t = 0; t < stride; ++t) step(lambda);
                hits += (msize == n);
            }
            if (hits == 0)
                throw BudgetExceededError("matchings chain: no perfect matchings sampled");
            double f = double(hits) / finals;
            return log2_z + std::log2(f) - n * std::log2(lambda);
        }
        log2_z += std::log2(ratio_sum / samples);
        lambda *= opt.rho;
    }
    throw BudgetExceededError("matchings chain: level cap reached");
}

}  // namespace detail

// Randomized permanent estimator: a Metropolis chain over matchings of the
// support graph, annealed in the edge activity until perfect matchings carry
// enough mass, then corrected by the sampled perfect fraction. Deterministic
// given the seed. delta < 1/4 triggers median amplification so callers can
// union-bound over many engine calls.
inline Estimate permanent_mcmc(const PermanentInstance& inst, double eps,
                               std::uint64_t seed, double delta = 0.25,
                               const McmcOptions& opt = {}) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0,1)");
    int n = inst.dim();
    if (n == 0) return Estimate{Weight(1), 0.0, EngineKind::mcmc};
    if (!has_nonzero_permutation(inst)) return Estimate{Weight(0), 0.0, EngineKind::mcmc};

    Weight cmax(0);
    for (const auto& row : inst.a)
        for (const auto& e : row) cmax = std::max(cmax, e);
    std::vector<std::array<int, 2>> edge_ends;
    std::vector<double> edge_w;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (inst.a[i][j] > 0) {
                edge_ends.push_back({i, j});
                Weight scaled = inst.a[i][j] / cmax;
                edge_w.push_back(scaled.get_d());
            }

    // the sampling effort targets roughly a third of eps as standard error,
    // which keeps single-run failures rare; medians then push the failure
    // probability down to the requested delta without log(1/delta) blowups
    double eps_eff = std::max(eps, opt.eps_floor);
    int samples = opt.samples_per_level(n, eps_eff);
    int runs = delta >= 0.1 ? 1 : (delta >= 1e-4 ? 3 : 5);
    std::vector<double> log2_estimates;
    log2_estimates.reserve(runs);
    for (int r = 0; r < runs; ++r) {
        std::mt19937_64 rng(mix_seed(seed, 0x5eedULL + r));
        log2_estimates.push_back(
            detail::mcmc_single_run_log2(n, edge_ends, edge_w, eps_eff, samples, opt, rng));
    }
    std::nth_element(log2_estimates.begin(), log2_estimates.begin() + runs / 2,
                     log2_estimates.end());
    double log2_perm_scaled = log2_estimates[runs / 2];

    // undo the max-entry scaling: perm(A) = cmax^n * perm(A / cmax)
    Weight value = weight_from_log2(log2_perm_scaled) * weight_pow(cmax, n);
    value.canonicalize();
    return Estimate{value, eps_eff, EngineKind::mcmc};
}

// Engine configuration shared by the counting drivers. The exact engine
// refuses above its cap, in which case the dispatcher falls back to the
// chain estimator for that instance.
struct EngineConfig {
    EngineKind kind = EngineKind::exact;
    int exact_cap = 22;
    std::uint64_t seed = 0;
    McmcOptions mcmc;
};

inline Estimate evaluate_permanent(const PermanentInstance& inst, const EngineConfig& cfg,
                                   double eps, double delta, std::uint64_t call_seed) {
    if (cfg.kind == EngineKind::exact) {
        if (inst.dim() <= cfg.exact_cap)
            return Estimate{permanent_ryser(inst), 0.0, EngineKind::exact};
        return permanent_mcmc(inst, eps, mix_seed(cfg.seed, call_seed), delta, cfg.mcmc);
    }
    return permanent_mcmc(inst, eps, mix_seed(cfg.seed, call_seed), delta, cfg.mcmc);
}

}  // namespace wisc
