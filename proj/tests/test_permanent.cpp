#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "wisc/wisc.hpp"

using namespace wisc;
using namespace testutil;

namespace {

PermanentInstance random_instance(int n, std::mt19937_64& rng, int zero_out_of = 4) {
    std::uniform_int_distribution<int> num(1, 5), den(1, 4), z(0, zero_out_of - 1);
    std::vector<std::vector<Weight>> rows(n, std::vector<Weight>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rows[i][j] = z(rng) == 0 ? Weight(0) : make_weight(num(rng), den(rng));
    return PermanentInstance::of(rows);
}

}  // namespace

TEST_CASE("ryser on fixtures") {
    std::vector<std::vector<Weight>> ones(5, std::vector<Weight>(5, Weight(1)));
    CHECK(permanent_ryser(PermanentInstance::of(ones)) == Weight(120));

    std::vector<std::vector<Weight>> id(6, std::vector<Weight>(6, Weight(0)));
    for (int i = 0; i < 6; ++i) id[i][i] = Weight(1);
    CHECK(permanent_ryser(PermanentInstance::of(id)) == Weight(1));

    CHECK(permanent_ryser(PermanentInstance{}) == Weight(1));

    // a zero row forces a zero permanent
    std::vector<std::vector<Weight>> zr(3, std::vector<Weight>(3, Weight(1)));
    zr[1] = {Weight(0), Weight(0), Weight(0)};
    CHECK(permanent_ryser(PermanentInstance::of(zr)) == Weight(0));
}

TEST_CASE("ryser matches the naive expansion on random instances") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7);  // 2..8
        PermanentInstance inst = random_instance(n, rng);
        CHECK(permanent_ryser(inst) == brute_permanent(inst));
    }
}

TEST_CASE("zero detection via matching existence") {
    // block structure with no perfect matching in the support
    std::vector<std::vector<Weight>> rows(4, std::vector<Weight>(4, Weight(0)));
    rows[0][0] = rows[1][0] = rows[2][0] = rows[3][0] = Weight(1);
    rows[0][1] = Weight(1);
    PermanentInstance inst = PermanentInstance::of(rows);
    CHECK(!has_nonzero_permutation(inst));
    CHECK(permanent_ryser(inst) == Weight(0));
    Estimate est = permanent_mcmc(inst, 0.2, 99);
    CHECK(est.value == Weight(0));
    CHECK(est.eps == 0.0);
}

TEST_CASE("chain estimator hits the all-ones benchmark") {
    std::vector<std::vector<Weight>> ones(4, std::vector<Weight>(4, Weight(1)));
    PermanentInstance inst = PermanentInstance::of(ones);
    int hits = 0;
    const int runs = 40;
    for (int s = 0; s < runs; ++s) {
        Estimate est = permanent_mcmc(inst, 0.1, 1000 + s);
        double v = est.value.get_d();
        if (v >= 24.0 * 0.9 && v <= 24.0 * 1.1) ++hits;
    }
    CHECK(hits >= (3 * runs) / 4);
}

TEST_CASE("chain estimator against the exact engine on random instances") {
    std::mt19937_64 rng(29);
    int ok = 0, total = 0;
    for (int trial = 0; trial < 8; ++trial) {
        PermanentInstance inst = random_instance(5, rng, 6);
        Weight exact = permanent_ryser(inst);
        if (exact == 0) continue;
        for (int s = 0; s < 5; ++s) {
            Estimate est = permanent_mcmc(inst, 0.15, mix_seed(4242, trial * 10 + s));
            double rel = std::abs(est.value.get_d() / exact.get_d() - 1.0);
            ++total;
            if (rel <= 0.15) ++ok;
        }
    }
    REQUIRE(total > 0);
    CHECK(ok * 4 >= total * 3);
}

TEST_CASE("engine dispatch falls back above the exact cap") {
    EngineConfig cfg;
    cfg.kind = EngineKind::exact;
    cfg.exact_cap = 3;
    std::vector<std::vector<Weight>> ones(4, std::vector<Weight>(4, Weight(1)));
    PermanentInstance inst = PermanentInstance::of(ones);
    Estimate est = evaluate_permanent(inst, cfg, 0.1, 0.25, 7);
    CHECK(est.engine == EngineKind::mcmc);  // refused and estimated instead
    cfg.exact_cap = 8;
    Estimate exact = evaluate_permanent(inst, cfg, 0.1, 0.25, 7);
    CHECK(exact.engine == EngineKind::exact);
    CHECK(exact.value == Weight(24));
}

TEST_CASE("determinism given the seed") {
    std::mt19937_64 rng(31);
    PermanentInstance inst = random_instance(4, rng, 5);
    if (!has_nonzero_permutation(inst)) return;
    Estimate a = permanent_mcmc(inst, 0.2, 12345);
    Estimate b = permanent_mcmc(inst, 0.2, 12345);
    CHECK(a.value == b.value);
}
