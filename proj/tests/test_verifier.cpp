#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "qmalab/generators.hpp"
#include "qmalab/verifier.hpp"
#include "support/oracles.hpp"

using namespace qmalab;

namespace {

ColoringState random_any(Rng& rng, int n, int k) {
    uint64_t seed = rng.next_u64();
    switch (rng.index(3)) {
        case 0:
            return random_state(n, k, seed, HaarPerRegister{});
        case 1: {
            Coloring base;
            for (int v = 0; v < n; ++v) base.colors.push_back(static_cast<int>(rng.index(k)));
            return random_state(n, k, seed, PerturbedHonest{0.3 * rng.uniform01(), base});
        }
        default:
            return random_state(n, k, seed, SparseSupport{1 + static_cast<int>(rng.index(n))});
    }
}

// Uniform alpha with flat beta rows: (F_N x F_K) maps this state to the point
// mass at (v = 0, j = 0), so every CondUnif outcome is a good zero.
ColoringState all_good_zero_state(int n, int k) {
    const double rn = 1.0 / std::sqrt(double(n));
    const double rk = 1.0 / std::sqrt(double(k));
    std::vector<cplx> alpha(n, cplx(rn, 0));
    std::vector<cplx> beta(static_cast<size_t>(n) * k, cplx(rk, 0));
    return ColoringState(n, k, std::move(alpha), std::move(beta));
}

std::vector<ColoringState> honest_copies(const CspInstance& inst, const Coloring& col, int kappa) {
    std::vector<ColoringState> states;
    for (int i = 0; i < kappa; ++i) states.push_back(from_coloring(inst, col));
    return states;
}

}  // namespace

TEST_CASE("unif_reject_exact") {
    SECTION("honest states always pass") {
        Rng rng(5);
        for (int t = 0; t < 50; ++t) {
            int n = 1 + static_cast<int>(rng.index(16));
            int k = 1 + static_cast<int>(rng.index(4));
            Coloring col;
            for (int v = 0; v < n; ++v) col.colors.push_back(static_cast<int>(rng.index(k)));
            REQUIRE(unif_reject_exact(from_coloring(n, k, col)) < 1e-12);
        }
    }
    SECTION("point-mass reduced state at v = 1 rejects with (1/K)(1 - 1/N)") {
        const int n = 5, k = 3;
        std::vector<cplx> alpha(n, cplx(0, 0));
        alpha[1] = cplx(1, 0);
        std::vector<cplx> beta(static_cast<size_t>(n) * k, cplx(0, 0));
        for (int v = 0; v < n; ++v) beta[static_cast<size_t>(v) * k] = cplx(1, 0);
        ColoringState s(n, k, std::move(alpha), std::move(beta));
        REQUIRE(std::abs(unif_reject_exact(s) - (1.0 / k) * (1.0 - 1.0 / n)) < 1e-12);
    }
    SECTION("N = 1 never rejects") {
        Rng rng(6);
        for (int t = 0; t < 20; ++t) {
            auto s = random_state(1, 3, rng.next_u64(), HaarPerRegister{});
            REQUIRE(unif_reject_exact(s) < 1e-12);
        }
    }
}

TEST_CASE("cond_unif_reject_exact") {
    SECTION("all good zeros: never rejects for any z") {
        std::vector<ColoringState> states(4, all_good_zero_state(5, 3));
        for (double z : {0.0, 1.0, 2.5, 4.0})
            REQUIRE(cond_unif_reject_exact(states, z) < 1e-12);
    }
    SECTION("honest provers with z = 0 never reject") {
        auto gen = generate_regular_gap_instance(6, 3, 2, 3, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 5);
        REQUIRE(cond_unif_reject_exact(states, 0.0) < 1e-12);
    }
    SECTION("10 honest provers, K = 3, z = 0.99 kappa: only the all-zeros outcome accepts") {
        auto gen = generate_regular_gap_instance(6, 3, 2, 3, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 10);
        // accept requires count >= ceil(9.9) = 10, i.e. every color reads zero
        double expected = 1.0 - std::pow(1.0 / 3.0, 10);
        REQUIRE(std::abs(cond_unif_reject_exact(states, 0.99 * 10) - expected) < 1e-12);
        REQUIRE(std::abs(oracles::cond_unif_brute_force(states, 0.99 * 10) - expected) < 1e-12);
    }
    SECTION("DP equals 3^kappa brute force") {
        Rng rng(77);
        for (int t = 0; t < 30; ++t) {
            int kappa = 2 + static_cast<int>(rng.index(5));
            int n = 2 + static_cast<int>(rng.index(5));
            int k = 2 + static_cast<int>(rng.index(3));
            std::vector<ColoringState> states;
            for (int i = 0; i < kappa; ++i) states.push_back(random_any(rng, n, k));
            double z = rng.uniform01() * kappa;
            REQUIRE(std::abs(cond_unif_reject_exact(states, z) -
                             oracles::cond_unif_brute_force(states, z)) < 1e-12);
        }
    }
    SECTION("monotone in z") {
        Rng rng(78);
        std::vector<ColoringState> states;
        for (int i = 0; i < 6; ++i) states.push_back(random_any(rng, 5, 3));
        double prev = -1;
        for (double z = 0.0; z <= 6.0; z += 0.25) {
            double rej = cond_unif_reject_exact(states, z);
            REQUIRE(rej >= prev - 1e-12);
            prev = rej;
        }
    }
    SECTION("z out of range") {
        std::vector<ColoringState> states(2, all_good_zero_state(3, 2));
        REQUIRE_THROWS_AS(cond_unif_reject_exact(states, -0.5), ContractError);
        REQUIRE_THROWS_AS(cond_unif_reject_exact(states, 2.5), ContractError);
    }
}

TEST_CASE("cons_reject_exact") {
    SECTION("honest proofs of a satisfying coloring never fire") {
        auto gen = generate_regular_gap_instance(8, 3, 3, 1, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 3);
        REQUIRE(cons_reject_exact(gen.instance, states) < 1e-12);
    }
    SECTION("one bad edge with distinct endpoints: exactly 2/N^2; self-loop: 1/N^2") {
        for (int n : {4, 8}) {
            auto bad = generate_one_bad_edge(n, 3, 11);
            auto states = honest_copies(bad.instance, bad.coloring, 2);
            double rej = cons_reject_exact(bad.instance, states);
            REQUIRE(std::abs(rej - 2.0 / (n * n)) < 1e-15);
            REQUIRE(std::abs(oracles::cons_pair_brute_force(bad.instance, states[0], states[1],
                                                            false) -
                             rej) < 1e-15);

            auto loop = generate_one_bad_edge(n, 3, 11, BadEdgeStyle::SelfLoop);
            auto lstates = honest_copies(loop.instance, loop.coloring, 2);
            REQUIRE(std::abs(cons_reject_exact(loop.instance, lstates) - 1.0 / (n * n)) < 1e-15);
        }
    }
    SECTION("symmetrized mode leaves the one-bad-edge value unchanged") {
        auto bad = generate_one_bad_edge(6, 3, 4);
        auto states = honest_copies(bad.instance, bad.coloring, 2);
        double rej = cons_reject_exact(bad.instance, states, EdgeOrderMode::Symmetrized);
        REQUIRE(std::abs(rej - 2.0 / 36.0) < 1e-15);
        REQUIRE(std::abs(oracles::cons_pair_brute_force(bad.instance, states[0], states[1], true) -
                         rej) < 1e-15);
    }
    SECTION("same vertex, different colors always rejects") {
        CspInstance inst;
        inst.n_vertices = 2;
        inst.alphabet_size = 2;
        inst.name = "edgeless";
        std::vector<cplx> alpha{cplx(1, 0), cplx(0, 0)};
        std::vector<cplx> b1{cplx(1, 0), cplx(0, 0), cplx(1, 0), cplx(0, 0)};
        std::vector<cplx> b2{cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(1, 0)};
        std::vector<ColoringState> states{ColoringState(2, 2, alpha, b1),
                                          ColoringState(2, 2, alpha, b2)};
        REQUIRE(cons_reject_exact(inst, states) == 1.0);
    }
    SECTION("pair decomposition: generic = ColCons + EdgeCons - overlap") {
        Rng rng(91);
        for (int t = 0; t < 40; ++t) {
            int n = 2 + static_cast<int>(rng.index(5));
            int k = 2 + static_cast<int>(rng.index(3));
            auto gen = generate_one_bad_edge(n, k, rng.next_u64());
            auto s1 = random_any(rng, n, k);
            auto s2 = random_any(rng, n, k);
            std::vector<ColoringState> states{s1, s2};
            double generic = cons_reject_exact(gen.instance, states);
            double col = col_cons_reject_exact(s1, s2);
            double edge = edge_cons_reject_exact(gen.instance, s1, s2);
            double both = cons_clause_overlap_exact(gen.instance, s1, s2);
            REQUIRE(std::abs(generic - (col + edge - both)) < 1e-12);
            REQUIRE(col <= generic + 1e-12);
            REQUIRE(edge <= generic + 1e-12);
            if (both == 0.0) REQUIRE(std::abs(generic - (col + edge)) < 1e-12);
        }
    }
    SECTION("symmetrized evaluation equals evaluating the symmetrized instance") {
        Rng rng(95);
        for (int t = 0; t < 30; ++t) {
            // n = 2 keeps both orientations of the cycle stored, exercising
            // the pairs-already-present path
            int n = 2 + static_cast<int>(rng.index(5));
            int k = 2 + static_cast<int>(rng.index(3));
            auto gen = generate_one_bad_edge(n, k, rng.next_u64());
            std::vector<ColoringState> states{random_any(rng, n, k), random_any(rng, n, k)};
            auto sym = symmetrized(gen.instance);
            double via_mode =
                cons_reject_exact(gen.instance, states, EdgeOrderMode::Symmetrized);
            double via_load = cons_reject_exact(sym, states, EdgeOrderMode::AsListed);
            REQUIRE(std::abs(via_mode - via_load) < 1e-12);
        }
    }
    SECTION("budget refusals") {
        auto gen = generate_regular_gap_instance(8, 3, 3, 1, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 7);
        REQUIRE_THROWS_AS(cons_reject_exact(gen.instance, states), BudgetError);
        std::vector<ColoringState> two;
        two.push_back(random_state(8, 3, 1, HaarPerRegister{}));
        two.push_back(random_state(8, 3, 2, HaarPerRegister{}));
        REQUIRE_THROWS_AS(cons_reject_exact(gen.instance, two, EdgeOrderMode::AsListed, 100),
                          BudgetError);
    }
}

TEST_CASE("swap_test_report") {
    auto s1 = random_state(4, 2, 1, HaarPerRegister{});
    auto r = swap_test_report(s1, s1);
    REQUIRE(r.exact_reject.has_value());
    REQUIRE(*r.exact_reject < 1e-12);

    auto s2 = random_state(4, 2, 2, HaarPerRegister{});
    auto sampled = swap_test_report(s1, s2, 50000, 7);
    REQUIRE(sampled.sampled_reject.has_value());
    REQUIRE_FALSE(sampled.consistency_flag);
    REQUIRE(std::abs(*sampled.sampled_reject - *sampled.exact_reject) <
            5 * sampled.std_error + 1e-9);
}

TEST_CASE("run_verifier_exact") {
    SECTION("BT09 honest completeness is exactly 1") {
        Rng rng(17);
        for (int t = 0; t < 25; ++t) {
            int n = 3 + static_cast<int>(rng.index(10));
            int k = 2 + static_cast<int>(rng.index(3));
            auto gen = generate_regular_gap_instance(n, k, 2, rng.next_u64(),
                                                     GapMode::PlantedSatisfiable);
            auto states = honest_copies(gen.instance, gen.reference, 2);
            double acc = run_verifier_exact(VerifierConfig::bt09(), gen.instance, states);
            REQUIRE(std::abs(acc - 1.0) < 1e-9);
        }
    }
    SECTION("CD10 honest with z = 0 accepts exactly") {
        auto gen = generate_regular_gap_instance(6, 3, 2, 9, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 4);
        double acc = run_verifier_exact(VerifierConfig::cd10(4, 0.0), gen.instance, states);
        REQUIRE(std::abs(acc - 1.0) < 1e-9);
    }
    SECTION("one-bad-edge honest proofs: acceptance = 1 - Cons/3") {
        auto bad = generate_one_bad_edge(8, 3, 0);
        auto states = honest_copies(bad.instance, bad.coloring, 2);
        double cons = cons_reject_exact(bad.instance, states);
        double acc = run_verifier_exact(VerifierConfig::bt09(), bad.instance, states);
        REQUIRE(std::abs(acc - (1.0 - cons / 3.0)) < 1e-12);
        REQUIRE(std::abs(acc - (1.0 - (2.0 / 64.0) / 3.0)) < 1e-12);
    }
    SECTION("arity mismatch") {
        auto gen = generate_regular_gap_instance(4, 2, 2, 1, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 3);
        REQUIRE_THROWS_AS(run_verifier_exact(VerifierConfig::bt09(), gen.instance, states),
                          ContractError);
    }
}

TEST_CASE("run_verifier_sampled") {
    SECTION("honest BT09 never rejects") {
        auto gen = generate_regular_gap_instance(6, 2, 2, 2, GapMode::PlantedSatisfiable);
        auto states = honest_copies(gen.instance, gen.reference, 2);
        auto run = run_verifier_sampled(VerifierConfig::bt09(), gen.instance, states, 20000, 5);
        REQUIRE(run.sampled_acceptance == 1.0);
        for (const auto& rep : run.reports) REQUIRE(*rep.sampled_reject == 0.0);
    }
    SECTION("deterministic given the seed") {
        Rng rng(19);
        auto gen = generate_one_bad_edge(5, 3, 1);
        std::vector<ColoringState> states{random_any(rng, 5, 3), random_any(rng, 5, 3)};
        auto a = run_verifier_sampled(VerifierConfig::bt09(), gen.instance, states, 30000, 11);
        auto b = run_verifier_sampled(VerifierConfig::bt09(), gen.instance, states, 30000, 11);
        REQUIRE(a.sampled_acceptance == b.sampled_acceptance);
        for (size_t i = 0; i < a.reports.size(); ++i)
            REQUIRE(*a.reports[i].sampled_reject == *b.reports[i].sampled_reject);
    }
    SECTION("exact and sampled agree within 5 sigma on random fixtures") {
        Rng rng(23);
        for (int t = 0; t < 10; ++t) {
            int n = 2 + static_cast<int>(rng.index(5));
            int k = 2 + static_cast<int>(rng.index(3));
            auto gen = generate_one_bad_edge(n, k, rng.next_u64());
            bool cd10 = rng.index(2) == 1;
            int kappa = cd10 ? 2 + static_cast<int>(rng.index(3)) : 2;
            std::vector<ColoringState> states;
            for (int i = 0; i < kappa; ++i) states.push_back(random_any(rng, n, k));
            VerifierConfig cfg = cd10 ? VerifierConfig::cd10(kappa, rng.uniform01() * kappa)
                                      : VerifierConfig::bt09();
            auto run = run_verifier_sampled(cfg, gen.instance, states, 100000, rng.next_u64());
            REQUIRE(run.exact_acceptance.has_value());
            for (const auto& rep : run.reports) {
                REQUIRE(rep.exact_reject.has_value());
                double sigma = std::max(
                    rep.std_error, std::sqrt(*rep.exact_reject * (1 - *rep.exact_reject) /
                                             std::max<long long>(rep.n_samples, 1)));
                REQUIRE(std::abs(*rep.exact_reject - *rep.sampled_reject) <= 5 * sigma + 1e-9);
                REQUIRE_FALSE(rep.consistency_flag);
            }
        }
    }
}

TEST_CASE("verifier config validation") {
    REQUIRE_THROWS_AS(VerifierConfig::cd10(1, 0.0), ContractError);
    REQUIRE_THROWS_AS(VerifierConfig::cd10(4, 5.0), ContractError);
    REQUIRE_THROWS_AS(VerifierConfig::cd10(4, -1.0), ContractError);
    auto c = VerifierConfig::cd10(4, VerifierConfig::z_from_fraction(0.99, 4));
    REQUIRE(std::abs(c.z - 3.96) < 1e-12);
}
