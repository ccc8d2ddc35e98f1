#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "qmalab/state.hpp"

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
            double eps = std::pow(10.0, -4.0 * rng.uniform01());
            return random_state(n, k, seed, PerturbedHonest{eps, base});
        }
        default:
            return random_state(n, k, seed, SparseSupport{1 + static_cast<int>(rng.index(n))});
    }
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("from_coloring produces the uniform honest encoding") {
    auto s = from_coloring(2, 2, Coloring{{0, 1}});
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(s.vertex_amp[0] - cplx(r, 0)) < 1e-15);
    REQUIRE(std::abs(s.vertex_amp[1] - cplx(r, 0)) < 1e-15);
    REQUIRE(s.beta(0, 0) == cplx(1, 0));
    REQUIRE(s.beta(0, 1) == cplx(0, 0));
    REQUIRE(s.beta(1, 0) == cplx(0, 0));
    REQUIRE(s.beta(1, 1) == cplx(1, 0));

    auto single = from_coloring(1, 3, Coloring{{2}});
    REQUIRE(std::abs(single.vertex_amp[0] - cplx(1, 0)) < 1e-15);
    REQUIRE_NOTHROW(single.validate());
}

TEST_CASE("dft basics") {
    SECTION("n = 1") {
        auto f = dft(1);
        REQUIRE(f.size() == 1);
        REQUIRE(std::abs(f[0] - cplx(1, 0)) < 1e-15);
    }
    SECTION("n = 2 maps |0> to the uniform vector") {
        auto f = dft(2);
        // column j = 0
        const double r = 1.0 / std::sqrt(2.0);
        REQUIRE(std::abs(f[0 * 2 + 0] - cplx(r, 0)) < 1e-15);
        REQUIRE(std::abs(f[1 * 2 + 0] - cplx(r, 0)) < 1e-15);
    }
    SECTION("F4 is unitary to 1e-12") {
        auto f = dft(4);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                cplx acc(0, 0);
                for (int t = 0; t < 4; ++t) acc += f[a * 4 + t] * std::conj(f[b * 4 + t]);
                REQUIRE(std::abs(acc - (a == b ? cplx(1, 0) : cplx(0, 0))) < 1e-12);
            }
    }
    SECTION("unitarity for n in 1..64") {
        Rng rng(7);
        for (int n = 1; n <= 64; ++n) {
            auto f = dft(n);
            // norm preservation on a random vector
            std::vector<cplx> x(n), y(n, cplx(0, 0));
            double nx = 0;
            for (auto& z : x) z = cplx(rng.normal(), rng.normal());
            for (const auto& z : x) nx += std::norm(z);
            for (int a = 0; a < n; ++a)
                for (int t = 0; t < n; ++t) y[a] += f[static_cast<size_t>(a) * n + t] * x[t];
            double ny = 0;
            for (const auto& z : y) ny += std::norm(z);
            REQUIRE(std::abs(std::sqrt(ny) - std::sqrt(nx)) < 1e-9);
            // rows of F are orthonormal: F F^dagger = I
            for (int a = 0; a < n; ++a) {
                cplx diag(0, 0);
                for (int t = 0; t < n; ++t)
                    diag += f[static_cast<size_t>(a) * n + t] *
                            std::conj(f[static_cast<size_t>(a) * n + t]);
                REQUIRE(std::abs(diag - cplx(1, 0)) < 1e-9);
            }
        }
    }
    SECTION("n = 0 rejected") { REQUIRE_THROWS_AS(dft(0), ContractError); }
}

TEST_CASE("apply_fourier") {
    SECTION("identity when both flags are off") {
        auto s = random_state(5, 3, 11, HaarPerRegister{});
        auto j = apply_fourier(s, false, false);
        for (int v = 0; v < 5; ++v)
            for (int c = 0; c < 3; ++c)
                REQUIRE(std::abs(j.at(v, c) - s.vertex_amp[v] * s.beta(v, c)) < 1e-15);
    }
    SECTION("honest state: the j = 0 column collapses onto v = 0") {
        auto s = from_coloring(6, 3, Coloring{{0, 2, 1, 1, 0, 2}});
        auto phi = apply_fourier(s, true, true);
        double off = 0;
        for (int v = 1; v < 6; ++v) off += std::norm(phi.at(v, 0));
        REQUIRE(off < 1e-18);
        REQUIRE(std::abs(std::norm(phi.at(0, 0)) - 1.0 / 3.0) < 1e-12);
    }
    SECTION("norm preserved on random states") {
        Rng rng(3);
        for (int t = 0; t < 1000; ++t) {
            int n = 1 + static_cast<int>(rng.index(8));
            int k = 1 + static_cast<int>(rng.index(4));
            auto s = random_any(rng, n, k);
            bool onv = rng.index(2), onc = rng.index(2);
            auto j = apply_fourier(s, onv, onc);
            double norm = 0;
            for (const auto& z : j.amp) norm += std::norm(z);
            REQUIRE(std::abs(norm - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("measure_distribution") {
    auto s = from_coloring(4, 2, Coloring{{0, 1, 1, 0}});
    auto d = measure_distribution(apply_fourier(s, false, false));
    for (int v = 0; v < 4; ++v) {
        REQUIRE(std::abs(d.at(v, s.beta(v, 0) != cplx(0, 0) ? 0 : 1) - 0.25) < 1e-12);
    }
    double sum = 0;
    for (double p : d.probs) sum += p;
    REQUIRE(std::abs(sum - 1.0) < 1e-9);

    // point mass in, point mass out
    std::vector<cplx> alpha{cplx(1, 0), cplx(0, 0)};
    std::vector<cplx> beta{cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)};
    ColoringState pm(2, 2, alpha, beta);
    auto dp = measure_distribution(apply_fourier(pm, false, false));
    REQUIRE(std::abs(dp.at(0, 1) - 1.0) < 1e-12);
}

TEST_CASE("swap_reject_prob") {
    auto s = random_state(4, 3, 9, HaarPerRegister{});
    REQUIRE(swap_reject_prob(s, s) < 1e-12);

    // disjoint vertex supports -> orthogonal
    std::vector<cplx> a1{cplx(1, 0), cplx(0, 0)}, a2{cplx(0, 0), cplx(1, 0)};
    std::vector<cplx> b{cplx(1, 0), cplx(1, 0)};
    ColoringState o1(2, 1, a1, b), o2(2, 1, a2, b);
    REQUIRE(std::abs(swap_reject_prob(o1, o2) - 0.5) < 1e-12);

    // |<phi|psi>|^2 = 1/2 -> rejection 1/4
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<cplx> a3{cplx(r, 0), cplx(r, 0)};
    ColoringState h(2, 1, a3, b);
    REQUIRE(std::abs(swap_reject_prob(o1, h) - 0.25) < 1e-12);

    auto other = random_state(3, 3, 10, HaarPerRegister{});
    REQUIRE_THROWS_AS(swap_reject_prob(s, other), ContractError);
}

TEST_CASE("statistical_distance") {
    OutcomeDistribution p{1, 2, {1.0, 0.0}};
    OutcomeDistribution q{1, 2, {0.5, 0.5}};
    OutcomeDistribution r{1, 2, {0.0, 1.0}};
    REQUIRE(statistical_distance(p, p) == 0.0);
    REQUIRE(std::abs(statistical_distance(p, r) - 1.0) < 1e-15);
    REQUIRE(std::abs(statistical_distance(p, q) - 0.5) < 1e-15);
    OutcomeDistribution bad{2, 1, {0.5, 0.5}};
    REQUIRE_THROWS_AS(statistical_distance(p, bad), ContractError);
}

TEST_CASE("trace distance and the swap identity") {
    auto s = random_state(5, 2, 1, HaarPerRegister{});
    REQUIRE(pure_trace_distance(s, s) < 1e-9);

    std::vector<cplx> a1{cplx(1, 0), cplx(0, 0)}, a2{cplx(0, 0), cplx(1, 0)};
    std::vector<cplx> b{cplx(1, 0), cplx(1, 0)};
    REQUIRE(std::abs(pure_trace_distance(ColoringState(2, 1, a1, b), ColoringState(2, 1, a2, b)) -
                     1.0) < 1e-12);

    Rng rng(21);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng.index(8));
        int k = 1 + static_cast<int>(rng.index(4));
        auto x = random_any(rng, n, k);
        auto y = random_any(rng, n, k);
        double td = pure_trace_distance(x, y);
        REQUIRE(std::abs(td * td - 2.0 * swap_reject_prob(x, y)) < 1e-9);
    }
}

TEST_CASE("measurement contraction: SD <= sqrt(2 REJ) in all measured bases") {
    Rng rng(31);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng.index(8));
        int k = 1 + static_cast<int>(rng.index(4));
        auto x = random_any(rng, n, k);
        auto y = random_any(rng, n, k);
        double bound = std::sqrt(2.0 * swap_reject_prob(x, y));
        for (auto [onv, onc] :
             {std::pair{false, false}, {true, false}, {false, true}, {true, true}}) {
            double sd = statistical_distance(measure_distribution(apply_fourier(x, onv, onc)),
                                             measure_distribution(apply_fourier(y, onv, onc)));
            REQUIRE(sd <= bound + 1e-9);
        }
    }
}

TEST_CASE("color marginal after Fourier") {
    SECTION("honest state") {
        const int n = 5, k = 3;
        auto s = from_coloring(n, k, Coloring{{0, 1, 2, 0, 1}});
        auto m = color_marginal_after_fourier(s);
        double sum = 0;
        for (int j = 0; j < k; ++j) {
            REQUIRE(std::abs(m.p[j] - 1.0 / k) < 1e-12);
            REQUIRE(m.gammas[j].has_value());
            for (int v = 0; v < n; ++v)
                REQUIRE(std::abs(std::norm((*m.gammas[j])[v]) - 1.0 / n) < 1e-12);
            sum += m.p[j];
        }
        REQUIRE(std::abs(sum - 1.0) < 1e-9);
    }
    SECTION("zero-probability column is explicitly undefined") {
        const double r = 1.0 / std::sqrt(2.0);
        std::vector<cplx> alpha{cplx(r, 0), cplx(r, 0)};
        std::vector<cplx> beta{cplx(r, 0), cplx(-r, 0), cplx(r, 0), cplx(-r, 0)};
        ColoringState s(2, 2, alpha, beta);
        auto m = color_marginal_after_fourier(s);
        REQUIRE(m.p[0] < 1e-24);
        REQUIRE_FALSE(m.gammas[0].has_value());
        REQUIRE(std::abs(m.p[1] - 1.0) < 1e-12);
    }
    SECTION("decomposition P(v, j) = p_j |gamma_v(j)|^2") {
        Rng rng(17);
        for (int t = 0; t < 1000; ++t) {
            int n = 1 + static_cast<int>(rng.index(6));
            int k = 1 + static_cast<int>(rng.index(4));
            auto s = random_any(rng, n, k);
            auto m = color_marginal_after_fourier(s);
            auto d = measure_distribution(apply_fourier(s, false, true));
            for (int j = 0; j < k; ++j) {
                if (!m.gammas[j]) continue;
                for (int v = 0; v < n; ++v)
                    REQUIRE(std::abs(d.at(v, j) - m.p[j] * std::norm((*m.gammas[j])[v])) < 1e-9);
            }
        }
    }
}

TEST_CASE("small_amplitude_set") {
    const int n = 8;
    auto honest = from_coloring(n, 2, Coloring{{0, 1, 0, 1, 0, 1, 0, 1}});
    REQUIRE(small_amplitude_set(honest, 1.0 / (2.0 * n)).empty());
    REQUIRE(small_amplitude_set(honest, 2.0 / n).size() == n);

    std::vector<cplx> alpha(n, cplx(0, 0));
    alpha[0] = cplx(1, 0);
    std::vector<cplx> beta(n * 2, cplx(0, 0));
    for (int v = 0; v < n; ++v) beta[v * 2] = cplx(1, 0);
    ColoringState pm(n, 2, alpha, beta);
    auto r = small_amplitude_set(pm, 1.0 / (8.0 * n));
    REQUIRE(r.size() == n - 1);
    for (int v : r) REQUIRE(v != 0);

    REQUIRE_THROWS_AS(small_amplitude_set(honest, 0.0), ContractError);
    REQUIRE_THROWS_AS(small_amplitude_set(honest, 1.5), ContractError);
}

TEST_CASE("random_state profiles") {
    SECTION("perturbed honest with epsilon 0 is exactly the honest state") {
        Coloring col{{1, 0, 2}};
        auto a = random_state(3, 3, 99, PerturbedHonest{0.0, col});
        auto b = from_coloring(3, 3, col);
        REQUIRE(max_abs_diff(a.vertex_amp, b.vertex_amp) == 0.0);
        REQUIRE(max_abs_diff(a.color_amp, b.color_amp) == 0.0);
    }
    SECTION("determinism and invariants") {
        Rng rng(13);
        for (int t = 0; t < 300; ++t) {
            int n = 1 + static_cast<int>(rng.index(8));
            int k = 1 + static_cast<int>(rng.index(4));
            uint64_t seed = rng.next_u64();
            auto s1 = random_state(n, k, seed, HaarPerRegister{});
            auto s2 = random_state(n, k, seed, HaarPerRegister{});
            REQUIRE(max_abs_diff(s1.vertex_amp, s2.vertex_amp) == 0.0);
            REQUIRE(max_abs_diff(s1.color_amp, s2.color_amp) == 0.0);
            REQUIRE_NOTHROW(s1.validate());
            auto sp = random_state(n, k, seed, SparseSupport{1 + static_cast<int>(rng.index(n))});
            REQUIRE_NOTHROW(sp.validate());
        }
    }
    SECTION("sparse support bounds") {
        REQUIRE_THROWS_AS(random_state(4, 2, 0, SparseSupport{0}), ContractError);
        REQUIRE_THROWS_AS(random_state(4, 2, 0, SparseSupport{5}), ContractError);
    }
}

TEST_CASE("gen-uniformity bound on reduced states") {
    // premises p_j >= 1/c1 and |alpha_v|^2 < 1/(c2 N) imply
    // |gamma_v(j)|^2 < c1/(c2 N)
    Rng rng(53);
    int checked = 0;
    for (int t = 0; t < 2000; ++t) {
        int n = 2 + static_cast<int>(rng.index(10));
        int k = 2 + static_cast<int>(rng.index(4));
        auto s = random_any(rng, n, k);
        auto m = color_marginal_after_fourier(s);
        int j = static_cast<int>(rng.index(k));
        int v = static_cast<int>(rng.index(n));
        if (!m.gammas[j]) continue;
        double c1 = (1.0 / m.p[j]) * (1.0 + rng.uniform01());
        double av2 = std::norm(s.vertex_amp[v]);
        if (av2 <= 0) continue;
        double c2 = (1.0 / (av2 * n)) * (0.1 + 0.8 * rng.uniform01());
        if (!(m.p[j] >= 1.0 / c1 && av2 < 1.0 / (c2 * n))) continue;
        ++checked;
        double g2 = std::norm((*m.gammas[j])[v]);
        REQUIRE(g2 < c1 / (c2 * n) + 1e-12);
    }
    REQUIRE(checked > 500);
}

TEST_CASE("Fourier outcome bound from amplitude non-uniformity") {
    // P[measure v in F_N |gamma>] <= 1 - (sum_w ||gamma_w|^2 - 1/N|)^2 / 4
    Rng rng(59);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng.index(12));
        std::vector<cplx> g(n);
        for (auto& z : g) z = cplx(rng.normal(), rng.normal());
        double norm = 0;
        for (const auto& z : g) norm += std::norm(z);
        double inv = 1.0 / std::sqrt(norm);
        for (auto& z : g) z *= inv;

        double dev = 0;
        for (const auto& z : g) dev += std::abs(std::norm(z) - 1.0 / n);
        double bound = 1.0 - dev * dev / 4.0;

        auto f = dft(n);
        for (int v = 0; v < n; ++v) {
            cplx amp(0, 0);
            for (int w = 0; w < n; ++w) amp += f[static_cast<size_t>(v) * n + w] * g[w];
            REQUIRE(std::norm(amp) <= bound + 1e-9);
        }
    }
}
