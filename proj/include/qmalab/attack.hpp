#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qmalab/common.hpp"
#include "qmalab/csp.hpp"
#include "qmalab/state.hpp"
#include "qmalab/verifier.hpp"

namespace qmalab {

enum class GradientMode { FiniteDifference, AnalyticWhereAvailable };
enum class StrategyClass { GeneralProduct, ClassicalSuperposition, ClassicalMixtureSupport };

struct AttackConfig {
    VerifierConfig verifier = VerifierConfig::bt09();
    int restarts = 20;
    int max_iters = 200;
    double step_init = 0.1;
    double step_decay = 0.5;
    GradientMode gradient = GradientMode::FiniteDifference;
    double fd_step = 1e-5;
    uint64_t seed = 0;
    StrategyClass strategy = StrategyClass::GeneralProduct;
    // objective fallback when exact Cons evaluation is refused (large kappa)
    long long sample_fallback = 100'000;
    // optional honest initialization target (e.g. the oracle's best coloring)
    std::optional<Coloring> honest_hint;
};

struct TracePoint {
    int iteration = 0;
    double acceptance = 0.0;
};

struct AttackResult {
    std::vector<ColoringState> best_states;
    double best_acceptance = 0.0;
    std::vector<std::vector<TracePoint>> traces;  // one per restart
    AttackConfig config;
    double wall_time_sec = 0.0;   // volatile; excluded from canonical serializations
    bool exact_objective = true;  // false when the sampled fallback was used
    int best_restart = -1;
};

namespace attack_detail {

// Raw parameter layout per prover: N complex vertex amplitudes then N*K
// complex color amplitudes, interleaved re/im. The objective's polynomial
// extension is evaluated on these without normalization; projection maps back
// to the product of unit spheres.

struct Layout {
    int n = 0, k = 0, kappa = 0;
    size_t per_prover() const { return 2 * (static_cast<size_t>(n) + static_cast<size_t>(n) * k); }
    size_t total() const { return per_prover() * kappa; }
    size_t alpha_off(int p) const { return per_prover() * p; }
    size_t beta_off(int p) const { return per_prover() * p + 2 * static_cast<size_t>(n); }
};

inline cplx get(const std::vector<double>& x, size_t off, size_t idx) {
    return cplx(x[off + 2 * idx], x[off + 2 * idx + 1]);
}

inline void add(std::vector<double>& g, size_t off, size_t idx, double dre, double dim) {
    g[off + 2 * idx] += dre;
    g[off + 2 * idx + 1] += dim;
}

inline void normalize_register(std::vector<double>& x, size_t off, size_t count) {
    double s = 0;
    for (size_t i = 0; i < 2 * count; ++i) s += x[off + i] * x[off + i];
    if (s <= 0) {  // degenerate register snaps to a basis state
        for (size_t i = 0; i < 2 * count; ++i) x[off + i] = 0.0;
        x[off] = 1.0;
        return;
    }
    double inv = 1.0 / std::sqrt(s);
    for (size_t i = 0; i < 2 * count; ++i) x[off + i] *= inv;
}

inline void project(const Layout& L, std::vector<double>& x) {
    for (int p = 0; p < L.kappa; ++p) {
        normalize_register(x, L.alpha_off(p), static_cast<size_t>(L.n));
        for (int v = 0; v < L.n; ++v)
            normalize_register(x, L.beta_off(p) + 2 * static_cast<size_t>(v) * L.k,
                               static_cast<size_t>(L.k));
    }
}

// remove the radial component of g within each register (tangent projection)
inline void project_tangent(const Layout& L, const std::vector<double>& x, std::vector<double>& g) {
    auto tangent = [&](size_t off, size_t count) {
        double dot = 0;
        for (size_t i = 0; i < 2 * count; ++i) dot += x[off + i] * g[off + i];
        for (size_t i = 0; i < 2 * count; ++i) g[off + i] -= dot * x[off + i];
    };
    for (int p = 0; p < L.kappa; ++p) {
        tangent(L.alpha_off(p), static_cast<size_t>(L.n));
        for (int v = 0; v < L.n; ++v)
            tangent(L.beta_off(p) + 2 * static_cast<size_t>(v) * L.k, static_cast<size_t>(L.k));
    }
}

inline std::vector<ColoringState> to_states(const Layout& L, std::vector<double> x) {
    project(L, x);
    std::vector<ColoringState> states;
    states.reserve(L.kappa);
    for (int p = 0; p < L.kappa; ++p) {
        std::vector<cplx> alpha(static_cast<size_t>(L.n));
        std::vector<cplx> beta(static_cast<size_t>(L.n) * L.k);
        for (int v = 0; v < L.n; ++v) alpha[v] = get(x, L.alpha_off(p), v);
        for (size_t i = 0; i < beta.size(); ++i) beta[i] = get(x, L.beta_off(p), i);
        states.emplace_back(L.n, L.k, std::move(alpha), std::move(beta));
    }
    return states;
}

inline std::vector<double> from_states(const Layout& L, std::span<const ColoringState> states) {
    std::vector<double> x(L.total());
    for (int p = 0; p < L.kappa; ++p) {
        for (int v = 0; v < L.n; ++v) {
            x[L.alpha_off(p) + 2 * v] = states[p].vertex_amp[v].real();
            x[L.alpha_off(p) + 2 * v + 1] = states[p].vertex_amp[v].imag();
        }
        for (size_t i = 0; i < static_cast<size_t>(L.n) * L.k; ++i) {
            x[L.beta_off(p) + 2 * i] = states[p].color_amp[i].real();
            x[L.beta_off(p) + 2 * i + 1] = states[p].color_amp[i].imag();
        }
    }
    return x;
}

// --- raw polynomial extension of the BT09 acceptance --------------------------

struct Bt09Raw {
    const CspInstance* inst;
    EdgeIndex idx;
    Layout L;

    Bt09Raw(const CspInstance& instance, EdgeOrderMode mode, const Layout& layout)
        : inst(&instance), idx(instance, mode), L(layout) {}

    // swap overlap s and the per-vertex color overlaps t_v
    cplx overlap(const std::vector<double>& x, std::vector<cplx>* t_out = nullptr) const {
        cplx s(0, 0);
        for (int v = 0; v < L.n; ++v) {
            cplx t(0, 0);
            for (int j = 0; j < L.k; ++j)
                t += std::conj(get(x, L.beta_off(0), static_cast<size_t>(v) * L.k + j)) *
                     get(x, L.beta_off(1), static_cast<size_t>(v) * L.k + j);
            if (t_out) (*t_out)[v] = t;
            s += std::conj(get(x, L.alpha_off(0), v)) * get(x, L.alpha_off(1), v) * t;
        }
        return s;
    }

    // Unif rejection of prover p's raw amplitudes via the j = 0 Fourier column
    double unif(const std::vector<double>& x, int p, std::vector<cplx>* t_out = nullptr,
                cplx* g_out = nullptr) const {
        const double rk = 1.0 / std::sqrt(double(L.k));
        double mass = 0;
        cplx g(0, 0);
        for (int v = 0; v < L.n; ++v) {
            cplx t(0, 0);
            for (int j = 0; j < L.k; ++j)
                t += get(x, L.beta_off(p), static_cast<size_t>(v) * L.k + j);
            t *= rk;
            if (t_out) (*t_out)[v] = t;
            cplx c = get(x, L.alpha_off(p), v) * t;
            mass += std::norm(c);
            g += c;
        }
        if (g_out) *g_out = g;
        return mass - std::norm(g) / L.n;
    }

    double cons(const std::vector<double>& x, std::vector<double>* w1 = nullptr,
                std::vector<double>* w2 = nullptr) const {
        // D_p(v, j) = |alpha_v|^2 |beta_{v,j}|^2 on the raw values
        std::vector<double> d1(static_cast<size_t>(L.n) * L.k), d2(d1.size());
        for (int v = 0; v < L.n; ++v)
            for (int j = 0; j < L.k; ++j) {
                size_t i = static_cast<size_t>(v) * L.k + j;
                d1[i] = std::norm(get(x, L.alpha_off(0), v)) * std::norm(get(x, L.beta_off(0), i));
                d2[i] = std::norm(get(x, L.alpha_off(1), v)) * std::norm(get(x, L.beta_off(1), i));
            }
        if (w1) w1->assign(d1.size(), 0.0);
        if (w2) w2->assign(d1.size(), 0.0);
        double rej = 0;
        for (int v1 = 0; v1 < L.n; ++v1)
            for (int j1 = 0; j1 < L.k; ++j1) {
                size_t i1 = static_cast<size_t>(v1) * L.k + j1;
                if (d1[i1] == 0.0 && !w1) continue;
                for (int v2 = 0; v2 < L.n; ++v2)
                    for (int j2 = 0; j2 < L.k; ++j2) {
                        size_t i2 = static_cast<size_t>(v2) * L.k + j2;
                        if (!idx.pair_fires(v1, j1, v2, j2)) continue;
                        rej += d1[i1] * d2[i2];
                        if (w1) (*w1)[i1] += d2[i2];
                        if (w2) (*w2)[i2] += d1[i1];
                    }
            }
        return rej;
    }

    double acceptance(const std::vector<double>& x) const {
        double rs = std::max(0.0, (1.0 - std::norm(overlap(x))) / 2.0);
        double u1 = unif(x, 0), u2 = unif(x, 1);
        double uu = 1.0 - (1.0 - u1) * (1.0 - u2);
        return 1.0 - (rs + cons(x) + uu) / 3.0;
    }

    // Exact gradient of the raw acceptance polynomial.
    std::vector<double> gradient(const std::vector<double>& x) const {
        std::vector<double> g(L.total(), 0.0);
        std::vector<cplx> t(L.n);
        cplx s = overlap(x, &t);

        // d REJ_swap = -(1/2) d|s|^2; overall factor -(1/3) on every term
        const double f_swap = -(1.0 / 3.0) * (-0.5);
        for (int v = 0; v < L.n; ++v) {
            cplx a1 = get(x, L.alpha_off(0), v), a2 = get(x, L.alpha_off(1), v);
            // prover 1 alpha appears conjugated: dd = ds/d(conj a1)
            cplx dd = a2 * t[v];
            add(g, L.alpha_off(0), v, f_swap * 2 * std::real(std::conj(s) * dd),
                f_swap * 2 * std::imag(std::conj(s) * dd));
            // prover 2 alpha appears plain
            cplx dd2 = std::conj(a1) * t[v];
            add(g, L.alpha_off(1), v, f_swap * 2 * std::real(std::conj(s) * dd2),
                f_swap * (-2) * std::imag(std::conj(s) * dd2));
            for (int j = 0; j < L.k; ++j) {
                size_t i = static_cast<size_t>(v) * L.k + j;
                cplx b1 = get(x, L.beta_off(0), i), b2 = get(x, L.beta_off(1), i);
                cplx db1 = std::conj(a1) * a2 * b2;  // ds/d(conj b1)
                add(g, L.beta_off(0), i, f_swap * 2 * std::real(std::conj(s) * db1),
                    f_swap * 2 * std::imag(std::conj(s) * db1));
                cplx db2 = std::conj(a1) * a2 * std::conj(b1);  // ds/d(b2)
                add(g, L.beta_off(1), i, f_swap * 2 * std::real(std::conj(s) * db2),
                    f_swap * (-2) * std::imag(std::conj(s) * db2));
            }
        }

        // d REJ_cons via the conditional fire weights
        std::vector<double> w1, w2;
        cons(x, &w1, &w2);
        const double f_cons = -(1.0 / 3.0);
        for (int p = 0; p < 2; ++p) {
            const auto& w = p == 0 ? w1 : w2;
            for (int v = 0; v < L.n; ++v) {
                cplx a = get(x, L.alpha_off(p), v);
                double asum = 0;
                for (int j = 0; j < L.k; ++j) {
                    size_t i = static_cast<size_t>(v) * L.k + j;
                    cplx b = get(x, L.beta_off(p), i);
                    asum += std::norm(b) * w[i];
                    double coef = f_cons * std::norm(a) * w[i];
                    add(g, L.beta_off(p), i, coef * 2 * b.real(), coef * 2 * b.imag());
                }
                add(g, L.alpha_off(p), v, f_cons * asum * 2 * a.real(),
                    f_cons * asum * 2 * a.imag());
            }
        }

        // d REJ_{Unif and Unif}
        std::vector<cplx> tu(L.n);
        cplx gu;
        double u[2];
        for (int p = 0; p < 2; ++p) u[p] = unif(x, p);
        const double rk = 1.0 / std::sqrt(double(L.k));
        for (int p = 0; p < 2; ++p) {
            double outer = -(1.0 / 3.0) * (1.0 - u[1 - p]);
            unif(x, p, &tu, &gu);
            for (int v = 0; v < L.n; ++v) {
                cplx a = get(x, L.alpha_off(p), v);
                cplx gt = std::conj(gu) * tu[v];
                add(g, L.alpha_off(p), v,
                    outer * (2 * a.real() * std::norm(tu[v]) - (2.0 / L.n) * std::real(gt)),
                    outer * (2 * a.imag() * std::norm(tu[v]) + (2.0 / L.n) * std::imag(gt)));
                cplx ga = std::conj(gu) * a;
                for (int j = 0; j < L.k; ++j) {
                    size_t i = static_cast<size_t>(v) * L.k + j;
                    add(g, L.beta_off(p), i,
                        outer * (2 * rk) *
                            (std::norm(a) * tu[v].real() - std::real(ga) / L.n),
                        outer * (2 * rk) *
                            (std::norm(a) * tu[v].imag() + std::imag(ga) / L.n));
                }
            }
        }
        return g;
    }
};

}  // namespace attack_detail

// Central finite differences of the raw acceptance extension. Used by the
// gradient property tests and as the generic ascent direction.
inline std::vector<double> bt09_fd_gradient_raw(const CspInstance& inst, EdgeOrderMode mode,
                                                std::span<const ColoringState> states, double h) {
    require(states.size() == 2, "bt09_fd_gradient_raw: exactly two provers");
    attack_detail::Layout L{states[0].n_vertices, states[0].alphabet_size,
                            static_cast<int>(states.size())};
    attack_detail::Bt09Raw raw(inst, mode, L);
    std::vector<double> x = attack_detail::from_states(L, states);
    std::vector<double> g(L.total());
    for (size_t i = 0; i < x.size(); ++i) {
        double keep = x[i];
        x[i] = keep + h;
        double up = raw.acceptance(x);
        x[i] = keep - h;
        double dn = raw.acceptance(x);
        x[i] = keep;
        g[i] = (up - dn) / (2 * h);
    }
    return g;
}

inline std::vector<double> bt09_analytic_gradient_raw(const CspInstance& inst, EdgeOrderMode mode,
                                                      std::span<const ColoringState> states) {
    require(states.size() == 2, "bt09_analytic_gradient_raw: exactly two provers");
    attack_detail::Layout L{states[0].n_vertices, states[0].alphabet_size,
                            static_cast<int>(states.size())};
    attack_detail::Bt09Raw raw(inst, mode, L);
    std::vector<double> x = attack_detail::from_states(L, states);
    return raw.gradient(x);
}

// Search for cheating product proofs maximizing the verifier's acceptance.
inline AttackResult attack(const CspInstance& inst, const AttackConfig& cfg) {
    inst.validate();
    require(cfg.restarts >= 1, "attack: restarts must be >= 1");
    require(cfg.fd_step > 0, "attack: finite-difference step must be positive");
    const auto t0 = std::chrono::steady_clock::now();

    const int n = inst.n_vertices, k = inst.alphabet_size;
    attack_detail::Layout L{n, k, cfg.verifier.kappa};

    AttackResult result;
    result.config = cfg;

    // exact objective unless the Cons enumeration is refused at this arity
    bool exact = true;
    {
        std::vector<ColoringState> probe;
        for (int i = 0; i < cfg.verifier.kappa; ++i)
            probe.push_back(random_state(n, k, splitmix64(cfg.seed), HaarPerRegister{}));
        try {
            run_verifier_exact(cfg.verifier, inst, probe);
        } catch (const BudgetError&) {
            exact = false;
        }
    }
    result.exact_objective = exact;

    Rng base(cfg.seed);
    auto objective = [&](std::span<const ColoringState> states, uint64_t sample_seed) {
        if (exact) return run_verifier_exact(cfg.verifier, inst, states);
        return run_verifier_sampled(cfg.verifier, inst, states, cfg.sample_fallback, sample_seed)
            .sampled_acceptance;
    };

    if (cfg.strategy != StrategyClass::GeneralProduct) {
        // Discrete hill climbs over the classical strategy classes; all
        // provers send the same state.
        double best = -1.0;
        for (int r = 0; r < cfg.restarts; ++r) {
            Rng rng = base.stream(r);
            std::vector<TracePoint> trace;
            Coloring col;
            std::vector<uint8_t> support(static_cast<size_t>(n), 1);
            if (cfg.honest_hint && r % 2 == 1) {
                col = *cfg.honest_hint;
            } else {
                col.colors.resize(n);
                for (int v = 0; v < n; ++v) col.colors[v] = static_cast<int>(rng.index(k));
            }
            if (cfg.strategy == StrategyClass::ClassicalMixtureSupport && r % 3 == 2) {
                for (int v = 0; v < n; ++v) support[v] = rng.index(2) ? 1 : 0;
                if (std::count(support.begin(), support.end(), 1) == 0) support[0] = 1;
            }
            auto make_states = [&]() {
                int size = static_cast<int>(std::count(support.begin(), support.end(), 1));
                std::vector<cplx> alpha(static_cast<size_t>(n), cplx(0, 0));
                double amp = 1.0 / std::sqrt(double(size));
                for (int v = 0; v < n; ++v)
                    if (support[v]) alpha[v] = cplx(amp, 0);
                std::vector<cplx> beta(static_cast<size_t>(n) * k, cplx(0, 0));
                for (int v = 0; v < n; ++v) beta[static_cast<size_t>(v) * k + col.colors[v]] = 1.0;
                return std::vector<ColoringState>(static_cast<size_t>(cfg.verifier.kappa),
                                                  ColoringState(n, k, alpha, beta));
            };
            auto states = make_states();
            double acc = objective(states, rng.next_u64());
            trace.push_back({0, acc});
            for (int iter = 1; iter <= cfg.max_iters; ++iter) {
                // steepest single-coordinate move
                double move_acc = acc;
                int move_v = -1, move_c = -1, move_toggle = -1;
                for (int v = 0; v < n; ++v) {
                    if (support[v]) {
                        int old = col.colors[v];
                        for (int c = 0; c < k; ++c) {
                            if (c == old) continue;
                            col.colors[v] = c;
                            auto st = make_states();
                            double a = objective(st, rng.next_u64());
                            if (a > move_acc + 1e-15) {
                                move_acc = a;
                                move_v = v;
                                move_c = c;
                                move_toggle = -1;
                            }
                        }
                        col.colors[v] = old;
                    }
                    if (cfg.strategy == StrategyClass::ClassicalMixtureSupport) {
                        int cnt = static_cast<int>(std::count(support.begin(), support.end(), 1));
                        if (support[v] && cnt == 1) continue;
                        support[v] ^= 1;
                        auto st = make_states();
                        double a = objective(st, rng.next_u64());
                        support[v] ^= 1;
                        if (a > move_acc + 1e-15) {
                            move_acc = a;
                            move_v = v;
                            move_c = -1;
                            move_toggle = v;
                        }
                    }
                }
                if (move_v < 0) break;
                if (move_toggle >= 0)
                    support[move_toggle] ^= 1;
                else
                    col.colors[move_v] = move_c;
                acc = move_acc;
                trace.push_back({iter, acc});
            }
            if (acc > best) {
                best = acc;
                result.best_states = make_states();
                result.best_acceptance = acc;
                result.best_restart = r;
            }
            result.traces.push_back(std::move(trace));
        }
    } else {
        std::optional<attack_detail::Bt09Raw> raw;
        if (cfg.verifier.protocol == Protocol::BT09)
            raw.emplace(inst, cfg.verifier.edge_mode, L);
        const bool analytic = cfg.gradient == GradientMode::AnalyticWhereAvailable &&
                              raw.has_value() && exact;

        double best = -1.0;
        const double epsilons[4] = {0.0, 1e-3, 1e-2, 1e-1};
        for (int r = 0; r < cfg.restarts; ++r) {
            Rng rng = base.stream(r);
            std::vector<ColoringState> init;
            for (int p = 0; p < cfg.verifier.kappa; ++p) {
                uint64_t s = rng.next_u64();
                if (cfg.honest_hint && r % 2 == 1)
                    init.push_back(random_state(
                        n, k, s, PerturbedHonest{epsilons[(r / 2) % 4], *cfg.honest_hint}));
                else
                    init.push_back(random_state(n, k, s, HaarPerRegister{}));
            }
            std::vector<double> x = attack_detail::from_states(L, init);
            double acc = objective(init, rng.next_u64());
            std::vector<TracePoint> trace{{0, acc}};

            double step = cfg.step_init;
            int consecutive_fail = 0;
            for (int iter = 1; iter <= cfg.max_iters; ++iter) {
                std::vector<double> g;
                if (analytic) {
                    g = raw->gradient(x);
                    attack_detail::project_tangent(L, x, g);
                } else {
                    // finite differences of acceptance-after-projection
                    g.assign(L.total(), 0.0);
                    std::vector<double> xp = x;
                    for (size_t i = 0; i < x.size(); ++i) {
                        double keep = xp[i];
                        xp[i] = keep + cfg.fd_step;
                        double up = objective(attack_detail::to_states(L, xp), rng.base_seed());
                        xp[i] = keep - cfg.fd_step;
                        double dn = objective(attack_detail::to_states(L, xp), rng.base_seed());
                        xp[i] = keep;
                        g[i] = (up - dn) / (2 * cfg.fd_step);
                    }
                }
                double gnorm = 0;
                for (double v : g) gnorm += v * v;
                if (gnorm < 1e-28) break;

                std::vector<double> cand(x.size());
                for (size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + step * g[i];
                attack_detail::project(L, cand);
                auto cand_states = attack_detail::to_states(L, cand);
                double cand_acc = objective(cand_states, rng.base_seed());
                if (cand_acc >= acc) {
                    x = std::move(cand);
                    acc = cand_acc;
                    trace.push_back({iter, acc});
                    consecutive_fail = 0;
                } else {
                    step *= cfg.step_decay;
                    ++consecutive_fail;
                    if (consecutive_fail >= 10 || step < 1e-12) break;
                }
            }
            if (acc > best) {
                best = acc;
                result.best_states = attack_detail::to_states(L, x);
                result.best_acceptance = acc;
                result.best_restart = r;
            }
            result.traces.push_back(std::move(trace));
        }
    }

    if (exact) {
        // re-verify the reported value against the exact evaluator
        double check = run_verifier_exact(cfg.verifier, inst, result.best_states);
        if (std::abs(check - result.best_acceptance) > 1e-9)
            throw std::logic_error("attack: best acceptance fails re-verification");
        result.best_acceptance = check;
    }
    result.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// Brute force over a discrete strategy class; the ground-truth lower bound for
// attack() on tiny instances.
inline AttackResult exhaustive_classical_attack(const CspInstance& inst, const AttackConfig& cfg) {
    inst.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int n = inst.n_vertices, k = inst.alphabet_size;

    AttackResult result;
    result.config = cfg;
    result.best_restart = 0;

    auto consider = [&](const std::vector<uint8_t>& support, const Coloring& col, double& best) {
        int size = 0;
        for (uint8_t s : support) size += s;
        std::vector<cplx> alpha(static_cast<size_t>(n), cplx(0, 0));
        double amp = 1.0 / std::sqrt(double(size));
        for (int v = 0; v < n; ++v)
            if (support[v]) alpha[v] = cplx(amp, 0);
        std::vector<cplx> beta(static_cast<size_t>(n) * k, cplx(0, 0));
        for (int v = 0; v < n; ++v) beta[static_cast<size_t>(v) * k + col.colors[v]] = 1.0;
        std::vector<ColoringState> states(static_cast<size_t>(cfg.verifier.kappa),
                                          ColoringState(n, k, alpha, beta));
        double acc = run_verifier_exact(cfg.verifier, inst, states);
        if (acc > best) {
            best = acc;
            result.best_states = std::move(states);
            result.best_acceptance = acc;
        }
    };

    double best = -1.0;
    if (cfg.strategy == StrategyClass::ClassicalSuperposition) {
        auto space = coloring_space_size(n, k);
        if (!space || *space > 100'000)
            throw BudgetError("exhaustive_classical_attack: K^N exceeds the 1e5 cap");
        std::vector<uint8_t> full(static_cast<size_t>(n), 1);
        Coloring col;
        col.colors.assign(n, 0);
        for (uint64_t i = 0; i < *space; ++i) {
            consider(full, col, best);
            for (int pos = 0; pos < n; ++pos) {
                if (++col.colors[pos] < k) break;
                col.colors[pos] = 0;
            }
        }
    } else if (cfg.strategy == StrategyClass::ClassicalMixtureSupport) {
        double states_count = std::pow(double(k) + 1.0, n);
        if (states_count > 1'000'000.0)
            throw BudgetError("exhaustive_classical_attack: (K+1)^N exceeds the 1e6 cap");
        // per-vertex symbol in {off, color 0, ..., color k-1}
        std::vector<int> symbol(static_cast<size_t>(n), 0);
        std::vector<uint8_t> support(static_cast<size_t>(n));
        Coloring col;
        col.colors.assign(n, 0);
        for (;;) {
            int size = 0;
            for (int v = 0; v < n; ++v) {
                support[v] = symbol[v] > 0;
                col.colors[v] = symbol[v] > 0 ? symbol[v] - 1 : 0;
                size += support[v];
            }
            if (size > 0) consider(support, col, best);
            int pos = 0;
            while (pos < n && ++symbol[pos] == k + 1) symbol[pos++] = 0;
            if (pos == n) break;
        }
    } else {
        throw ContractError("exhaustive_classical_attack: only classical strategy classes");
    }

    result.traces.push_back({{0, result.best_acceptance}});
    result.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace qmalab
