#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmalab/common.hpp"
#include "qmalab/csp.hpp"
#include "qmalab/generators.hpp"
#include "qmalab/state.hpp"
#include "qmalab/verifier.hpp"

namespace qmalab {

// --- soundness constants -------------------------------------------------------

// Exact unsigned fraction with overflow-checked construction; the constants'
// denominators stay well inside 64 bits at desk scale.
struct ExactFraction {
    unsigned long long num = 0;
    unsigned long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator<(const ExactFraction& a, const ExactFraction& b) {
        return static_cast<unsigned __int128>(a.num) * b.den <
               static_cast<unsigned __int128>(b.num) * a.den;
    }
};

namespace detail {

inline unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
    unsigned long long out;
    if (__builtin_mul_overflow(a, b, &out))
        throw BudgetError("bt09_constants: exact denominator overflows 64 bits at this scale");
    return out;
}

inline ExactFraction reduced(unsigned long long num, unsigned long long den) {
    unsigned long long g = std::gcd(num, den);
    return ExactFraction{num / g, den / g};
}

}  // namespace detail

// The four per-test thresholds and the soundness floor s = (1/3) min of them,
// as functions of (N, K).
struct Bt09Constants {
    int n = 1, k = 1;
    double delta = 0, mu = 0, nu = 0, xi = 0, s = 0;
    ExactFraction delta_exact, mu_exact, nu_exact, xi_exact, s_exact;
};

inline Bt09Constants bt09_constants(int n, int k) {
    require(n >= 1 && k >= 1, "bt09_constants: N and K must be positive");
    Bt09Constants c;
    c.n = n;
    c.k = k;
    const unsigned long long nn = detail::checked_mul(n, n);
    const unsigned long long k4 =
        detail::checked_mul(detail::checked_mul(k, k), detail::checked_mul(k, k));
    const unsigned long long k4nn = detail::checked_mul(k4, nn);

    c.delta_exact = detail::reduced(1, detail::checked_mul(2ULL * 1600ULL * 1600ULL, k4nn));
    c.mu_exact = detail::reduced(1, detail::checked_mul(1600ULL * 1600ULL, k4nn));
    c.nu_exact = detail::reduced(1, detail::checked_mul(64ULL, detail::checked_mul(
                                                                   static_cast<unsigned long long>(k), nn)));
    const unsigned long long heavy = 100ULL * k - 1ULL;
    c.xi_exact = detail::reduced(detail::checked_mul(heavy, heavy),
                                 detail::checked_mul(2ULL * 800ULL * 800ULL, k4nn));

    ExactFraction m = c.delta_exact;
    if (c.mu_exact < m) m = c.mu_exact;
    if (c.nu_exact < m) m = c.nu_exact;
    if (c.xi_exact < m) m = c.xi_exact;
    c.s_exact = detail::reduced(m.num, detail::checked_mul(m.den, 3ULL));

    c.delta = c.delta_exact.value();
    c.mu = c.mu_exact.value();
    c.nu = c.nu_exact.value();
    c.xi = c.xi_exact.value();
    c.s = c.s_exact.value();
    return c;
}

// --- lemma-chain checker -------------------------------------------------------

enum class ImplicationStatus { Vacuous, Confirmed, Violation };

struct LemmaCheck {
    bool premise = false;
    bool conclusion = false;
    ImplicationStatus status = ImplicationStatus::Vacuous;
};

inline LemmaCheck make_check(bool premise, bool conclusion) {
    LemmaCheck c;
    c.premise = premise;
    c.conclusion = conclusion;
    c.status = !premise ? ImplicationStatus::Vacuous
                        : (conclusion ? ImplicationStatus::Confirmed : ImplicationStatus::Violation);
    return c;
}

// Conclusion checks carry a small additive slack so float noise at the exact
// boundary cannot flip a verdict.
inline constexpr double kLemmaSlack = 1e-12;

struct LemmaChainReport {
    Bt09Constants constants;
    double swap_reject = 0;
    double col_cons_reject = 0;
    double unif_reject[2] = {0, 0};
    bool premise_swap = false, premise_col_cons = false;
    bool premise_unif[2] = {false, false};

    LemmaCheck unique_coloring[2];  // heavy color on every large-amplitude vertex
    LemmaCheck color_probs[2];      // p_j >= 1/(4K) for every j
    LemmaCheck all_vertices[2];     // |alpha_v|^2 >= 1/(8KN) everywhere
    std::optional<LemmaCheck> edge_cons_floor;  // on known-unsatisfiable instances
    double edge_cons_reject = 0;

    Coloring extracted;  // argmax_j |beta^(1)_{v,j}|^2, ties to the lowest index

    bool any_violation() const {
        auto bad = [](const LemmaCheck& c) { return c.status == ImplicationStatus::Violation; };
        for (int p = 0; p < 2; ++p)
            if (bad(unique_coloring[p]) || bad(color_probs[p]) || bad(all_vertices[p])) return true;
        return edge_cons_floor && bad(*edge_cons_floor);
    }
};

// Evaluates the premises REJ(Swap) <= delta, REJ(ColCons) <= mu,
// REJ(Unif_i) <= nu on a proof pair and checks each lemma conclusion,
// reporting vacuous / confirmed / violation per implication.
inline LemmaChainReport check_bt09_lemma_chain(const CspInstance& inst, const ColoringState& s1,
                                               const ColoringState& s2,
                                               EdgeOrderMode mode = EdgeOrderMode::AsListed,
                                               std::optional<bool> known_unsat = std::nullopt) {
    require(s1.n_vertices == inst.n_vertices && s1.alphabet_size == inst.alphabet_size &&
                s2.n_vertices == inst.n_vertices && s2.alphabet_size == inst.alphabet_size,
            "check_bt09_lemma_chain: state dimensions do not match the instance");
    const int n = inst.n_vertices, k = inst.alphabet_size;
    LemmaChainReport rep;
    rep.constants = bt09_constants(n, k);

    rep.swap_reject = swap_reject_prob(s1, s2);
    rep.col_cons_reject = col_cons_reject_exact(s1, s2);
    rep.unif_reject[0] = unif_reject_exact(s1);
    rep.unif_reject[1] = unif_reject_exact(s2);
    rep.premise_swap = rep.swap_reject <= rep.constants.delta;
    rep.premise_col_cons = rep.col_cons_reject <= rep.constants.mu;
    rep.premise_unif[0] = rep.unif_reject[0] <= rep.constants.nu;
    rep.premise_unif[1] = rep.unif_reject[1] <= rep.constants.nu;

    const bool base = rep.premise_swap && rep.premise_col_cons;
    const double heavy = (100.0 * k - 1.0) / (100.0 * k);
    const ColoringState* states[2] = {&s1, &s2};

    for (int p = 0; p < 2; ++p) {
        const ColoringState& s = *states[p];
        bool heavy_ok = true;
        for (int v = 0; v < n; ++v) {
            if (std::norm(s.vertex_amp[v]) < 1.0 / (8.0 * n)) continue;  // outside S_{1/(8N)}
            double best = 0;
            for (int j = 0; j < k; ++j) best = std::max(best, std::norm(s.beta(v, j)));
            if (best < heavy - kLemmaSlack) heavy_ok = false;
        }
        rep.unique_coloring[p] = make_check(base, heavy_ok);

        auto marginal = color_marginal_after_fourier(s);
        bool probs_ok = true;
        for (int j = 0; j < k; ++j)
            if (marginal.p[j] < 1.0 / (4.0 * k) - kLemmaSlack) probs_ok = false;
        rep.color_probs[p] = make_check(base, probs_ok);

        bool amps_ok = true;
        for (int v = 0; v < n; ++v)
            if (std::norm(s.vertex_amp[v]) < 1.0 / (8.0 * k * n) - kLemmaSlack) amps_ok = false;
        rep.all_vertices[p] = make_check(base && rep.premise_unif[p], amps_ok);
    }

    rep.extracted.colors.resize(n);
    for (int v = 0; v < n; ++v) {
        int arg = 0;
        double best = std::norm(s1.beta(v, 0));
        for (int j = 1; j < k; ++j) {
            double m = std::norm(s1.beta(v, j));
            if (m > best) {
                best = m;
                arg = j;
            }
        }
        rep.extracted.colors[v] = arg;
    }

    std::optional<bool> unsat = known_unsat;
    if (!unsat) {
        auto space = coloring_space_size(n, k);
        if (space && *space <= 100'000)
            unsat = max_satisfiable_fraction(inst) < Rational(1, 1);
    }
    rep.edge_cons_reject = edge_cons_reject_exact(inst, s1, s2, mode);
    if (unsat) {
        bool premise =
            base && rep.premise_unif[0] && rep.premise_unif[1] && *unsat;
        double floor = (100.0 * k - 1.0) * (100.0 * k - 1.0) /
                       (800.0 * 800.0 * std::pow(double(k), 4) * double(n) * double(n));
        rep.edge_cons_floor = make_check(premise, rep.edge_cons_reject >= floor - kLemmaSlack);
    }
    return rep;
}

// --- collision statistics (second-moment machinery) ----------------------------

struct CollisionStats {
    int kappa = 0;
    std::vector<double> pairwise;  // E[V_ij] flattened over i < j
    double mean = 0;               // E[V] by linearity
    double variance = 0;
    bool variance_exact = false;
    double variance_sigma = 0;  // estimator sigma (0 when exact)
    double cantelli_bound = 1;
    bool degenerate_mean = false;
    double empirical_p_zero = 0;
    double empirical_sigma = 0;
    std::optional<double> exact_p_zero;  // two-prover closed form
    long long n_mc = 0;
    uint64_t seed = 0;

    double pair_at(int i, int j) const {  // i < j
        int idx = 0;
        for (int a = 0; a < kappa; ++a)
            for (int b = a + 1; b < kappa; ++b, ++idx)
                if (a == i && b == j) return pairwise[idx];
        throw ContractError("CollisionStats::pair_at: bad indices");
    }
};

namespace detail {

struct CollisionSupport {
    std::vector<SupportEntry> entries;
};

// V_ij fires when (v_i, v_j) hits a violated constraint in the instance's
// edge semantics, or the provers agree on the vertex but not the color.
inline bool collision_fires(const EdgeIndex& idx, int v1, int c1, int v2, int c2) {
    if (v1 == v2 && c1 != c2) return true;
    return idx.edge_fires(v1, c1, v2, c2);
}

}  // namespace detail

// Exact pairwise expectations by the double sum over support pairs; variance
// and P[V = 0] by Monte Carlo unless the exact second-moment computation fits
// under the cost cap (pairs sharing a prover are conditionally independent
// given that prover's outcome, so the cross terms need only per-outcome fire
// probabilities).
inline CollisionStats collision_stats(const CspInstance& inst,
                                      std::span<const OutcomeDistribution> dists, long long n_mc,
                                      uint64_t seed, EdgeOrderMode mode = EdgeOrderMode::AsListed,
                                      double exact_var_cost_cap = 1e8) {
    const int kappa = static_cast<int>(dists.size());
    require(kappa >= 2, "collision_stats: need at least two distributions");
    require(n_mc >= 1000, "collision_stats: n_mc must be >= 1000");
    for (const auto& d : dists) {
        require(d.n_vertices == inst.n_vertices && d.alphabet_size == inst.alphabet_size,
                "collision_stats: distribution shape does not match the instance");
        d.validate();
    }
    const int n = inst.n_vertices, k = inst.alphabet_size;
    EdgeIndex idx(inst, mode);

    std::vector<std::vector<detail::SupportEntry>> sup(kappa);
    for (int i = 0; i < kappa; ++i)
        for (int v = 0; v < n; ++v)
            for (int c = 0; c < k; ++c)
                if (double p = dists[i].at(v, c); p > 0.0) sup[i].push_back({v, c, p});

    CollisionStats st;
    st.kappa = kappa;
    st.n_mc = n_mc;
    st.seed = seed;

    // exact E[V_ij]
    for (int i = 0; i < kappa; ++i)
        for (int j = i + 1; j < kappa; ++j) {
            double e = 0;
            for (const auto& a : sup[i])
                for (const auto& b : sup[j])
                    if (detail::collision_fires(idx, a.v, a.j, b.v, b.j)) e += a.p * b.p;
            st.pairwise.push_back(e);
            st.mean += e;
        }

    // two-prover closed form for P[V = 0] via the complementary (accept) sum
    if (kappa == 2) {
        double acc = 0;
        for (const auto& a : sup[0])
            for (const auto& b : sup[1])
                if (!detail::collision_fires(idx, a.v, a.j, b.v, b.j)) acc += a.p * b.p;
        st.exact_p_zero = acc;
    }

    // exact Var(V) when the pairwise fire tables fit the cost cap
    const double table_cost = static_cast<double>(kappa) * kappa * n * k * n * k;
    if (table_cost <= exact_var_cost_cap) {
        const size_t nk = static_cast<size_t>(n) * k;
        // fire probability given one prover's outcome, per ordered pair slot
        std::vector<std::vector<double>> first(static_cast<size_t>(kappa) * kappa),
            second(static_cast<size_t>(kappa) * kappa);
        for (int i = 0; i < kappa; ++i)
            for (int j = i + 1; j < kappa; ++j) {
                auto& fij = first[static_cast<size_t>(i) * kappa + j];
                auto& sij = second[static_cast<size_t>(i) * kappa + j];
                fij.assign(nk, 0.0);
                sij.assign(nk, 0.0);
                for (const auto& a : sup[i])
                    for (const auto& b : sup[j])
                        if (detail::collision_fires(idx, a.v, a.j, b.v, b.j)) {
                            fij[static_cast<size_t>(a.v) * k + a.j] += b.p;
                            sij[static_cast<size_t>(b.v) * k + b.j] += a.p;
                        }
            }
        auto cond = [&](int i, int j, int shared, const detail::SupportEntry& x) {
            // P[V_ij = 1 | X_shared = x]
            size_t cell = static_cast<size_t>(x.v) * k + x.j;
            if (shared == i) return first[static_cast<size_t>(i) * kappa + j][cell];
            return second[static_cast<size_t>(i) * kappa + j][cell];
        };
        double var = 0;
        int pi = 0;
        for (int i = 0; i < kappa; ++i)
            for (int j = i + 1; j < kappa; ++j, ++pi) {
                double e = st.pairwise[pi];
                var += e - e * e;
                int pk = 0;
                for (int a = 0; a < kappa; ++a)
                    for (int b = a + 1; b < kappa; ++b, ++pk) {
                        if (pk <= pi) continue;
                        int shared = -1;
                        if (a == i || a == j) shared = a;
                        if (b == i || b == j) shared = b;
                        if (shared < 0) continue;  // disjoint pairs are independent
                        double joint = 0;
                        for (const auto& x : sup[shared])
                            joint += x.p * cond(i, j, shared, x) * cond(a, b, shared, x);
                        var += 2.0 * (joint - e * st.pairwise[pk]);
                    }
            }
        st.variance = std::max(var, 0.0);
        st.variance_exact = true;
        st.variance_sigma = 0.0;
    }

    //  Monte Carlo for P[V = 0] (and the variance when not exact)
    std::vector<detail::DiscreteSampler> samplers;
    for (const auto& d : dists) samplers.emplace_back(d);
    long long zero_count = 0;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    std::vector<std::pair<int, int>> outcome(kappa);
    detail::chunked_samples(seed, n_mc, [&](Rng& rng, long long count) {
        for (long long t = 0; t < count; ++t) {
            for (int i = 0; i < kappa; ++i) outcome[i] = samplers[i].sample(rng);
            long long v_count = 0;
            for (int i = 0; i < kappa; ++i)
                for (int j = i + 1; j < kappa; ++j)
                    if (detail::collision_fires(idx, outcome[i].first, outcome[i].second,
                                                outcome[j].first, outcome[j].second))
                        ++v_count;
            if (v_count == 0) ++zero_count;
            double v = static_cast<double>(v_count);
            m1 += v;
            m2 += v * v;
            m3 += v * v * v;
            m4 += v * v * v * v;
        }
    });
    const double nd = static_cast<double>(n_mc);
    m1 /= nd;
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    st.empirical_p_zero = static_cast<double>(zero_count) / nd;
    st.empirical_sigma =
        std::sqrt(std::max(st.empirical_p_zero * (1.0 - st.empirical_p_zero), 0.0) / nd);
    if (!st.variance_exact) {
        double var = std::max(m2 - m1 * m1, 0.0);
        st.variance = var;
        // delta-method sigma for the sample variance via the fourth central moment
        double mu1 = m1;
        double c4 = m4 - 4 * m3 * mu1 + 6 * m2 * mu1 * mu1 - 3 * mu1 * mu1 * mu1 * mu1;
        st.variance_sigma = std::sqrt(std::max(c4 - var * var, 0.0) / nd);
    }

    if (st.mean <= 0.0) {
        st.degenerate_mean = true;
        st.cantelli_bound = 1.0;
    } else {
        st.cantelli_bound = st.variance / (st.variance + st.mean * st.mean);
    }
    return st;
}

// --- scaling experiments -------------------------------------------------------

struct BirthdayRow {
    int kappa = 0;
    double reject_sampled = 0;
    double std_error = 0;
};

struct BirthdayResult {
    int n = 0, k = 0, degree = 0;
    double bad_fraction = 0;
    long long planted_violations = 0;
    std::vector<BirthdayRow> rows;
    LineFit fit;  // log REJ vs log kappa
    double kappa2_exact = 0;
    double kappa2_sampled = 0;
    double kappa2_std_error = 0;
    long long n_mc = 0;
    uint64_t seed = 0;
    std::string instance_name;
};

// Consistency-test rejection versus prover count on a frustrated regular
// instance with honest proofs of the reference coloring. The planted violated
// set is kept sparse so the quadratic birthday regime is visible at desk
// scale before saturation.
inline BirthdayResult birthday_scaling_experiment(int n, int k, std::span<const int> kappas,
                                                  long long n_mc, uint64_t seed, int degree = 4,
                                                  double bad_fraction = 3.0 / 64.0) {
    require(!kappas.empty(), "birthday_scaling_experiment: need at least one kappa");
    for (int kp : kappas) require(kp >= 2, "birthday_scaling_experiment: kappa must be >= 2");

    auto gen = generate_regular_gap_instance(n, k, degree, seed, GapMode::Frustrated, bad_fraction);
    const auto& inst = gen.instance;
    const auto& col = gen.reference;

    BirthdayResult out;
    out.n = n;
    out.k = k;
    out.degree = degree;
    out.bad_fraction = bad_fraction;
    out.planted_violations = violation_count(inst, col);
    out.n_mc = n_mc;
    out.seed = seed;
    out.instance_name = inst.name;

    // dense table of ordered vertex pairs violated by the reference coloring
    std::vector<uint8_t> bad(static_cast<size_t>(n) * n, 0);
    for (const auto& e : inst.edges)
        if (!e.allows(col.colors[e.u], col.colors[e.v], k))
            bad[static_cast<size_t>(e.u) * n + e.v] = 1;
    auto fires = [&](int a, int b) {
        return bad[static_cast<size_t>(a) * n + b] || bad[static_cast<size_t>(b) * n + a];
    };

    auto estimate = [&](int kappa, uint64_t stream) {
        long long rejects = 0;
        std::vector<int> vs(kappa);
        detail::chunked_samples(stream, n_mc, [&](Rng& rng, long long count) {
            for (long long t = 0; t < count; ++t) {
                for (int i = 0; i < kappa; ++i) vs[i] = static_cast<int>(rng.index(n));
                bool rej = false;
                for (int i = 0; i < kappa && !rej; ++i)
                    for (int j = i + 1; j < kappa && !rej; ++j) rej = fires(vs[i], vs[j]);
                if (rej) ++rejects;
            }
        });
        return static_cast<double>(rejects) / static_cast<double>(n_mc);
    };

    std::vector<double> xs, ys;
    uint64_t stream = 1;
    for (int kappa : kappas) {
        double p = estimate(kappa, splitmix64(seed ^ stream++));
        BirthdayRow row;
        row.kappa = kappa;
        row.reject_sampled = p;
        row.std_error = std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(n_mc));
        out.rows.push_back(row);
        if (p > 0) {
            xs.push_back(std::log(static_cast<double>(kappa)));
            ys.push_back(std::log(p));
        }
    }
    out.fit = fit_line(xs, ys);

    // the two-prover point has an exact closed-form cross-check
    std::vector<ColoringState> pair(2, from_coloring(inst, col));
    out.kappa2_exact = cons_reject_exact(inst, pair);
    out.kappa2_sampled = estimate(2, splitmix64(seed ^ 0xB1D7));
    out.kappa2_std_error =
        std::sqrt(std::max(out.kappa2_sampled * (1 - out.kappa2_sampled), 0.0) /
                  static_cast<double>(n_mc));
    return out;
}

struct NsqRow {
    int n = 0;
    double swap_reject = 0;
    double unif_reject_1 = 0;
    double unif_reject_2 = 0;
    double cons_reject = 0;
    double expected = 0;  // c / N^2
};

struct NsqResult {
    int k = 0;
    EdgeOrderMode mode = EdgeOrderMode::AsListed;
    BadEdgeStyle style = BadEdgeStyle::DistinctEndpoints;
    int expected_c = 2;
    std::vector<NsqRow> rows;
    LineFit fit;  // log Cons vs log N
    uint64_t seed = 0;
};

// Exact BT09 test rejections on one-bad-edge instances with honest-style
// proofs: Swap and Unif vanish, Cons decays as c / N^2 with c fixed by the
// bad edge's shape (2 for a distinct-endpoint edge checked in both prover
// orders, 1 for a planted self-loop).
inline NsqResult n_squared_scaling_experiment(std::span<const int> ns, int k,
                                              EdgeOrderMode mode = EdgeOrderMode::AsListed,
                                              BadEdgeStyle style = BadEdgeStyle::DistinctEndpoints,
                                              uint64_t seed = 0) {
    require(!ns.empty(), "n_squared_scaling_experiment: need at least one N");
    NsqResult out;
    out.k = k;
    out.mode = mode;
    out.style = style;
    out.expected_c = style == BadEdgeStyle::SelfLoop ? 1 : 2;
    out.seed = seed;

    std::vector<double> xs, ys;
    for (int n : ns) {
        auto gen = generate_one_bad_edge(n, k, seed, style);
        std::vector<ColoringState> pair(2, from_coloring(gen.instance, gen.coloring));
        NsqRow row;
        row.n = n;
        row.swap_reject = swap_reject_prob(pair[0], pair[1]);
        row.unif_reject_1 = unif_reject_exact(pair[0]);
        row.unif_reject_2 = unif_reject_exact(pair[1]);
        row.cons_reject = cons_reject_exact(gen.instance, pair, mode);
        row.expected = static_cast<double>(out.expected_c) / (static_cast<double>(n) * n);
        out.rows.push_back(row);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(row.cons_reject));
    }
    out.fit = fit_line(xs, ys);
    return out;
}

enum class ZRule { PaperLiteral, Scaled };

struct CompletenessRow {
    int kappa = 0;
    double z = 0;
    double acceptance_exact = 0;
    std::optional<double> acceptance_sampled;
    std::optional<double> std_error;
};

struct CompletenessResult {
    int n = 0, k = 0;
    ZRule rule = ZRule::Scaled;
    std::vector<CompletenessRow> rows;
    std::optional<LineFit> log_gap_fit;  // log(1 - acceptance) vs kappa
    bool gap_monotone_nonincreasing = false;
    bool exponential_approach_verified = false;
    uint64_t seed = 0;
};

// CondUnif acceptance of honest proofs on a planted satisfiable instance
// under the chosen z rule, exact via the dynamic program. The verification
// flag demands log(1 - acceptance) decreasing at least linearly in kappa; the
// curve is recorded either way.
inline CompletenessResult completeness_curve_cd10(int n, int k, std::span<const int> kappas,
                                                  ZRule rule, long long n_mc, uint64_t seed) {
    require(!kappas.empty(), "completeness_curve_cd10: need at least one kappa");
    for (int kp : kappas) require(kp >= 2, "completeness_curve_cd10: kappa must be >= 2");

    auto gen = generate_regular_gap_instance(n, k, 2, seed, GapMode::PlantedSatisfiable);
    ColoringState honest = from_coloring(gen.instance, gen.reference);

    CompletenessResult out;
    out.n = n;
    out.k = k;
    out.rule = rule;
    out.seed = seed;

    std::vector<double> xs, ys;
    bool monotone = true;
    double prev_gap = 2.0;
    uint64_t stream = 1;
    for (int kappa : kappas) {
        double z = rule == ZRule::PaperLiteral ? 0.99 * kappa : 0.99 * kappa / k;
        std::vector<ColoringState> states(static_cast<size_t>(kappa), honest);
        CompletenessRow row;
        row.kappa = kappa;
        row.z = z;
        row.acceptance_exact = 1.0 - cond_unif_reject_exact(states, z);
        if (n_mc > 0) {
            auto rep = sample_cond_unif_report(states, z, n_mc, splitmix64(seed ^ stream++));
            row.acceptance_sampled = 1.0 - *rep.sampled_reject;
            row.std_error = rep.std_error;
        }
        double gap = 1.0 - row.acceptance_exact;
        if (gap > prev_gap + 1e-15) monotone = false;
        prev_gap = gap;
        if (gap > 0) {
            xs.push_back(static_cast<double>(kappa));
            ys.push_back(std::log(gap));
        }
        out.rows.push_back(row);
    }
    if (xs.size() >= 2) out.log_gap_fit = fit_line(xs, ys);
    out.gap_monotone_nonincreasing = monotone;
    out.exponential_approach_verified =
        monotone && out.log_gap_fit && out.log_gap_fit->slope < 0.0;
    return out;
}

}  // namespace qmalab
