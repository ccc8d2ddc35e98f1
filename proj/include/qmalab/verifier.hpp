#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qmalab/common.hpp"
#include "qmalab/csp.hpp"
#include "qmalab/state.hpp"

namespace qmalab {

inline constexpr uint64_t kDefaultConsEnumCap = 10'000'000;
inline constexpr int kDefaultConsKappaCap = 6;

enum class TestKind { Swap, Unif, CondUnif, ColCons, EdgeCons, Cons };

inline const char* test_kind_name(TestKind t) {
    switch (t) {
        case TestKind::Swap: return "Swap";
        case TestKind::Unif: return "Unif";
        case TestKind::CondUnif: return "CondUnif";
        case TestKind::ColCons: return "ColCons";
        case TestKind::EdgeCons: return "EdgeCons";
        case TestKind::Cons: return "Cons";
    }
    return "?";
}

enum class Protocol { BT09, CD10 };
enum class EdgeOrderMode { AsListed, Symmetrized };

// Protocol configuration. BT09 is the two-prover swap/consistency/uniformity
// verifier; CD10 the kappa-prover conditional-uniformity/consistency verifier
// with threshold z (an absolute count in [0, kappa]).
struct VerifierConfig {
    Protocol protocol = Protocol::BT09;
    int kappa = 2;
    double z = 0.0;
    EdgeOrderMode edge_mode = EdgeOrderMode::AsListed;

    static VerifierConfig bt09(EdgeOrderMode mode = EdgeOrderMode::AsListed) {
        VerifierConfig c;
        c.protocol = Protocol::BT09;
        c.kappa = 2;
        c.z = 0.0;
        c.edge_mode = mode;
        return c;
    }
    static VerifierConfig cd10(int kappa, double z, EdgeOrderMode mode = EdgeOrderMode::AsListed) {
        require(kappa >= 2, "VerifierConfig: CD10 requires kappa >= 2");
        require(z >= 0.0 && z <= static_cast<double>(kappa),
                "VerifierConfig: z must lie in [0, kappa]");
        VerifierConfig c;
        c.protocol = Protocol::CD10;
        c.kappa = kappa;
        c.z = z;
        c.edge_mode = mode;
        return c;
    }

    // z as a fraction of kappa, e.g. the 0.99*kappa and 0.99*kappa/K presets.
    static double z_from_fraction(double fraction, int kappa) {
        return fraction * static_cast<double>(kappa);
    }
};

// Rejection-probability report for a single test. std_error is the binomial
// standard error of the sampled estimate. consistency_flag marks reports
// where both values are present yet disagree beyond 6 standard errors
// (with a 1e-12 absolute guard for degenerate probabilities).
struct TestReport {
    TestKind test = TestKind::Swap;
    std::optional<double> exact_reject;
    std::optional<double> sampled_reject;
    long long n_samples = 0;
    uint64_t seed = 0;
    double std_error = 0.0;
    bool consistency_flag = false;

    void finalize_flag() {
        consistency_flag = false;
        if (exact_reject && sampled_reject) {
            double p = *exact_reject;
            double sigma_exact =
                n_samples > 0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / n_samples) : 0.0;
            double tol = 6.0 * std::max(std_error, sigma_exact) + 1e-12;
            consistency_flag = std::abs(*exact_reject - *sampled_reject) > tol;
        }
    }
};

// --- edge lookup -------------------------------------------------------------

// Fast ordered-pair lookup over the stored edge list. Symmetrized mode treats
// every stored edge as also constraining the reversed pair via the transposed
// relation; as-listed checks the list exactly as stored.
class EdgeIndex {
  public:
    EdgeIndex(const CspInstance& inst, EdgeOrderMode mode) : inst_(&inst), mode_(mode) {
        map_.reserve(inst.edges.size() * 2);
        for (const auto& e : inst.edges)
            map_.emplace(key(e.u, e.v), &e);
    }

    // Does the ordered outcome (u, ju) -> (v, jv) violate a constraint?
    // Symmetrized mode consults the transposed stored relation only when the
    // pair itself is absent, matching the load-time symmetrization transform.
    bool edge_fires(int u, int ju, int v, int jv) const {
        const int k = inst_->alphabet_size;
        if (const DirectedEdge* e = find(u, v)) return !e->allows(ju, jv, k);
        if (mode_ == EdgeOrderMode::Symmetrized && u != v) {
            if (const DirectedEdge* e = find(v, u)) return !e->allows(jv, ju, k);
        }
        return false;
    }

    // Full consistency clause over an unordered prover pair: same vertex with
    // different colors, or a violated edge in either prover order.
    bool pair_fires(int v1, int j1, int v2, int j2) const {
        if (v1 == v2 && j1 != j2) return true;
        return edge_fires(v1, j1, v2, j2) || edge_fires(v2, j2, v1, j1);
    }

    bool col_fires(int v1, int j1, int v2, int j2) const { return v1 == v2 && j1 != j2; }

    bool edge_clause_fires(int v1, int j1, int v2, int j2) const {
        return edge_fires(v1, j1, v2, j2) || edge_fires(v2, j2, v1, j1);
    }

  private:
    uint64_t key(int u, int v) const { return static_cast<uint64_t>(u) * inst_->n_vertices + v; }
    const DirectedEdge* find(int u, int v) const {
        auto it = map_.find(key(u, v));
        return it == map_.end() ? nullptr : it->second;
    }

    const CspInstance* inst_;
    EdgeOrderMode mode_;
    std::unordered_map<uint64_t, const DirectedEdge*> map_;
};

// --- exact evaluators --------------------------------------------------------

// Unif: Fourier both registers, reject on outcome (v != 0, j = 0).
inline double unif_reject_exact(const ColoringState& s) {
    JointAmplitude phi = apply_fourier(s, true, true);
    double rej = 0;
    for (int v = 1; v < s.n_vertices; ++v) rej += std::norm(phi.at(v, 0));
    return rej;
}

namespace detail {

// Per-prover CondUnif weights from the fully Fourier-transformed state:
// q = P[color reads 0], r = P[color reads 0 and vertex reads 0].
struct CondUnifWeights {
    double q = 0, r = 0;
};

inline CondUnifWeights cond_unif_weights(const ColoringState& s) {
    JointAmplitude phi = apply_fourier(s, true, true);
    CondUnifWeights w;
    for (int v = 0; v < s.n_vertices; ++v) w.q += std::norm(phi.at(v, 0));
    w.r = std::norm(phi.at(0, 0));
    if (w.r > w.q) w.r = w.q;  // guard float noise
    return w;
}

// Strict threshold "reject iff count < z" on integer counts: accept needs
// count >= ceil(z); z within 1e-9 of an integer is treated as that integer.
inline int cond_unif_threshold(double z, int kappa) {
    int thr = static_cast<int>(std::ceil(z - 1e-9));
    return std::clamp(thr, 0, kappa + 1);
}

}  // namespace detail

// CondUnif_z rejection probability: dynamic program over provers tracking the
// number of good zero outcomes. Each prover independently contributes a good
// zero (j = 0, v = 0) with weight r_i, a nonzero color with weight 1 - q_i,
// or a bad zero (j = 0, v != 0, instant reject) with weight q_i - r_i.
inline double cond_unif_reject_exact(std::span<const ColoringState> states, double z) {
    const int kappa = static_cast<int>(states.size());
    require(kappa >= 1, "cond_unif_reject_exact: need at least one prover");
    require(z >= 0.0 && z <= static_cast<double>(kappa),
            "cond_unif_reject_exact: z out of [0, kappa]");
    for (int i = 1; i < kappa; ++i)
        require(states[i].n_vertices == states[0].n_vertices &&
                    states[i].alphabet_size == states[0].alphabet_size,
                "cond_unif_reject_exact: prover dimension mismatch");

    std::vector<double> dp(static_cast<size_t>(kappa) + 1, 0.0);
    dp[0] = 1.0;
    for (int i = 0; i < kappa; ++i) {
        auto w = detail::cond_unif_weights(states[i]);
        for (int m = i + 1; m >= 1; --m) dp[m] = dp[m] * (1.0 - w.q) + dp[m - 1] * w.r;
        dp[0] *= (1.0 - w.q);
    }
    const int thr = detail::cond_unif_threshold(z, kappa);
    double accept = 0;
    for (int m = thr; m <= kappa; ++m) accept += dp[m];
    return std::clamp(1.0 - accept, 0.0, 1.0);
}

namespace detail {

struct SupportEntry {
    int v, j;
    double p;
};

inline std::vector<SupportEntry> support_of(const ColoringState& s) {
    OutcomeDistribution d = computational_distribution(s);
    std::vector<SupportEntry> sup;
    for (int v = 0; v < d.n_vertices; ++v)
        for (int j = 0; j < d.alphabet_size; ++j)
            if (double p = d.at(v, j); p > 0.0) sup.push_back({v, j, p});
    return sup;
}

inline double cons_accept_dfs(const EdgeIndex& idx,
                              const std::vector<std::vector<SupportEntry>>& sups, size_t depth,
                              std::vector<const SupportEntry*>& chosen, double weight) {
    if (depth == sups.size()) return weight;
    double acc = 0;
    for (const auto& e : sups[depth]) {
        bool fires = false;
        for (size_t i = 0; i < depth && !fires; ++i)
            fires = idx.pair_fires(chosen[i]->v, chosen[i]->j, e.v, e.j);
        if (fires) continue;  // every extension of this prefix rejects
        chosen[depth] = &e;
        acc += cons_accept_dfs(idx, sups, depth + 1, chosen, weight * e.p);
    }
    return acc;
}

}  // namespace detail

// Cons rejection probability by exact enumeration over the provers' outcome
// supports. Refuses above the prover-count cap or when the product of support
// sizes exceeds the enumeration cap; callers must then sample.
inline double cons_reject_exact(const CspInstance& inst, std::span<const ColoringState> states,
                                EdgeOrderMode mode = EdgeOrderMode::AsListed,
                                uint64_t enum_cap = kDefaultConsEnumCap,
                                int kappa_cap = kDefaultConsKappaCap) {
    const int kappa = static_cast<int>(states.size());
    require(kappa >= 2, "cons_reject_exact: need at least two provers");
    for (const auto& s : states)
        require(s.n_vertices == inst.n_vertices && s.alphabet_size == inst.alphabet_size,
                "cons_reject_exact: state dimensions do not match the instance");
    if (kappa > kappa_cap)
        throw BudgetError("cons_reject_exact: kappa " + std::to_string(kappa) +
                          " exceeds exact cap " + std::to_string(kappa_cap) + "; sample instead");

    std::vector<std::vector<detail::SupportEntry>> sups;
    sups.reserve(states.size());
    double log_product = 0;
    for (const auto& s : states) {
        sups.push_back(detail::support_of(s));
        log_product += std::log(std::max<size_t>(sups.back().size(), 1));
    }
    if (log_product > std::log(static_cast<double>(enum_cap)))
        throw BudgetError("cons_reject_exact: outcome enumeration exceeds cap " +
                          std::to_string(enum_cap) + "; sample instead");

    EdgeIndex idx(inst, mode);
    std::vector<const detail::SupportEntry*> chosen(states.size(), nullptr);
    double accept = detail::cons_accept_dfs(idx, sups, 0, chosen, 1.0);
    return std::clamp(1.0 - accept, 0.0, 1.0);
}

// Two-prover color-consistency clause alone:
// sum_v sum_j sum_{j' != j} |alpha1_v beta1_{v,j}|^2 |alpha2_v beta2_{v,j'}|^2.
inline double col_cons_reject_exact(const ColoringState& s1, const ColoringState& s2) {
    require(s1.n_vertices == s2.n_vertices && s1.alphabet_size == s2.alphabet_size,
            "col_cons_reject_exact: dimension mismatch");
    OutcomeDistribution d1 = computational_distribution(s1);
    OutcomeDistribution d2 = computational_distribution(s2);
    double rej = 0;
    for (int v = 0; v < s1.n_vertices; ++v) {
        double mass2 = 0;
        for (int j = 0; j < s1.alphabet_size; ++j) mass2 += d2.at(v, j);
        for (int j = 0; j < s1.alphabet_size; ++j) rej += d1.at(v, j) * (mass2 - d2.at(v, j));
    }
    return std::clamp(rej, 0.0, 1.0);
}

namespace detail {

enum class PairEvent { EdgeOnly, BothClauses };

inline double pair_event_prob(const CspInstance& inst, const ColoringState& s1,
                              const ColoringState& s2, EdgeOrderMode mode, PairEvent event) {
    EdgeIndex idx(inst, mode);
    auto sup1 = support_of(s1);
    auto sup2 = support_of(s2);
    double total = 0;
    for (const auto& a : sup1)
        for (const auto& b : sup2) {
            bool edge = idx.edge_clause_fires(a.v, a.j, b.v, b.j);
            bool hit = event == PairEvent::EdgeOnly
                           ? edge
                           : (edge && idx.col_fires(a.v, a.j, b.v, b.j));
            if (hit) total += a.p * b.p;
        }
    return std::clamp(total, 0.0, 1.0);
}

}  // namespace detail

// Two-prover edge-consistency clause alone (either prover order).
inline double edge_cons_reject_exact(const CspInstance& inst, const ColoringState& s1,
                                     const ColoringState& s2,
                                     EdgeOrderMode mode = EdgeOrderMode::AsListed) {
    return detail::pair_event_prob(inst, s1, s2, mode, detail::PairEvent::EdgeOnly);
}

// Probability that both clauses fire simultaneously (they are not disjoint).
inline double cons_clause_overlap_exact(const CspInstance& inst, const ColoringState& s1,
                                        const ColoringState& s2,
                                        EdgeOrderMode mode = EdgeOrderMode::AsListed) {
    return detail::pair_event_prob(inst, s1, s2, mode, detail::PairEvent::BothClauses);
}

// --- protocol dispatch -------------------------------------------------------

// Exact overall acceptance probability of the configured protocol.
// BT09: 1 - (REJ_Swap + REJ_Cons + REJ_{Unif and Unif}) / 3, where the third
// test performs both Unif measurements and rejects if either rejects.
// CD10: 1 - (REJ_CondUnif + REJ_Cons) / 2.
inline double run_verifier_exact(const VerifierConfig& config, const CspInstance& inst,
                                 std::span<const ColoringState> states,
                                 uint64_t enum_cap = kDefaultConsEnumCap,
                                 int kappa_cap = kDefaultConsKappaCap) {
    require(static_cast<int>(states.size()) == config.kappa,
            "run_verifier_exact: prover count does not match config");
    if (config.protocol == Protocol::BT09) {
        require(config.kappa == 2, "run_verifier_exact: BT09 requires exactly two provers");
        double swap = swap_reject_prob(states[0], states[1]);
        double cons = cons_reject_exact(inst, states, config.edge_mode, enum_cap, kappa_cap);
        double u1 = unif_reject_exact(states[0]);
        double u2 = unif_reject_exact(states[1]);
        double uu = 1.0 - (1.0 - u1) * (1.0 - u2);
        return 1.0 - (swap + cons + uu) / 3.0;
    }
    double cu = cond_unif_reject_exact(states, config.z);
    double cons = cons_reject_exact(inst, states, config.edge_mode, enum_cap, kappa_cap);
    return 1.0 - (cu + cons) / 2.0;
}

// --- seeded samplers ---------------------------------------------------------

namespace detail {

class DiscreteSampler {
  public:
    explicit DiscreteSampler(const OutcomeDistribution& d)
        : k_(d.alphabet_size), cum_(d.probs.size()) {
        double acc = 0;
        for (size_t i = 0; i < d.probs.size(); ++i) {
            acc += std::max(d.probs[i], 0.0);
            cum_[i] = acc;
        }
        total_ = acc;
    }

    std::pair<int, int> sample(Rng& rng) const {
        double x = rng.uniform01() * total_;
        size_t lo = std::upper_bound(cum_.begin(), cum_.end(), x) - cum_.begin();
        if (lo >= cum_.size()) lo = cum_.size() - 1;
        return {static_cast<int>(lo) / k_, static_cast<int>(lo) % k_};
    }

  private:
    int k_;
    std::vector<double> cum_;
    double total_ = 1.0;
};

inline constexpr long long kSampleChunk = 1 << 16;

// Runs `body(rng, count)` over chunks with independent derived streams so the
// merged tallies do not depend on chunk order.
template <typename Body>
void chunked_samples(uint64_t seed, long long n, Body&& body) {
    Rng base(seed);
    long long done = 0;
    uint64_t chunk_index = 0;
    while (done < n) {
        long long count = std::min(kSampleChunk, n - done);
        Rng stream = base.stream(chunk_index++);
        body(stream, count);
        done += count;
    }
}

}  // namespace detail

inline TestReport make_sampled_report(TestKind kind, std::optional<double> exact,
                                      long long rejects, long long n, uint64_t seed) {
    TestReport r;
    r.test = kind;
    r.exact_reject = exact;
    r.n_samples = n;
    r.seed = seed;
    if (n > 0) {
        double p = static_cast<double>(rejects) / static_cast<double>(n);
        r.sampled_reject = p;
        r.std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
    }
    r.finalize_flag();
    return r;
}

// Swap test wrapped as a report; sampling flips a coin with the closed-form
// rejection probability (the controlled-swap circuit is not gate-simulated).
inline TestReport swap_test_report(const ColoringState& s1, const ColoringState& s2,
                                   long long n_samples = 0, uint64_t seed = 0) {
    double exact = swap_reject_prob(s1, s2);
    if (n_samples <= 0) {
        TestReport r;
        r.test = TestKind::Swap;
        r.exact_reject = exact;
        return r;
    }
    long long rejects = 0;
    detail::chunked_samples(seed, n_samples, [&](Rng& rng, long long count) {
        for (long long i = 0; i < count; ++i)
            if (rng.uniform01() < exact) ++rejects;
    });
    return make_sampled_report(TestKind::Swap, exact, rejects, n_samples, seed);
}

inline TestReport sample_unif_report(const ColoringState& s, long long n_samples, uint64_t seed) {
    detail::DiscreteSampler sampler(measure_distribution(apply_fourier(s, true, true)));
    long long rejects = 0;
    detail::chunked_samples(seed, n_samples, [&](Rng& rng, long long count) {
        for (long long i = 0; i < count; ++i) {
            auto [v, j] = sampler.sample(rng);
            if (j == 0 && v != 0) ++rejects;
        }
    });
    return make_sampled_report(TestKind::Unif, unif_reject_exact(s), rejects, n_samples, seed);
}

inline TestReport sample_cond_unif_report(std::span<const ColoringState> states, double z,
                                          long long n_samples, uint64_t seed) {
    const int kappa = static_cast<int>(states.size());
    const int thr = detail::cond_unif_threshold(z, kappa);
    std::vector<detail::DiscreteSampler> samplers;
    samplers.reserve(states.size());
    for (const auto& s : states)
        samplers.emplace_back(measure_distribution(apply_fourier(s, true, true)));
    long long rejects = 0;
    detail::chunked_samples(seed, n_samples, [&](Rng& rng, long long count) {
        for (long long i = 0; i < count; ++i) {
            int zeros = 0;
            bool bad = false;
            for (const auto& sm : samplers) {
                auto [v, j] = sm.sample(rng);
                if (j == 0) {
                    ++zeros;
                    if (v != 0) bad = true;
                }
            }
            if (bad || zeros < thr) ++rejects;
        }
    });
    return make_sampled_report(TestKind::CondUnif, cond_unif_reject_exact(states, z), rejects,
                               n_samples, seed);
}

inline TestReport sample_cons_report(const CspInstance& inst,
                                     std::span<const ColoringState> states, EdgeOrderMode mode,
                                     long long n_samples, uint64_t seed,
                                     uint64_t enum_cap = kDefaultConsEnumCap,
                                     int kappa_cap = kDefaultConsKappaCap) {
    EdgeIndex idx(inst, mode);
    std::vector<detail::DiscreteSampler> samplers;
    samplers.reserve(states.size());
    for (const auto& s : states) samplers.emplace_back(computational_distribution(s));
    std::optional<double> exact;
    try {
        exact = cons_reject_exact(inst, states, mode, enum_cap, kappa_cap);
    } catch (const BudgetError&) {
        // sampled-only report
    }
    long long rejects = 0;
    std::vector<std::pair<int, int>> outcome(states.size());
    detail::chunked_samples(seed, n_samples, [&](Rng& rng, long long count) {
        for (long long i = 0; i < count; ++i) {
            for (size_t p = 0; p < samplers.size(); ++p) outcome[p] = samplers[p].sample(rng);
            bool fires = false;
            for (size_t a = 0; a < outcome.size() && !fires; ++a)
                for (size_t b = a + 1; b < outcome.size() && !fires; ++b)
                    fires = idx.pair_fires(outcome[a].first, outcome[a].second, outcome[b].first,
                                           outcome[b].second);
            if (fires) ++rejects;
        }
    });
    return make_sampled_report(TestKind::Cons, exact, rejects, n_samples, seed);
}

// Full protocol run with per-test and overall tallies.
struct VerifierRun {
    std::vector<TestReport> reports;
    double sampled_acceptance = 0.0;
    std::optional<double> exact_acceptance;
    long long n_samples = 0;
    uint64_t seed = 0;
};

// Simulates n_samples independent protocol executions: draws the test index,
// samples measurement outcomes, applies the test logic verbatim.
inline VerifierRun run_verifier_sampled(const VerifierConfig& config, const CspInstance& inst,
                                        std::span<const ColoringState> states, long long n_samples,
                                        uint64_t seed) {
    require(n_samples >= 1, "run_verifier_sampled: n_samples must be >= 1");
    require(static_cast<int>(states.size()) == config.kappa,
            "run_verifier_sampled: prover count does not match config");

    EdgeIndex idx(inst, config.edge_mode);
    std::vector<detail::DiscreteSampler> comp, four;
    for (const auto& s : states) {
        comp.emplace_back(computational_distribution(s));
        four.emplace_back(measure_distribution(apply_fourier(s, true, true)));
    }

    VerifierRun run;
    run.n_samples = n_samples;
    run.seed = seed;

    if (config.protocol == Protocol::BT09) {
        require(config.kappa == 2, "run_verifier_sampled: BT09 requires exactly two provers");
        double swap_exact = swap_reject_prob(states[0], states[1]);
        long long counts[3] = {0, 0, 0}, rejects[3] = {0, 0, 0};
        detail::chunked_samples(seed, n_samples, [&](Rng& rng, long long count) {
            for (long long i = 0; i < count; ++i) {
                int r = static_cast<int>(rng.index(3));
                ++counts[r];
                bool rej = false;
                if (r == 0) {
                    rej = rng.uniform01() < swap_exact;
                } else if (r == 1) {
                    auto a = comp[0].sample(rng);
                    auto b = comp[1].sample(rng);
                    rej = idx.pair_fires(a.first, a.second, b.first, b.second);
                } else {
                    // both Unif measurements are always performed
                    for (int p = 0; p < 2; ++p) {
                        auto [v, j] = four[p].sample(rng);
                        if (j == 0 && v != 0) rej = true;
                    }
                }
                if (rej) ++rejects[r];
            }
        });
        double u1 = unif_reject_exact(states[0]);
        double u2 = unif_reject_exact(states[1]);
        std::optional<double> cons_exact;
        try {
            cons_exact = cons_reject_exact(inst, states, config.edge_mode);
        } catch (const BudgetError&) {
        }
        run.reports.push_back(
            make_sampled_report(TestKind::Swap, swap_exact, rejects[0], counts[0], seed));
        run.reports.push_back(
            make_sampled_report(TestKind::Cons, cons_exact, rejects[1], counts[1], seed));
        run.reports.push_back(make_sampled_report(TestKind::Unif, 1.0 - (1.0 - u1) * (1.0 - u2),
                                                  rejects[2], counts[2], seed));
        if (cons_exact)
            run.exact_acceptance =
                1.0 - (swap_exact + *cons_exact + (1.0 - (1.0 - u1) * (1.0 - u2))) / 3.0;
        run.sampled_acceptance = 1.0 - static_cast<double>(rejects[0] + rejects[1] + rejects[2]) /
                                            static_cast<double>(n_samples);
        return run;
    }

    const int thr = detail::cond_unif_threshold(config.z, config.kappa);
    long long counts[2] = {0, 0}, rejects[2] = {0, 0};
    std::vector<std::pair<int, int>> outcome(states.size());
    detail::chunked_samples(seed, n_samples, [&](Rng& rng, long long count) {
        for (long long i = 0; i < count; ++i) {
            int r = static_cast<int>(rng.index(2));
            ++counts[r];
            bool rej = false;
            if (r == 0) {
                int zeros = 0;
                for (const auto& sm : four) {
                    auto [v, j] = sm.sample(rng);
                    if (j == 0) {
                        ++zeros;
                        if (v != 0) rej = true;
                    }
                }
                if (zeros < thr) rej = true;
            } else {
                for (size_t p = 0; p < comp.size(); ++p) outcome[p] = comp[p].sample(rng);
                for (size_t a = 0; a < outcome.size() && !rej; ++a)
                    for (size_t b = a + 1; b < outcome.size() && !rej; ++b)
                        rej = idx.pair_fires(outcome[a].first, outcome[a].second, outcome[b].first,
                                             outcome[b].second);
            }
            if (rej) ++rejects[r];
        }
    });
    double cu_exact = cond_unif_reject_exact(states, config.z);
    std::optional<double> cons_exact;
    try {
        cons_exact = cons_reject_exact(inst, states, config.edge_mode);
    } catch (const BudgetError&) {
    }
    run.reports.push_back(
        make_sampled_report(TestKind::CondUnif, cu_exact, rejects[0], counts[0], seed));
    run.reports.push_back(
        make_sampled_report(TestKind::Cons, cons_exact, rejects[1], counts[1], seed));
    if (cons_exact) run.exact_acceptance = 1.0 - (cu_exact + *cons_exact) / 2.0;
    run.sampled_acceptance =
        1.0 - static_cast<double>(rejects[0] + rejects[1]) / static_cast<double>(n_samples);
    return run;
}

}  // namespace qmalab
