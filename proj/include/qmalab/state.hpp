#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qmalab/common.hpp"
#include "qmalab/csp.hpp"

namespace qmalab {

using cplx = std::complex<double>;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Product state over a vertex register (dimension N) and a per-vertex color
// register (dimension K): amplitudes alpha_v and beta_{v,j}, each register
// unit-norm within 1e-9 at construction.
struct ColoringState {
    int n_vertices = 0;
    int alphabet_size = 0;
    std::vector<cplx> vertex_amp;  // N
    std::vector<cplx> color_amp;   // N*K, row-major by vertex

    ColoringState() = default;
    ColoringState(int n, int k, std::vector<cplx> alpha, std::vector<cplx> beta)
        : n_vertices(n), alphabet_size(k), vertex_amp(std::move(alpha)), color_amp(std::move(beta)) {
        validate();
    }

    cplx beta(int v, int j) const { return color_amp[static_cast<size_t>(v) * alphabet_size + j]; }

    void validate() const {
        require(n_vertices >= 1 && alphabet_size >= 1, "ColoringState: dimensions must be positive");
        require(vertex_amp.size() == static_cast<size_t>(n_vertices),
                "ColoringState: vertex_amp length mismatch");
        require(color_amp.size() ==
                    static_cast<size_t>(n_vertices) * static_cast<size_t>(alphabet_size),
                "ColoringState: color_amp shape mismatch");
        double s = 0;
        for (const auto& a : vertex_amp) s += std::norm(a);
        require(std::abs(s - 1.0) <= kNormTolerance, "ColoringState: vertex register not normalized");
        for (int v = 0; v < n_vertices; ++v) {
            double row = 0;
            for (int j = 0; j < alphabet_size; ++j) row += std::norm(beta(v, j));
            require(std::abs(row - 1.0) <= kNormTolerance,
                    "ColoringState: color register at vertex " + std::to_string(v) +
                        " not normalized");
        }
    }
};

// Amplitudes over the full N x K register pair; after a Fourier transform the
// state need not factor, so this is the general container.
struct JointAmplitude {
    int n_vertices = 0;
    int alphabet_size = 0;
    std::vector<cplx> amp;  // N*K row-major

    cplx at(int v, int j) const { return amp[static_cast<size_t>(v) * alphabet_size + j]; }
    cplx& at(int v, int j) { return amp[static_cast<size_t>(v) * alphabet_size + j]; }

    void validate() const {
        require(amp.size() == static_cast<size_t>(n_vertices) * static_cast<size_t>(alphabet_size),
                "JointAmplitude: shape mismatch");
        double s = 0;
        for (const auto& a : amp) s += std::norm(a);
        require(std::abs(s - 1.0) <= kNormTolerance, "JointAmplitude: not normalized");
    }
};

struct OutcomeDistribution {
    int n_vertices = 0;
    int alphabet_size = 0;
    std::vector<double> probs;  // N*K row-major

    double at(int v, int j) const { return probs[static_cast<size_t>(v) * alphabet_size + j]; }

    void validate() const {
        require(probs.size() == static_cast<size_t>(n_vertices) * static_cast<size_t>(alphabet_size),
                "OutcomeDistribution: shape mismatch");
        double s = 0;
        for (double p : probs) {
            require(p >= -1e-12, "OutcomeDistribution: negative entry");
            s += p;
        }
        require(std::abs(s - 1.0) <= kNormTolerance, "OutcomeDistribution: does not sum to 1");
    }
};

// Honest encoding of a coloring: uniform vertex amplitudes, point-mass colors.
inline ColoringState from_coloring(int n, int k, const Coloring& col) {
    require(n >= 1 && k >= 1, "from_coloring: dimensions must be positive");
    require(col.colors.size() == static_cast<size_t>(n), "from_coloring: coloring length mismatch");
    std::vector<cplx> alpha(static_cast<size_t>(n), cplx(1.0 / std::sqrt(double(n)), 0.0));
    std::vector<cplx> beta(static_cast<size_t>(n) * k, cplx(0.0, 0.0));
    for (int v = 0; v < n; ++v) {
        require(col.colors[v] >= 0 && col.colors[v] < k, "from_coloring: color out of range");
        beta[static_cast<size_t>(v) * k + col.colors[v]] = 1.0;
    }
    return ColoringState(n, k, std::move(alpha), std::move(beta));
}

inline ColoringState from_coloring(const CspInstance& inst, const Coloring& col) {
    inst.check_coloring(col);
    return from_coloring(inst.n_vertices, inst.alphabet_size, col);
}

// Discrete Fourier transform as an explicit matrix, entry (k, j) =
// e^{2 pi i jk/n} / sqrt(n), row-major. For tests and small dimensions.
inline std::vector<cplx> dft(int n) {
    require(n >= 1, "dft: dimension must be positive");
    std::vector<cplx> f(static_cast<size_t>(n) * n);
    const double scale = 1.0 / std::sqrt(double(n));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            long long t = (static_cast<long long>(j) * k) % n;
            double a = kTwoPi * static_cast<double>(t) / n;
            f[static_cast<size_t>(k) * n + j] = cplx(std::cos(a) * scale, std::sin(a) * scale);
        }
    return f;
}

namespace detail {

// y_k = sum_j e^{2 pi i jk/n} x_j / sqrt(n), strided access; O(n^2) with
// precomputed roots of unity.
inline void apply_dft_strided(const std::vector<cplx>& roots, int n, cplx* data, int stride,
                              std::vector<cplx>& scratch) {
    const double scale = 1.0 / std::sqrt(double(n));
    scratch.assign(static_cast<size_t>(n), cplx(0, 0));
    for (int k = 0; k < n; ++k) {
        cplx acc(0, 0);
        for (int j = 0; j < n; ++j) acc += roots[(static_cast<size_t>(j) * k) % n] * data[j * stride];
        scratch[k] = acc * scale;
    }
    for (int k = 0; k < n; ++k) data[k * stride] = scratch[k];
}

inline std::vector<cplx> unit_roots(int n) {
    std::vector<cplx> roots(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        double a = kTwoPi * t / n;
        roots[t] = cplx(std::cos(a), std::sin(a));
    }
    return roots;
}

}  // namespace detail

// Amplitudes of (F_N otimes I)^{on_vertex} (I otimes F_K)^{on_color} |Psi>.
inline JointAmplitude apply_fourier(const ColoringState& s, bool on_vertex, bool on_color) {
    const int n = s.n_vertices, k = s.alphabet_size;
    JointAmplitude out;
    out.n_vertices = n;
    out.alphabet_size = k;
    out.amp.resize(static_cast<size_t>(n) * k);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < k; ++j) out.at(v, j) = s.vertex_amp[v] * s.beta(v, j);

    std::vector<cplx> scratch;
    if (on_color) {
        auto roots = detail::unit_roots(k);
        for (int v = 0; v < n; ++v)
            detail::apply_dft_strided(roots, k, &out.amp[static_cast<size_t>(v) * k], 1, scratch);
    }
    if (on_vertex) {
        auto roots = detail::unit_roots(n);
        for (int j = 0; j < k; ++j)
            detail::apply_dft_strided(roots, n, &out.amp[static_cast<size_t>(j)], k, scratch);
    }
    return out;
}

inline OutcomeDistribution measure_distribution(const JointAmplitude& joint) {
    OutcomeDistribution d;
    d.n_vertices = joint.n_vertices;
    d.alphabet_size = joint.alphabet_size;
    d.probs.resize(joint.amp.size());
    for (size_t i = 0; i < joint.amp.size(); ++i) d.probs[i] = std::norm(joint.amp[i]);
    return d;
}

inline OutcomeDistribution computational_distribution(const ColoringState& s) {
    return measure_distribution(apply_fourier(s, false, false));
}

inline cplx state_overlap(const ColoringState& a, const ColoringState& b) {
    require(a.n_vertices == b.n_vertices && a.alphabet_size == b.alphabet_size,
            "state_overlap: dimension mismatch");
    cplx s(0, 0);
    for (int v = 0; v < a.n_vertices; ++v) {
        cplx t(0, 0);
        for (int j = 0; j < a.alphabet_size; ++j) t += std::conj(a.beta(v, j)) * b.beta(v, j);
        s += std::conj(a.vertex_amp[v]) * b.vertex_amp[v] * t;
    }
    return s;
}

// Swap-test rejection probability (1 - |<phi|psi>|^2) / 2.
inline double swap_reject_prob(const ColoringState& a, const ColoringState& b) {
    double ov = std::norm(state_overlap(a, b));
    return std::max(0.0, (1.0 - std::min(ov, 1.0)) / 2.0);
}

// Pure-state trace distance sqrt(1 - |<phi|psi>|^2).
inline double pure_trace_distance(const ColoringState& a, const ColoringState& b) {
    double ov = std::norm(state_overlap(a, b));
    return std::sqrt(std::max(0.0, 1.0 - std::min(ov, 1.0)));
}

inline double statistical_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
    require(p.n_vertices == q.n_vertices && p.alphabet_size == q.alphabet_size,
            "statistical_distance: shape mismatch");
    double s = 0;
    for (size_t i = 0; i < p.probs.size(); ++i) s += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * s;
}

// Color marginal of (I otimes F_K)|Psi>: p[j] is the probability of reading j
// in the color register, gammas[j] the renormalized reduced vertex state.
// Columns with no mass carry an explicit undefined marker.
struct ColorMarginal {
    std::vector<double> p;                                   // K
    std::vector<std::optional<std::vector<cplx>>> gammas;    // K, each N when defined
};

inline constexpr double kZeroColumnThreshold = 1e-24;

inline ColorMarginal color_marginal_after_fourier(const ColoringState& s) {
    const int n = s.n_vertices, k = s.alphabet_size;
    JointAmplitude x = apply_fourier(s, false, true);
    ColorMarginal out;
    out.p.assign(static_cast<size_t>(k), 0.0);
    out.gammas.resize(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        double pj = 0;
        for (int v = 0; v < n; ++v) pj += std::norm(x.at(v, j));
        out.p[j] = pj;
        if (pj > kZeroColumnThreshold) {
            std::vector<cplx> g(static_cast<size_t>(n));
            double inv = 1.0 / std::sqrt(pj);
            for (int v = 0; v < n; ++v) g[v] = x.at(v, j) * inv;
            out.gammas[j] = std::move(g);
        }
    }
    return out;
}

// R_c: vertices whose squared amplitude is strictly below c. The complement
// S_c is derived by callers.
inline std::vector<int> small_amplitude_set(const ColoringState& s, double c) {
    require(c > 0.0 && c <= 1.0, "small_amplitude_set: c must lie in (0, 1]");
    std::vector<int> r;
    for (int v = 0; v < s.n_vertices; ++v)
        if (std::norm(s.vertex_amp[v]) < c) r.push_back(v);
    return r;
}

// --- seeded state generation -------------------------------------------------

struct HaarPerRegister {};
struct PerturbedHonest {
    double epsilon = 0.0;
    Coloring base;
};
struct SparseSupport {
    int support_size = 1;
};
using StateProfile = std::variant<HaarPerRegister, PerturbedHonest, SparseSupport>;

namespace detail {

inline void normalize(std::vector<cplx>& v) {
    double s = 0;
    for (const auto& z : v) s += std::norm(z);
    require(s > 0, "normalize: zero vector");
    double inv = 1.0 / std::sqrt(s);
    for (auto& z : v) z *= inv;
}

inline void normalize_range(std::vector<cplx>& v, size_t begin, size_t len) {
    double s = 0;
    for (size_t i = begin; i < begin + len; ++i) s += std::norm(v[i]);
    require(s > 0, "normalize: zero vector");
    double inv = 1.0 / std::sqrt(s);
    for (size_t i = begin; i < begin + len; ++i) v[i] *= inv;
}

}  // namespace detail

inline ColoringState random_state(int n, int k, uint64_t seed, const StateProfile& profile) {
    require(n >= 1 && k >= 1, "random_state: dimensions must be positive");
    Rng rng(seed);
    std::vector<cplx> alpha(static_cast<size_t>(n));
    std::vector<cplx> beta(static_cast<size_t>(n) * k);

    if (std::holds_alternative<HaarPerRegister>(profile)) {
        for (auto& z : alpha) z = cplx(rng.normal(), rng.normal());
        detail::normalize(alpha);
        for (auto& z : beta) z = cplx(rng.normal(), rng.normal());
        for (int v = 0; v < n; ++v) detail::normalize_range(beta, static_cast<size_t>(v) * k, k);
    } else if (const auto* ph = std::get_if<PerturbedHonest>(&profile)) {
        ColoringState honest = from_coloring(n, k, ph->base);
        alpha = honest.vertex_amp;
        beta = honest.color_amp;
        if (ph->epsilon != 0.0) {
            for (auto& z : alpha) z += ph->epsilon * cplx(rng.normal(), rng.normal());
            detail::normalize(alpha);
            for (auto& z : beta) z += ph->epsilon * cplx(rng.normal(), rng.normal());
            for (int v = 0; v < n; ++v) detail::normalize_range(beta, static_cast<size_t>(v) * k, k);
        }
    } else {
        const auto& sp = std::get<SparseSupport>(profile);
        require(sp.support_size >= 1 && sp.support_size <= n,
                "random_state: sparse support size out of range");
        // support: a uniformly random m-subset (partial Fisher-Yates)
        std::vector<int> idx(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int i = 0; i < sp.support_size; ++i) {
            int j = i + static_cast<int>(rng.index(n - i));
            std::swap(idx[i], idx[j]);
        }
        for (int i = 0; i < sp.support_size; ++i)
            alpha[idx[i]] = cplx(rng.normal(), rng.normal());
        detail::normalize(alpha);
        for (auto& z : beta) z = cplx(rng.normal(), rng.normal());
        for (int v = 0; v < n; ++v) detail::normalize_range(beta, static_cast<size_t>(v) * k, k);
    }
    return ColoringState(n, k, std::move(alpha), std::move(beta));
}

}  // namespace qmalab
