#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmalab/common.hpp"
#include "qmalab/csp.hpp"

namespace qmalab {

// Relation table that forces j' == j + shift (mod k) across an edge.
inline std::vector<uint8_t> shift_table(int k, int shift) {
    std::vector<uint8_t> t(static_cast<size_t>(k) * k, 0);
    for (int j = 0; j < k; ++j) t[static_cast<size_t>(j) * k + ((j + shift) % k)] = 1;
    return t;
}

enum class BadEdgeStyle { DistinctEndpoints, SelfLoop };

struct OneBadEdgeResult {
    CspInstance instance;
    Coloring coloring;      // violates exactly one edge
    int bad_edge_index = 0; // index into instance.edges
};

// Unsatisfiable instance with a coloring violating exactly one edge.
// A directed cycle over all vertices carries shift constraints consistent
// with a hidden coloring, except one edge whose shift is offset by a nonzero
// amount; composing the shifts around the cycle shows no coloring satisfies
// every edge. SelfLoop style keeps the cycle consistent and plants an
// all-false self-loop instead.
inline OneBadEdgeResult generate_one_bad_edge(int n, int k, uint64_t seed,
                                              BadEdgeStyle style = BadEdgeStyle::DistinctEndpoints) {
    require(n >= 2, "generate_one_bad_edge: n must be >= 2");
    require(k >= 2, "generate_one_bad_edge: k must be >= 2");
    Rng rng(seed);

    OneBadEdgeResult out;
    Coloring& col = out.coloring;
    col.colors.resize(n);
    for (int v = 0; v < n; ++v) col.colors[v] = static_cast<int>(rng.index(k));

    CspInstance& inst = out.instance;
    inst.n_vertices = n;
    inst.alphabet_size = k;
    inst.name = "one-bad-edge(n=" + std::to_string(n) + ",k=" + std::to_string(k) +
                ",seed=" + std::to_string(seed) +
                (style == BadEdgeStyle::SelfLoop ? ",self-loop)" : ")");

    const int bad_cycle_pos = static_cast<int>(rng.index(n));
    const int offset = 1 + static_cast<int>(rng.index(k - 1));
    for (int i = 0; i < n; ++i) {
        DirectedEdge e;
        e.u = i;
        e.v = (i + 1) % n;
        int shift = ((col.colors[e.v] - col.colors[e.u]) % k + k) % k;
        if (style == BadEdgeStyle::DistinctEndpoints && i == bad_cycle_pos)
            shift = (shift + offset) % k;
        e.allowed = shift_table(k, shift);
        inst.edges.push_back(std::move(e));
    }
    if (style == BadEdgeStyle::SelfLoop) {
        DirectedEdge loop;
        loop.u = loop.v = static_cast<int>(rng.index(n));
        loop.allowed.assign(static_cast<size_t>(k) * k, 0);
        out.bad_edge_index = inst.edge_count();
        inst.edges.push_back(std::move(loop));
    } else {
        out.bad_edge_index = bad_cycle_pos;
    }

    inst.validate();
    // Self-check the construction's promises before handing it out.
    if (violation_count(inst, col) != 1)
        throw std::logic_error("generate_one_bad_edge: coloring does not violate exactly one edge");
    auto space = coloring_space_size(n, k);
    if (space && *space <= kDefaultEnumCap) {
        if (!(max_satisfiable_fraction(inst) < Rational(1, 1)))
            throw std::logic_error("generate_one_bad_edge: oracle found a satisfying coloring");
    }
    return out;
}

enum class GapMode { PlantedSatisfiable, Frustrated };

struct GapInstanceResult {
    CspInstance instance;
    Coloring reference;                   // the planted / reference coloring
    Rational reference_gap{0, 1};         // violations(reference) / M
    std::optional<Rational> oracle_gap;   // 1 - max_satisfiable_fraction when the oracle ran
    bool certified_unsat = false;         // frustrated: unsatisfiable by construction
    int degree = 0;

    // Reported gap: the oracle value when available, else the reference bound.
    Rational gap() const { return oracle_gap ? *oracle_gap : reference_gap; }
};

namespace detail {

// d-regular edge list on n vertices via circulant shifts; self-loops pad the
// degree when n and d are both odd (a loop counts 1 toward its vertex degree).
inline std::vector<std::pair<int, int>> regular_edge_list(int n, int d) {
    require(d >= 1, "regular generator: degree must be >= 1");
    require(n >= 2, "regular generator: n must be >= 2");
    std::vector<std::pair<int, int>> edges;
    int rem = d;
    if ((n % 2 == 1) && (d % 2 == 1)) {
        for (int i = 0; i < n; ++i) edges.emplace_back(i, i);
        rem -= 1;
    }
    bool use_matching = (rem % 2 == 1);
    int shifts = rem / 2;
    int max_shift = shifts;
    if (use_matching) {
        require(n % 2 == 0, "regular generator: infeasible degree sequence");
        require(max_shift < n / 2, "regular generator: infeasible degree sequence");
    } else {
        require(max_shift <= (n - 1) / 2, "regular generator: infeasible degree sequence");
    }
    for (int s = 1; s <= shifts; ++s)
        for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + s) % n);
    if (use_matching)
        for (int i = 0; i < n / 2; ++i) edges.emplace_back(i, i + n / 2);
    return edges;
}

}  // namespace detail

// d-regular (with self-loops) instance. Planted mode hides a satisfying
// coloring behind random relation tables. Frustrated mode plants a set of
// violated shift-1 cycle edges whose offsets compose to a nonzero net shift,
// so the instance is unsatisfiable by construction; the reference coloring
// violates exactly the planted set. The oracle certifies the gap on tiny
// instances.
inline GapInstanceResult generate_regular_gap_instance(int n, int k, int degree, uint64_t seed,
                                                       GapMode mode, double bad_fraction = 0.05,
                                                       uint64_t oracle_cap = kDefaultEnumCap) {
    require(k >= 2, "generate_regular_gap_instance: k must be >= 2");
    auto pairs = detail::regular_edge_list(n, degree);
    Rng rng(seed);

    GapInstanceResult out;
    out.degree = degree;
    Coloring& col = out.reference;
    col.colors.resize(n);
    for (int v = 0; v < n; ++v) col.colors[v] = static_cast<int>(rng.index(k));

    CspInstance& inst = out.instance;
    inst.n_vertices = n;
    inst.alphabet_size = k;
    inst.name = std::string(mode == GapMode::PlantedSatisfiable ? "planted" : "frustrated") +
                "-regular(n=" + std::to_string(n) + ",k=" + std::to_string(k) +
                ",d=" + std::to_string(degree) + ",seed=" + std::to_string(seed) + ")";

    const int m = static_cast<int>(pairs.size());
    if (mode == GapMode::PlantedSatisfiable) {
        for (auto [u, v] : pairs) {
            DirectedEdge e;
            e.u = u;
            e.v = v;
            e.allowed.assign(static_cast<size_t>(k) * k, 0);
            for (int j = 0; j < k; ++j)
                for (int jp = 0; jp < k; ++jp)
                    e.allowed[static_cast<size_t>(j) * k + jp] =
                        (j == col.colors[u] && jp == col.colors[v]) ? 1 : (rng.index(2) ? 1 : 0);
            inst.edges.push_back(std::move(e));
        }
        out.reference_gap = Rational(0, 1);
    } else {
        require(bad_fraction > 0.0 && bad_fraction <= 1.0,
                "generate_regular_gap_instance: bad_fraction must be in (0, 1]");
        // The unsatisfiability certificate lives on the shift-1 cycle, so the
        // degree must be large enough for that block to exist (n >= 3, and
        // d >= 2, or d >= 3 when both n and d are odd).
        {
            int loops = ((n % 2 == 1) && (degree % 2 == 1)) ? 1 : 0;
            require(n >= 3 && (degree - loops) / 2 >= 1,
                    "generate_regular_gap_instance: frustrated mode needs a full shift-1 cycle");
        }
        // Bad edges live on the shift-1 cycle; there are n of those. Offsets
        // are 1 except possibly the last, adjusted so the net offset around
        // the cycle is nonzero mod k.
        int want = std::max(1LL, std::llround(bad_fraction * m));
        int n_bad = std::min(want, n);
        std::vector<int> offsets(static_cast<size_t>(n_bad), 1);
        if (n_bad % k == 0) {
            if (k > 2) {
                offsets.back() = 2;
            } else {
                n_bad = (n_bad == n) ? n_bad - 1 : n_bad + 1;  // parity fix for k == 2
                offsets.assign(static_cast<size_t>(n_bad), 1);
            }
        }
        // Evenly spread bad positions along the cycle, rotated by the seed.
        std::vector<int> bad_pos(static_cast<size_t>(n_bad));
        int rot = static_cast<int>(rng.index(n));
        std::vector<uint8_t> is_bad(static_cast<size_t>(n), 0);
        std::vector<int> bad_offset(static_cast<size_t>(n), 0);
        for (int b = 0; b < n_bad; ++b) {
            int p = (rot + static_cast<int>((static_cast<long long>(b) * n) / n_bad)) % n;
            bad_pos[b] = p;
            is_bad[p] = 1;
            bad_offset[p] = offsets[b];
        }
        for (auto [u, v] : pairs) {
            DirectedEdge e;
            e.u = u;
            e.v = v;
            int shift = ((col.colors[v] - col.colors[u]) % k + k) % k;
            // with n >= 3 only shift-1 edges satisfy v == u + 1 (mod n)
            if (u != v && v == (u + 1) % n && is_bad[u]) shift = (shift + bad_offset[u]) % k;
            e.allowed = shift_table(k, shift);
            inst.edges.push_back(std::move(e));
        }
        out.certified_unsat = true;
        out.reference_gap = Rational(n_bad, m);
        if (violation_count(inst, col) != n_bad)
            throw std::logic_error("generate_regular_gap_instance: planted violation count mismatch");
    }

    inst.validate();
    auto space = coloring_space_size(n, k);
    if (space && *space <= oracle_cap) {
        Rational best = max_satisfiable_fraction(inst, oracle_cap);
        out.oracle_gap = Rational(best.den - best.num, best.den);
        if (mode == GapMode::PlantedSatisfiable && !(best == Rational(1, 1)))
            throw std::logic_error("generate_regular_gap_instance: planted coloring not optimal");
        if (mode == GapMode::Frustrated && best == Rational(1, 1))
            throw std::logic_error("generate_regular_gap_instance: frustrated instance satisfiable");
    }
    return out;
}

}  // namespace qmalab
