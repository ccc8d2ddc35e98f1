#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "qmalab/common.hpp"

namespace qmalab {

inline constexpr uint64_t kDefaultEnumCap = 10'000'000;  // brute-force oracle budget

// One directed constraint edge. allowed[j*K + j'] == 1 means the ordered
// color pair (j, j') satisfies the predicate.
struct DirectedEdge {
    int u = 0;
    int v = 0;
    std::vector<uint8_t> allowed;

    bool allows(int j, int jp, int alphabet_size) const {
        return allowed[static_cast<size_t>(j) * alphabet_size + jp] != 0;
    }
};

struct Coloring {
    std::vector<int> colors;
};

// A 2CSP over a directed edge list. Relations may be asymmetric; at most one
// stored entry per ordered vertex pair; self-loops permitted.
struct CspInstance {
    int n_vertices = 0;
    int alphabet_size = 0;
    std::vector<DirectedEdge> edges;
    std::string name;

    int edge_count() const { return static_cast<int>(edges.size()); }

    void validate() const {
        require(n_vertices >= 1, "instance '" + name + "': n_vertices must be positive");
        require(alphabet_size >= 1, "instance '" + name + "': alphabet_size must be positive");
        std::unordered_set<uint64_t> seen;
        for (size_t i = 0; i < edges.size(); ++i) {
            const auto& e = edges[i];
            const std::string at = "instance '" + name + "' edges[" + std::to_string(i) + "]";
            require(e.u >= 0 && e.u < n_vertices, at + ": endpoint u out of range");
            require(e.v >= 0 && e.v < n_vertices, at + ": endpoint v out of range");
            require(e.allowed.size() ==
                        static_cast<size_t>(alphabet_size) * static_cast<size_t>(alphabet_size),
                    at + ": allowed table must be K x K");
            uint64_t key = static_cast<uint64_t>(e.u) * n_vertices + e.v;
            require(seen.insert(key).second, at + ": duplicate ordered pair (u, v)");
        }
    }

    void check_coloring(const Coloring& col) const {
        require(col.colors.size() == static_cast<size_t>(n_vertices),
                "coloring length " + std::to_string(col.colors.size()) +
                    " does not match n_vertices " + std::to_string(n_vertices));
        for (size_t v = 0; v < col.colors.size(); ++v)
            require(col.colors[v] >= 0 && col.colors[v] < alphabet_size,
                    "coloring[" + std::to_string(v) + "] out of alphabet range");
    }
};

// Adds, for every stored edge (u, v) with u != v whose reverse is absent, the
// edge (v, u) with the transposed relation. Models undirected constraint sets.
inline CspInstance symmetrized(const CspInstance& inst) {
    inst.validate();
    CspInstance out = inst;
    std::unordered_set<uint64_t> present;
    for (const auto& e : inst.edges)
        present.insert(static_cast<uint64_t>(e.u) * inst.n_vertices + e.v);
    const int k = inst.alphabet_size;
    for (const auto& e : inst.edges) {
        if (e.u == e.v) continue;
        uint64_t rev = static_cast<uint64_t>(e.v) * inst.n_vertices + e.u;
        if (present.count(rev)) continue;
        DirectedEdge t;
        t.u = e.v;
        t.v = e.u;
        t.allowed.assign(static_cast<size_t>(k) * k, 0);
        for (int j = 0; j < k; ++j)
            for (int jp = 0; jp < k; ++jp)
                t.allowed[static_cast<size_t>(jp) * k + j] = e.allowed[static_cast<size_t>(j) * k + jp];
        out.edges.push_back(std::move(t));
        present.insert(rev);
    }
    return out;
}

inline long long violation_count(const CspInstance& inst, const Coloring& col) {
    inst.check_coloring(col);
    long long bad = 0;
    for (const auto& e : inst.edges)
        if (!e.allows(col.colors[e.u], col.colors[e.v], inst.alphabet_size)) ++bad;
    return bad;
}

// Fraction of edge predicates satisfied by the coloring, exact.
// An instance with no edges is vacuously fully satisfied.
inline Rational satisfied_fraction(const CspInstance& inst, const Coloring& col) {
    if (inst.edges.empty()) {
        inst.check_coloring(col);
        return Rational(1, 1);
    }
    long long bad = violation_count(inst, col);
    return Rational(inst.edge_count() - bad, inst.edge_count());
}

// Number of colorings K^N, or nullopt on overflow past the cap scale.
inline std::optional<uint64_t> coloring_space_size(int n, int k) {
    uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > (UINT64_MAX / 2) / static_cast<uint64_t>(k)) return std::nullopt;
        total *= static_cast<uint64_t>(k);
    }
    return total;
}

struct OracleResult {
    Rational best_fraction{0, 1};
    Coloring best;
};

// Brute-force satisfiability oracle: exact maximum of satisfied_fraction over
// all K^N colorings, with the achieving coloring (first in counting order).
// Refuses instances past the enumeration cap.
inline OracleResult brute_force_best(const CspInstance& inst, uint64_t cap = kDefaultEnumCap) {
    inst.validate();
    auto space = coloring_space_size(inst.n_vertices, inst.alphabet_size);
    if (!space || *space > cap)
        throw BudgetError("instance too large for oracle: K^N exceeds enumeration cap " +
                          std::to_string(cap));
    const int n = inst.n_vertices;
    const int k = inst.alphabet_size;
    const long long m = inst.edge_count();

    Coloring cur;
    cur.colors.assign(n, 0);
    OracleResult best;
    best.best = cur;
    long long best_sat = -1;
    for (uint64_t idx = 0; idx < *space; ++idx) {
        long long sat = 0;
        for (const auto& e : inst.edges)
            if (e.allows(cur.colors[e.u], cur.colors[e.v], k)) ++sat;
        if (sat > best_sat) {
            best_sat = sat;
            best.best = cur;
            if (best_sat == m) break;  // cannot improve
        }
        // increment mixed-radix counter
        for (int pos = 0; pos < n; ++pos) {
            if (++cur.colors[pos] < k) break;
            cur.colors[pos] = 0;
        }
    }
    best.best_fraction = m == 0 ? Rational(1, 1) : Rational(best_sat, m);
    return best;
}

inline Rational max_satisfiable_fraction(const CspInstance& inst, uint64_t cap = kDefaultEnumCap) {
    return brute_force_best(inst, cap).best_fraction;
}

}  // namespace qmalab
