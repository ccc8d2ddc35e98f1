#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmalab/attack.hpp"
#include "qmalab/bounds.hpp"
#include "qmalab/csp.hpp"
#include "qmalab/state.hpp"
#include "qmalab/verifier.hpp"

namespace qmalab::io {

using nlohmann::json;

// --- primitives ----------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// temp-then-rename so concurrent readers never observe a partial file
inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError(path + ": cannot open for writing");
        out << content;
        out.flush();
        if (!out) throw ParseError(path + ": write failed");
    }
    fs::rename(tmp, target);
}

inline std::string fnv1a_hash(const std::string& bytes) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string file_hash(const std::string& path) { return fnv1a_hash(read_file(path)); }

inline json parse_json(const std::string& text, const std::string& where) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(where + ": malformed JSON");
    return j;
}

namespace detail {

inline const json& field(const json& j, const char* name, const std::string& at) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(at + ": missing field '" + name + "'");
    return *it;
}

inline int int_field(const json& j, const char* name, const std::string& at) {
    const json& f = field(j, name, at);
    if (!f.is_number_integer()) throw ParseError(at + "." + name + ": expected an integer");
    return f.get<int>();
}

}  // namespace detail

// --- 2CSP instances -------------------------------------------------------------

inline json instance_to_json(const CspInstance& inst) {
    json edges = json::array();
    for (const auto& e : inst.edges) {
        json rows = json::array();
        for (int j = 0; j < inst.alphabet_size; ++j) {
            json row = json::array();
            for (int jp = 0; jp < inst.alphabet_size; ++jp)
                row.push_back(e.allows(j, jp, inst.alphabet_size) ? 1 : 0);
            rows.push_back(std::move(row));
        }
        edges.push_back({{"u", e.u}, {"v", e.v}, {"allowed", std::move(rows)}});
    }
    return json{{"n_vertices", inst.n_vertices},
                {"alphabet_size", inst.alphabet_size},
                {"edges", std::move(edges)},
                {"name", inst.name}};
}

inline CspInstance instance_from_json(const json& j, const std::string& where) {
    CspInstance inst;
    inst.n_vertices = detail::int_field(j, "n_vertices", where);
    inst.alphabet_size = detail::int_field(j, "alphabet_size", where);
    if (auto it = j.find("name"); it != j.end() && it->is_string())
        inst.name = it->get<std::string>();
    const json& edges = detail::field(j, "edges", where);
    if (!edges.is_array()) throw ParseError(where + ".edges: expected an array");
    const int k = inst.alphabet_size;
    for (size_t i = 0; i < edges.size(); ++i) {
        const std::string at = where + ".edges[" + std::to_string(i) + "]";
        const json& je = edges[i];
        DirectedEdge e;
        e.u = detail::int_field(je, "u", at);
        e.v = detail::int_field(je, "v", at);
        if (e.u < 0 || e.u >= inst.n_vertices || e.v < 0 || e.v >= inst.n_vertices)
            throw ParseError(at + ": endpoint out of range [0, " +
                             std::to_string(inst.n_vertices) + ")");
        const json& rows = detail::field(je, "allowed", at);
        if (!rows.is_array() || rows.size() != static_cast<size_t>(k))
            throw ParseError(at + ".allowed: expected " + std::to_string(k) + " rows");
        e.allowed.assign(static_cast<size_t>(k) * k, 0);
        for (int r = 0; r < k; ++r) {
            const json& row = rows[r];
            if (!row.is_array() || row.size() != static_cast<size_t>(k))
                throw ParseError(at + ".allowed[" + std::to_string(r) + "]: expected " +
                                 std::to_string(k) + " entries");
            for (int c = 0; c < k; ++c) {
                const json& cell = row[c];
                if (!cell.is_number_integer() || (cell.get<int>() != 0 && cell.get<int>() != 1))
                    throw ParseError(at + ".allowed[" + std::to_string(r) + "][" +
                                     std::to_string(c) + "]: expected 0 or 1");
                e.allowed[static_cast<size_t>(r) * k + c] = static_cast<uint8_t>(cell.get<int>());
            }
        }
        inst.edges.push_back(std::move(e));
    }
    try {
        inst.validate();
    } catch (const ContractError& e) {
        throw ParseError(where + ": " + e.what());
    }
    return inst;
}

inline CspInstance load_instance(const std::string& path) {
    return instance_from_json(parse_json(read_file(path), path), path);
}

inline void save_instance(const std::string& path, const CspInstance& inst) {
    atomic_write(path, instance_to_json(inst).dump(2) + "\n");
}

// --- colorings -------------------------------------------------------------------

inline json coloring_to_json(const Coloring& col) { return json{{"colors", col.colors}}; }

inline Coloring coloring_from_json(const json& j, const std::string& where) {
    const json& colors = detail::field(j, "colors", where);
    if (!colors.is_array()) throw ParseError(where + ".colors: expected an array");
    Coloring col;
    for (size_t i = 0; i < colors.size(); ++i) {
        if (!colors[i].is_number_integer())
            throw ParseError(where + ".colors[" + std::to_string(i) + "]: expected an integer");
        col.colors.push_back(colors[i].get<int>());
    }
    return col;
}

inline Coloring load_coloring(const std::string& path) {
    return coloring_from_json(parse_json(read_file(path), path), path);
}

inline void save_coloring(const std::string& path, const Coloring& col) {
    atomic_write(path, coloring_to_json(col).dump(2) + "\n");
}

// --- coloring states --------------------------------------------------------------

inline json state_to_json(const ColoringState& s) {
    json va = json::array();
    for (const auto& a : s.vertex_amp) va.push_back(json::array({a.real(), a.imag()}));
    json ca = json::array();
    for (int v = 0; v < s.n_vertices; ++v) {
        json row = json::array();
        for (int j = 0; j < s.alphabet_size; ++j) {
            cplx b = s.beta(v, j);
            row.push_back(json::array({b.real(), b.imag()}));
        }
        ca.push_back(std::move(row));
    }
    return json{{"n_vertices", s.n_vertices},
                {"alphabet_size", s.alphabet_size},
                {"vertex_amp", std::move(va)},
                {"color_amp", std::move(ca)}};
}

inline cplx complex_from_json(const json& j, const std::string& at) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(at + ": expected [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline ColoringState state_from_json(const json& j, const std::string& where) {
    int n = detail::int_field(j, "n_vertices", where);
    int k = detail::int_field(j, "alphabet_size", where);
    const json& va = detail::field(j, "vertex_amp", where);
    if (!va.is_array() || va.size() != static_cast<size_t>(n))
        throw ParseError(where + ".vertex_amp: expected " + std::to_string(n) + " entries");
    std::vector<cplx> alpha;
    for (size_t v = 0; v < va.size(); ++v)
        alpha.push_back(complex_from_json(va[v], where + ".vertex_amp[" + std::to_string(v) + "]"));
    const json& ca = detail::field(j, "color_amp", where);
    if (!ca.is_array() || ca.size() != static_cast<size_t>(n))
        throw ParseError(where + ".color_amp: expected " + std::to_string(n) + " rows");
    std::vector<cplx> beta;
    for (size_t v = 0; v < ca.size(); ++v) {
        const json& row = ca[v];
        if (!row.is_array() || row.size() != static_cast<size_t>(k))
            throw ParseError(where + ".color_amp[" + std::to_string(v) + "]: expected " +
                             std::to_string(k) + " entries");
        for (size_t c = 0; c < row.size(); ++c)
            beta.push_back(complex_from_json(
                row[c],
                where + ".color_amp[" + std::to_string(v) + "][" + std::to_string(c) + "]"));
    }
    try {
        return ColoringState(n, k, std::move(alpha), std::move(beta));
    } catch (const ContractError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline ColoringState load_state(const std::string& path) {
    return state_from_json(parse_json(read_file(path), path), path);
}

inline void save_state(const std::string& path, const ColoringState& s) {
    atomic_write(path, state_to_json(s).dump() + "\n");
}

// --- reports ----------------------------------------------------------------------

inline json report_to_json(const TestReport& r) {
    json j{{"test", test_kind_name(r.test)},
           {"n_samples", r.n_samples},
           {"seed", r.seed},
           {"std_error", r.std_error},
           {"consistency_flag", r.consistency_flag}};
    j["exact_reject"] = r.exact_reject ? json(*r.exact_reject) : json(nullptr);
    j["sampled_reject"] = r.sampled_reject ? json(*r.sampled_reject) : json(nullptr);
    return j;
}

inline json verifier_run_to_json(const VerifierRun& run) {
    json reports = json::array();
    for (const auto& r : run.reports) reports.push_back(report_to_json(r));
    json j{{"reports", std::move(reports)},
           {"sampled_acceptance", run.sampled_acceptance},
           {"n_samples", run.n_samples},
           {"seed", run.seed}};
    j["exact_acceptance"] = run.exact_acceptance ? json(*run.exact_acceptance) : json(nullptr);
    return j;
}

// Canonical attack serialization; wall time is volatile and lives only in the
// run manifest, so identical runs produce identical files.
inline json attack_result_to_json(const AttackResult& r, bool include_states = true) {
    json traces = json::array();
    for (const auto& trace : r.traces) {
        json t = json::array();
        for (const auto& p : trace) t.push_back(json::array({p.iteration, p.acceptance}));
        traces.push_back(std::move(t));
    }
    json j{{"best_acceptance", r.best_acceptance},
           {"best_restart", r.best_restart},
           {"exact_objective", r.exact_objective},
           {"traces", std::move(traces)}};
    if (include_states) {
        json states = json::array();
        for (const auto& s : r.best_states) states.push_back(state_to_json(s));
        j["best_states"] = std::move(states);
    }
    return j;
}

inline json collision_stats_to_json(const CollisionStats& st) {
    json j{{"kappa", st.kappa},
           {"pairwise", st.pairwise},
           {"mean", st.mean},
           {"variance", st.variance},
           {"variance_exact", st.variance_exact},
           {"variance_sigma", st.variance_sigma},
           {"cantelli_bound", st.cantelli_bound},
           {"degenerate_mean", st.degenerate_mean},
           {"empirical_p_zero", st.empirical_p_zero},
           {"empirical_sigma", st.empirical_sigma},
           {"n_mc", st.n_mc},
           {"seed", st.seed}};
    j["exact_p_zero"] = st.exact_p_zero ? json(*st.exact_p_zero) : json(nullptr);
    return j;
}

}  // namespace qmalab::io
