#pragma once

// JSON and text renderings of LTSs, comparison verdicts and suite reports.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "milner/relations.hpp"
#include "milner/semantics.hpp"
#include "milner/syntax.hpp"
#include "milner/wka.hpp"

namespace milner {

using json = nlohmann::ordered_json;

inline json lts_json(const Lts& lts) {
    json states = json::array();
    for (StateId s = 0; s < lts.size(); ++s)
        states.push_back({{"id", s}, {"term", lts.state_name(s)}, {"accepting", static_cast<bool>(lts.accepting[s])}});
    json edges = json::array();
    for (StateId s = 0; s < lts.size(); ++s)
        for (std::size_t a = 0; a < lts.labels(); ++a)
            for (StateId t : lts.succ[s][a])
                edges.push_back({{"from", s}, {"label", std::string(1, lts.alphabet[a])}, {"to", t}});
    return {{"alphabet", lts.alphabet}, {"roots", lts.roots}, {"states", states}, {"transitions", edges}};
}

inline std::string_view obligation_name(Obligation o) { return o == Obligation::Accepting ? "accepting" : "move"; }

inline json witness_json(const Lts& lts, const DistinguishingReport& rep) {
    json failure = {{"kind", obligation_name(rep.failure)},
                    {"left", rep.failing_left},
                    {"right", rep.failing_right}};
    if (rep.failure == Obligation::Move) failure["label"] = std::string(1, rep.failure_label);
    json nodes = json::array();
    for (const Refutation& r : rep.refutation) {
        json node = {{"left", lts.state_name(r.left)},
                     {"right", lts.state_name(r.right)},
                     {"kind", obligation_name(r.kind)}};
        if (r.kind == Obligation::Move) {
            node["label"] = std::string(1, r.label);
            node["left_next"] = lts.state_name(r.left_next);
            node["children"] = r.children;
        }
        nodes.push_back(std::move(node));
    }
    return {{"trace", rep.trace}, {"failure", failure}, {"refutation", nodes}};
}

enum class CompareKind { Sim, SimEq, Bisim, Trace };

inline std::optional<CompareKind> compare_kind(std::string_view name) {
    if (name == "sim") return CompareKind::Sim;
    if (name == "simeq") return CompareKind::SimEq;
    if (name == "bisim") return CompareKind::Bisim;
    if (name == "trace") return CompareKind::Trace;
    return std::nullopt;
}

inline std::string_view compare_name(CompareKind k) {
    switch (k) {
    case CompareKind::Sim: return "sim";
    case CompareKind::SimEq: return "simeq";
    case CompareKind::Bisim: return "bisim";
    case CompareKind::Trace: return "trace";
    }
    return "?";
}

/// Decides the relation between x and y on their joint LTS and describes the
/// outcome: {relation, left, right, verdict, relation_size, state_counts, witness?}.
/// relation_size is the size of the maximal simulation (or the number of
/// bisimulation classes for bisim, or of product pairs visited for trace).
inline json compare_report(CompareKind kind, const Regex& x, const Regex& y, std::size_t cap = kDefaultStateCap) {
    Lts lts = explore({x, y}, cap);
    const StateId l = lts.roots[0], r = lts.roots[1];
    json out = {{"relation", compare_name(kind)}, {"left", render(x)}, {"right", render(y)}};
    json counts = {{"left", lts.reachable_from(l)}, {"right", lts.reachable_from(r)}, {"joint", lts.size()}};

    switch (kind) {
    case CompareKind::Sim:
    case CompareKind::SimEq: {
        DistinguishingReport fwd = simulation_report(lts, l, r);
        std::optional<DistinguishingReport> failed;
        if (!fwd.verdict) failed = fwd;
        bool verdict = fwd.verdict;
        if (kind == CompareKind::SimEq && verdict) {
            DistinguishingReport back = simulation_report(lts, r, l);
            verdict = back.verdict;
            if (!verdict) failed = back;
        }
        out["verdict"] = verdict;
        out["relation_size"] = fwd.relation_size;
        out["state_counts"] = counts;
        if (failed) {
            json w = witness_json(lts, *failed);
            w["direction"] = failed->left_root == l ? "left<right" : "right<left";
            out["witness"] = std::move(w);
        }
        break;
    }
    case CompareKind::Bisim: {
        auto blocks = bisimulation_partition(lts);
        std::size_t classes = 0;
        for (auto b : blocks) classes = std::max<std::size_t>(classes, b + 1);
        out["verdict"] = blocks[l] == blocks[r];
        out["relation_size"] = classes;
        out["state_counts"] = counts;
        break;
    }
    case CompareKind::Trace: {
        auto word = trace_counterexample(lts, l, r);
        out["verdict"] = !word.has_value();
        out["relation_size"] = lts.size();
        out["state_counts"] = counts;
        if (word) out["witness"] = {{"trace", *word}};
        break;
    }
    }
    return out;
}

inline std::string compare_text(const json& rep) {
    std::string out = rep["left"].get<std::string>() + " " + rep["relation"].get<std::string>() + " " +
                      rep["right"].get<std::string>() + ": " + (rep["verdict"].get<bool>() ? "holds" : "fails") + "\n";
    out += "states: left " + std::to_string(rep["state_counts"]["left"].get<std::size_t>()) + ", right " +
           std::to_string(rep["state_counts"]["right"].get<std::size_t>()) + ", joint " +
           std::to_string(rep["state_counts"]["joint"].get<std::size_t>()) + "\n";
    if (rep.contains("witness")) {
        const json& w = rep["witness"];
        out += "witness trace: \"" + w["trace"].get<std::string>() + "\"\n";
        if (w.contains("failure")) {
            const json& f = w["failure"];
            if (f["kind"] == "accepting")
                out += "then " + f["left"].get<std::string>() + " accepts but " + f["right"].get<std::string>() +
                       " does not\n";
            else
                out += "then " + f["left"].get<std::string>() + " has a " + f["label"].get<std::string>() +
                       "-move that " + f["right"].get<std::string>() + " cannot match\n";
        }
    }
    return out;
}

namespace wka {

inline json suite_json(const SuiteReport& rep) {
    const SuiteConfig& c = rep.config;
    json only = json::array();
    for (SchemaId id : c.only) only.push_back(schema(id).name);
    json config = {{"seed", c.gen.seed},
                   {"max_size", c.gen.max_size},
                   {"alphabet", c.gen.alphabet},
                   {"star_probability", c.gen.star_probability},
                   {"instances_per_schema", c.instances_per_schema},
                   {"state_cap", c.state_cap},
                   {"only", only}};
    json schemas_out = json::array();
    for (const SchemaReport& s : rep.schemas) {
        json failures = json::array();
        for (const Failure& f : s.failures) failures.push_back({{"index", f.index}, {"instantiation", f.instantiation}});
        schemas_out.push_back({{"name", s.name},
                               {"formula", s.formula},
                               {"attempted", s.attempted},
                               {"non_vacuous", s.non_vacuous},
                               {"vacuous", s.vacuous},
                               {"from_families", s.from_families},
                               {"passed", s.passed},
                               {"skipped", s.skipped},
                               {"failures", failures}});
    }
    return {{"seed", c.gen.seed},
            {"config", config},
            {"schemas", schemas_out},
            {"failures", rep.failure_count()},
            {"ok", rep.ok()}};
}

inline std::string suite_table(const SuiteReport& rep) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-13s %9s %11s %8s %8s %7s %7s %8s\n", "schema", "attempted", "non-vacuous",
                  "vacuous", "families", "passed", "skipped", "failures");
    out += line;
    for (const SchemaReport& s : rep.schemas) {
        std::snprintf(line, sizeof line, "%-13s %9zu %11zu %8zu %8zu %7zu %7zu %8zu\n", s.name.c_str(), s.attempted,
                      s.non_vacuous, s.vacuous, s.from_families, s.passed, s.skipped, s.failures.size());
        out += line;
    }
    for (const SchemaReport& s : rep.schemas)
        for (const Failure& f : s.failures)
            out += "FAIL " + s.name + " #" + std::to_string(f.index) + ": " + f.instantiation + "\n";
    out += "seed " + std::to_string(rep.config.gen.seed) + ": " + (rep.ok() ? "ok" : "FAILED") + "\n";
    return out;
}

} // namespace wka
} // namespace milner
