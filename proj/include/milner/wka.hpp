#pragma once

// The Weak Kleene Algebra axiom schemas as data, instance checking against
// the simulation semantics, and randomized soundness suites.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "milner/relations.hpp"
#include "milner/semantics.hpp"
#include "milner/syntax.hpp"

namespace milner::wka {

/// Regex template over schema variables.
class Pattern {
public:
    enum class Tag : std::uint8_t { Var, Zero, One, Sum, Product, Star };

    static Pattern var(char name) { return Pattern(Tag::Var, name, {}); }
    static Pattern zero() { return Pattern(Tag::Zero, 0, {}); }
    static Pattern one() { return Pattern(Tag::One, 0, {}); }

    friend Pattern operator+(const Pattern& l, const Pattern& r) { return Pattern(Tag::Sum, 0, {l, r}); }
    friend Pattern operator*(const Pattern& l, const Pattern& r) { return Pattern(Tag::Product, 0, {l, r}); }
    friend Pattern star(const Pattern& p) { return Pattern(Tag::Star, 0, {p}); }

    Tag tag() const { return tag_; }
    char name() const { return name_; }

    /// Variables mentioned, ascending and without repeats.
    std::string variables() const {
        std::string out;
        collect(out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Substitutes the assignment; the result is not normalized.
    Regex instantiate(const std::map<char, Regex>& assignment) const {
        switch (tag_) {
        case Tag::Var: {
            auto it = assignment.find(name_);
            if (it == assignment.end()) throw std::invalid_argument(std::string("unassigned schema variable ") + name_);
            return it->second;
        }
        case Tag::Zero: return Regex::zero();
        case Tag::One: return Regex::one();
        case Tag::Sum: return Regex::sum(kids_->at(0).instantiate(assignment), kids_->at(1).instantiate(assignment));
        case Tag::Product:
            return Regex::product(kids_->at(0).instantiate(assignment), kids_->at(1).instantiate(assignment));
        case Tag::Star: return Regex::star(kids_->at(0).instantiate(assignment));
        }
        return Regex::zero();
    }

    /// Renders with each variable standing for itself.
    std::string str() const {
        std::map<char, Regex> self;
        for (char v : variables()) self[v] = Regex::letter(v);
        return render(instantiate(self));
    }

private:
    Pattern(Tag t, char n, std::vector<Pattern> kids)
        : tag_(t), name_(n), kids_(std::make_shared<const std::vector<Pattern>>(std::move(kids))) {}

    void collect(std::string& out) const {
        if (tag_ == Tag::Var) out += name_;
        for (const Pattern& k : *kids_) k.collect(out);
    }

    Tag tag_;
    char name_;
    std::shared_ptr<const std::vector<Pattern>> kids_;
};

enum class Relation : std::uint8_t { Equal, Below };

struct Formula {
    Pattern lhs;
    Relation rel;
    Pattern rhs;

    std::string str() const { return lhs.str() + (rel == Relation::Equal ? " = " : " < ") + rhs.str(); }
};

enum class SchemaId : std::uint8_t {
    PlusAssoc,
    PlusIdem,
    PlusComm,
    PlusZero,
    OneSeq,
    SeqOne,
    ZeroSeq,
    SeqAssoc,
    PlusSeq,
    SeqPlus,
    StarExp,
    LInduc,
    RInduc,
    LInducStrong,
};

struct AxiomSchema {
    SchemaId id;
    std::string name;
    std::string variables;
    std::optional<Formula> hypothesis;
    Formula conclusion;

    bool conditional() const { return hypothesis.has_value(); }

    std::string str() const {
        return (hypothesis ? hypothesis->str() + " |- " : std::string("|- ")) + conclusion.str();
    }
};

/// The thirteen axioms followed by the strengthened left induction law.
inline const std::vector<AxiomSchema>& schemas() {
    static const std::vector<AxiomSchema> all = [] {
        const Pattern x = Pattern::var('x'), y = Pattern::var('y'), z = Pattern::var('z');
        const Pattern zero = Pattern::zero(), one = Pattern::one();
        auto eq = [](Pattern l, Pattern r) { return Formula{std::move(l), Relation::Equal, std::move(r)}; };
        auto le = [](Pattern l, Pattern r) { return Formula{std::move(l), Relation::Below, std::move(r)}; };
        std::vector<AxiomSchema> s;
        s.push_back({SchemaId::PlusAssoc, "PlusAssoc", "xyz", {}, eq((x + y) + z, x + (y + z))});
        s.push_back({SchemaId::PlusIdem, "PlusIdem", "x", {}, eq(x + x, x)});
        s.push_back({SchemaId::PlusComm, "PlusComm", "xy", {}, eq(x + y, y + x)});
        s.push_back({SchemaId::PlusZero, "PlusZero", "x", {}, eq(x + zero, x)});
        s.push_back({SchemaId::OneSeq, "OneSeq", "x", {}, eq(one * x, x)});
        s.push_back({SchemaId::SeqOne, "SeqOne", "x", {}, eq(x * one, x)});
        s.push_back({SchemaId::ZeroSeq, "ZeroSeq", "x", {}, eq(zero * x, zero)});
        s.push_back({SchemaId::SeqAssoc, "SeqAssoc", "xyz", {}, eq((x * y) * z, x * (y * z))});
        s.push_back({SchemaId::PlusSeq, "PlusSeq", "xyz", {}, eq((x + y) * z, x * z + y * z)});
        s.push_back({SchemaId::SeqPlus, "SeqPlus", "xyz", {}, le(x * y + x * z, x * (y + z))});
        s.push_back({SchemaId::StarExp, "StarExp", "x", {}, eq(star(x), one + x * star(x))});
        s.push_back({SchemaId::LInduc, "LInduc", "xy", le(y * x, x), le(star(y) * x, x)});
        s.push_back({SchemaId::RInduc, "RInduc", "xy", le(x * (y + one), x), le(x * star(y), x)});
        s.push_back({SchemaId::LInducStrong, "LInducStrong", "xyz", le(y * x, x), le(z * (star(y) * x), z * x)});
        return s;
    }();
    return all;
}

inline const AxiomSchema& schema(SchemaId id) { return schemas().at(static_cast<std::size_t>(id)); }

inline std::optional<SchemaId> schema_by_name(std::string_view name) {
    for (const AxiomSchema& s : schemas())
        if (s.name == name) return s.id;
    return std::nullopt;
}

/// Semantic truth of one instantiated formula: < is the simulation preorder,
/// = is simulation equivalence.
inline bool holds(const Formula& f, const std::map<char, Regex>& assignment, std::size_t cap = kDefaultStateCap) {
    JointSpace js(f.lhs.instantiate(assignment), f.rhs.instantiate(assignment), cap);
    return f.rel == Relation::Equal ? js.equiv() : js.leq();
}

enum class Outcome : std::uint8_t { Vacuous, Pass, Fail, Skipped };

inline std::string_view outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Vacuous: return "vacuous";
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Skipped: return "skipped";
    }
    return "?";
}

struct InstanceResult {
    Outcome outcome = Outcome::Pass;
    std::string instantiation;
};

inline std::string instantiation_text(const AxiomSchema& s, const std::map<char, Regex>& assignment) {
    std::string out;
    for (char v : s.variables) {
        if (!out.empty()) out += ", ";
        out += v;
        out += " := ";
        out += render(assignment.at(v));
    }
    return out;
}

/// Evaluates the hypothesis (if any) and then the conclusion of one instance.
/// An exceeded state cap yields Skipped rather than an exception.
inline InstanceResult check_instance(const AxiomSchema& s, const std::map<char, Regex>& assignment,
                                     std::size_t cap = kDefaultStateCap) {
    for (char v : s.variables)
        if (!assignment.count(v)) throw std::invalid_argument(std::string("assignment misses variable ") + v);
    InstanceResult r;
    r.instantiation = instantiation_text(s, assignment);
    try {
        if (s.hypothesis && !holds(*s.hypothesis, assignment, cap)) {
            r.outcome = Outcome::Vacuous;
            return r;
        }
        r.outcome = holds(s.conclusion, assignment, cap) ? Outcome::Pass : Outcome::Fail;
    } catch (const StateSpaceExceeded&) {
        r.outcome = Outcome::Skipped;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Suites

/// Rejection-sampling budget per wanted conditional instance.
inline constexpr std::size_t kRejectionCap = 200;

struct SuiteConfig {
    GenConfig gen;
    std::size_t instances_per_schema = 1000;
    std::size_t state_cap = kDefaultStateCap;
    /// Empty means all schemas.
    std::vector<SchemaId> only;
};

struct Failure {
    std::size_t index = 0;
    std::string instantiation;
};

struct SchemaReport {
    SchemaId id{};
    std::string name;
    std::string formula;
    /// Every evaluated draw, including rejected ones.
    std::size_t attempted = 0;
    /// Draws whose hypothesis held (all draws for unconditional schemas).
    std::size_t non_vacuous = 0;
    std::size_t vacuous = 0;
    /// Non-vacuous instances that came from constructed families.
    std::size_t from_families = 0;
    std::size_t passed = 0;
    std::size_t skipped = 0;
    std::vector<Failure> failures;

    double skip_rate() const { return attempted ? static_cast<double>(skipped) / static_cast<double>(attempted) : 0.0; }
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<SchemaReport> schemas;

    std::size_t failure_count() const {
        std::size_t n = 0;
        for (const auto& s : schemas) n += s.failures.size();
        return n;
    }
    bool skip_rate_ok() const {
        for (const auto& s : schemas)
            if (s.skip_rate() > 0.01) return false;
        return true;
    }
    bool ok() const { return failure_count() == 0 && skip_rate_ok(); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t instance_seed(std::uint64_t seed, SchemaId id, std::size_t index) {
    return splitmix64(splitmix64(seed ^ (static_cast<std::uint64_t>(id) + 1) * 0xd1b54a32d192ed03ULL) + index);
}

inline std::map<char, Regex> random_assignment(const AxiomSchema& s, RegexGenerator& gen) {
    std::map<char, Regex> a;
    for (char v : s.variables) a[v] = gen.next();
    return a;
}

} // namespace detail

/// Assignment from a family that satisfies the schema's hypothesis by
/// construction (in the semantics, via soundness of the star laws):
///   LInduc, LInducStrong:  x := y*w or (y + v)*w, so y x < x
///   RInduc:                x := w(y + 1)* or w y*, so x (y + 1) < x
inline std::map<char, Regex> family_assignment(const AxiomSchema& s, RegexGenerator& gen) {
    std::size_t part = std::max<std::size_t>(1, gen.config().max_size / 2);
    std::map<char, Regex> a;
    Regex y = gen.next(part);
    Regex w = gen.next(part);
    bool variant = std::uniform_int_distribution<int>(0, 1)(gen.engine()) == 1;
    switch (s.id) {
    case SchemaId::LInduc:
    case SchemaId::LInducStrong: {
        Regex base = variant ? Regex::sum(y, gen.next(part)) : y;
        a['x'] = Regex::product(Regex::star(base), w);
        a['y'] = y;
        if (s.id == SchemaId::LInducStrong) a['z'] = gen.next();
        break;
    }
    case SchemaId::RInduc:
        a['x'] = variant ? Regex::product(w, Regex::star(Regex::sum(y, Regex::one()))) : Regex::product(w, Regex::star(y));
        a['y'] = y;
        break;
    default:
        return detail::random_assignment(s, gen);
    }
    return a;
}

namespace detail {

struct InstanceTally {
    std::size_t attempted = 0;
    std::size_t vacuous = 0;
    std::size_t skipped = 0;
    bool from_family = false;
    InstanceResult result;
};

/// One wanted instance, reproducible from (seed, schema, index) alone.
inline InstanceTally run_instance(const SuiteConfig& cfg, const AxiomSchema& s, std::size_t index) {
    GenConfig g = cfg.gen;
    g.seed = instance_seed(cfg.gen.seed, s.id, index);
    RegexGenerator gen(g);
    InstanceTally t;

    auto record = [&](const InstanceResult& r) {
        ++t.attempted;
        if (r.outcome == Outcome::Vacuous) ++t.vacuous;
        if (r.outcome == Outcome::Skipped) ++t.skipped;
    };

    if (!s.conditional()) {
        t.result = check_instance(s, random_assignment(s, gen), cfg.state_cap);
        record(t.result);
        return t;
    }

    const std::size_t family_share = (cfg.instances_per_schema + 1) / 2;
    if (index >= family_share) {
        for (std::size_t attempt = 0; attempt < kRejectionCap; ++attempt) {
            InstanceResult r = check_instance(s, random_assignment(s, gen), cfg.state_cap);
            record(r);
            if (r.outcome != Outcome::Vacuous && r.outcome != Outcome::Skipped) {
                t.result = std::move(r);
                return t;
            }
        }
    }
    // Family draws; a vacuous family instance would be a bug, so keep drawing
    // only as long as the rejection budget allows.
    t.from_family = true;
    for (std::size_t attempt = 0; attempt < kRejectionCap; ++attempt) {
        InstanceResult r = check_instance(s, family_assignment(s, gen), cfg.state_cap);
        record(r);
        if (r.outcome != Outcome::Vacuous && r.outcome != Outcome::Skipped) {
            t.result = std::move(r);
            return t;
        }
        t.result = std::move(r);
    }
    return t;
}

} // namespace detail

inline SchemaReport run_schema(const SuiteConfig& cfg, const AxiomSchema& s) {
    SchemaReport rep;
    rep.id = s.id;
    rep.name = s.name;
    rep.formula = s.str();
    for (std::size_t i = 0; i < cfg.instances_per_schema; ++i) {
        detail::InstanceTally t = detail::run_instance(cfg, s, i);
        rep.attempted += t.attempted;
        rep.vacuous += t.vacuous;
        rep.skipped += t.skipped;
        switch (t.result.outcome) {
        case Outcome::Pass:
            ++rep.passed;
            ++rep.non_vacuous;
            if (t.from_family) ++rep.from_families;
            break;
        case Outcome::Fail:
            ++rep.non_vacuous;
            if (t.from_family) ++rep.from_families;
            rep.failures.push_back({i, t.result.instantiation});
            break;
        default:
            break;
        }
    }
    return rep;
}

/// Runs every selected schema. Instance i of a schema is drawn from a
/// generator seeded by (config seed, schema, i), so any failure can be
/// replayed with replay_instance.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
    if (cfg.instances_per_schema == 0) throw std::invalid_argument("instances_per_schema must be at least 1");
    cfg.gen.validate();
    SuiteReport report;
    report.config = cfg;
    for (const AxiomSchema& s : schemas()) {
        if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), s.id) == cfg.only.end()) continue;
        report.schemas.push_back(run_schema(cfg, s));
    }
    return report;
}

inline InstanceResult replay_instance(const SuiteConfig& cfg, SchemaId id, std::size_t index) {
    return detail::run_instance(cfg, schema(id), index).result;
}

} // namespace milner::wka
