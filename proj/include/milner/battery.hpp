#pragma once

// Seeded property battery shared by the selftest subcommand and the
// acceptance suite. Each check returns a verdict with a one-line summary.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "milner/relations.hpp"
#include "milner/semantics.hpp"
#include "milner/syntax.hpp"
#include "milner/trees.hpp"
#include "milner/wka.hpp"

namespace milner::battery {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

template <class F>
CheckResult timed(std::string name, F&& body) {
    auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.name = std::move(name);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline GenConfig gen(std::uint64_t seed, std::size_t max_size, std::string alphabet = "abc") {
    GenConfig g;
    g.seed = seed;
    g.max_size = max_size;
    g.alphabet = std::move(alphabet);
    return g;
}

/// Random LTS with `n` states over `labels` letters; roughly `density`
/// successors per state and label.
inline Lts random_lts(std::mt19937_64& rng, std::size_t n, std::size_t labels, double density) {
    Lts lts;
    for (std::size_t i = 0; i < labels; ++i) lts.alphabet += static_cast<char>('a' + i);
    std::bernoulli_distribution acc(0.4);
    std::bernoulli_distribution edge(std::min(1.0, density / static_cast<double>(n)));
    for (std::size_t s = 0; s < n; ++s) {
        lts.accepting.push_back(acc(rng));
        std::vector<std::vector<StateId>> row(labels);
        for (std::size_t a = 0; a < labels; ++a)
            for (std::size_t t = 0; t < n; ++t)
                if (edge(rng)) row[a].push_back(static_cast<StateId>(t));
        lts.succ.push_back(std::move(row));
    }
    lts.roots.push_back(0);
    if (n > 1) lts.roots.push_back(1);
    return lts;
}

/// One rewrite of x by a WKA law read left to right or right to left, giving a
/// simulation equivalent term.
inline Regex equivalent_variant(const Regex& x, RegexGenerator& g) {
    switch (std::uniform_int_distribution<int>(0, 6)(g.engine())) {
    case 0: return Regex::sum(x, x);
    case 1: return Regex::sum(x, Regex::zero());
    case 2: return Regex::product(Regex::one(), x);
    case 3: return Regex::product(x, Regex::one());
    case 4: return Regex::sum(Regex::product(Regex::zero(), g.next(4)), x);
    case 5: return x.is(Kind::Sum) ? Regex::sum(x.right(), x.left()) : Regex::sum(x, x);
    default: return x.is(Kind::Star) ? Regex::sum(Regex::one(), Regex::product(x.body(), x)) : Regex::product(x, Regex::one());
    }
}

/// A pair (x, y) with x simulated by y: rejection sampling of small random
/// pairs first, then a constructed pair.
inline std::pair<Regex, Regex> simulated_pair(RegexGenerator& g, std::size_t max_size, std::size_t cap) {
    for (int attempt = 0; attempt < 20; ++attempt) {
        Regex x = g.next(max_size), y = g.next(max_size);
        if (JointSpace(x, y, cap).leq()) return {x, y};
    }
    Regex x = g.next(max_size), w = g.next(max_size);
    switch (std::uniform_int_distribution<int>(0, 3)(g.engine())) {
    case 0: return {x, Regex::sum(x, w)};
    case 1: return {x, Regex::star(x)};
    case 2: {
        Regex p = g.next(max_size / 2 + 1), q = g.next(max_size / 2 + 1);
        return {Regex::sum(Regex::product(x, p), Regex::product(x, q)), Regex::product(x, Regex::sum(p, q))};
    }
    default: return {x, equivalent_variant(x, g)};
    }
}

// ---------------------------------------------------------------------------

inline CheckResult distributivity_example() {
    Regex x = parse("a.b + a.(b+c)"), y = parse("a.(b+c)");
    bool simeq = sim_equiv(x, y), bisim = bisim_equiv(x, y);
    return {"", simeq && !bisim, "sim_equiv=" + std::to_string(simeq) + " bisim_equiv=" + std::to_string(bisim)};
}

inline CheckResult axiom_soundness(std::uint64_t seed, std::size_t instances, std::size_t max_size) {
    wka::SuiteConfig cfg;
    cfg.gen = gen(seed, max_size);
    cfg.instances_per_schema = instances;
    wka::SuiteReport rep = wka::run_suite(cfg);
    bool ok = rep.ok() && rep.schemas.size() == 14;
    std::size_t min_nv = instances, min_fam = instances;
    for (const auto& s : rep.schemas) {
        min_nv = std::min(min_nv, s.non_vacuous);
        if (wka::schema(s.id).conditional()) min_fam = std::min(min_fam, s.from_families);
    }
    ok = ok && min_nv >= instances && min_fam >= (instances + 1) / 2;
    return {"", ok,
            std::to_string(rep.schemas.size()) + " schemas, " + std::to_string(rep.failure_count()) +
                " failures, min non-vacuous " + std::to_string(min_nv) + ", min family instances " +
                std::to_string(min_fam)};
}

inline CheckResult oracle_agreement(std::uint64_t seed, std::size_t count, std::size_t max_states = 20) {
    std::mt19937_64 rng(seed);
    RegexGenerator g(gen(seed, 8, "abc"));
    std::size_t mismatches = 0, from_regex = 0;
    for (std::size_t i = 0; i < count; ++i) {
        Lts lts;
        if (i % 2 == 1) {
            do {
                lts = explore({g.next(), g.next()});
            } while (lts.size() > max_states);
            ++from_regex;
        } else {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_states)(rng);
            std::size_t labels = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
            double density = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
            lts = random_lts(rng, n, labels, density);
        }
        if (max_simulation(lts) != brute_force_sim(lts)) ++mismatches;
    }
    return {"", mismatches == 0,
            std::to_string(count) + " LTSs (" + std::to_string(from_regex) + " from regex pairs), " +
                std::to_string(mismatches) + " mismatches"};
}

inline CheckResult int_normal(std::uint64_t seed, std::size_t count, std::size_t k, std::size_t max_size = 10) {
    RegexGenerator g(gen(seed, max_size));
    std::mt19937_64 rng(seed ^ 0x5bd1e995);
    std::size_t failures = 0, with_var_letter = 0;
    for (std::size_t i = 0; i < count; ++i) {
        trees::Interpretation I = trees::random_interpretation(rng());
        for (const auto& [a, lang] : I.letter_map)
            if (lang.count(trees::Tree::var())) {
                ++with_var_letter;
                break;
            }
        if (!trees::int_normal_check(I, g.next(), k)) ++failures;
    }
    return {"", failures == 0,
            std::to_string(count) + " pairs at k=" + std::to_string(k) + ", " + std::to_string(failures) +
                " failures (" + std::to_string(with_var_letter) + " interpretations map a letter to *)"};
}

inline CheckResult respects_simulation(std::uint64_t seed, std::size_t pairs, std::size_t interps, std::size_t k,
                                       std::size_t max_size = 8) {
    RegexGenerator g(gen(seed, max_size));
    std::mt19937_64 rng(seed ^ 0x27d4eb2f);
    std::size_t failures = 0, equivalent = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        auto [x, y] = simulated_pair(g, max_size, kDefaultStateCap);
        if (JointSpace(x, y).geq()) ++equivalent;
        for (std::size_t j = 0; j < interps; ++j) {
            trees::Interpretation I = trees::random_interpretation(rng());
            if (!trees::respects_simulation_check(x, y, I, k)) ++failures;
        }
    }
    return {"", failures == 0,
            std::to_string(pairs) + " simulated pairs (" + std::to_string(equivalent) + " equivalent) x " +
                std::to_string(interps) + " interpretations at k=" + std::to_string(k) + ", " +
                std::to_string(failures) + " failures"};
}

inline CheckResult hierarchy(std::uint64_t seed, std::size_t count) {
    RegexGenerator g(gen(seed, 7, "ab"));
    std::size_t violations = 0, strict_bisim = 0, strict_sim = 0, bisim_n = 0;
    auto classify = [&](const Regex& x, const Regex& y) {
        Lts lts = explore({x, y});
        auto blocks = bisimulation_partition(lts);
        SimRelation sim = max_simulation(lts);
        StateId l = lts.roots[0], r = lts.roots[1];
        bool bi = blocks[l] == blocks[r];
        bool se = sim.contains(l, r) && sim.contains(r, l);
        bool tr = !trace_counterexample(lts, l, r).has_value();
        if ((bi && !se) || (se && !tr)) ++violations;
        if (se && !bi) ++strict_bisim;
        if (tr && !se) ++strict_sim;
        if (bi) ++bisim_n;
    };
    for (std::size_t i = 0; i < count; ++i) {
        Regex x = g.next();
        switch (i % 4) {
        case 0: classify(x, g.next()); break;
        case 1: classify(x, equivalent_variant(x, g)); break;
        case 2: {
            Regex p = g.next(3), q = g.next(3);
            classify(Regex::sum(Regex::product(x, p), Regex::product(x, Regex::sum(p, q))), Regex::product(x, Regex::sum(p, q)));
            break;
        }
        default: {
            Regex p = g.next(3), q = g.next(3);
            classify(Regex::sum(Regex::product(x, p), Regex::product(x, q)), Regex::product(x, Regex::sum(p, q)));
            break;
        }
        }
    }
    // Fixtures witnessing strictness of each implication.
    Regex a = parse("ab + a(b+c)"), b = parse("a(b+c)"), c = parse("ab + ac");
    bool fixture1 = sim_equiv(a, b) && !bisim_equiv(a, b);
    bool fixture2 = trace_equiv(c, b) && !sim_equiv(c, b);
    bool ok = violations == 0 && fixture1 && fixture2 && strict_bisim > 0 && strict_sim > 0;
    return {"", ok,
            std::to_string(count) + " pairs, " + std::to_string(violations) + " violations, " +
                std::to_string(bisim_n) + " bisimilar, " + std::to_string(strict_bisim) + " sim-not-bisim, " +
                std::to_string(strict_sim) + " trace-not-sim; fixtures " + (fixture1 && fixture2 ? "ok" : "BROKEN")};
}

inline CheckResult termination(std::uint64_t seed, std::size_t count, std::size_t max_size, std::size_t cap) {
    RegexGenerator g(gen(seed, max_size));
    std::size_t hits = 0, largest = 0;
    for (std::size_t i = 0; i < count; ++i) {
        try {
            largest = std::max(largest, explore(g.next(), cap).size());
        } catch (const StateSpaceExceeded&) {
            ++hits;
        }
    }
    return {"", hits == 0,
            std::to_string(count) + " regexes, " + std::to_string(hits) + " cap hits, largest " +
                std::to_string(largest) + " states"};
}

/// Differing bounded interpretations must never coexist with simulation
/// equivalence. Samples mix random pairs with equivalent variants so both
/// sides of the implication are exercised.
inline CheckResult contrapositive(std::uint64_t seed, std::size_t count, std::size_t k) {
    RegexGenerator g(gen(seed, 8));
    std::mt19937_64 rng(seed ^ 0x165667b1);
    std::size_t violations = 0, differing = 0, equivalent = 0;
    for (std::size_t i = 0; i < count; ++i) {
        Regex x = g.next();
        Regex y = i % 2 ? equivalent_variant(x, g) : g.next();
        trees::Interpretation I = trees::random_interpretation(rng());
        bool differ = trees::interpret(I, x, k) != trees::interpret(I, y, k);
        bool eq = sim_equiv(x, y);
        if (differ) ++differing;
        if (eq) ++equivalent;
        if (differ && eq) ++violations;
    }
    return {"", violations == 0,
            std::to_string(count) + " samples, " + std::to_string(differing) + " with differing interpretations, " +
                std::to_string(equivalent) + " simulation equivalent, " + std::to_string(violations) + " violations"};
}

/// Syntax and semantics invariants: render/parse round trip, normalize
/// idempotence and semantic preservation, normalize-invariance of explore.
inline CheckResult syntax_invariants(std::uint64_t seed, std::size_t count) {
    RegexGenerator g(gen(seed, 20));
    std::size_t bad = 0;
    for (std::size_t i = 0; i < count; ++i) {
        Regex x = g.next();
        Regex n = normalize(x);
        if (parse(render(x)) != x) ++bad;
        if (normalize(n) != n) ++bad;
        if (check(x) != check(n)) ++bad;
        for (char a : std::string("abc"))
            if (trans(x, a) != trans(n, a)) ++bad;
        Lts l1 = explore(x), l2 = explore(n);
        if (l1.terms != l2.terms || l1.succ != l2.succ) ++bad;
    }
    return {"", bad == 0, std::to_string(count) + " regexes, " + std::to_string(bad) + " violations"};
}

/// Derived laws: preorder, 0 < x, x < x + y, antisymmetry up to equivalence,
/// and agreement of x + y = y with x < y.
inline CheckResult derived_laws(std::uint64_t seed, std::size_t count) {
    RegexGenerator g(gen(seed, 6, "ab"));
    std::size_t bad = 0;
    for (std::size_t i = 0; i < count; ++i) {
        Regex x = g.next(), y = g.next(), z = g.next();
        bool xy = sim_leq(x, y).verdict, yz = sim_leq(y, z).verdict, xz = sim_leq(x, z).verdict;
        bool yx = sim_leq(y, x).verdict;
        if (!sim_leq(x, x).verdict) ++bad;
        if (xy && yz && !xz) ++bad;
        if (!sim_leq(Regex::zero(), x).verdict) ++bad;
        if (!sim_leq(x, Regex::sum(x, y)).verdict) ++bad;
        if ((xy && yx) != sim_equiv(x, y)) ++bad;
        if (sim_equiv(Regex::sum(x, y), y) != xy) ++bad;
    }
    return {"", bad == 0, std::to_string(count) + " triples, " + std::to_string(bad) + " violations"};
}

/// Operators are monotone for the simulation preorder.
inline CheckResult monotonicity(std::uint64_t seed, std::size_t count) {
    RegexGenerator g(gen(seed, 6, "ab"));
    std::size_t bad = 0, used = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto [x, x2] = simulated_pair(g, 6, kDefaultStateCap);
        Regex y = g.next();
        ++used;
        if (!sim_leq(Regex::sum(x, y), Regex::sum(x2, y)).verdict) ++bad;
        if (!sim_leq(Regex::product(x, y), Regex::product(x2, y)).verdict) ++bad;
        if (!sim_leq(Regex::product(y, x), Regex::product(y, x2)).verdict) ++bad;
        if (!sim_leq(Regex::star(x), Regex::star(x2)).verdict) ++bad;
    }
    return {"", bad == 0, std::to_string(used) + " simulated pairs, " + std::to_string(bad) + " violations"};
}

/// The whole battery. `scale` multiplies sample counts (1.0 = full size).
inline std::vector<CheckResult> run_all(std::uint64_t seed, double scale = 1.0) {
    auto n = [scale](std::size_t full) { return std::max<std::size_t>(1, static_cast<std::size_t>(full * scale)); };
    std::vector<CheckResult> out;
    out.push_back(timed("distributivity example: simulation but not bisimulation", [] { return distributivity_example(); }));
    out.push_back(timed("syntax and normalization invariants", [&] { return syntax_invariants(seed, n(1000)); }));
    out.push_back(timed("finite exploration", [&] { return termination(seed, n(5000), 30, kDefaultStateCap); }));
    out.push_back(timed("max_simulation agrees with brute force", [&] { return oracle_agreement(seed, n(1000)); }));
    out.push_back(timed("equivalence hierarchy", [&] { return hierarchy(seed, n(2000)); }));
    out.push_back(timed("derived preorder laws", [&] { return derived_laws(seed, n(500)); }));
    out.push_back(timed("operator monotonicity", [&] { return monotonicity(seed, n(500)); }));
    out.push_back(timed("axiom soundness", [&] { return axiom_soundness(seed, n(1000), 12); }));
    out.push_back(timed("interpretation normal form", [&] { return int_normal(seed, n(200), 6); }));
    out.push_back(timed("interpretation respects simulation", [&] { return respects_simulation(seed, n(500), 5, 5); }));
    out.push_back(timed("interpretation mismatch refutes equivalence", [&] { return contrapositive(seed, n(500), 5); }));
    return out;
}

} // namespace milner::battery
