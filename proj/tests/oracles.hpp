#pragma once

// Test-only oracles. Each one reaches its answer by a route independent of the
// library code it is used to check.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "milner/semantics.hpp"
#include "milner/syntax.hpp"
#include "milner/trees.hpp"

namespace oracle {

using milner::Kind;
using milner::Lts;
using milner::Regex;
using milner::StateId;

/// The transition table applied literally: no normalization of results.
inline std::set<Regex> raw_trans(const Regex& x, char a) {
    switch (x.kind()) {
    case Kind::Zero:
    case Kind::One: return {};
    case Kind::Letter: return x.symbol() == a ? std::set<Regex>{Regex::one()} : std::set<Regex>{};
    case Kind::Sum: {
        auto l = raw_trans(x.left(), a), r = raw_trans(x.right(), a);
        l.insert(r.begin(), r.end());
        return l;
    }
    case Kind::Product: {
        std::set<Regex> out;
        for (const Regex& h : raw_trans(x.left(), a)) out.insert(Regex::product(h, x.right()));
        // acceptance, restated from the table
        std::function<bool(const Regex&)> accepts = [&](const Regex& t) -> bool {
            switch (t.kind()) {
            case Kind::One:
            case Kind::Star: return true;
            case Kind::Sum: return accepts(t.left()) || accepts(t.right());
            case Kind::Product: return accepts(t.left()) && accepts(t.right());
            default: return false;
            }
        };
        bool accepts_left = accepts(x.left());
        if (accepts_left)
            for (const Regex& t : raw_trans(x.right(), a)) out.insert(t);
        return out;
    }
    case Kind::Star: {
        std::set<Regex> out;
        for (const Regex& h : raw_trans(x.body(), a)) out.insert(Regex::product(h, x));
        return out;
    }
    }
    return {};
}

/// Bisimilarity of two states by the symmetric greatest fixpoint: start from
/// all acceptance-agreeing pairs and delete pairs that fail the transfer
/// condition in either direction.
inline bool naive_bisimilar(const Lts& lts, StateId p, StateId q) {
    const std::size_t n = lts.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) r[u][v] = lts.accepting[u] == lts.accepting[v];
    auto transfer = [&](std::size_t u, std::size_t v) {
        for (std::size_t a = 0; a < lts.labels(); ++a)
            for (StateId u2 : lts.succ[u][a]) {
                bool found = false;
                for (StateId v2 : lts.succ[v][a]) found = found || r[u2][v2];
                if (!found) return false;
            }
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (r[u][v] && (!transfer(u, v) || !transfer(v, u))) {
                    r[u][v] = false;
                    changed = true;
                }
    }
    return r[p][q];
}

/// Words of length <= max_len accepted from `root`, by path enumeration.
inline std::set<std::string> words(const Lts& lts, StateId root, std::size_t max_len) {
    std::set<std::string> out;
    std::set<std::pair<StateId, std::string>> frontier{{root, ""}};
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::set<std::pair<StateId, std::string>> next;
        for (const auto& [s, w] : frontier) {
            if (lts.accepting[s]) out.insert(w);
            if (len == max_len) continue;
            for (std::size_t a = 0; a < lts.labels(); ++a)
                for (StateId t : lts.succ[s][a]) next.emplace(t, w + lts.alphabet[a]);
        }
        frontier = std::move(next);
    }
    return out;
}

/// t(S) by enumerating all |S|^n choices, unbounded.
inline milner::trees::TreeLang brute_substitute(const milner::trees::Tree& t, const milner::trees::TreeLang& s) {
    using milner::trees::Tree;
    using milner::trees::TreeLang;
    if (t.is_var()) return s;
    std::vector<std::vector<Tree>> combos{{}};
    for (const Tree& c : t.children()) {
        TreeLang options = brute_substitute(c, s);
        std::vector<std::vector<Tree>> grown;
        for (const auto& prefix : combos)
            for (const Tree& o : options) {
                auto p = prefix;
                p.push_back(o);
                grown.push_back(std::move(p));
            }
        combos = std::move(grown);
    }
    TreeLang out;
    for (auto& kids : combos) out.insert(Tree::apply(t.symbol(), std::move(kids)));
    return out;
}

inline milner::trees::TreeLang brute_substitute(const milner::trees::TreeLang& ts, const milner::trees::TreeLang& s) {
    milner::trees::TreeLang out;
    for (const auto& t : ts) {
        auto part = brute_substitute(t, s);
        out.insert(part.begin(), part.end());
    }
    return out;
}

/// I(x) truncated at k, with star computed as the union of explicit powers
/// (1 + x)^n for n = 0..k+1 instead of a fixpoint. Products substitute first
/// and truncate afterwards.
inline milner::trees::TreeLang interpret_by_powers(const milner::trees::Interpretation& I, const Regex& x,
                                                   std::size_t k) {
    using milner::trees::Tree;
    using milner::trees::TreeLang;
    auto cut = [k](const TreeLang& l) {
        TreeLang out;
        for (const Tree& t : l)
            if (t.size() <= k) out.insert(t);
        return out;
    };
    switch (x.kind()) {
    case Kind::Zero: return {};
    case Kind::One: return {Tree::var()};
    case Kind::Letter: return cut(I.of(x.symbol()));
    case Kind::Sum: {
        auto l = interpret_by_powers(I, x.left(), k), r = interpret_by_powers(I, x.right(), k);
        l.insert(r.begin(), r.end());
        return l;
    }
    case Kind::Product:
        return cut(brute_substitute(interpret_by_powers(I, x.left(), k), interpret_by_powers(I, x.right(), k)));
    case Kind::Star: {
        TreeLang step = interpret_by_powers(I, x.body(), k);
        step.insert(Tree::var());  // I(1 + x)
        TreeLang power{Tree::var()}, all{Tree::var()};
        for (std::size_t n = 1; n <= k + 1; ++n) {
            power = cut(brute_substitute(step, power));
            all.insert(power.begin(), power.end());
        }
        return all;
    }
    }
    return {};
}

} // namespace oracle
