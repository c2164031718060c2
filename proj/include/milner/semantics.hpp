#pragma once

// Process semantics of regular expressions: the accepting predicate, the
// labeled transition function, and breadth-first exploration into a finite LTS.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "milner/syntax.hpp"

namespace milner {

/// Sorted, duplicate-free set of normalized terms.
using RegexSet = std::vector<Regex>;

namespace detail {

inline void sort_unique(RegexSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline void trans_into(const Regex& x, char a, RegexSet& out);

} // namespace detail

/// Accepting predicate: 1 and x* accept; sums accept if either side does,
/// products if both sides do; 0 and letters never accept.
inline bool check(const Regex& x) {
    switch (x.kind()) {
    case Kind::Zero: return false;
    case Kind::One: return true;
    case Kind::Letter: return false;
    case Kind::Sum: return check(x.left()) || check(x.right());
    case Kind::Product: return check(x.left()) && check(x.right());
    case Kind::Star: return true;
    }
    return false;
}

namespace detail {

inline void trans_into(const Regex& x, char a, RegexSet& out) {
    if (!(x.letter_mask() & (1u << (a - 'a')))) return;
    switch (x.kind()) {
    case Kind::Zero:
    case Kind::One:
        return;
    case Kind::Letter:
        if (x.symbol() == a) out.push_back(Regex::one());
        return;
    case Kind::Sum:
        trans_into(x.left(), a, out);
        trans_into(x.right(), a, out);
        return;
    case Kind::Product: {
        RegexSet head;
        trans_into(x.left(), a, head);
        Regex tail = normalize(x.right());
        for (const Regex& h : head) out.push_back(seq(h, tail));
        if (check(x.left())) trans_into(x.right(), a, out);
        return;
    }
    case Kind::Star: {
        RegexSet head;
        trans_into(x.body(), a, head);
        Regex self = normalize(x);
        for (const Regex& h : head) out.push_back(seq(h, self));
        return;
    }
    }
}

} // namespace detail

/// The a-successors of x, each normalized, as a sorted set.
inline RegexSet trans(const Regex& x, char a) {
    RegexSet out;
    if (!is_letter(a)) return out;
    detail::trans_into(x, a, out);
    detail::sort_unique(out);
    return out;
}

/// Letters occurring in any of the terms, ascending.
inline std::string letters_of(std::span<const Regex> terms) {
    std::uint32_t mask = 0;
    for (const Regex& t : terms) mask |= t.letter_mask();
    std::string out;
    for (int i = 0; i < 26; ++i)
        if (mask & (1u << i)) out += static_cast<char>('a' + i);
    return out;
}

// ---------------------------------------------------------------------------

using StateId = std::uint32_t;

/// Finite labeled transition system. States reached by exploring regexes carry
/// their term in `terms`; hand-built systems may leave `terms` empty.
struct Lts {
    std::vector<Regex> terms;
    std::vector<bool> accepting;
    std::string alphabet;
    /// succ[s][i] = sorted successors of s under alphabet[i].
    std::vector<std::vector<std::vector<StateId>>> succ;
    std::vector<StateId> roots;

    std::size_t size() const { return accepting.size(); }
    std::size_t labels() const { return alphabet.size(); }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& per_state : succ)
            for (const auto& targets : per_state) n += targets.size();
        return n;
    }

    std::string state_name(StateId s) const { return s < terms.size() ? render(terms[s]) : "s" + std::to_string(s); }

    int label_index(char a) const {
        auto pos = alphabet.find(a);
        return pos == std::string::npos ? -1 : static_cast<int>(pos);
    }

    /// States reachable from `root` (including it).
    std::size_t reachable_from(StateId root) const {
        std::vector<bool> seen(size(), false);
        std::vector<StateId> stack{root};
        seen[root] = true;
        std::size_t count = 0;
        while (!stack.empty()) {
            StateId s = stack.back();
            stack.pop_back();
            ++count;
            for (const auto& targets : succ[s])
                for (StateId t : targets)
                    if (!seen[t]) {
                        seen[t] = true;
                        stack.push_back(t);
                    }
        }
        return count;
    }
};

class StateSpaceExceeded : public std::runtime_error {
public:
    StateSpaceExceeded(std::size_t discovered, std::size_t cap)
        : std::runtime_error("state space exceeded: discovered " + std::to_string(discovered) +
                             " states, cap is " + std::to_string(cap)),
          discovered_(discovered), cap_(cap) {}

    std::size_t discovered() const { return discovered_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t discovered_;
    std::size_t cap_;
};

inline constexpr std::size_t kDefaultStateCap = 10000;

/// Breadth-first closure of the roots under trans, over the letters that occur
/// in the roots. States are numbered in discovery order; identical normalized
/// roots share one state.
inline Lts explore(std::span<const Regex> roots, std::size_t cap = kDefaultStateCap) {
    if (cap == 0) throw std::invalid_argument("state cap must be at least 1");
    if (roots.empty()) throw std::invalid_argument("explore needs at least one root");

    Lts lts;
    lts.alphabet = letters_of(roots);
    std::unordered_map<Regex, StateId, RegexHash> index;

    auto intern = [&](const Regex& t) -> StateId {
        auto [it, inserted] = index.try_emplace(t, static_cast<StateId>(lts.terms.size()));
        if (inserted) {
            if (lts.terms.size() >= cap) throw StateSpaceExceeded(lts.terms.size() + 1, cap);
            lts.terms.push_back(t);
            lts.accepting.push_back(check(t));
        }
        return it->second;
    };

    for (const Regex& r : roots) lts.roots.push_back(intern(normalize(r)));

    for (std::size_t s = 0; s < lts.terms.size(); ++s) {
        std::vector<std::vector<StateId>> row(lts.alphabet.size());
        for (std::size_t i = 0; i < lts.alphabet.size(); ++i) {
            // lts.terms may reallocate inside intern; copy the term first.
            Regex term = lts.terms[s];
            for (const Regex& t : trans(term, lts.alphabet[i])) row[i].push_back(intern(t));
            std::sort(row[i].begin(), row[i].end());
        }
        lts.succ.push_back(std::move(row));
    }
    return lts;
}

inline Lts explore(std::initializer_list<Regex> roots, std::size_t cap = kDefaultStateCap) {
    return explore(std::span<const Regex>(roots.begin(), roots.size()), cap);
}

inline Lts explore(const Regex& root, std::size_t cap = kDefaultStateCap) {
    return explore(std::span<const Regex>(&root, 1), cap);
}

/// Every successor index names a state and every label row is present.
inline bool is_closed(const Lts& lts) {
    if (lts.succ.size() != lts.size()) return false;
    for (const auto& per_state : lts.succ) {
        if (per_state.size() != lts.labels()) return false;
        for (const auto& targets : per_state)
            for (StateId t : targets)
                if (t >= lts.size()) return false;
    }
    for (StateId r : lts.roots)
        if (r >= lts.size()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Export

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace detail

/// Graphviz rendering. Accepting states are double circles; parallel edges to
/// the same target are merged into one comma-separated label.
inline std::string to_dot(const Lts& lts) {
    std::ostringstream out;
    out << "digraph lts {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    for (std::size_t r = 0; r < lts.roots.size(); ++r) {
        out << "  init" << r << " [shape=point];\n";
        out << "  init" << r << " -> s" << lts.roots[r] << ";\n";
    }
    for (StateId s = 0; s < lts.size(); ++s) {
        out << "  s" << s << " [label=\"" << detail::dot_escape(lts.state_name(s)) << "\"";
        if (lts.accepting[s]) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (StateId s = 0; s < lts.size(); ++s) {
        std::vector<std::pair<StateId, std::string>> edges;
        for (std::size_t i = 0; i < lts.labels(); ++i)
            for (StateId t : lts.succ[s][i]) {
                auto it = std::find_if(edges.begin(), edges.end(), [t](const auto& e) { return e.first == t; });
                if (it == edges.end())
                    edges.emplace_back(t, std::string(1, lts.alphabet[i]));
                else
                    it->second += std::string(",") + lts.alphabet[i];
            }
        std::sort(edges.begin(), edges.end());
        for (const auto& [t, label] : edges)
            out << "  s" << s << " -> s" << t << " [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace milner
