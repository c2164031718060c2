#pragma once

// Simulation preorder, simulation / bisimulation / trace equivalence over
// explored transition systems, with refutation certificates for failed
// simulation checks and a naive fixpoint used as a test oracle.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "milner/semantics.hpp"
#include "milner/syntax.hpp"

namespace milner {

/// Set of ordered state pairs over one LTS, stored as a dense bit matrix.
class SimRelation {
public:
    SimRelation() = default;
    explicit SimRelation(std::size_t n) : n_(n), bits_(n * n, false) {}

    std::size_t states() const { return n_; }
    bool contains(StateId u, StateId v) const { return bits_[u * n_ + v]; }
    void insert(StateId u, StateId v) { bits_[u * n_ + v] = true; }
    void erase(StateId u, StateId v) { bits_[u * n_ + v] = false; }

    std::size_t size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

    std::vector<std::pair<StateId, StateId>> pairs() const {
        std::vector<std::pair<StateId, StateId>> out;
        for (StateId u = 0; u < n_; ++u)
            for (StateId v = 0; v < n_; ++v)
                if (contains(u, v)) out.emplace_back(u, v);
        return out;
    }

    friend bool operator==(const SimRelation&, const SimRelation&) = default;

private:
    std::size_t n_ = 0;
    std::vector<bool> bits_;
};

/// Does (u,v) meet the simulation obligations relative to `rel`?
inline bool pair_respects(const Lts& lts, const SimRelation& rel, StateId u, StateId v) {
    if (lts.accepting[u] && !lts.accepting[v]) return false;
    for (std::size_t a = 0; a < lts.labels(); ++a)
        for (StateId u2 : lts.succ[u][a]) {
            bool matched = false;
            for (StateId v2 : lts.succ[v][a])
                if (rel.contains(u2, v2)) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
    return true;
}

/// Every pair of `rel` meets its obligations, i.e. `rel` is a simulation.
inline bool is_simulation(const Lts& lts, const SimRelation& rel) {
    for (auto [u, v] : rel.pairs())
        if (!pair_respects(lts, rel, u, v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Refutations

enum class Obligation : std::uint8_t {
    /// Left state accepts, right state does not.
    Accepting,
    /// Left state has a move that no right move can match.
    Move,
};

/// One refuted pair (left, right). For a Move refutation the left state moves
/// to `left_next` under `label`, and `children` lists the refutations of
/// (left_next, v') for every right successor v' under `label`, in the order of
/// the right successors. Children always precede their parent in the node list.
struct Refutation {
    StateId left = 0;
    StateId right = 0;
    Obligation kind = Obligation::Accepting;
    char label = 0;
    StateId left_next = 0;
    std::vector<std::size_t> children;
};

/// Outcome of a simulation check. When the verdict is false, `refutation`
/// holds a certificate whose last node is the root pair, `trace` the labels of
/// one shortest branch through it, and the tail fields describe the local
/// failure at the end of that branch.
struct DistinguishingReport {
    bool verdict = true;
    StateId left_root = 0;
    StateId right_root = 0;
    std::size_t relation_size = 0;
    std::size_t joint_states = 0;
    std::size_t left_states = 0;
    std::size_t right_states = 0;

    std::string trace;
    Obligation failure = Obligation::Accepting;
    char failure_label = 0;
    std::string failing_left;
    std::string failing_right;

    std::vector<Refutation> refutation;
};

namespace detail {

struct Reason {
    Obligation kind = Obligation::Accepting;
    std::uint32_t label = 0;
    StateId left_next = 0;
};

/// Greatest-fixpoint refinement with a worklist of pairs whose obligations may
/// have been invalidated by a deletion. Optionally records why each pair left.
inline SimRelation refine(const Lts& lts, std::vector<Reason>* reasons) {
    const std::size_t n = lts.size();
    const std::size_t labels = lts.labels();
    SimRelation rel(n);
    if (reasons) reasons->assign(n * n, Reason{});

    // pred[t][a] = states with an a-move to t
    std::vector<std::vector<std::vector<StateId>>> pred(n, std::vector<std::vector<StateId>>(labels));
    for (StateId s = 0; s < n; ++s)
        for (std::size_t a = 0; a < labels; ++a)
            for (StateId t : lts.succ[s][a]) pred[t][a].push_back(s);

    std::deque<std::pair<StateId, StateId>> work;
    std::vector<bool> queued(n * n, false);
    for (StateId u = 0; u < n; ++u)
        for (StateId v = 0; v < n; ++v)
            if (!lts.accepting[u] || lts.accepting[v]) {
                rel.insert(u, v);
                work.emplace_back(u, v);
                queued[u * n + v] = true;
            }

    while (!work.empty()) {
        auto [u, v] = work.front();
        work.pop_front();
        queued[u * n + v] = false;
        if (!rel.contains(u, v)) continue;

        std::optional<Reason> broken;
        for (std::size_t a = 0; a < labels && !broken; ++a)
            for (StateId u2 : lts.succ[u][a]) {
                bool matched = false;
                for (StateId v2 : lts.succ[v][a])
                    if (rel.contains(u2, v2)) {
                        matched = true;
                        break;
                    }
                if (!matched) {
                    broken = Reason{Obligation::Move, static_cast<std::uint32_t>(a), u2};
                    break;
                }
            }
        if (!broken) continue;

        rel.erase(u, v);
        if (reasons) (*reasons)[u * n + v] = *broken;
        for (std::size_t a = 0; a < labels; ++a)
            for (StateId p : pred[u][a])
                for (StateId q : pred[v][a])
                    if (rel.contains(p, q) && !queued[p * n + q]) {
                        queued[p * n + q] = true;
                        work.emplace_back(p, q);
                    }
    }
    return rel;
}

} // namespace detail

/// The maximal simulation on `lts`.
inline SimRelation max_simulation(const Lts& lts) { return detail::refine(lts, nullptr); }

/// Naive fixpoint: repeated full sweeps over all pairs with no indexing, used
/// only to cross-check max_simulation. Limited to 64 states.
inline SimRelation brute_force_sim(const Lts& lts) {
    const std::size_t n = lts.size();
    if (n > 64) throw std::invalid_argument("brute_force_sim supports at most 64 states, got " + std::to_string(n));
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) r[u][v] = !lts.accepting[u] || lts.accepting[v];

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                if (!r[u][v]) continue;
                bool ok = true;
                for (std::size_t a = 0; a < lts.labels() && ok; ++a)
                    for (StateId u2 : lts.succ[u][a]) {
                        bool found = false;
                        for (StateId v2 : lts.succ[v][a]) found = found || r[u2][v2];
                        if (!found) {
                            ok = false;
                            break;
                        }
                    }
                if (!ok) {
                    r[u][v] = false;
                    changed = true;
                }
            }
    }
    SimRelation rel(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (r[u][v]) rel.insert(static_cast<StateId>(u), static_cast<StateId>(v));
    return rel;
}

/// Decides left <= right on a prepared LTS and, if it fails, builds the
/// refutation certificate from the recorded deletion reasons.
inline DistinguishingReport simulation_report(const Lts& lts, StateId left, StateId right) {
    std::vector<detail::Reason> reasons;
    SimRelation rel = detail::refine(lts, &reasons);
    const std::size_t n = lts.size();

    DistinguishingReport rep;
    rep.left_root = left;
    rep.right_root = right;
    rep.relation_size = rel.size();
    rep.joint_states = n;
    rep.left_states = lts.reachable_from(left);
    rep.right_states = lts.reachable_from(right);
    rep.verdict = rel.contains(left, right);
    if (rep.verdict) return rep;

    // Post-order over the refutation DAG; each pair gets one node.
    std::vector<std::size_t> node_of(n * n, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> depth;
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

    struct Frame {
        StateId u, v;
        std::size_t next_child;
    };
    std::vector<Frame> stack{{left, right, 0}};
    std::vector<bool> on_stack(n * n, false);
    on_stack[left * n + right] = true;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const detail::Reason& why = reasons[f.u * n + f.v];
        const std::vector<StateId>* rights =
            why.kind == Obligation::Move ? &lts.succ[f.v][why.label] : nullptr;
        if (rights && f.next_child < rights->size()) {
            StateId v2 = (*rights)[f.next_child++];
            std::size_t key = why.left_next * n + v2;
            if (node_of[key] == kUnset) {
                // Deletion order is well founded, so the pair cannot already be open.
                if (on_stack[key]) throw std::logic_error("cyclic refutation");
                on_stack[key] = true;
                stack.push_back({why.left_next, v2, 0});
            }
            continue;
        }
        Refutation node;
        node.left = f.u;
        node.right = f.v;
        node.kind = why.kind;
        std::size_t d = 0;
        if (why.kind == Obligation::Move) {
            node.label = lts.alphabet[why.label];
            node.left_next = why.left_next;
            d = kUnset;
            for (StateId v2 : *rights) {
                std::size_t c = node_of[why.left_next * n + v2];
                node.children.push_back(c);
                d = std::min(d, depth[c] + 1);
            }
            if (rights->empty()) d = 0;
        }
        node_of[f.u * n + f.v] = rep.refutation.size();
        on_stack[f.u * n + f.v] = false;
        rep.refutation.push_back(std::move(node));
        depth.push_back(d);
        stack.pop_back();
    }

    // Principal branch: always step to the child with the shortest remaining depth.
    std::size_t cur = rep.refutation.size() - 1;
    while (true) {
        const Refutation& node = rep.refutation[cur];
        if (node.kind == Obligation::Move && !node.children.empty()) {
            rep.trace += node.label;
            std::size_t best = node.children.front();
            for (std::size_t c : node.children)
                if (depth[c] < depth[best]) best = c;
            cur = best;
            continue;
        }
        rep.failure = node.kind;
        rep.failure_label = node.kind == Obligation::Move ? node.label : 0;
        rep.failing_left = lts.state_name(node.left);
        rep.failing_right = lts.state_name(node.right);
        break;
    }
    return rep;
}

/// Re-checks a negative report against the LTS alone: every node's local
/// obligation, child ordering and coverage, and the root pair.
inline bool confirms_refutation(const Lts& lts, const DistinguishingReport& rep) {
    if (rep.verdict || rep.refutation.empty()) return false;
    for (std::size_t i = 0; i < rep.refutation.size(); ++i) {
        const Refutation& node = rep.refutation[i];
        if (node.left >= lts.size() || node.right >= lts.size()) return false;
        if (node.kind == Obligation::Accepting) {
            if (!(lts.accepting[node.left] && !lts.accepting[node.right])) return false;
            continue;
        }
        int a = lts.label_index(node.label);
        if (a < 0) return false;
        const auto& lefts = lts.succ[node.left][a];
        if (!std::binary_search(lefts.begin(), lefts.end(), node.left_next)) return false;
        const auto& rights = lts.succ[node.right][a];
        if (rights.size() != node.children.size()) return false;
        for (std::size_t k = 0; k < rights.size(); ++k) {
            std::size_t c = node.children[k];
            if (c >= i) return false;
            if (rep.refutation[c].left != node.left_next || rep.refutation[c].right != rights[k]) return false;
        }
    }
    const Refutation& root = rep.refutation.back();
    return root.left == rep.left_root && root.right == rep.right_root;
}

// ---------------------------------------------------------------------------
// Deciders on regular expressions

/// Joint exploration of two terms plus the maximal simulation over it.
struct JointSpace {
    Lts lts;
    SimRelation sim;

    JointSpace(const Regex& x, const Regex& y, std::size_t cap = kDefaultStateCap)
        : lts(explore({x, y}, cap)), sim(max_simulation(lts)) {}

    StateId left() const { return lts.roots[0]; }
    StateId right() const { return lts.roots[1]; }
    bool leq() const { return sim.contains(left(), right()); }
    bool geq() const { return sim.contains(right(), left()); }
    bool equiv() const { return leq() && geq(); }
};

inline DistinguishingReport sim_leq(const Regex& x, const Regex& y, std::size_t cap = kDefaultStateCap) {
    Lts lts = explore({x, y}, cap);
    return simulation_report(lts, lts.roots[0], lts.roots[1]);
}

inline bool sim_equiv(const Regex& x, const Regex& y, std::size_t cap = kDefaultStateCap) {
    return JointSpace(x, y, cap).equiv();
}

/// Coarsest bisimulation partition by signature refinement: block ids of each
/// state, numbered in order of first appearance.
inline std::vector<std::uint32_t> bisimulation_partition(const Lts& lts) {
    const std::size_t n = lts.size();
    std::vector<std::uint32_t> block(n);
    for (std::size_t s = 0; s < n; ++s) block[s] = lts.accepting[s] ? 1 : 0;
    std::size_t count = 0;
    while (true) {
        using Signature = std::pair<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>>;
        std::map<Signature, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            Signature sig;
            sig.first = block[s];
            for (std::size_t a = 0; a < lts.labels(); ++a)
                for (StateId t : lts.succ[s][a]) sig.second.emplace_back(static_cast<std::uint32_t>(a), block[t]);
            std::sort(sig.second.begin(), sig.second.end());
            sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
            auto [it, inserted] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size()));
            next[s] = it->second;
        }
        block = std::move(next);
        if (ids.size() == count) return block;
        count = ids.size();
    }
}

inline bool bisim_equiv(const Regex& x, const Regex& y, std::size_t cap = kDefaultStateCap) {
    Lts lts = explore({x, y}, cap);
    auto block = bisimulation_partition(lts);
    return block[lts.roots[0]] == block[lts.roots[1]];
}

/// Shortest word (by BFS over the product of the two subset automata) accepted
/// from exactly one of the two roots, if any.
inline std::optional<std::string> trace_counterexample(const Lts& lts, StateId left, StateId right) {
    using Subset = std::vector<StateId>;
    auto accepts = [&](const Subset& s) {
        return std::any_of(s.begin(), s.end(), [&](StateId q) { return lts.accepting[q]; });
    };
    auto step = [&](const Subset& s, std::size_t a) {
        Subset out;
        for (StateId q : s) out.insert(out.end(), lts.succ[q][a].begin(), lts.succ[q][a].end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    std::map<std::pair<Subset, Subset>, std::string> seen;
    std::deque<std::pair<Subset, Subset>> work;
    auto start = std::make_pair(Subset{left}, Subset{right});
    seen.emplace(start, "");
    work.push_back(start);
    while (!work.empty()) {
        auto cur = work.front();
        work.pop_front();
        const std::string word = seen.at(cur);
        if (accepts(cur.first) != accepts(cur.second)) return word;
        for (std::size_t a = 0; a < lts.labels(); ++a) {
            auto next = std::make_pair(step(cur.first, a), step(cur.second, a));
            if (next.first.empty() && next.second.empty()) continue;
            if (seen.emplace(next, word + lts.alphabet[a]).second) work.push_back(std::move(next));
        }
    }
    return std::nullopt;
}

inline std::optional<std::string> trace_counterexample(const Regex& x, const Regex& y,
                                                       std::size_t cap = kDefaultStateCap) {
    Lts lts = explore({x, y}, cap);
    return trace_counterexample(lts, lts.roots[0], lts.roots[1]);
}

inline bool trace_equiv(const Regex& x, const Regex& y, std::size_t cap = kDefaultStateCap) {
    return !trace_counterexample(x, y, cap).has_value();
}

} // namespace milner
