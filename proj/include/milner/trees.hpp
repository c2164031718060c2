#pragma once

// Monodic tree languages: terms over a ranked signature with the single
// variable *, interpretations of regular expressions as tree languages under
// a node-count bound, and the fresh-symbol transform.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "milner/relations.hpp"
#include "milner/semantics.hpp"
#include "milner/syntax.hpp"

namespace milner::trees {

/// Reserved unary symbol introduced by freshen(). Not a valid user symbol
/// because user symbols must start with a letter.
inline constexpr std::string_view kFresh = "@f";

/// A first-order term whose only variable is *. Immutable and shared.
class Tree {
public:
    static Tree var() {
        static const Tree v(std::make_shared<const Node>(Node{true, {}, {}, 1, 1}));
        return v;
    }

    static Tree apply(std::string symbol, std::vector<Tree> children = {}) {
        std::size_t size = 1, vars = 0;
        for (const Tree& c : children) {
            size += c.size();
            vars += c.var_count();
        }
        return Tree(std::make_shared<const Node>(Node{false, std::move(symbol), std::move(children), size, vars}));
    }

    bool is_var() const { return node_->is_var; }
    const std::string& symbol() const { return node_->symbol; }
    const std::vector<Tree>& children() const { return node_->children; }
    std::size_t arity() const { return node_->children.size(); }

    /// Node count; * counts as one node.
    std::size_t size() const { return node_->size; }
    /// Number of * occurrences.
    std::size_t var_count() const { return node_->vars; }

    /// Size first, then * before applications, then symbol name, then children
    /// left to right.
    friend std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
        if (a.node_ == b.node_) return std::strong_ordering::equal;
        if (auto c = a.size() <=> b.size(); c != 0) return c;
        if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
        if (auto c = a.arity() <=> b.arity(); c != 0) return c;
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (auto c = a.children()[i] <=> b.children()[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Tree& a, const Tree& b) { return (a <=> b) == 0; }

private:
    struct Node {
        bool is_var;
        std::string symbol;
        std::vector<Tree> children;
        std::size_t size;
        std::size_t vars;
    };
    explicit Tree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Deduplicated, deterministically ordered finite set of trees.
using TreeLang = std::set<Tree>;

using Signature = std::map<std::string, std::size_t>;

inline bool is_user_symbol(std::string_view s) {
    if (s.empty() || !((s[0] >= 'a' && s[0] <= 'z') || (s[0] >= 'A' && s[0] <= 'Z'))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

inline bool conforms(const Tree& t, const Signature& sig) {
    if (t.is_var()) return true;
    auto it = sig.find(t.symbol());
    if (it == sig.end() || it->second != t.arity()) return false;
    return std::all_of(t.children().begin(), t.children().end(), [&](const Tree& c) { return conforms(c, sig); });
}

struct Interpretation {
    Signature signature;
    std::map<char, TreeLang> letter_map;

    /// Letters without an entry denote the empty language.
    const TreeLang& of(char a) const {
        static const TreeLang empty;
        auto it = letter_map.find(a);
        return it == letter_map.end() ? empty : it->second;
    }

    bool well_formed() const {
        for (const auto& [a, lang] : letter_map)
            for (const Tree& t : lang)
                if (!conforms(t, signature)) return false;
        return true;
    }
};

inline TreeLang truncate(const TreeLang& lang, std::size_t k) {
    TreeLang out;
    for (const Tree& t : lang) {
        if (t.size() > k) break;  // ordered by size
        out.insert(t);
    }
    return out;
}

inline std::size_t unbounded() { return static_cast<std::size_t>(-1); }

namespace detail {

// Fills each * of `t` independently from `pool` (sorted by size), keeping only
// results of size <= bound. `budget` is what the remaining subtree may use.
inline void substitute_into(const Tree& t, const std::vector<Tree>& pool, std::size_t budget,
                            const std::function<void(const Tree&, std::size_t)>& emit) {
    if (t.is_var()) {
        for (const Tree& s : pool) {
            if (s.size() > budget) break;
            emit(s, s.size());
        }
        return;
    }
    if (t.var_count() == 0) {
        if (t.size() <= budget) emit(t, t.size());
        return;
    }
    // Build children left to right; each partial choice carries its used size.
    const std::size_t n = t.arity();
    std::vector<Tree> chosen;
    chosen.reserve(n);
    // Minimal sizes of the remaining children (each * is replaced by something of size >= 1).
    std::vector<std::size_t> tail_min(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) tail_min[i] = tail_min[i + 1] + t.children()[i].size();

    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
        if (i == n) {
            emit(Tree::apply(t.symbol(), chosen), used);
            return;
        }
        if (used + tail_min[i] > budget) return;
        std::size_t room = budget - used - tail_min[i + 1];
        substitute_into(t.children()[i], pool, room, [&](const Tree& c, std::size_t sz) {
            chosen.push_back(c);
            go(i + 1, used + sz);
            chosen.pop_back();
        });
    };
    go(0, 1);
}

} // namespace detail

/// t(S): every tree obtained by replacing each * of t independently by a
/// member of S, restricted to trees of size <= bound.
inline TreeLang substitute(const Tree& t, const TreeLang& s, std::size_t bound = unbounded()) {
    std::vector<Tree> pool(s.begin(), s.end());
    TreeLang out;
    detail::substitute_into(t, pool, bound, [&](const Tree& r, std::size_t) { out.insert(r); });
    return out;
}

/// T(S) = union of t(S) over t in T, restricted to size <= bound.
inline TreeLang substitute(const TreeLang& ts, const TreeLang& s, std::size_t bound = unbounded()) {
    std::vector<Tree> pool(s.begin(), s.end());
    TreeLang out;
    for (const Tree& t : ts) {
        if (t.size() > bound) break;
        detail::substitute_into(t, pool, bound, [&](const Tree& r, std::size_t) { out.insert(r); });
    }
    return out;
}

inline TreeLang unite(TreeLang a, const TreeLang& b) {
    a.insert(b.begin(), b.end());
    return a;
}

inline TreeLang interpret(const Interpretation& I, const Regex& x, std::size_t k);

/// Least U with U = {*} u U u I(x)(U), all restricted to size <= k. Each
/// round adds the next power of (1 + x); the bound makes the chain finite.
inline TreeLang star_closure(const Interpretation& I, const Regex& x, std::size_t k) {
    if (k == 0) throw std::invalid_argument("tree bound must be at least 1");
    TreeLang base = interpret(I, x, k);
    TreeLang u{Tree::var()};
    while (true) {
        TreeLang next = unite(u, substitute(base, u, k));
        if (next.size() == u.size()) return u;
        u = std::move(next);
    }
}

/// { t in I(x) : size(t) <= k }, computed compositionally. Substitution never
/// shrinks a tree, so truncating every intermediate result is exact.
inline TreeLang interpret(const Interpretation& I, const Regex& x, std::size_t k) {
    if (k == 0) throw std::invalid_argument("tree bound must be at least 1");
    switch (x.kind()) {
    case Kind::Zero: return {};
    case Kind::One: return {Tree::var()};
    case Kind::Letter: return truncate(I.of(x.symbol()), k);
    case Kind::Sum: return unite(interpret(I, x.left(), k), interpret(I, x.right(), k));
    case Kind::Product: return substitute(interpret(I, x.left(), k), interpret(I, x.right(), k), k);
    case Kind::Star: return star_closure(I, x.body(), k);
    }
    return {};
}

/// Each letter a is the unary symbol a, interpreted as {a(*)}.
inline Interpretation standard_interpretation(std::string_view alphabet) {
    Interpretation I;
    for (char a : alphabet) {
        if (!is_letter(a)) throw std::invalid_argument(std::string("not a lowercase letter: '") + a + "'");
        std::string name(1, a);
        I.signature[name] = 1;
        I.letter_map[a] = {Tree::apply(name, {Tree::var()})};
    }
    return I;
}

struct InterpretationConfig {
    std::string alphabet = "abc";
    std::size_t max_symbols = 4;
    std::size_t max_arity = 3;
    std::size_t max_trees_per_letter = 3;
    std::size_t max_tree_size = 4;
};

namespace detail {

inline Tree random_tree(const Signature& sig, std::size_t budget, double var_probability, std::mt19937_64& rng) {
    std::vector<std::pair<std::string, std::size_t>> fitting;
    for (const auto& [sym, arity] : sig)
        if (arity + 1 <= budget) fitting.emplace_back(sym, arity);
    if (fitting.empty() || std::bernoulli_distribution(var_probability)(rng)) return Tree::var();
    // Wider symbols are favored so languages are not dominated by constants.
    std::vector<double> weights;
    for (const auto& f : fitting) weights.push_back(1.0 + static_cast<double>(f.second));
    const auto& [sym, arity] = fitting[std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng)];
    // Split the remaining budget among the children, each getting at least 1.
    std::size_t spare = budget - 1 - arity;
    std::vector<Tree> kids;
    for (std::size_t i = 0; i < arity; ++i) {
        std::size_t extra = spare ? std::uniform_int_distribution<std::size_t>(0, spare)(rng) : 0;
        spare -= extra;
        kids.push_back(random_tree(sig, 1 + extra, 0.5, rng));
    }
    return Tree::apply(sym, std::move(kids));
}

} // namespace detail

/// Random signature (1..max_symbols symbols, arities 0..max_arity, at least one
/// of positive arity) and 1..max_trees_per_letter random trees per letter,
/// each of size <= max_tree_size and possibly *.
inline Interpretation random_interpretation(std::uint64_t seed, const InterpretationConfig& cfg = {}) {
    static constexpr std::string_view kNames[] = {"g", "h", "c", "d", "k", "m", "p", "q"};
    std::mt19937_64 rng(seed);
    Interpretation I;
    std::size_t count = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(cfg.max_symbols, 8))(rng);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t arity = std::uniform_int_distribution<std::size_t>(i == 0 ? 1 : 0, cfg.max_arity)(rng);
        I.signature[std::string(kNames[i])] = arity;
    }
    for (char a : cfg.alphabet) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, cfg.max_trees_per_letter)(rng);
        TreeLang lang;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t budget = std::uniform_int_distribution<std::size_t>(std::min<std::size_t>(2, cfg.max_tree_size), cfg.max_tree_size)(rng);
            lang.insert(detail::random_tree(I.signature, budget, 0.15, rng));
        }
        I.letter_map[a] = std::move(lang);
    }
    return I;
}

/// J(a) = I(a) - {*} u { f(*) | * in I(a) } with f the reserved fresh symbol.
inline Interpretation freshen(const Interpretation& I) {
    if (I.signature.count(std::string(kFresh))) throw std::invalid_argument("interpretation already uses the fresh symbol");
    Interpretation J;
    J.signature = I.signature;
    J.signature[std::string(kFresh)] = 1;
    for (const auto& [a, lang] : I.letter_map) {
        TreeLang out;
        for (const Tree& t : lang) {
            if (t.is_var())
                out.insert(Tree::apply(std::string(kFresh), {Tree::var()}));
            else
                out.insert(t);
        }
        J.letter_map[a] = std::move(out);
    }
    return J;
}

inline Tree erase_f(const Tree& t) {
    if (t.is_var()) return t;
    if (t.symbol() == kFresh && t.arity() == 1) return erase_f(t.children()[0]);
    std::vector<Tree> kids;
    kids.reserve(t.arity());
    for (const Tree& c : t.children()) kids.push_back(erase_f(c));
    return Tree::apply(t.symbol(), std::move(kids));
}

/// Collapses every f(t) to t.
inline TreeLang erase_f(const TreeLang& lang) {
    TreeLang out;
    for (const Tree& t : lang) out.insert(erase_f(t));
    return out;
}

/// The right-hand side of the normal-form identity under the bound:
/// (check(x) ? {*} : {}) u U_{a, z in trans(x,a)} I(a)(I(z)).
inline TreeLang normal_form(const Interpretation& I, const Regex& x, std::size_t k) {
    TreeLang out;
    if (check(x)) out.insert(Tree::var());
    const Regex terms[] = {x};
    for (char a : letters_of(terms)) {
        TreeLang image = truncate(I.of(a), k);
        for (const Regex& z : trans(x, a)) {
            TreeLang part = substitute(image, interpret(I, z, k), k);
            out.insert(part.begin(), part.end());
        }
    }
    return out;
}

/// Bounded check of I(x) = (check(x) ? {*} : {}) u U_{a, z in trans(x,a)} I(a)(I(z)).
inline bool int_normal_check(const Interpretation& I, const Regex& x, std::size_t k) {
    return interpret(I, x, k) == normal_form(I, x, k);
}

inline bool subset_of(const TreeLang& a, const TreeLang& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Bounded form of "x < y implies I(x) included in I(y)" for both I and
/// freshen(I), with equality when x and y are simulation equivalent.
/// Vacuously true when x is not simulated by y.
inline bool respects_simulation_check(const Regex& x, const Regex& y, const Interpretation& I, std::size_t k,
                                      std::size_t cap = kDefaultStateCap) {
    JointSpace js(x, y, cap);
    if (!js.leq()) return true;
    Interpretation J = freshen(I);
    TreeLang ix = interpret(I, x, k), iy = interpret(I, y, k);
    TreeLang jx = interpret(J, x, k), jy = interpret(J, y, k);
    bool ok = subset_of(ix, iy) && subset_of(jx, jy);
    if (js.geq()) ok = ok && ix == iy && jx == jy;
    return ok;
}

// ---------------------------------------------------------------------------
// S-expressions

inline void write_sexpr(const Tree& t, std::string& out) {
    if (t.is_var()) {
        out += '*';
        return;
    }
    if (t.arity() == 0) {
        out += t.symbol();
        return;
    }
    out += '(';
    out += t.symbol();
    for (const Tree& c : t.children()) {
        out += ' ';
        write_sexpr(c, out);
    }
    out += ')';
}

inline std::string to_sexpr(const Tree& t) {
    std::string out;
    write_sexpr(t, out);
    return out;
}

/// One tree per line in language order.
inline std::string to_sexpr_lines(const TreeLang& lang) {
    std::string out;
    for (const Tree& t : lang) {
        write_sexpr(t, out);
        out += '\n';
    }
    return out;
}

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

class SexprReader {
public:
    explicit SexprReader(std::string_view text) : text_(text) {}

    Tree tree() {
        skip();
        if (pos_ >= text_.size()) throw FormatError("unexpected end of tree");
        char c = text_[pos_];
        if (c == '*') {
            ++pos_;
            return Tree::var();
        }
        if (c == '(') {
            ++pos_;
            std::string sym = symbol();
            std::vector<Tree> kids;
            while (true) {
                skip();
                if (pos_ >= text_.size()) throw FormatError("unterminated '(' in tree");
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                kids.push_back(tree());
            }
            return Tree::apply(std::move(sym), std::move(kids));
        }
        return Tree::apply(symbol());
    }

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }
    std::size_t pos() const { return pos_; }

private:
    void skip() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    std::string symbol() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '(' &&
               text_[pos_] != ')' && text_[pos_] != ',')
            ++pos_;
        std::string s(text_.substr(start, pos_ - start));
        if (s.empty()) throw FormatError("expected a symbol at column " + std::to_string(start + 1));
        return s;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            std::string item = trim(s.substr(start, i - start));
            if (!item.empty()) out.push_back(std::move(item));
            start = i + 1;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        }
    }
    return out;
}

} // namespace detail

inline Tree parse_tree(std::string_view text) {
    detail::SexprReader r(text);
    Tree t = r.tree();
    if (!r.at_end()) throw FormatError("trailing text after tree: '" + std::string(text) + "'");
    return t;
}

/// Reads the interpretation file format:
///
///     sig: g/2, c/0
///     a: (g * *), c
///     b: *
///
/// '#' starts a comment. Every tree must conform to the declared signature.
inline Interpretation parse_interpretation(std::string_view text) {
    Interpretation I;
    bool have_sig = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
        std::string line = detail::trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw FormatError(where() + "expected 'key: value'");
        std::string key = detail::trim(std::string_view(line).substr(0, colon));
        std::string_view rest = std::string_view(line).substr(colon + 1);
        if (key == "sig") {
            if (have_sig) throw FormatError(where() + "duplicate sig line");
            have_sig = true;
            for (const std::string& item : detail::split_commas(rest)) {
                auto slash = item.find('/');
                if (slash == std::string::npos) throw FormatError(where() + "expected symbol/arity, got '" + item + "'");
                std::string sym = detail::trim(std::string_view(item).substr(0, slash));
                std::string ar = detail::trim(std::string_view(item).substr(slash + 1));
                if (!is_user_symbol(sym)) throw FormatError(where() + "invalid symbol '" + sym + "'");
                if (ar.empty() || ar.find_first_not_of("0123456789") != std::string::npos)
                    throw FormatError(where() + "invalid arity '" + ar + "'");
                if (!I.signature.emplace(sym, std::stoul(ar)).second)
                    throw FormatError(where() + "symbol declared twice: '" + sym + "'");
            }
            continue;
        }
        if (key.size() != 1 || !is_letter(key[0])) throw FormatError(where() + "expected 'sig' or a letter, got '" + key + "'");
        if (!have_sig) throw FormatError(where() + "the sig line must come first");
        char letter = key[0];
        if (I.letter_map.count(letter)) throw FormatError(where() + "letter defined twice: '" + key + "'");
        TreeLang lang;
        for (const std::string& item : detail::split_commas(rest)) {
            Tree t = parse_tree(item);
            if (!conforms(t, I.signature)) throw FormatError(where() + "tree does not fit the signature: " + item);
            lang.insert(t);
        }
        I.letter_map[letter] = std::move(lang);
    }
    if (!have_sig) throw FormatError("missing sig line");
    return I;
}

} // namespace milner::trees
