#pragma once

// Regular expressions over a lowercase ASCII alphabet: AST, parser, renderer,
// normalization modulo unit and product associativity, and seeded generation.

#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace milner {

enum class Kind : std::uint8_t { Zero, One, Letter, Sum, Product, Star };

inline bool is_letter(char c) { return c >= 'a' && c <= 'z'; }

/// Immutable regular expression. Nodes are shared; copies are cheap.
///
/// Equality and ordering are structural. Ordering compares kind, then letter,
/// then children left to right, so it is stable across runs and platforms.
class Regex {
public:
    Regex() : node_(zero_node()) {}

    static Regex zero() { return Regex(zero_node()); }
    static Regex one() { return Regex(one_node()); }
    static Regex letter(char c) {
        if (!is_letter(c)) throw std::invalid_argument(std::string("not a lowercase letter: '") + c + "'");
        return Regex(make(Kind::Letter, c, nullptr, nullptr));
    }
    static Regex sum(const Regex& l, const Regex& r) { return Regex(make(Kind::Sum, 0, l.node_, r.node_)); }
    static Regex product(const Regex& l, const Regex& r) { return Regex(make(Kind::Product, 0, l.node_, r.node_)); }
    static Regex star(const Regex& body) { return Regex(make(Kind::Star, 0, body.node_, nullptr)); }

    Kind kind() const { return node_->kind; }
    char symbol() const { return node_->symbol; }
    Regex left() const { assert(node_->left); return Regex(node_->left); }
    Regex right() const { assert(node_->right); return Regex(node_->right); }
    Regex body() const { return left(); }

    bool is(Kind k) const { return node_->kind == k; }

    /// Node count.
    std::size_t size() const { return node_->size; }
    std::size_t letter_count() const { return node_->letters; }
    std::size_t hash() const { return node_->hash; }

    /// True when the term is already in the form produced by normalize().
    bool is_normal() const { return node_->normal; }

    /// Bit set of the letters occurring in the term (bit i = 'a' + i).
    std::uint32_t letter_mask() const { return node_->mask; }

    friend bool operator==(const Regex& a, const Regex& b) {
        if (a.node_ == b.node_) return true;
        if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
        return compare(a.node_.get(), b.node_.get()) == 0;
    }
    friend std::strong_ordering operator<=>(const Regex& a, const Regex& b) {
        return compare(a.node_.get(), b.node_.get()) <=> 0;
    }

private:
    struct Node {
        Kind kind;
        char symbol;
        bool normal;
        std::shared_ptr<const Node> left;
        std::shared_ptr<const Node> right;
        std::size_t size;
        std::size_t letters;
        std::size_t hash;
        std::uint32_t mask;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Regex(NodePtr n) : node_(std::move(n)) {}

    static NodePtr make(Kind k, char sym, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->symbol = sym;
        n->size = 1 + (l ? l->size : 0) + (r ? r->size : 0);
        n->letters = (k == Kind::Letter ? 1 : 0) + (l ? l->letters : 0) + (r ? r->letters : 0);
        n->mask = (k == Kind::Letter ? (1u << (sym - 'a')) : 0u) | (l ? l->mask : 0u) | (r ? r->mask : 0u);
        std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ULL + static_cast<unsigned char>(sym);
        if (l) h = (h ^ l->hash) * 0x100000001b3ULL + 0x7f4a7c15;
        if (r) h = (h ^ (r->hash << 1)) * 0x100000001b3ULL + 0x3c6ef372;
        n->hash = h;
        switch (k) {
        case Kind::Zero: case Kind::One: case Kind::Letter:
            n->normal = true;
            break;
        case Kind::Sum:
            n->normal = l->normal && r->normal;
            break;
        case Kind::Star:
            n->normal = l->normal;
            break;
        case Kind::Product:
            n->normal = l->normal && r->normal && l->kind != Kind::Product && l->kind != Kind::One &&
                        r->kind != Kind::One;
            break;
        }
        n->left = std::move(l);
        n->right = std::move(r);
        return n;
    }

    static const NodePtr& zero_node() {
        static const NodePtr n = make(Kind::Zero, 0, nullptr, nullptr);
        return n;
    }
    static const NodePtr& one_node() {
        static const NodePtr n = make(Kind::One, 0, nullptr, nullptr);
        return n;
    }

    static int compare(const Node* a, const Node* b) {
        while (true) {
            if (a == b) return 0;
            if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
            if (a->symbol != b->symbol) return a->symbol < b->symbol ? -1 : 1;
            if (!a->left) return 0;
            if (!a->right) {
                a = a->left.get();
                b = b->left.get();
                continue;
            }
            if (int c = compare(a->left.get(), b->left.get()); c != 0) return c;
            a = a->right.get();
            b = b->right.get();
        }
    }

    NodePtr node_;
};

struct RegexHash {
    std::size_t operator()(const Regex& r) const { return r.hash(); }
};

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
        : std::runtime_error(format(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string format(std::size_t offset, const std::vector<std::string>& expected, const std::string& found) {
        std::string msg = "syntax error at offset " + std::to_string(offset) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += expected[i];
        }
        msg += ", found " + found;
        return msg;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Regex parse() {
        Regex r = expr();
        skip_ws();
        if (pos_ < text_.size()) fail({"'+'", "'.'", "'*'", "atom", "end of input"});
        return r;
    }

private:
    // expr := term ('+' term)*
    Regex expr() {
        Regex r = term();
        while (peek() == '+') {
            ++pos_;
            r = Regex::sum(r, term());
        }
        return r;
    }

    // term := factor ('.'? factor)*
    Regex term() {
        Regex r = factor();
        while (true) {
            char c = peek();
            if (c == '.') {
                ++pos_;
                r = Regex::product(r, factor());
            } else if (starts_atom(c)) {
                r = Regex::product(r, factor());
            } else {
                return r;
            }
        }
    }

    // factor := atom '*'*
    Regex factor() {
        Regex r = atom();
        while (peek() == '*') {
            ++pos_;
            r = Regex::star(r);
        }
        return r;
    }

    Regex atom() {
        char c = peek();
        if (c == '0') { ++pos_; return Regex::zero(); }
        if (c == '1') { ++pos_; return Regex::one(); }
        if (is_letter(c)) { ++pos_; return Regex::letter(c); }
        if (c == '(') {
            ++pos_;
            Regex r = expr();
            if (peek() != ')') fail({"')'", "'+'", "'.'", "'*'", "atom"});
            ++pos_;
            return r;
        }
        fail({"'0'", "'1'", "letter", "'('"});
    }

    static bool starts_atom(char c) { return c == '0' || c == '1' || c == '(' || is_letter(c); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_ws();
        std::string found = pos_ < text_.size() ? std::string("'") + text_[pos_] + "'" : "end of input";
        throw ParseError(pos_, std::move(expected), found);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the concrete syntax. Product binds tighter than sum, star is postfix
/// and tightest; juxtaposition and '.' both denote product. Sums and products
/// associate to the left. Throws ParseError.
inline Regex parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline void render_into(const Regex& x, std::string& out) {
    auto wrapped = [&out](const Regex& r, bool parens) {
        if (parens) out += '(';
        render_into(r, out);
        if (parens) out += ')';
    };
    switch (x.kind()) {
    case Kind::Zero: out += '0'; break;
    case Kind::One: out += '1'; break;
    case Kind::Letter: out += x.symbol(); break;
    case Kind::Sum:
        wrapped(x.left(), false);
        out += " + ";
        wrapped(x.right(), x.right().is(Kind::Sum));
        break;
    case Kind::Product:
        wrapped(x.left(), x.left().is(Kind::Sum));
        wrapped(x.right(), x.right().is(Kind::Sum) || x.right().is(Kind::Product));
        break;
    case Kind::Star:
        wrapped(x.body(), x.body().is(Kind::Sum) || x.body().is(Kind::Product));
        out += '*';
        break;
    }
}

} // namespace detail

/// Minimal parenthesization; parse(render(x)) == x.
inline std::string render(const Regex& x) {
    std::string out;
    detail::render_into(x, out);
    return out;
}

// ---------------------------------------------------------------------------
// Normalization

/// Product of two normalized terms, normalized: concatenates the product
/// spines and drops unit factors.
inline Regex seq(const Regex& x, const Regex& y) {
    assert(x.is_normal() && y.is_normal());
    if (x.is(Kind::One)) return y;
    if (y.is(Kind::One)) return x;
    if (x.is(Kind::Product)) return Regex::product(x.left(), seq(x.right(), y));
    return Regex::product(x, y);
}

/// Canonical representative modulo 1x = x, x1 = x and (xy)z = x(yz):
/// right-nested product spines without unit factors. Sums are left alone.
inline Regex normalize(const Regex& x) {
    if (x.is_normal()) return x;
    switch (x.kind()) {
    case Kind::Sum: return Regex::sum(normalize(x.left()), normalize(x.right()));
    case Kind::Star: return Regex::star(normalize(x.body()));
    case Kind::Product: return seq(normalize(x.left()), normalize(x.right()));
    default: return x;
    }
}

// ---------------------------------------------------------------------------
// Generation

struct GenConfig {
    std::size_t max_size = 12;
    std::string alphabet = "abc";
    double star_probability = 0.2;
    std::uint64_t seed = 0;

    void validate() const {
        if (max_size == 0) throw std::invalid_argument("max_size must be positive");
        if (alphabet.empty()) throw std::invalid_argument("alphabet must be nonempty");
        for (char c : alphabet)
            if (!is_letter(c)) throw std::invalid_argument(std::string("alphabet letter out of range: '") + c + "'");
        if (!(star_probability >= 0.0 && star_probability <= 1.0))
            throw std::invalid_argument("star_probability must lie in [0,1]");
    }
};

/// Deterministic stream of random regexes. The same config (seed included)
/// yields the same sequence.
class RegexGenerator {
public:
    explicit RegexGenerator(GenConfig config) : config_(std::move(config)), rng_(config_.seed) { config_.validate(); }

    Regex next() { return next(config_.max_size); }

    /// A regex of size at most `max_size` (clamped to at least 1).
    Regex next(std::size_t max_size) {
        std::size_t target = 1 + below(std::max<std::size_t>(max_size, 1));
        return exact(target);
    }

    std::mt19937_64& engine() { return rng_; }
    const GenConfig& config() const { return config_; }

private:
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

    Regex leaf() {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        if (u < 0.1) return Regex::zero();
        if (u < 0.25) return Regex::one();
        return Regex::letter(config_.alphabet[below(config_.alphabet.size())]);
    }

    Regex exact(std::size_t n) {
        if (n <= 1) return leaf();
        if (n == 2) return Regex::star(leaf());
        if (coin(config_.star_probability)) return Regex::star(exact(n - 1));
        std::size_t l = 1 + below(n - 2);
        Regex lhs = exact(l);
        Regex rhs = exact(n - 1 - l);
        return coin(0.5) ? Regex::sum(lhs, rhs) : Regex::product(lhs, rhs);
    }

    GenConfig config_;
    std::mt19937_64 rng_;
};

/// First element of the generator's sequence for `config`.
inline Regex generate(const GenConfig& config) { return RegexGenerator(config).next(); }

} // namespace milner

template <>
struct std::hash<milner::Regex> {
    std::size_t operator()(const milner::Regex& r) const noexcept { return r.hash(); }
};
