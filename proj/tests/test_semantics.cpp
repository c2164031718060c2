#include <gtest/gtest.h>

#include "milner/semantics.hpp"
#include "milner/syntax.hpp"
#include "oracles.hpp"

using namespace milner;

namespace {

RegexSet set_of(std::initializer_list<const char*> texts) {
    RegexSet out;
    for (const char* t : texts) out.push_back(normalize(parse(t)));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Check, Table) {
    EXPECT_TRUE(check(parse("1")));
    EXPECT_FALSE(check(parse("b")));
    EXPECT_FALSE(check(parse("0")));
    EXPECT_TRUE(check(parse("(ab)*")));
    EXPECT_TRUE(check(parse("a + 1")));
    EXPECT_FALSE(check(parse("a1")));
    EXPECT_TRUE(check(parse("1 a*")));
    EXPECT_TRUE(check(parse("0*")));
}

TEST(Trans, Table) {
    EXPECT_TRUE(trans(parse("0"), 'a').empty());
    EXPECT_TRUE(trans(parse("1"), 'a').empty());
    EXPECT_TRUE(trans(parse("b"), 'a').empty());
    EXPECT_EQ(trans(parse("b"), 'b'), set_of({"1"}));
    EXPECT_EQ(trans(parse("ab"), 'a'), set_of({"b"}));
    EXPECT_EQ(trans(parse("a*"), 'a'), set_of({"a*"}));
    EXPECT_EQ(trans(parse("a + b"), 'b'), set_of({"1"}));
    // Sum is symmetric in the label: both sides contribute a-successors.
    EXPECT_EQ(trans(parse("ab + ac"), 'a'), set_of({"b", "c"}));
    EXPECT_EQ(trans(parse("a*b"), 'a'), set_of({"a*b"}));
    EXPECT_EQ(trans(parse("a*b"), 'b'), set_of({"1"}));
    EXPECT_EQ(trans(parse("(ab)*"), 'a'), set_of({"b(ab)*"}));
}

TEST(Trans, AgreesWithLiteralTableAfterNormalizing) {
    GenConfig cfg;
    cfg.max_size = 18;
    cfg.seed = 3;
    RegexGenerator gen(cfg);
    for (int i = 0; i < 1500; ++i) {
        Regex x = gen.next();
        for (char a : std::string("abc")) {
            RegexSet expected;
            for (const Regex& r : oracle::raw_trans(x, a)) expected.push_back(normalize(r));
            std::sort(expected.begin(), expected.end());
            expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
            ASSERT_EQ(trans(x, a), expected) << render(x) << " on " << a;
        }
    }
}

TEST(Trans, NormalizePreservesSemantics) {
    GenConfig cfg;
    cfg.max_size = 18;
    cfg.seed = 5;
    RegexGenerator gen(cfg);
    for (int i = 0; i < 1500; ++i) {
        Regex x = gen.next();
        Regex n = normalize(x);
        ASSERT_EQ(check(x), check(n));
        for (char a : std::string("abc")) ASSERT_EQ(trans(x, a), trans(n, a)) << render(x);
    }
}

TEST(Explore, Zero) {
    Lts lts = explore(parse("0"));
    EXPECT_EQ(lts.size(), 1u);
    EXPECT_EQ(lts.transition_count(), 0u);
    EXPECT_FALSE(lts.accepting[0]);
    EXPECT_EQ(lts.alphabet, "");
}

TEST(Explore, StarSelfLoop) {
    Lts lts = explore(parse("a*"));
    ASSERT_EQ(lts.size(), 1u);
    EXPECT_TRUE(lts.accepting[0]);
    ASSERT_EQ(lts.alphabet, "a");
    EXPECT_EQ(lts.succ[0][0], std::vector<StateId>{0});
}

TEST(Explore, ProductWithSum) {
    Lts lts = explore(parse("a(b+c)"));
    ASSERT_EQ(lts.size(), 3u);
    EXPECT_EQ(lts.terms[0], parse("a(b+c)"));
    EXPECT_EQ(lts.terms[1], parse("b+c"));
    EXPECT_EQ(lts.terms[2], Regex::one());
    EXPECT_TRUE(is_closed(lts));
}

TEST(Explore, SharedRoots) {
    Lts lts = explore({parse("a1"), parse("a")});
    ASSERT_EQ(lts.roots.size(), 2u);
    EXPECT_EQ(lts.roots[0], lts.roots[1]);
}

TEST(Explore, CapIsAnError) {
    try {
        explore(parse("abcd"), 3);
        FAIL();
    } catch (const StateSpaceExceeded& e) {
        EXPECT_EQ(e.discovered(), 4u);
        EXPECT_EQ(e.cap(), 3u);
        EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
    }
    EXPECT_EQ(explore(parse("abcd"), 5).size(), 5u);
    EXPECT_THROW(explore(parse("a"), 0), std::invalid_argument);
}

TEST(Explore, ClosedReachableAndNormalizeInvariant) {
    GenConfig cfg;
    cfg.max_size = 25;
    cfg.seed = 17;
    RegexGenerator gen(cfg);
    for (int i = 0; i < 500; ++i) {
        Regex x = gen.next();
        Lts lts = explore(x);
        ASSERT_TRUE(is_closed(lts));
        ASSERT_EQ(lts.reachable_from(lts.roots[0]), lts.size());
        for (std::size_t s = 0; s < lts.size(); ++s) ASSERT_EQ(static_cast<bool>(lts.accepting[s]), check(lts.terms[s]));
        Lts n = explore(normalize(x));
        ASSERT_EQ(lts.terms, n.terms);
        ASSERT_EQ(lts.succ, n.succ);
        ASSERT_EQ(lts.accepting, n.accepting);
    }
}

TEST(Explore, Deterministic) {
    Regex x = parse("(a + b a*)*(c + ab)");
    Lts l1 = explore(x), l2 = explore(x);
    EXPECT_EQ(l1.terms, l2.terms);
    EXPECT_EQ(to_dot(l1), to_dot(l2));
}

TEST(Dot, StarRendering) {
    std::string dot = to_dot(explore(parse("a*")));
    EXPECT_NE(dot.find("s0 [label=\"a*\", shape=doublecircle]"), std::string::npos);
    EXPECT_NE(dot.find("s0 -> s0 [label=\"a\"]"), std::string::npos);
}
