// Interpreting expressions as tree languages with a binary symbol.

#include <iostream>

#include "milner/syntax.hpp"
#include "milner/trees.hpp"

int main() {
    using namespace milner;
    using namespace milner::trees;

    Interpretation I = parse_interpretation(
        "sig: g/2, c/0\n"
        "a: (g * *)\n"
        "b: c, *\n");

    for (const char* text : {"ab", "a*b", "(a + b)*"}) {
        Regex x = parse(text);
        TreeLang lang = interpret(I, x, 5);
        std::cout << text << " (" << lang.size() << " trees of size <= 5)\n" << to_sexpr_lines(lang);
        std::cout << "  normal form holds: " << std::boolalpha << int_normal_check(I, x, 5) << "\n\n";
    }
}
