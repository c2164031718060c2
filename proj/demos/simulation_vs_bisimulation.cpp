// ab + a(b+c) and a(b+c) are simulation equivalent but not bisimilar.

#include <iostream>

#include "milner/relations.hpp"
#include "milner/syntax.hpp"

int main() {
    using namespace milner;
    Regex x = parse("ab + a(b+c)");
    Regex y = parse("a(b+c)");

    std::cout << render(x) << "  vs  " << render(y) << "\n";
    std::cout << "  simulation equivalent: " << std::boolalpha << sim_equiv(x, y) << "\n";
    std::cout << "  bisimilar:             " << bisim_equiv(x, y) << "\n";
    std::cout << "  trace equivalent:      " << trace_equiv(x, y) << "\n";

    // The reverse of the distributivity inequation fails; show why.
    Regex split = parse("ab + ac");
    DistinguishingReport rep = sim_leq(y, split);
    std::cout << render(y) << " < " << render(split) << ": " << rep.verdict << "\n";
    if (!rep.verdict)
        std::cout << "  after \"" << rep.trace << "\", " << rep.failing_left << " has a " << rep.failure_label
                  << "-move that " << rep.failing_right << " cannot match\n";
}
