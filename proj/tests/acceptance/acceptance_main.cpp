// Acceptance suite: one pass/fail line per criterion.
#include "flecscope/bifurcation.hpp"

#include <cstdio>

int main() {
    std::printf("acceptance suite placeholder\n");
    return 0;
}
