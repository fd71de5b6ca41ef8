// Writes the deterministic planted corpus as JSONL to the given path.

#include "planted.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: write_planted_corpus <out.jsonl>\n";
        return 2;
    }
    std::ofstream out(argv[1]);
    nextmethod::write_corpus(out, nextmethod::testing::make_planted_corpus().commits);
    return out ? 0 : 1;
}
