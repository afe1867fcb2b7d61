#include <iostream>

#include "gaussint_tools/harness.hpp"

int main(int argc, char** argv) {
    return gaussint::harness::main_entry(argc, argv, std::cout, std::cerr);
}
