// verify.hpp — seeded invariant suites behind the `verify` subcommand. Each
// group checks one module property against its tolerance and reports the worst
// residual observed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace quasih {

struct InvariantResult {
    std::string name;      // suite.group
    bool pass;
    double residual;       // worst observed
    double tolerance;
    std::string note;
};

// suite: all | linalg | model | dynamics | analytics | dyson
std::vector<InvariantResult> run_verify(const std::string& suite, std::uint64_t seed);

bool known_suite(const std::string& suite);

}  // namespace quasih
