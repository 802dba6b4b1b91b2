#pragma once
#include "bnh/bncomplex.hpp"

#include <string>
#include <vector>

namespace bnh {

struct VerifySummary {
    std::string suite;
    bool pass = false;
    long checked = 0;
    long skipped = 0; // inputs outside the factorization bounds
    std::string detail; // first failure, empty on success
};

std::vector<std::string> verify_suite_names();

// suites: steinberg, product-formula, dd-zero, bar-cycles, exterior;
// throws std::invalid_argument on an unknown suite name
VerifySummary run_verify_suite(const std::string& suite, long count, uint64_t seed,
                               const Caps& caps = default_caps());

} // namespace bnh
