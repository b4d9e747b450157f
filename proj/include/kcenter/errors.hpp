#pragma once

#include <stdexcept>
#include <string>

namespace kcenter {

// Malformed or out-of-contract input data (bad instance file, wrong enum, ...).
struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

// A configurable size limit was exceeded (n, k, vertex budget, ...).
struct limit_error : std::runtime_error {
    explicit limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Geometric degeneracy that the caller is expected to handle (collinear triple).
struct degeneracy_error : std::runtime_error {
    explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kcenter
