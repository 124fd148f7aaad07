#pragma once

#include <cstdint>

namespace cgkit {

// Oracle-call accounting. Incremented only by the oracle wrappers
// (lmo / minibatch_gradient / zo_gradient); diagnostics never touch it.
struct OracleCounters {
    std::uint64_t sfo_calls = 0;  // component-gradient evaluations
    std::uint64_t szo_calls = 0;  // individual function-value queries
    std::uint64_t lmo_calls = 0;
};

}  // namespace cgkit
