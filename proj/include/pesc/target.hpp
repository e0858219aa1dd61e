#pragma once

#include <string>

#include "pesc/types.hpp"

namespace pesc {

// Something capabilities can be executed against: a simulated host or a real
// one over SSH. One session per run; reset() restores a clean state.
class Target {
public:
    virtual ~Target() = default;

    virtual ExecutionResult execute(const Capability& capability) = 0;
    virtual void reset() = 0;

    // Called once at the end of every agent iteration (virtual clock).
    virtual void end_iteration() {}

    // Penultimate-exploitation-state predicate; always false for real targets.
    virtual bool almost_there() const { return false; }

    virtual std::string username() const = 0;
    virtual std::string password() const = 0;
    virtual std::string system_name() const = 0;
    virtual std::string hint() const { return {}; }
};

} // namespace pesc
