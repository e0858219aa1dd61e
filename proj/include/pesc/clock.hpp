#pragma once

#include <chrono>
#include <cstdint>

namespace pesc {

// Time source for run timestamps. Runs driven by scripted backends use the
// logical clock so that repeated runs produce byte-identical traces.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
};

class SystemClock final : public Clock {
public:
    std::int64_t now_ms() override {
        using namespace std::chrono;
        return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
    }
};

// Starts at zero and advances a fixed step on every read.
class LogicalClock final : public Clock {
public:
    explicit LogicalClock(std::int64_t step_ms = 1) : step_ms_(step_ms) {}

    std::int64_t now_ms() override {
        std::int64_t t = now_;
        now_ += step_ms_;
        return t;
    }

private:
    std::int64_t now_ = 0;
    std::int64_t step_ms_;
};

} // namespace pesc
