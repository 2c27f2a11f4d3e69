#pragma once

#include <chrono>
#include <cstddef>
#include <string>

namespace resound {

/// Limits for searches that may not terminate (or terminate too late).
struct Budget {
    std::size_t max_states = 1'000'000;
    double max_seconds = 30.0;
};

/// Tracks consumption of a Budget from the moment it is constructed.
class BudgetMeter {
public:
    explicit BudgetMeter(Budget b)
        : budget_(b), start_(std::chrono::steady_clock::now()) {}

    void charge(std::size_t states = 1) { states_ += states; }

    [[nodiscard]] std::size_t states() const { return states_; }

    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    [[nodiscard]] bool states_exhausted() const { return states_ >= budget_.max_states; }

    // The clock is only read every 1024 charges.
    [[nodiscard]] bool exhausted() {
        if (states_exhausted()) {
            reason_ = "state budget";
            return true;
        }
        if ((++polls_ & 1023U) == 0 && seconds() > budget_.max_seconds) {
            reason_ = "time budget";
            timed_out_ = true;
        }
        return timed_out_;
    }

    [[nodiscard]] const std::string& reason() const { return reason_; }
    [[nodiscard]] const Budget& budget() const { return budget_; }

private:
    Budget budget_;
    std::chrono::steady_clock::time_point start_;
    std::size_t states_ = 0;
    std::size_t polls_ = 0;
    bool timed_out_ = false;
    std::string reason_;
};

/// What a search consumed before it stopped.
struct BudgetReport {
    std::size_t states = 0;
    double seconds = 0.0;
    std::string exhausted; // empty when the search finished on its own
};

inline BudgetReport report_of(const BudgetMeter& m, bool exhausted) {
    return BudgetReport{m.states(), m.seconds(), exhausted ? m.reason() : std::string{}};
}

} // namespace resound
