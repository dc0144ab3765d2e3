#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace microgrid {

// Dense |S| x |A| action-value table, zero-initialized. Supports a per-epoch
// snapshot used by the convergence measure: after take_snapshot(), original
// values of written entries are recorded lazily so the RMS change of the
// whole table can be computed from the touched entries alone.
class QTable {
  public:
    QTable(std::size_t num_states, std::size_t num_actions);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }

    double operator()(std::size_t s, std::size_t a) const {
        return values_[s * num_actions_ + a];
    }
    double& operator()(std::size_t s, std::size_t a) {
        const std::size_t idx = s * num_actions_ + a;
        if (tracking_) touch(idx);
        return values_[idx];
    }

    const std::vector<double>& values() const { return values_; }

    void take_snapshot();
    bool has_snapshot() const { return tracking_; }

    // RMS change of the full table since the last snapshot. Identical to the
    // two-table convergence measure computed against a full copy.
    double rms_change_since_snapshot() const;

  private:
    void touch(std::size_t idx);

    std::size_t num_states_;
    std::size_t num_actions_;
    std::vector<double> values_;

    bool tracking_ = false;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::pair<std::size_t, double>> dirty_;  // (index, value at snapshot)
};

}  // namespace microgrid
