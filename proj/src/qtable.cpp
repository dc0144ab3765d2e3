#include "microgrid/qtable.hpp"

#include <algorithm>
#include <cmath>

namespace microgrid {

QTable::QTable(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      values_(num_states * num_actions, 0.0) {}

void QTable::take_snapshot() {
    if (stamp_.empty()) stamp_.assign(values_.size(), 0);
    ++epoch_;
    dirty_.clear();
    tracking_ = true;
}

void QTable::touch(std::size_t idx) {
    if (stamp_[idx] != epoch_) {
        stamp_[idx] = epoch_;
        dirty_.emplace_back(idx, values_[idx]);
    }
}

double QTable::rms_change_since_snapshot() const {
    // Summing squared deltas of touched entries in ascending index order is
    // bit-identical to a full-table scan: untouched entries contribute an
    // exact +0.0.
    auto sorted = dirty_;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (const auto& [idx, old] : sorted) {
        const double d = values_[idx] - old;
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(values_.size()));
}

}  // namespace microgrid
