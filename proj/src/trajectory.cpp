#include "behavior_metrics/behaviors.hpp"
#include "behavior_metrics/errors.hpp"

namespace bmetrics {

Trajectory::Trajectory(Eigen::Index q, Matrix samples) : samples_(std::move(samples)) {
    if (q < 1) {
        throw InvalidInput("trajectory: q must be positive");
    }
    if (samples_.rows() != q) {
        throw InvalidInput("trajectory: every sample must have exactly q entries");
    }
    if (samples_.cols() < 1) {
        throw InvalidInput("trajectory: at least one sample is required");
    }
    if (!samples_.allFinite()) {
        throw InvalidInput("trajectory: non-finite sample value");
    }
}

Trajectory Trajectory::scalar(std::span<const double> values) {
    Matrix m(1, static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(0, static_cast<Eigen::Index>(i)) = values[i];
    }
    return Trajectory(1, std::move(m));
}

Vector Trajectory::stacked(Eigen::Index start, Eigen::Index len) const {
    if (start < 0 || len < 0 || start + len > length()) {
        throw InvalidInput("trajectory: window out of range");
    }
    // Column-major storage already places each sample as a contiguous q-block.
    return samples_.middleCols(start, len).reshaped();
}

Trajectory Trajectory::slice(Eigen::Index start, Eigen::Index len) const {
    if (start < 0 || len < 1 || start + len > length()) {
        throw InvalidInput("trajectory: slice out of range");
    }
    return Trajectory(q(), samples_.middleCols(start, len));
}

} // namespace bmetrics
