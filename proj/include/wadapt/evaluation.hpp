#pragma once

#include <algorithm>

namespace wadapt {

/// Objective and constraint of one candidate.
struct Evaluation {
    double f = 0.0;
    double g = 0.0;
    double violation = 0.0; ///< max(0, g)

    static Evaluation from(double f, double g) { return {f, g, std::max(0.0, g)}; }

    bool operator==(const Evaluation&) const = default;
};

} // namespace wadapt
