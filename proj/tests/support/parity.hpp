#pragma once

#include <algorithm>

#include "jcm/states.hpp"

namespace jcm::testing {

struct OscillationCount {
    int window = 0;
    int sign_changes = 0;
};

// Sign changes of the first difference over n in [1, n_end) where rho_nn is at
// least rel_floor times the peak.
inline OscillationCount first_difference_sign_changes(const PhotonDistribution& p, int n_end,
                                                      double rel_floor) {
    double peak = 0.0;
    for (int n = 0; n <= p.n_max(); ++n) peak = std::max(peak, p[n]);
    OscillationCount out;
    for (int n = 1; n < n_end && n + 1 <= p.n_max(); ++n) {
        if (p[n] < rel_floor * peak) continue;
        ++out.window;
        if ((p[n] - p[n - 1]) * (p[n + 1] - p[n]) < 0.0) ++out.sign_changes;
    }
    return out;
}

}  // namespace jcm::testing
