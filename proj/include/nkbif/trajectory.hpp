#pragma once

#include <cstddef>
#include <vector>

namespace nkbif {

/// Time paths t = 0..T of the model variables. When present, phi_x / phi_pi hold the
/// costate of the forward-looking block, lambda_t = P_y y_t + H z_t.
struct Trajectory {
    std::vector<double> x, pi, i, z, u;
    std::vector<double> phi_x, phi_pi;

    std::size_t size() const { return x.size(); }
    int horizon() const { return static_cast<int>(x.size()) - 1; }
    bool has_multipliers() const { return !phi_x.empty(); }

    void reserve(std::size_t n) {
        for (auto* v : {&x, &pi, &i, &z, &u}) v->reserve(n);
    }
    /// Throws invalid-argument when series lengths disagree or an entry is non-finite.
    void validate() const;
};

}  // namespace nkbif
