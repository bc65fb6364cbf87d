// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded random states shared by the test binaries.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "polarsim/fock.hpp"

namespace polarsim::testing {

inline constexpr double kTol = 1e-12;

inline Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

/// Normalized sparse state: `terms` random basis vectors, each mode holding at
/// most `max_per_mode` photons.
inline PureState random_state(std::mt19937_64& rng, std::size_t modes, int max_per_mode = 2, int terms = 4) {
    std::uniform_int_distribution<int> occ(0, max_per_mode);
    PureState s(modes);
    while (s.empty()) {
        for (int t = 0; t < terms; ++t) {
            FockBasisVector v;
            for (std::size_t m = 0; m < modes; ++m) {
                int nh = occ(rng);
                int nv = occ(rng);
                while (nh + nv > max_per_mode) (nh > 0 ? nh : nv)--;
                v.modes.push_back({nh, nv});
            }
            s.add(v, random_complex(rng));
        }
    }
    return s.normalized();
}

/// Normalized n-qubit state, one photon per mode, all 2^n amplitudes random.
inline PureState random_qubits(std::mt19937_64& rng, std::size_t n) {
    PureState s(n);
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        FockBasisVector v;
        for (std::size_t m = 0; m < n; ++m) v.modes.push_back((bits >> (n - 1 - m)) & 1U ? kV : kH);
        s.add(v, random_complex(rng));
    }
    return s.normalized();
}

/// Product of n random single-photon polarization states.
inline PureState random_product_qubits(std::mt19937_64& rng, std::size_t n) {
    PureState s = PureState::vacuum(0);
    for (std::size_t m = 0; m < n; ++m) s = tensor(s, random_qubits(rng, 1));
    return s;
}

}  // namespace polarsim::testing
