// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "polarsim/named_states.hpp"

#include <cmath>
#include <numbers>

#include "polarsim/errors.hpp"

namespace polarsim::states {

PureState product(const std::string& kets) {
    FockBasisVector v;
    for (char c : kets) v.modes.push_back(parse_occupancy(std::string(1, c)));
    return PureState::basis(v);
}

PureState qubit(Complex alpha, Complex beta) {
    PureState s(1);
    s.add({kH}, alpha);
    s.add({kV}, beta);
    return s.normalized();
}

PureState phi_plus() { return phi_d(2); }

PureState phi_d(int d, int sign) {
    if (d < 1) throw DimensionError("phi_d needs d >= 1");
    const auto n = static_cast<std::size_t>(d);
    PureState s(n);
    s.add(FockBasisVector(std::vector(n, kH)), 1.0 / std::numbers::sqrt2);
    s.add(FockBasisVector(std::vector(n, kV)), sign / std::numbers::sqrt2);
    return s;
}

PureState ghz(int sign) { return phi_d(3, sign); }

PureState v0h() { return product("V0H"); }

PureState t1_prime() {
    return 0.5 * (product("HVVH") + product("VHVH") + product("VHHV") - product("HVHV"));
}

}  // namespace polarsim::states
