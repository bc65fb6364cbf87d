// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "polarsim/fock.hpp"

namespace polarsim::states {

/// Product state from per-mode tokens, e.g. product("V0H").
PureState product(const std::string& kets);

/// α|H> + β|V>, normalized.
PureState qubit(Complex alpha, Complex beta);
/// (|HH> + |VV>)/√2.
PureState phi_plus();
/// (|H>^{⊗d} ± |V>^{⊗d})/√2; d = 1 gives (|H> ± |V>)/√2.
PureState phi_d(int d, int sign = +1);
/// (|HHH> ± |VVV>)/√2.
PureState ghz(int sign = +1);
/// |V0H>: the failure component left by the Bell-to-GHZ step.
PureState v0h();
/// (|HVVH> + |VHVH> + |VHHV> - |HVHV>)/2, the four-qubit gate ancilla.
PureState t1_prime();

}  // namespace polarsim::states
