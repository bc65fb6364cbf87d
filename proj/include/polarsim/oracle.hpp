// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polarsim/fock.hpp"

namespace polarsim {

/// Dense density matrix over an explicit list of basis vectors (the support of
/// whatever it was built from, never the full Fock space).
class DensityMatrix {
public:
    DensityMatrix(std::vector<FockBasisVector> basis, Eigen::MatrixXcd entries);

    static DensityMatrix from_pure(const PureState& psi);

    [[nodiscard]] const std::vector<FockBasisVector>& basis() const { return basis_; }
    [[nodiscard]] const Eigen::MatrixXcd& entries() const { return entries_; }
    [[nodiscard]] std::size_t dimension() const { return basis_.size(); }
    [[nodiscard]] Complex element(const FockBasisVector& row, const FockBasisVector& col) const;
    [[nodiscard]] double trace() const;
    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;
    [[nodiscard]] double min_eigenvalue() const;

private:
    std::vector<FockBasisVector> basis_;
    std::map<FockBasisVector, std::size_t> index_;
    Eigen::MatrixXcd entries_;
};

/// Σ w |ψ><ψ| over all branches, or over kept branches renormalized to trace 1.
DensityMatrix density_of(const Ensemble& ensemble, bool keep_only);
/// (Σ_k w_k |ψ_k><ψ_k|) for explicitly weighted pure states.
DensityMatrix density_of(const std::vector<std::pair<double, PureState>>& mixture);
/// <ψ|ρ|ψ>; basis vectors of ψ outside ρ's support contribute zero.
double fidelity(const DensityMatrix& rho, const PureState& psi);
/// Largest entrywise difference over the union of both supports.
double max_abs_difference(const DensityMatrix& a, const DensityMatrix& b);

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

struct OutcomeRow {
    std::string label;
    Disposition disposition = Disposition::Keep;
    double probability = 0.0;
    /// Normalized state of the undetected modes. Empty (0 modes) for discarded rows.
    PureState state;
};

struct OutcomeTable {
    std::vector<OutcomeRow> rows;

    [[nodiscard]] double total_probability() const;
    [[nodiscard]] double keep_probability() const;
    /// Probability summed per label, in label order.
    [[nodiscard]] std::map<std::string, double> by_label() const;
};

std::vector<std::string> registered_gadgets();
/// Input used when none is given: |Φ+>|Φ+> for b2g, |GHZ+>|GHZ+> for g2a,
/// |HV> for a2c, |+>|+> for cz and pipeline.
PureState default_input(const std::string& gadget);

/// Runs the named gadget as one coherent evolution: detector modes are kept in
/// the state, feed-forward acts as pattern-controlled unitaries, and every
/// detector is read at the end. Shares optics and rule tables with the gadget
/// implementations but none of their branching code. Rows are sorted by label,
/// then probability, then serialized state.
OutcomeTable enumerate_exact(const std::string& gadget, const PureState& input);

/// Same row layout, built from a gadget's branch ensemble (for cross-checks).
OutcomeTable outcome_table_of(const Ensemble& ensemble);

// ---------------------------------------------------------------------------
// Golden tables
// ---------------------------------------------------------------------------

struct TableRowReport {
    std::string source;
    bool match = false;
    double max_deviation = 0.0;
    /// Phase (radians) that maps the golden row onto the simulated one.
    double phase_offset = 0.0;
    std::string detail;
};

struct TableReport {
    int table_id = 0;
    std::vector<TableRowReport> rows;

    [[nodiscard]] bool all_match() const;
};

inline constexpr double kTableTolerance = 1e-12;

/// Golden table ids 1 and 2: ECC pre-detection states. Id 3: bypass-mode states
/// after the ECC outcome. Id 4: each A2C outcome pair realizes the
/// controlled-phase map with probability 1/64 for every basis input.
TableReport verify_table(int table_id);

/// Golden row as a normalized state (exposed for tests).
PureState golden_row_state(int table_id, std::size_t row);

}  // namespace polarsim
