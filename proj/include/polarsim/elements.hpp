// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polarsim/fock.hpp"

namespace polarsim {

/// One rail of one spatial mode.
struct RailRef {
    std::size_t mode;
    Rail rail;
};

/// Applies the passive transform a†_{rails[i]} -> sum_j matrix[j][i] a†_{rails[j]}
/// to every term. All the elements below are special cases. `matrix` is row-major
/// n x n for n = rails.size(); it must be unitary for the result to be normalized.
PureState apply_rail_transform(const PureState& state, std::span<const RailRef> rails,
                               std::span<const Complex> matrix);

/// Polarization rotator: a†_H -> cos θ a†_H + sin θ a†_V, a†_V -> -sin θ a†_H + cos θ a†_V.
PureState apply_pr(const PureState& state, std::size_t mode, double theta);
/// Phase shifter: e^{iφ n} with n the total photon number in the mode.
PureState apply_ps(const PureState& state, std::size_t mode, double phi);
/// Polarization-dependent phase shifter: e^{iφ n_V}.
PureState apply_pdps(const PureState& state, std::size_t mode, double phi);
/// Polarizing beam splitter: H transmitted, V exchanged between the two modes, no phase.
PureState apply_pbs(const PureState& state, std::size_t mode_a, std::size_t mode_b);
/// Real 50:50 splitter on both rails: a† -> (a† + b†)/√2, b† -> (a† - b†)/√2.
PureState apply_bs(const PureState& state, std::size_t mode_a, std::size_t mode_b);

enum class ElementKind { BS, PBS, PR, PS, PDPS };

std::string to_string(ElementKind k);
ElementKind element_kind_from_string(const std::string& s);

struct ElementDescriptor {
    ElementKind kind = ElementKind::PS;
    /// θ for PR, φ for PS/PDPS, unused otherwise.
    double angle = 0.0;
    std::vector<std::size_t> targets;

    static ElementDescriptor bs(std::size_t a, std::size_t b) { return {ElementKind::BS, 0.0, {a, b}}; }
    static ElementDescriptor pbs(std::size_t a, std::size_t b) { return {ElementKind::PBS, 0.0, {a, b}}; }
    static ElementDescriptor pr(std::size_t m, double theta) { return {ElementKind::PR, theta, {m}}; }
    static ElementDescriptor ps(std::size_t m, double phi) { return {ElementKind::PS, phi, {m}}; }
    static ElementDescriptor pdps(std::size_t m, double phi) { return {ElementKind::PDPS, phi, {m}}; }

    [[nodiscard]] std::size_t arity() const;
    /// Throws DimensionError unless the targets fit a `modes`-mode state.
    void validate(std::size_t modes) const;
    [[nodiscard]] std::string to_string() const;
    bool operator==(const ElementDescriptor&) const = default;
};

PureState apply_element(const PureState& state, const ElementDescriptor& element);
PureState apply_circuit(PureState state, std::span<const ElementDescriptor> circuit);

/// {"kind": "BS|PBS|PR|PS|PDPS", "theta": x?, "phi": x?, "targets": [i, j?]}
nlohmann::json to_json(const ElementDescriptor& e);
ElementDescriptor element_from_json(const nlohmann::json& j);
std::vector<ElementDescriptor> circuit_from_json(const nlohmann::json& j);

}  // namespace polarsim
