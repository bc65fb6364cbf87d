// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "polarsim/elements.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "polarsim/errors.hpp"

namespace polarsim {

namespace {

void check_mode(const PureState& s, std::size_t mode) {
    if (mode >= s.modes()) {
        throw DimensionError("element target " + std::to_string(mode) + " out of range for " +
                             std::to_string(s.modes()) + "-mode state");
    }
}

void check_pair(const PureState& s, std::size_t a, std::size_t b) {
    check_mode(s, a);
    check_mode(s, b);
    if (a == b) throw DimensionError("two-mode element needs distinct modes");
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

PureState apply_rail_transform(const PureState& state, std::span<const RailRef> rails,
                               std::span<const Complex> matrix) {
    const std::size_t n = rails.size();
    if (matrix.size() != n * n) throw DimensionError("rail transform matrix has the wrong size");
    for (const auto& r : rails) check_mode(state, r.mode);

    PureState out(state.modes(), state.photon_cap());
    for (const auto& [v, amp] : state.terms()) {
        // Strip the photons on the affected rails and re-create them one at a
        // time through the transformed creation operators.
        FockBasisVector base = v;
        std::vector<std::size_t> ops;
        double fact = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            int& occ = base.modes[rails[i].mode][rails[i].rail];
            ops.insert(ops.end(), static_cast<std::size_t>(occ), i);
            fact *= factorial(occ);
            occ = 0;
        }
        PureState cur = PureState::basis(base, amp / std::sqrt(fact), state.photon_cap());
        for (std::size_t i : ops) {
            PureState next(state.modes(), state.photon_cap());
            for (std::size_t j = 0; j < n; ++j) {
                const Complex c = matrix[j * n + i];
                if (c == Complex{}) continue;
                next += creation_apply(cur, rails[j].mode, rails[j].rail).scaled(c);
            }
            cur = std::move(next);
        }
        out += cur;
    }
    return out;
}

PureState apply_pr(const PureState& state, std::size_t mode, double theta) {
    check_mode(state, mode);
    const double c = std::cos(theta), s = std::sin(theta);
    const std::array rails{RailRef{mode, Rail::H}, RailRef{mode, Rail::V}};
    const std::array<Complex, 4> m{c, -s, s, c};
    return apply_rail_transform(state, rails, m);
}

PureState apply_ps(const PureState& state, std::size_t mode, double phi) {
    check_mode(state, mode);
    PureState out(state.modes(), state.photon_cap());
    for (const auto& [v, a] : state.terms()) out.add(v, a * std::polar(1.0, phi * v.modes[mode].total()));
    return out;
}

PureState apply_pdps(const PureState& state, std::size_t mode, double phi) {
    check_mode(state, mode);
    PureState out(state.modes(), state.photon_cap());
    for (const auto& [v, a] : state.terms()) out.add(v, a * std::polar(1.0, phi * v.modes[mode].n_v));
    return out;
}

PureState apply_pbs(const PureState& state, std::size_t mode_a, std::size_t mode_b) {
    check_pair(state, mode_a, mode_b);
    PureState out(state.modes(), state.photon_cap());
    for (const auto& [v, a] : state.terms()) {
        FockBasisVector w = v;
        std::swap(w.modes[mode_a].n_v, w.modes[mode_b].n_v);
        out.add(w, a);
    }
    return out;
}

PureState apply_bs(const PureState& state, std::size_t mode_a, std::size_t mode_b) {
    check_pair(state, mode_a, mode_b);
    const double r = std::numbers::sqrt2 / 2.0;
    const std::array<Complex, 4> m{r, r, r, -r};
    PureState out = state;
    for (Rail rail : {Rail::H, Rail::V}) {
        const std::array rails{RailRef{mode_a, rail}, RailRef{mode_b, rail}};
        out = apply_rail_transform(out, rails, m);
    }
    return out;
}

std::string to_string(ElementKind k) {
    switch (k) {
        case ElementKind::BS: return "BS";
        case ElementKind::PBS: return "PBS";
        case ElementKind::PR: return "PR";
        case ElementKind::PS: return "PS";
        case ElementKind::PDPS: return "PDPS";
    }
    return "?";
}

ElementKind element_kind_from_string(const std::string& s) {
    for (auto k : {ElementKind::BS, ElementKind::PBS, ElementKind::PR, ElementKind::PS, ElementKind::PDPS}) {
        if (to_string(k) == s) return k;
    }
    throw Error("unknown element kind '" + s + "'");
}

std::size_t ElementDescriptor::arity() const {
    return kind == ElementKind::BS || kind == ElementKind::PBS ? 2 : 1;
}

void ElementDescriptor::validate(std::size_t modes) const {
    if (targets.size() != arity()) {
        throw DimensionError(polarsim::to_string(kind) + " takes " + std::to_string(arity()) + " target(s)");
    }
    for (std::size_t t : targets) {
        if (t >= modes) throw DimensionError("element target " + std::to_string(t) + " out of range");
    }
    if (arity() == 2 && targets[0] == targets[1]) throw DimensionError("two-mode element needs distinct modes");
}

std::string ElementDescriptor::to_string() const {
    std::string s = polarsim::to_string(kind);
    if (arity() == 1) s += "(" + std::to_string(angle / std::numbers::pi) + "pi)";
    s += "@";
    for (std::size_t i = 0; i < targets.size(); ++i) s += (i ? "," : "") + std::to_string(targets[i]);
    return s;
}

PureState apply_element(const PureState& state, const ElementDescriptor& e) {
    e.validate(state.modes());
    switch (e.kind) {
        case ElementKind::BS: return apply_bs(state, e.targets[0], e.targets[1]);
        case ElementKind::PBS: return apply_pbs(state, e.targets[0], e.targets[1]);
        case ElementKind::PR: return apply_pr(state, e.targets[0], e.angle);
        case ElementKind::PS: return apply_ps(state, e.targets[0], e.angle);
        case ElementKind::PDPS: return apply_pdps(state, e.targets[0], e.angle);
    }
    return state;
}

PureState apply_circuit(PureState state, std::span<const ElementDescriptor> circuit) {
    for (const auto& e : circuit) state = apply_element(state, e);
    return state;
}

nlohmann::json to_json(const ElementDescriptor& e) {
    nlohmann::json j{{"kind", to_string(e.kind)}, {"targets", e.targets}};
    if (e.kind == ElementKind::PR) j["theta"] = e.angle;
    if (e.kind == ElementKind::PS || e.kind == ElementKind::PDPS) j["phi"] = e.angle;
    return j;
}

ElementDescriptor element_from_json(const nlohmann::json& j) {
    ElementDescriptor e;
    e.kind = element_kind_from_string(j.at("kind").get<std::string>());
    e.targets = j.at("targets").get<std::vector<std::size_t>>();
    if (e.kind == ElementKind::PR) e.angle = j.at("theta").get<double>();
    if (e.kind == ElementKind::PS || e.kind == ElementKind::PDPS) e.angle = j.at("phi").get<double>();
    if (e.targets.size() != e.arity()) {
        throw DimensionError(to_string(e.kind) + " takes " + std::to_string(e.arity()) + " target(s)");
    }
    return e;
}

std::vector<ElementDescriptor> circuit_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error("circuit JSON must be an array of elements");
    std::vector<ElementDescriptor> out;
    for (const auto& e : j) out.push_back(element_from_json(e));
    return out;
}

}  // namespace polarsim
