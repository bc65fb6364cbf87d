// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "polarsim/fock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "polarsim/errors.hpp"

namespace polarsim {

namespace {

std::string occupancy_token(const PolarizationOccupancy& o) {
    if (o.total() == 0) return "0";
    auto part = [](char c, int n) {
        std::string s(1, c);
        if (n > 1) s += "^" + std::to_string(n);
        return s;
    };
    if (o.n_v == 0) return part('H', o.n_h);
    if (o.n_h == 0) return part('V', o.n_v);
    return "(" + part('H', o.n_h) + "," + part('V', o.n_v) + ")";
}

void check_mode(const PureState& s, std::size_t mode) {
    if (mode >= s.modes()) {
        throw DimensionError("mode " + std::to_string(mode) + " out of range for " +
                             std::to_string(s.modes()) + "-mode state");
    }
}

}  // namespace

int FockBasisVector::total_photons() const {
    int n = 0;
    for (const auto& m : modes) n += m.total();
    return n;
}

std::string FockBasisVector::to_string() const {
    std::string out = "|";
    for (const auto& m : modes) out += occupancy_token(m);
    return out + ">";
}

PolarizationOccupancy parse_occupancy(const std::string& token) {
    PolarizationOccupancy o;
    if (token == "0") return o;
    std::size_t i = 0;
    while (i < token.size()) {
        char c = token[i++];
        if (c != 'H' && c != 'V') throw Error("bad occupancy token '" + token + "'");
        int n = 0;
        while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
            n = n * 10 + (token[i++] - '0');
        }
        (c == 'H' ? o.n_h : o.n_v) += n == 0 ? 1 : n;
    }
    return o;
}

PureState::PureState(std::size_t modes, int photon_cap) : modes_(modes), cap_(photon_cap) {}

PureState PureState::vacuum(std::size_t modes, int photon_cap) {
    PureState s(modes, photon_cap);
    s.add(FockBasisVector(std::vector<PolarizationOccupancy>(modes)), 1.0);
    return s;
}

PureState PureState::basis(const FockBasisVector& v, Complex amp, int photon_cap) {
    PureState s(v.size(), photon_cap);
    s.add(v, amp);
    return s;
}

Complex PureState::amplitude(const FockBasisVector& v) const {
    auto it = terms_.find(v);
    return it == terms_.end() ? Complex{} : it->second;
}

void PureState::add(const FockBasisVector& v, Complex amp) {
    if (v.size() != modes_) {
        throw DimensionError("basis vector has " + std::to_string(v.size()) + " modes, state has " +
                             std::to_string(modes_));
    }
    for (const auto& m : v.modes) {
        if (m.n_h < 0 || m.n_v < 0) throw DimensionError("negative occupancy");
        if (m.total() > cap_) {
            throw CapacityError("mode occupancy " + std::to_string(m.total()) + " exceeds photon cap " +
                                std::to_string(cap_));
        }
    }
    auto [it, inserted] = terms_.try_emplace(v, amp);
    if (!inserted) it->second += amp;
    if (std::abs(it->second) < kPruneThreshold) terms_.erase(it);
}

void PureState::prune() {
    std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

double PureState::norm_squared() const {
    double n = 0.0;
    for (const auto& [_, a] : terms_) n += std::norm(a);
    return n;
}

PureState PureState::normalized() const {
    double n = std::sqrt(norm_squared());
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    return scaled(1.0 / n);
}

PureState PureState::scaled(Complex factor) const {
    PureState out(modes_, cap_);
    for (const auto& [v, a] : terms_) out.add(v, a * factor);
    return out;
}

PureState& PureState::operator+=(const PureState& other) {
    if (other.modes_ != modes_) throw DimensionError("adding states with different mode counts");
    for (const auto& [v, a] : other.terms_) add(v, a);
    return *this;
}

PureState PureState::with_extra_modes(std::size_t count) const {
    PureState out(modes_ + count, cap_);
    for (const auto& [v, a] : terms_) {
        FockBasisVector w = v;
        w.modes.resize(modes_ + count);
        out.terms_.emplace(std::move(w), a);
    }
    return out;
}

std::string PureState::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [v, a] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i)" << v.to_string();
    }
    return os.str();
}

PureState creation_apply(const PureState& state, std::size_t mode, Rail rail) {
    check_mode(state, mode);
    PureState out(state.modes(), state.photon_cap());
    for (const auto& [v, a] : state.terms()) {
        FockBasisVector w = v;
        int& n = w.modes[mode][rail];
        ++n;
        out.add(w, a * std::sqrt(static_cast<double>(n)));
    }
    return out;
}

PureState tensor(const PureState& left, const PureState& right) {
    PureState out(left.modes() + right.modes(), std::min(left.photon_cap(), right.photon_cap()));
    for (const auto& [l, a] : left.terms()) {
        for (const auto& [r, b] : right.terms()) {
            FockBasisVector v = l;
            v.modes.insert(v.modes.end(), r.modes.begin(), r.modes.end());
            out.add(v, a * b);
        }
    }
    return out;
}

PureState reorder_modes(const PureState& state, std::span<const std::size_t> permutation) {
    const std::size_t m = state.modes();
    if (permutation.size() != m) throw DimensionError("permutation length does not match mode count");
    std::vector<bool> seen(m, false);
    for (std::size_t p : permutation) {
        if (p >= m || seen[p]) throw DimensionError("permutation is not a bijection");
        seen[p] = true;
    }
    PureState out(m, state.photon_cap());
    for (const auto& [v, a] : state.terms()) {
        FockBasisVector w;
        w.modes.reserve(m);
        for (std::size_t p : permutation) w.modes.push_back(v.modes[p]);
        out.add(w, a);
    }
    return out;
}

Complex inner_product(const PureState& a, const PureState& b) {
    if (a.modes() != b.modes()) throw DimensionError("inner product of states with different mode counts");
    Complex sum{};
    const auto& small = a.terms().size() <= b.terms().size() ? a : b;
    const auto& large = &small == &a ? b : a;
    for (const auto& [v, x] : small.terms()) {
        auto it = large.terms().find(v);
        if (it == large.terms().end()) continue;
        sum += &small == &a ? std::conj(x) * it->second : std::conj(it->second) * x;
    }
    return sum;
}

bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol) {
    if (a.modes() != b.modes()) return false;
    return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

std::string to_string(Disposition d) { return d == Disposition::Keep ? "keep" : "discard"; }

bool OutcomeRecord::discarded() const {
    return std::ranges::any_of(events, [](const auto& e) { return e.disposition == Disposition::Discard; });
}

std::string OutcomeRecord::label() const {
    std::string out;
    for (const auto& e : events) {
        if (!out.empty()) out += ';';
        out += e.site + "=" + e.label;
    }
    return out;
}

Ensemble Ensemble::pure(PureState state) {
    Ensemble e;
    e.add(Branch{1.0, state.normalized(), {}});
    return e;
}

double Ensemble::total_weight() const {
    double w = 0.0;
    for (const auto& b : branches_) w += b.weight;
    return w;
}

double Ensemble::keep_weight() const {
    double w = 0.0;
    for (const auto& b : branches_) {
        if (!b.discarded()) w += b.weight;
    }
    return w;
}

double Ensemble::discard_weight() const { return total_weight() - keep_weight(); }

Ensemble tensor(const Ensemble& left, const Ensemble& right) {
    Ensemble out;
    for (const auto& l : left.branches()) {
        for (const auto& r : right.branches()) {
            Branch b{l.weight * r.weight, tensor(l.state, r.state), l.record};
            b.record.events.insert(b.record.events.end(), r.record.events.begin(), r.record.events.end());
            out.add(std::move(b));
        }
    }
    return out;
}

Ensemble expand_kept(const Ensemble& ensemble, const std::function<Ensemble(const PureState&)>& step) {
    Ensemble out;
    for (const auto& br : ensemble.branches()) {
        if (br.discarded()) {
            out.add(br);
            continue;
        }
        const Ensemble expanded = step(br.state);
        for (const auto& sub : expanded.branches()) {
            Branch b{br.weight * sub.weight, sub.state, br.record};
            b.record.events.insert(b.record.events.end(), sub.record.events.begin(), sub.record.events.end());
            out.add(std::move(b));
        }
    }
    return out;
}

Ensemble trace_out(const Ensemble& ensemble, std::size_t mode) {
    Ensemble out;
    for (const auto& br : ensemble.branches()) {
        check_mode(br.state, mode);
        std::map<PolarizationOccupancy, PureState> parts;
        for (const auto& [v, a] : br.state.terms()) {
            FockBasisVector rest = v;
            rest.modes.erase(rest.modes.begin() + static_cast<std::ptrdiff_t>(mode));
            auto [it, _] = parts.try_emplace(v.modes[mode], br.state.modes() - 1, br.state.photon_cap());
            it->second.add(rest, a);
        }
        const double norm = br.state.norm_squared();
        for (auto& [occ, part] : parts) {
            double p = part.norm_squared() / norm;
            if (p == 0.0) continue;
            out.add(Branch{br.weight * p, part.normalized(), br.record});
        }
    }
    return out;
}

nlohmann::json to_json(const PureState& state) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [v, a] : state.terms()) {
        nlohmann::json occ = nlohmann::json::array();
        for (const auto& m : v.modes) occ.push_back({m.n_h, m.n_v});
        terms.push_back({{"occ", occ}, {"re", a.real()}, {"im", a.imag()}});
    }
    return {{"modes", state.modes()}, {"terms", terms}};
}

PureState state_from_json(const nlohmann::json& j, int photon_cap) {
    if (!j.is_object() || !j.contains("modes") || !j.contains("terms")) {
        throw Error("state JSON needs \"modes\" and \"terms\"");
    }
    const auto m = j.at("modes").get<std::size_t>();
    PureState s(m, photon_cap);
    for (const auto& t : j.at("terms")) {
        FockBasisVector v;
        for (const auto& o : t.at("occ")) {
            if (!o.is_array() || o.size() != 2) throw Error("occ entries are [nH, nV] pairs");
            v.modes.push_back({o[0].get<int>(), o[1].get<int>()});
        }
        s.add(v, {t.value("re", 0.0), t.value("im", 0.0)});
    }
    return s;
}

nlohmann::json to_json(const OutcomeEvent& e) {
    return {{"site", e.site}, {"pattern", e.pattern}, {"label", e.label}, {"disposition", to_string(e.disposition)}};
}

}  // namespace polarsim
