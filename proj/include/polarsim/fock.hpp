// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <functional>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace polarsim {

using Complex = std::complex<double>;

inline constexpr int kDefaultPhotonCap = 8;
/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-14;

enum class Rail : unsigned char { H = 0, V = 1 };

struct PolarizationOccupancy {
    int n_h = 0;
    int n_v = 0;

    [[nodiscard]] int total() const { return n_h + n_v; }
    [[nodiscard]] int& operator[](Rail r) { return r == Rail::H ? n_h : n_v; }
    [[nodiscard]] int operator[](Rail r) const { return r == Rail::H ? n_h : n_v; }
    auto operator<=>(const PolarizationOccupancy&) const = default;
};

inline constexpr PolarizationOccupancy kEmpty{0, 0};
inline constexpr PolarizationOccupancy kH{1, 0};
inline constexpr PolarizationOccupancy kV{0, 1};

/// Occupancies of M spatial modes. Ordered lexicographically, which is the
/// canonical term order of every serialized state.
struct FockBasisVector {
    std::vector<PolarizationOccupancy> modes;

    FockBasisVector() = default;
    explicit FockBasisVector(std::vector<PolarizationOccupancy> m) : modes(std::move(m)) {}
    FockBasisVector(std::initializer_list<PolarizationOccupancy> m) : modes(m) {}

    [[nodiscard]] std::size_t size() const { return modes.size(); }
    [[nodiscard]] int total_photons() const;
    /// Ket notation such as "H(H,V)V0" or "H^2 0".
    [[nodiscard]] std::string to_string() const;

    auto operator<=>(const FockBasisVector&) const = default;
};

/// Parses one-mode tokens "0", "H", "V", "H2", "V2", "HV", "H2V" ...
PolarizationOccupancy parse_occupancy(const std::string& token);

/// Sparse superposition over a fixed number of modes. Not necessarily
/// normalized: branch projections and ladder operators leave it unnormalized.
class PureState {
public:
    using Terms = std::map<FockBasisVector, Complex>;

    explicit PureState(std::size_t modes = 0, int photon_cap = kDefaultPhotonCap);

    static PureState vacuum(std::size_t modes, int photon_cap = kDefaultPhotonCap);
    static PureState basis(const FockBasisVector& v, Complex amp = 1.0,
                           int photon_cap = kDefaultPhotonCap);

    [[nodiscard]] std::size_t modes() const { return modes_; }
    [[nodiscard]] int photon_cap() const { return cap_; }
    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] Complex amplitude(const FockBasisVector& v) const;

    /// Adds amp to the coefficient of v; validates shape and cap.
    void add(const FockBasisVector& v, Complex amp);
    /// Drops terms under kPruneThreshold.
    void prune();

    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] PureState normalized() const;
    [[nodiscard]] PureState scaled(Complex factor) const;

    PureState& operator+=(const PureState& other);
    friend PureState operator+(PureState a, const PureState& b) { return a += b; }
    friend PureState operator-(PureState a, const PureState& b) { return a += b.scaled(-1.0); }
    friend PureState operator*(Complex c, const PureState& s) { return s.scaled(c); }

    /// Appends `count` empty modes to the end.
    [[nodiscard]] PureState with_extra_modes(std::size_t count) const;

    [[nodiscard]] std::string to_string() const;

private:
    std::size_t modes_;
    int cap_;
    Terms terms_;
};

/// a-dagger on (mode, rail), bosonic factor sqrt(n+1). Throws CapacityError.
PureState creation_apply(const PureState& state, std::size_t mode, Rail rail);
/// Left modes first. Photon cap is the smaller of the two.
PureState tensor(const PureState& left, const PureState& right);
/// New mode i holds old mode permutation[i].
PureState reorder_modes(const PureState& state, std::span<const std::size_t> permutation);
Complex inner_product(const PureState& a, const PureState& b);
bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Classical records and branch ensembles
// ---------------------------------------------------------------------------

enum class Disposition { Keep, Discard };

std::string to_string(Disposition d);

struct OutcomeEvent {
    std::string site;
    std::vector<bool> pattern;
    std::string label;
    Disposition disposition = Disposition::Keep;

    bool operator==(const OutcomeEvent&) const = default;
};

struct OutcomeRecord {
    std::vector<OutcomeEvent> events;

    [[nodiscard]] bool discarded() const;
    /// "site=label;site=label", the key used for aggregation and reports.
    [[nodiscard]] std::string label() const;
    bool operator==(const OutcomeRecord&) const = default;
};

struct Branch {
    double weight = 0.0;
    PureState state;
    OutcomeRecord record;

    [[nodiscard]] bool discarded() const { return record.discarded(); }
};

/// Weighted classical mixture of normalized pure branches.
class Ensemble {
public:
    Ensemble() = default;
    explicit Ensemble(std::vector<Branch> branches) : branches_(std::move(branches)) {}
    static Ensemble pure(PureState state);

    [[nodiscard]] const std::vector<Branch>& branches() const { return branches_; }
    [[nodiscard]] std::size_t size() const { return branches_.size(); }
    [[nodiscard]] double total_weight() const;
    [[nodiscard]] double keep_weight() const;
    [[nodiscard]] double discard_weight() const;

    void add(Branch b) { branches_.push_back(std::move(b)); }

private:
    std::vector<Branch> branches_;
};

/// Replaces every kept branch by `step(branch.state)`, multiplying weights and
/// appending records. Discarded branches pass through unchanged.
Ensemble expand_kept(const Ensemble& ensemble, const std::function<Ensemble(const PureState&)>& step);

/// Product ensemble; records concatenate left then right.
Ensemble tensor(const Ensemble& left, const Ensemble& right);
/// Marginalizes `mode`: one output branch per occupancy of the traced mode.
Ensemble trace_out(const Ensemble& ensemble, std::size_t mode);

// ---------------------------------------------------------------------------
// Canonical JSON: {"modes": M, "terms": [{"occ": [[nH,nV],...], "re": x, "im": y}]}
// ---------------------------------------------------------------------------

nlohmann::json to_json(const PureState& state);
PureState state_from_json(const nlohmann::json& j, int photon_cap = kDefaultPhotonCap);
nlohmann::json to_json(const OutcomeEvent& e);

}  // namespace polarsim
