#pragma once

#include "alex/domain.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace alex {

/// Quantized state-of-charge levels in kWh, strictly increasing from 0 to capacity.
class SocGrid {
public:
    SocGrid() = default;
    /// Takes the levels verbatim; throws unless non-empty, strictly increasing and
    /// starting at 0. A single-level grid {0} is allowed (no storage).
    explicit SocGrid(std::vector<double> levels);

    std::size_t size() const { return levels_.size(); }
    double level(std::size_t i) const { return levels_[i]; }
    double capacity() const { return levels_.back(); }
    std::span<const double> levels() const { return levels_; }

    /// Index of the level closest to `soc`; ties resolve to the lower index.
    std::size_t nearest(double soc) const;

    /// Level expressed as a fraction of capacity (0 for a single-level grid).
    double fraction(std::size_t i) const;

private:
    std::vector<double> levels_;
};

/// n_quant evenly spaced levels over [0, capacity]. Throws for n_quant < 2.
SocGrid make_soc_grid(const BatterySpec& spec, std::size_t n_quant);

/// One quantized battery action. grid_side_energy is positive when the building draws
/// energy to charge and negative when the battery supplies the building.
struct BatteryTransition {
    std::size_t from_index = 0;
    std::size_t to_index = 0;
    double grid_side_energy = 0.0;

    bool operator==(const BatteryTransition&) const = default;
};

/// Index reached by holding: the SoC after one step of self-discharge, snapped to the
/// nearest grid level.
std::size_t hold_index(const BatterySpec& spec, const SocGrid& grid, std::size_t from_index);

/// Grid-side energy for moving from `from_index` to `to_index`, measured from the
/// snapped post-decay level. Charging draws dSoC / eta_ch, discharging delivers
/// dSoC * eta_dis.
double transition_energy(const BatterySpec& spec, const SocGrid& grid, std::size_t from_index,
                         std::size_t to_index);

/// All targets reachable within the power limits, in ascending to_index order. The hold
/// transition is always included.
std::vector<BatteryTransition> feasible_transitions(const BatterySpec& spec, const SocGrid& grid,
                                                    std::size_t from_index);

/// Continuous reference model: decay, then apply the grid-side energy with the charge or
/// discharge efficiency. Throws if the result leaves [0, capacity].
double step_soc(const BatterySpec& spec, double soc, double grid_side_energy);

/// Feasible transitions for every grid level of one battery, computed once. Transitions
/// do not depend on time, so the MDP shares this table across all layers.
class TransitionTable {
public:
    TransitionTable() = default;
    TransitionTable(const BatterySpec& spec, SocGrid grid);

    const SocGrid& grid() const { return grid_; }
    const BatterySpec& spec() const { return spec_; }
    std::size_t state_count() const { return grid_.size(); }

    std::span<const BatteryTransition> from(std::size_t i) const;
    /// Transition for (i -> j) or nullptr when infeasible.
    const BatteryTransition* find(std::size_t i, std::size_t j) const;
    std::size_t hold(std::size_t i) const { return hold_[i]; }
    std::size_t initial_index() const { return initial_index_; }

private:
    BatterySpec spec_;
    SocGrid grid_;
    std::vector<std::size_t> offsets_;
    std::vector<BatteryTransition> transitions_;
    std::vector<std::size_t> hold_;
    std::size_t initial_index_ = 0;
};

}  // namespace alex
