#include "alex/battery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace alex {

namespace {
// Slack on power-limit and SoC-bound comparisons, kWh.
constexpr double kEnergySlack = 1e-9;
}  // namespace

SocGrid::SocGrid(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw Error("SoC grid needs at least one level");
    if (levels_.front() != 0.0) throw Error("SoC grid must start at 0");
    for (std::size_t i = 1; i < levels_.size(); ++i)
        if (!(levels_[i] > levels_[i - 1])) throw Error("SoC grid levels must strictly increase");
}

std::size_t SocGrid::nearest(double soc) const {
    auto it = std::lower_bound(levels_.begin(), levels_.end(), soc);
    if (it == levels_.begin()) return 0;
    if (it == levels_.end()) return levels_.size() - 1;
    const auto hi = static_cast<std::size_t>(it - levels_.begin());
    return (soc - levels_[hi - 1] <= levels_[hi] - soc) ? hi - 1 : hi;
}

double SocGrid::fraction(std::size_t i) const {
    return levels_.size() < 2 ? 0.0 : levels_[i] / capacity();
}

SocGrid make_soc_grid(const BatterySpec& spec, std::size_t n_quant) {
    if (n_quant < 2) throw Error("n_quant must be at least 2, got " + std::to_string(n_quant));
    if (!(spec.capacity > 0.0)) throw Error("battery capacity must be positive for a SoC grid");
    std::vector<double> levels(n_quant);
    const double step = spec.capacity / static_cast<double>(n_quant - 1);
    for (std::size_t i = 0; i < n_quant; ++i) levels[i] = step * static_cast<double>(i);
    levels.back() = spec.capacity;
    return SocGrid(std::move(levels));
}

std::size_t hold_index(const BatterySpec& spec, const SocGrid& grid, std::size_t from_index) {
    if (from_index >= grid.size()) throw Error("SoC index out of range");
    return grid.nearest(grid.level(from_index) * (1.0 - spec.self_discharge));
}

double transition_energy(const BatterySpec& spec, const SocGrid& grid, std::size_t from_index,
                         std::size_t to_index) {
    const double base = grid.level(hold_index(spec, grid, from_index));
    const double delta = grid.level(to_index) - base;
    if (delta > 0.0) return delta / spec.charge_efficiency;
    return delta * spec.discharge_efficiency;
}

std::vector<BatteryTransition> feasible_transitions(const BatterySpec& spec, const SocGrid& grid,
                                                    std::size_t from_index) {
    const std::size_t hold = hold_index(spec, grid, from_index);
    std::vector<BatteryTransition> out;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double e = transition_energy(spec, grid, from_index, j);
        const bool within = e >= 0.0 ? e <= spec.max_charge_power + kEnergySlack
                                     : -e <= spec.max_discharge_power + kEnergySlack;
        if (within || j == hold) out.push_back({from_index, j, j == hold ? 0.0 : e});
    }
    return out;
}

double step_soc(const BatterySpec& spec, double soc, double grid_side_energy) {
    const double decayed = soc * (1.0 - spec.self_discharge);
    const double next = grid_side_energy >= 0.0
                            ? decayed + spec.charge_efficiency * grid_side_energy
                            : decayed + grid_side_energy / spec.discharge_efficiency;
    if (next < -kEnergySlack || next > spec.capacity + kEnergySlack)
        throw Error("SoC " + std::to_string(next) + " kWh outside [0, " +
                    std::to_string(spec.capacity) + "]");
    return std::clamp(next, 0.0, spec.capacity);
}

TransitionTable::TransitionTable(const BatterySpec& spec, SocGrid grid)
    : spec_(spec), grid_(std::move(grid)) {
    offsets_.reserve(grid_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        auto row = feasible_transitions(spec_, grid_, i);
        transitions_.insert(transitions_.end(), row.begin(), row.end());
        offsets_.push_back(transitions_.size());
        hold_.push_back(hold_index(spec_, grid_, i));
    }
    initial_index_ = grid_.nearest(spec_.initial_soc);
}

std::span<const BatteryTransition> TransitionTable::from(std::size_t i) const {
    return {transitions_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

const BatteryTransition* TransitionTable::find(std::size_t i, std::size_t j) const {
    if (i >= grid_.size()) return nullptr;
    for (const auto& tr : from(i))
        if (tr.to_index == j) return &tr;
    return nullptr;
}

}  // namespace alex
