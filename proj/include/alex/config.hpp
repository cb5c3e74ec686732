#pragma once

#include "alex/equilibrium.hpp"
#include "alex/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace alex {

enum class DatasetSource { citylearn, canonical, synthetic };

DatasetSource parse_dataset_source(const std::string& name);
const char* dataset_source_name(DatasetSource s);

struct DatasetConfig {
    DatasetSource source = DatasetSource::citylearn;
    /// Directory for citylearn/canonical sources. Empty selects $ALEX_CITYLEARN_DIR.
    std::string path;
    CityLearnMapping mapping;
    ProfileSpec synthetic;
    std::size_t n_buildings = 2;
    std::size_t step_count = 24;
    std::uint64_t synthetic_seed = 0;
};

/// Everything a run depends on besides the dataset contents.
struct RunConfig {
    DatasetConfig dataset;
    /// Overrides the dataset's own tariff when present.
    std::optional<GridTariff> tariff;
    Scenario scenario = Scenario::alex;
    EquilibriumConfig equilibrium;

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

/// Reads a JSON config. Relative dataset paths resolve against the config file's directory.
RunConfig load_run_config(const std::filesystem::path& file);

/// Dataset directory after applying the environment default; throws UsageError when none.
std::filesystem::path resolve_dataset_path(const DatasetConfig& cfg);

/// Thrown when required user input is absent (maps to a usage exit status).
class UsageError : public Error {
public:
    using Error::Error;
};

CommunityDataset load_dataset(const RunConfig& cfg);

inline constexpr const char* dataset_env_var = "ALEX_CITYLEARN_DIR";

}  // namespace alex
