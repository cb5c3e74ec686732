#include "alex/config.hpp"

#include <cstdlib>
#include <fstream>

namespace fs = std::filesystem;

namespace alex {

namespace {

template <class T>
void maybe_get(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

const char* engine_name(SolverEngine e) {
    return e == SolverEngine::value_iteration ? "value_iteration" : "backward_induction";
}

SolverEngine parse_engine(const std::string& s) {
    if (s == "backward_induction") return SolverEngine::backward_induction;
    if (s == "value_iteration") return SolverEngine::value_iteration;
    throw Error("unknown engine '" + s + "'");
}

const char* init_name(PolicyInit i) { return i == PolicyInit::random ? "random" : "hold"; }

PolicyInit parse_init(const std::string& s) {
    if (s == "hold") return PolicyInit::hold;
    if (s == "random") return PolicyInit::random;
    throw Error("unknown policy init '" + s + "'");
}

}  // namespace

DatasetSource parse_dataset_source(const std::string& name) {
    if (name == "citylearn") return DatasetSource::citylearn;
    if (name == "canonical") return DatasetSource::canonical;
    if (name == "synthetic") return DatasetSource::synthetic;
    throw Error("unknown dataset source '" + name + "'");
}

const char* dataset_source_name(DatasetSource s) {
    switch (s) {
        case DatasetSource::citylearn: return "citylearn";
        case DatasetSource::canonical: return "canonical";
        case DatasetSource::synthetic: return "synthetic";
    }
    return "?";
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
            throw Error("unsupported config schema_version");
        if (j.contains("dataset")) {
            const auto& d = j.at("dataset");
            if (d.contains("source")) c.dataset.source = parse_dataset_source(d.at("source").get<std::string>());
            maybe_get(d, "path", c.dataset.path);
            if (d.contains("mapping")) c.dataset.mapping = CityLearnMapping::from_json(d.at("mapping"));
            if (d.contains("synthetic")) c.dataset.synthetic = ProfileSpec::from_json(d.at("synthetic"));
            maybe_get(d, "n_buildings", c.dataset.n_buildings);
            maybe_get(d, "step_count", c.dataset.step_count);
            maybe_get(d, "synthetic_seed", c.dataset.synthetic_seed);
        }
        if (j.contains("tariff")) c.tariff = tariff_from_json(j.at("tariff"));
        if (j.contains("scenario")) c.scenario = parse_scenario(j.at("scenario").get<std::string>());
        maybe_get(j, "seed", c.equilibrium.seed);
        if (j.contains("mdp")) {
            const auto& m = j.at("mdp");
            maybe_get(m, "n_quant", c.equilibrium.mdp.n_quant);
            maybe_get(m, "w_sq", c.equilibrium.mdp.w_sq);
        }
        if (j.contains("equilibrium")) {
            const auto& e = j.at("equilibrium");
            if (e.contains("engine")) c.equilibrium.engine = parse_engine(e.at("engine").get<std::string>());
            maybe_get(e, "vi_tolerance", c.equilibrium.vi_tolerance);
            maybe_get(e, "gamma", c.equilibrium.gamma);
            maybe_get(e, "max_outer_rounds", c.equilibrium.max_outer_rounds);
            maybe_get(e, "distance_threshold", c.equilibrium.distance_threshold);
            if (e.contains("init")) c.equilibrium.init = parse_init(e.at("init").get<std::string>());
            maybe_get(e, "tie_tolerance", c.equilibrium.solver.tie_tolerance);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("config: ") + ex.what());
    }
    if (c.equilibrium.mdp.n_quant < 2) throw Error("config: mdp.n_quant must be >= 2");
    if (c.equilibrium.mdp.w_sq < 0.0) throw Error("config: mdp.w_sq must be >= 0");
    if (c.equilibrium.max_outer_rounds == 0) throw Error("config: max_outer_rounds must be >= 1");
    return c;
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    nlohmann::ordered_json d;
    d["source"] = dataset_source_name(dataset.source);
    d["path"] = dataset.path;
    if (dataset.source == DatasetSource::citylearn) d["mapping"] = dataset.mapping.to_json();
    if (dataset.source == DatasetSource::synthetic) {
        d["synthetic"] = dataset.synthetic.to_json();
        d["n_buildings"] = dataset.n_buildings;
        d["step_count"] = dataset.step_count;
        d["synthetic_seed"] = dataset.synthetic_seed;
    }
    j["dataset"] = d;
    if (tariff) j["tariff"] = tariff_to_json(*tariff);
    j["scenario"] = scenario_name(scenario);
    j["seed"] = equilibrium.seed;
    j["mdp"] = {{"n_quant", equilibrium.mdp.n_quant}, {"w_sq", equilibrium.mdp.w_sq}};
    j["equilibrium"] = {{"engine", engine_name(equilibrium.engine)},
                        {"vi_tolerance", equilibrium.vi_tolerance},
                        {"gamma", equilibrium.gamma},
                        {"max_outer_rounds", equilibrium.max_outer_rounds},
                        {"distance_threshold", equilibrium.distance_threshold},
                        {"init", init_name(equilibrium.init)},
                        {"tie_tolerance", equilibrium.solver.tie_tolerance}};
    return j;
}

RunConfig load_run_config(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read config file " + file.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(file.string() + ": " + ex.what());
    }
    RunConfig c = RunConfig::from_json(j);
    if (!c.dataset.path.empty() && fs::path(c.dataset.path).is_relative())
        c.dataset.path = (file.parent_path() / c.dataset.path).lexically_normal().string();
    return c;
}

fs::path resolve_dataset_path(const DatasetConfig& cfg) {
    if (!cfg.path.empty()) return cfg.path;
    if (const char* env = std::getenv(dataset_env_var); env && *env) return env;
    throw UsageError(std::string("no dataset path: set dataset.path, pass --dataset, or export ") +
                     dataset_env_var);
}

CommunityDataset load_dataset(const RunConfig& cfg) {
    CommunityDataset ds;
    switch (cfg.dataset.source) {
        case DatasetSource::citylearn:
            ds = load_citylearn(resolve_dataset_path(cfg.dataset), cfg.dataset.mapping,
                                cfg.tariff.value_or(GridTariff{}));
            break;
        case DatasetSource::canonical:
            ds = read_canonical(resolve_dataset_path(cfg.dataset));
            break;
        case DatasetSource::synthetic:
            ds = generate_synthetic(cfg.dataset.synthetic_seed, cfg.dataset.n_buildings,
                                    cfg.dataset.step_count, cfg.dataset.synthetic);
            break;
    }
    if (cfg.tariff) ds.tariff = *cfg.tariff;
    return ds;
}

}  // namespace alex
