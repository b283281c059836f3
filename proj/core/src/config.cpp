#include "apollo/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

std::optional<std::string> env(const char* name) {
    const char* value = std::getenv(name);
    if (!value || !*value) return std::nullopt;
    return std::string(value);
}

void apply_file(AppConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error("config file is not a JSON object: " + path.string());

    for (const auto& [key, value] : doc.items()) {
        if (key.find("api_key") != std::string::npos)
            throw Error("config file must not carry secrets (" + key +
                        "); use the APOLLO_* environment variables");
        if (key == "llm_model") config.llm_model = value.get<std::string>();
        else if (key == "llm_temperature") config.llm_temperature = value.get<double>();
        else if (key == "llm_base_url") config.llm_base_url = value.get<std::string>();
        else if (key == "vt_base_url") config.vt_base_url = value.get<std::string>();
        else if (key == "geo_base_url") config.geo_base_url = value.get<std::string>();
        else if (key == "rate_limit_per_min") config.rate_limit_per_min = value.get<int>();
        else if (key == "condition_table") config.condition_table_path = value.get<std::string>();
        else if (key == "geo_map") config.geo_map_path = value.get<std::string>();
        else if (key == "cache_path") config.cache_path = value.get<std::string>();
        else if (key == "cache_ttl_hours") config.cache_ttl_hours = value.get<int>();
        else if (key == "out_dir") config.out_dir = value.get<std::string>();
        else if (key == "fan_out") config.fan_out = value.get<int>();
        else if (key == "header_budget") config.header_budget = value.get<std::size_t>();
        else if (key == "log_loss_eps") config.log_loss_eps = value.get<double>();
        else if (key == "yates") config.yates = value.get<bool>();
        else throw Error("unknown config key: " + key);
    }
}

void apply_env(AppConfig& config) {
    if (auto v = env("APOLLO_LLM_API_KEY")) config.llm_api_key = *v;
    if (auto v = env("APOLLO_LLM_MODEL")) config.llm_model = *v;
    if (auto v = env("APOLLO_LLM_TEMPERATURE")) config.llm_temperature = std::stod(*v);
    if (auto v = env("APOLLO_LLM_BASE_URL")) config.llm_base_url = *v;
    if (auto v = env("APOLLO_VT_API_KEY")) config.vt_api_key = *v;
    if (auto v = env("APOLLO_GEO_API_KEY")) config.geo_api_key = *v;
    if (auto v = env("APOLLO_RATE_LIMIT_PER_MIN")) config.rate_limit_per_min = std::stoi(*v);
}

} // namespace

AppConfig load_config(const std::optional<std::filesystem::path>& config_file) {
    AppConfig config;
    if (config_file) apply_file(config, *config_file);
    apply_env(config);
    if (config.fan_out < 1) throw Error("fan_out must be >= 1");
    if (config.llm_temperature < 0) throw Error("llm_temperature must be >= 0");
    return config;
}

} // namespace apollo
