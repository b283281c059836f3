#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace apollo {

// Application configuration, resolved flags > environment > config file >
// defaults. API keys come from the environment only; a config file naming
// one is rejected.
struct AppConfig {
    // chat backend
    std::string llm_model = "gpt-4o";
    double llm_temperature = 0.0001;
    std::string llm_base_url = "https://api.openai.com";
    std::string llm_api_key; // APOLLO_LLM_API_KEY

    // enrichment
    std::string vt_base_url = "https://www.virustotal.com";
    std::string vt_api_key; // APOLLO_VT_API_KEY
    std::string geo_base_url = "https://api.bigdatacloud.net";
    std::string geo_api_key; // APOLLO_GEO_API_KEY
    int rate_limit_per_min = 4;
    std::optional<std::filesystem::path> condition_table_path;
    std::optional<std::filesystem::path> geo_map_path;
    std::optional<std::filesystem::path> cache_path;
    int cache_ttl_hours = 24;

    // pipeline
    std::filesystem::path out_dir = "eval_out";
    int fan_out = 4;
    std::size_t header_budget = 4000;
    double log_loss_eps = 1e-15;
    bool yates = true;
};

// Defaults, overlaid with the JSON config file (when given), overlaid with
// APOLLO_* environment variables. CLI flags go on top at the call site.
AppConfig load_config(const std::optional<std::filesystem::path>& config_file);

} // namespace apollo
