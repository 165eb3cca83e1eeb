#pragma once

#include "fracback/experiments.hpp"

#include <string>

namespace fracback::cli {

struct CliConfig {
    ExperimentConfig experiment;
    std::string out_dir;  // empty: FRACBACK_OUT, then "."
    int verbosity = 0;
};

// Strict JSON: unknown keys and wrong types raise DomainError.
CliConfig parse_config(const std::string& json_text);
// IoError when the file cannot be read.
CliConfig load_config(const std::string& path);

// flag > config > environment > ".".
std::string resolve_out_dir(const std::string& flag, const std::string& config, const char* env);

SingularMode parse_singular_mode(const std::string& name);

}  // namespace fracback::cli
