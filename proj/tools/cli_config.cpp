#include "cli_config.hpp"

#include "fracback/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <limits>
#include <sstream>

namespace fracback::cli {

namespace {

using nlohmann::json;

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) {
        throw DomainError("config: '" + key + "' must be a number");
    }
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) {
        throw DomainError("config: '" + key + "' must be an integer");
    }
    const auto i = v.get<long long>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
        throw DomainError("config: '" + key + "' out of range");
    }
    return static_cast<int>(i);
}

std::vector<double> as_numbers(const json& v, const std::string& key) {
    if (!v.is_array()) {
        throw DomainError("config: '" + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
        out.push_back(as_number(e, key));
    }
    return out;
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) {
        throw DomainError("config: '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

SingularMode parse_singular_mode(const std::string& name) {
    if (name == "paper") {
        return SingularMode::paper_direct;
    }
    if (name == "graded") {
        return SingularMode::graded_substitution;
    }
    throw DomainError("singular mode must be 'paper' or 'graded', got '" + name + "'");
}

CliConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw DomainError("config: top level must be an object");
    }
    CliConfig cfg;
    ExperimentConfig& ex = cfg.experiment;
    for (const auto& [key, v] : doc.items()) {
        if (key == "alphas") {
            ex.alphas = as_numbers(v, key);
        } else if (key == "tau") {
            ex.tau = as_number(v, key);
        } else if (key == "truncation") {
            ex.truncation = as_int(v, key);
        } else if (key == "spatial_subintervals") {
            ex.spatial_subintervals = as_int(v, key);
        } else if (key == "quad_points") {
            ex.quad_points = as_int(v, key);
        } else if (key == "temporal_subintervals") {
            ex.temporal_subintervals = as_int(v, key);
        } else if (key == "data_subintervals") {
            ex.data_subintervals = as_int(v, key);
        } else if (key == "singular_mode") {
            ex.singular_mode = parse_singular_mode(as_string(v, key));
        } else if (key == "levels") {
            ex.levels = as_numbers(v, key);
        } else if (key == "noise_mode") {
            const std::string m = as_string(v, key);
            if (m == "paper_constant") {
                ex.noise_mode = NoiseMode::paper_constant;
            } else if (m == "seeded_random") {
                ex.noise_mode = NoiseMode::seeded_random;
            } else {
                throw DomainError("config: noise_mode must be 'paper_constant' or 'seeded_random'");
            }
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) {
                throw DomainError("config: 'seed' must be a non-negative integer");
            }
            ex.seed = v.get<std::uint64_t>();
        } else if (key == "threads") {
            const int t = as_int(v, key);
            if (t < 0) {
                throw DomainError("config: 'threads' must be >= 0");
            }
            ex.threads = static_cast<unsigned>(t);
        } else if (key == "out_dir") {
            cfg.out_dir = as_string(v, key);
        } else if (key == "verbosity") {
            cfg.verbosity = as_int(v, key);
        } else {
            throw DomainError("config: unknown key '" + key + "'");
        }
    }
    ex.validate();
    return cfg;
}

CliConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string resolve_out_dir(const std::string& flag, const std::string& config, const char* env) {
    if (!flag.empty()) {
        return flag;
    }
    if (!config.empty()) {
        return config;
    }
    if (env && *env) {
        return env;
    }
    return ".";
}

}  // namespace fracback::cli
