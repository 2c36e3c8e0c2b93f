#include "persim/config.hpp"

#include <cstdlib>
#include <set>

#include "persim/error.hpp"
#include "persim/jsonl.hpp"

namespace persim {

namespace {

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base / p;
}

void require_file(const std::filesystem::path &path, const std::string &key) {
    if (!std::filesystem::is_regular_file(path)) {
        throw ConfigError(key + ": file does not exist: " + path.string());
    }
}

DecodingParams decoding_from(const Json &node, const DecodingParams &defaults,
                             const std::string &key) {
    DecodingParams params = defaults;
    if (!node.is_object()) {
        throw ConfigError(key + " must be an object with temperature/max_tokens");
    }
    params.temperature = node.value("temperature", params.temperature);
    params.max_tokens = node.value("max_tokens", params.max_tokens);
    if (params.temperature < 0.0) {
        throw ConfigError(key + ".temperature must be >= 0");
    }
    if (params.max_tokens < 1) {
        throw ConfigError(key + ".max_tokens must be >= 1");
    }
    return params;
}

BackendSpec backend_from(const Json &node, const std::string &key) {
    BackendSpec spec;
    spec.name = node.value("name", std::string{});
    spec.kind = node.value("kind", std::string{});
    spec.model = node.value("model", std::string{});
    spec.script = node.value("script", std::string{});
    spec.url = node.value("url", std::string{});
    spec.api_key_env = node.value("api_key_env", std::string{});
    if (spec.name.empty()) {
        throw ConfigError(key + ".name is required");
    }
    if (spec.kind == "mock") {
        if (spec.script.empty()) {
            throw ConfigError(key + " ('" + spec.name + "'): mock backends need a script path");
        }
    } else if (spec.kind == "http") {
        if (spec.url.empty()) {
            throw ConfigError(key + " ('" + spec.name + "'): http backends need a url");
        }
        if (spec.model.empty()) {
            throw ConfigError(key + " ('" + spec.name + "'): http backends need a model");
        }
    } else {
        throw ConfigError(key + " ('" + spec.name + "'): kind must be \"mock\" or \"http\", got \"" +
                          spec.kind + "\"");
    }
    return spec;
}

std::string substitute(std::string text, const std::string &marker, const std::string &value) {
    for (auto pos = text.find(marker); pos != std::string::npos; pos = text.find(marker)) {
        text.replace(pos, marker.size(), value);
    }
    return text;
}

} // namespace

RunConfig load_run_config(const std::filesystem::path &path) {
    Json root = Json::parse(read_text_file(path), nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw ConfigError("config file is not a JSON object: " + path.string());
    }

    RunConfig config;
    config.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    if (!root.contains("seed") || !root.at("seed").is_number_unsigned()) {
        throw ConfigError("seed is required and must be a non-negative integer");
    }
    config.seed = root.at("seed").get<uint64_t>();

    if (!root.contains("joint_table")) {
        throw ConfigError("joint_table is required");
    }
    config.joint_table = resolve(config.base_dir, root.at("joint_table").get<std::string>());
    require_file(config.joint_table, "joint_table");

    config.per_state = root.value("per_state", 0);
    if (config.per_state < 1) {
        throw ConfigError("per_state must be >= 1");
    }

    if (!root.contains("output_dir")) {
        throw ConfigError("output_dir is required");
    }
    config.output_dir = resolve(config.base_dir, root.at("output_dir").get<std::string>());

    if (root.contains("tiers")) {
        std::set<PersonaTier> seen;
        for (const auto &node : root.at("tiers")) {
            const std::string tag = node.get<std::string>();
            const auto tier = tier_from_name(tag);
            if (!tier) {
                throw ConfigError("tiers: unknown tier name '" + tag + "'");
            }
            if (*tier == PersonaTier::Meta) {
                throw ConfigError("tiers: META is always sampled; list only generated tiers");
            }
            if (!seen.insert(*tier).second) {
                throw ConfigError("tiers: duplicate tier " + tag);
            }
            config.tiers.push_back(*tier);
        }
    }

    std::set<std::string> backend_names;
    for (const char *key : {"generators", "simulators"}) {
        if (!root.contains(key)) {
            continue;
        }
        std::size_t i = 0;
        for (const auto &node : root.at(key)) {
            const std::string label = std::string{key} + "[" + std::to_string(i++) + "]";
            BackendSpec spec = backend_from(node, label);
            if (std::string{key} == "generators" && !backend_names.insert(spec.name).second) {
                throw ConfigError(label + ": duplicate backend name '" + spec.name + "'");
            }
            (std::string{key} == "generators" ? config.generators : config.simulators)
                .push_back(std::move(spec));
        }
    }
    if (!config.tiers.empty() && config.generators.empty()) {
        throw ConfigError("tiers configured but no generators given");
    }
    {
        std::set<std::string> simulator_names;
        for (const auto &sim : config.simulators) {
            if (!simulator_names.insert(sim.name).second) {
                throw ConfigError("simulators: duplicate backend name '" + sim.name + "'");
            }
        }
    }

    if (root.contains("questions")) {
        std::size_t i = 0;
        for (const auto &node : root.at("questions")) {
            const std::string label = "questions[" + std::to_string(i++) + "]";
            QuestionFileSpec spec;
            if (!node.contains("path")) {
                throw ConfigError(label + ".path is required");
            }
            spec.path = resolve(config.base_dir, node.at("path").get<std::string>());
            require_file(spec.path, label + ".path");
            spec.cohort = node.value("cohort", std::string{"population"});
            if (spec.cohort != "population" && spec.cohort != "state") {
                throw ConfigError(label + ".cohort must be \"population\" or \"state\"");
            }
            if (node.contains("ground_truth_csv")) {
                spec.ground_truth_csv =
                    resolve(config.base_dir, node.at("ground_truth_csv").get<std::string>());
                require_file(spec.ground_truth_csv, label + ".ground_truth_csv");
            }
            config.questions.push_back(std::move(spec));
        }
    }

    if (root.contains("retry")) {
        const Json &retry = root.at("retry");
        config.generation_retry_limit = retry.value("generation", config.generation_retry_limit);
        config.simulation_retry_limit = retry.value("simulation", config.simulation_retry_limit);
    }
    if (config.generation_retry_limit < 1 || config.simulation_retry_limit < 1) {
        throw ConfigError("retry limits must be >= 1");
    }

    config.concurrency = root.value("concurrency", 1);
    if (config.concurrency < 1) {
        throw ConfigError("concurrency must be >= 1");
    }

    if (root.contains("decoding")) {
        const Json &decoding = root.at("decoding");
        if (decoding.contains("generation")) {
            config.generation_decoding = decoding_from(
                decoding.at("generation"), config.generation_decoding, "decoding.generation");
        }
        if (decoding.contains("simulation")) {
            config.simulation_decoding = decoding_from(
                decoding.at("simulation"), config.simulation_decoding, "decoding.simulation");
        }
    }

    // Mock scripts without placeholders must exist up front; placeholder
    // paths are checked when the concrete cell instantiates the backend.
    for (const auto *group : {&config.generators, &config.simulators}) {
        for (const auto &spec : *group) {
            if (spec.kind == "mock" && spec.script.find('{') == std::string::npos) {
                require_file(resolve(config.base_dir, spec.script), "backend '" + spec.name +
                                 "' script");
            }
        }
    }
    return config;
}

std::unique_ptr<ChatBackend> make_backend(const BackendSpec &spec,
                                          const std::filesystem::path &base_dir,
                                          const std::string &tier_label,
                                          const std::string &generator_label) {
    BackendIdentity identity{spec.name, spec.model.empty() ? spec.name : spec.model};
    if (spec.kind == "mock") {
        std::string script = substitute(spec.script, "{tier}", tier_label);
        script = substitute(script, "{generator}", generator_label);
        const auto path = script.empty() || std::filesystem::path(script).is_absolute()
                              ? std::filesystem::path(script)
                              : base_dir / script;
        require_file(path, "backend '" + spec.name + "' script");
        return ScriptedMockBackend::from_file(std::move(identity), path);
    }
    if (spec.kind == "http") {
        HttpChatBackend::Options options;
        options.url = spec.url;
        if (!spec.api_key_env.empty()) {
            if (const char *key = std::getenv(spec.api_key_env.c_str())) {
                options.api_key = key;
            } else {
                throw ConfigError("backend '" + spec.name + "': environment variable " +
                                  spec.api_key_env + " is not set");
            }
        }
        return std::make_unique<HttpChatBackend>(std::move(identity), std::move(options));
    }
    throw ConfigError("backend '" + spec.name + "' has unsupported kind '" + spec.kind + "'");
}

} // namespace persim
