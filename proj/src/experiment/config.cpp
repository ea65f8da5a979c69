#include <json.hpp>

#include "lsp/dataset.hpp"
#include "lsp/error.hpp"
#include "lsp/experiment.hpp"

namespace lsp::experiment {

using json = nlohmann::json;

std::string MethodSpec::name() const {
    switch (kind) {
        case Kind::binary_relevance: return "BR";
        case Kind::label_powerset: return "LP";
        case Kind::rakeld: return "rakeld";
        case Kind::detector: break;
    }
    std::string n(community::algorithm_name(algorithm));
    return weighted ? n + "-weighted" : n;
}

std::string MethodSpec::method_column() const {
    return kind == Kind::detector ? std::string(community::algorithm_name(algorithm)) : name();
}

std::string MethodSpec::variant_column() const {
    if (kind != Kind::detector) return "";
    return weighted ? "weighted" : "unweighted";
}

std::optional<MethodSpec> MethodSpec::parse(std::string_view name) {
    if (name == "BR") return MethodSpec{Kind::binary_relevance};
    if (name == "LP") return MethodSpec{Kind::label_powerset};
    if (name == "rakeld") return MethodSpec{Kind::rakeld};
    bool weighted = false;
    constexpr std::string_view suffix = "-weighted";
    if (name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix) {
        weighted = true;
        name.remove_suffix(suffix.size());
    }
    auto algorithm = community::parse_algorithm(name);
    if (!algorithm) return std::nullopt;
    return MethodSpec{Kind::detector, *algorithm, weighted};
}

std::vector<MethodSpec> default_methods() {
    std::vector<MethodSpec> out{{MethodSpec::Kind::binary_relevance}, {MethodSpec::Kind::label_powerset}};
    for (auto a : {community::Algorithm::fastgreedy, community::Algorithm::leading_eigenvector,
                   community::Algorithm::label_propagation, community::Algorithm::walktrap,
                   community::Algorithm::infomap})
        for (bool w : {false, true}) out.push_back({MethodSpec::Kind::detector, a, w});
    out.push_back({MethodSpec::Kind::rakeld});
    return out;
}

void ExperimentConfig::validate() const {
    if (samples_per_k < 1) throw ConfigError("samples_per_k must be at least 1");
    if (k_percentages.empty()) throw ConfigError("k_percentages is empty");
    for (int p : k_percentages)
        if (p <= 0 || p >= 100) throw ConfigError("k percentage " + std::to_string(p) + " outside (0, 100)");
    if (metrics.empty()) throw ConfigError("metric list is empty");
    if (methods.empty()) throw ConfigError("method list is empty");
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i] == methods[j]) throw ConfigError("method '" + methods[i].name() + "' listed twice");
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const auto& d = datasets[i];
        if (d.name.empty() || d.name.find_first_of(",\r\n") != std::string::npos)
            throw ConfigError("dataset name '" + d.name + "' is empty or contains a comma or newline");
        for (std::size_t j = 0; j < i; ++j)
            if (datasets[j].name == d.name) throw ConfigError("dataset '" + d.name + "' listed twice");
    }
    try {
        cart.validate();
        detector.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto k : known) ok |= key == k;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig c;
    try {
        reject_unknown(j,
                       {"datasets", "methods", "k_percentages", "samples_per_k", "seed", "cart", "metrics",
                        "output_dir", "detectors", "threads"},
                       "config");
        for (const auto& d : get_or(j, "datasets", json::array())) {
            reject_unknown(d, {"name", "train", "test", "xml"}, "dataset entry");
            c.datasets.push_back({d.at("name").get<std::string>(), resolve(base_dir, d.at("train").get<std::string>()),
                                  resolve(base_dir, d.at("test").get<std::string>()),
                                  resolve(base_dir, d.at("xml").get<std::string>())});
        }
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j.at("methods")) {
                auto spec = MethodSpec::parse(m.get<std::string>());
                if (!spec) throw ConfigError("unknown method '" + m.get<std::string>() + "'");
                c.methods.push_back(*spec);
            }
        }
        if (j.contains("metrics")) {
            c.metrics.clear();
            for (const auto& m : j.at("metrics")) {
                auto metric = metrics::parse_metric(m.get<std::string>());
                if (!metric) throw ConfigError("unknown metric '" + m.get<std::string>() + "'");
                c.metrics.push_back(*metric);
            }
        }
        c.k_percentages = get_or(j, "k_percentages", c.k_percentages);
        const auto samples = get_or<long long>(j, "samples_per_k", 250);
        if (samples < 1) throw ConfigError("samples_per_k must be at least 1");
        c.samples_per_k = static_cast<std::size_t>(samples);
        c.seed = get_or<std::uint64_t>(j, "seed", 0);
        c.output_dir = resolve(base_dir, get_or<std::string>(j, "output_dir", "results"));
        c.threads = get_or<unsigned>(j, "threads", 0);
        if (j.contains("cart")) {
            const auto& cj = j.at("cart");
            reject_unknown(cj, {"max_depth", "min_samples_to_split"}, "cart");
            if (cj.contains("max_depth") && !cj.at("max_depth").is_null()) c.cart.max_depth = cj.at("max_depth").get<int>();
            c.cart.min_samples_to_split = get_or(cj, "min_samples_to_split", c.cart.min_samples_to_split);
        }
        if (j.contains("detectors")) {
            const auto& dj = j.at("detectors");
            reject_unknown(dj,
                           {"walktrap_steps", "infomap_trials", "eigen_tolerance", "eigen_max_iterations",
                            "label_propagation_max_sweeps"},
                           "detectors");
            auto& d = c.detector;
            d.walktrap_steps = get_or(dj, "walktrap_steps", d.walktrap_steps);
            d.infomap_trials = get_or(dj, "infomap_trials", d.infomap_trials);
            d.eigen_tolerance = get_or(dj, "eigen_tolerance", d.eigen_tolerance);
            d.eigen_max_iterations = get_or(dj, "eigen_max_iterations", d.eigen_max_iterations);
            d.label_propagation_max_sweeps = get_or(dj, "label_propagation_max_sweeps", d.label_propagation_max_sweeps);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.parent_path());
}

}  // namespace lsp::experiment
