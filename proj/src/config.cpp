#include "pumpout/config.hpp"

#include <set>
#include <sstream>
#include <fstream>

#include "pumpout/common.hpp"

namespace pumpout {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key + ": empty list element in '" + value + "'");
        out.push_back(static_cast<int>(parse_long(key, item)));
    }
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated integer list");
    return out;
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::set<std::string> seen;

    std::stringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected key=value, got '" + stripped + "'");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        seen.insert(key);

        if (key == "data.source") cfg.source = value;
        else if (key == "data.seed") cfg.data_seed = parse_u64(key, value);
        else if (key == "data.classes") cfg.classes = static_cast<int>(parse_long(key, value));
        else if (key == "data.per_class") cfg.per_class = static_cast<int>(parse_long(key, value));
        else if (key == "data.dim") cfg.dim = static_cast<int>(parse_long(key, value));
        else if (key == "data.spread") cfg.spread = parse_double(key, value);
        else if (key == "data.images") cfg.images = value;
        else if (key == "data.labels") cfg.labels = value;
        else if (key == "data.test_images") cfg.test_images = value;
        else if (key == "data.test_labels") cfg.test_labels = value;
        else if (key == "data.limit") cfg.limit = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "data.test_limit") cfg.test_limit = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "noise.type") cfg.noise_type = value;
        else if (key == "noise.rate") cfg.noise_rate = parse_double(key, value);
        else if (key == "noise.file") cfg.noise_file = value;
        else if (key == "noise.allow_extreme") cfg.noise_allow_extreme = parse_bool(key, value);
        else if (key == "train.algorithm") cfg.train.algorithm = parse_algorithm(value);
        else if (key == "train.gamma") cfg.train.gamma = parse_double(key, value);
        else if (key == "train.batch_size") cfg.train.batch_size = static_cast<int>(parse_long(key, value));
        else if (key == "train.epochs") cfg.train.max_epochs = static_cast<int>(parse_long(key, value));
        else if (key == "train.lr") cfg.train.learning_rate = parse_double(key, value);
        else if (key == "train.optimizer") {
            if (value == "adam") cfg.train.optimizer = OptimizerKind::Adam;
            else if (value == "sgd") cfg.train.optimizer = OptimizerKind::Sgd;
            else throw ConfigError("train.optimizer: expected adam|sgd, got '" + value + "'");
        }
        else if (key == "train.seed") cfg.train.seed = parse_u64(key, value);
        else if (key == "train.t_k") cfg.train.warmup_epochs = static_cast<int>(parse_long(key, value));
        else if (key == "train.eval_interval") cfg.train.eval_interval = static_cast<int>(parse_long(key, value));
        else if (key == "train.hidden") cfg.train.hidden = parse_int_list(key, value);
        else throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }

    // Cross-key validation.
    if (cfg.source != "blobs" && cfg.source != "mnist") {
        throw ConfigError("data.source: expected blobs|mnist, got '" + cfg.source + "'");
    }
    auto forbid = [&](const char* key, const char* reason) {
        if (seen.count(key)) throw ConfigError(std::string(key) + ": " + reason);
    };
    if (cfg.source == "mnist") {
        forbid("data.classes", "only applies to data.source=blobs");
        forbid("data.per_class", "only applies to data.source=blobs");
        forbid("data.dim", "only applies to data.source=blobs");
        forbid("data.spread", "only applies to data.source=blobs");
        if (cfg.images.empty() || cfg.labels.empty() || cfg.test_images.empty() ||
            cfg.test_labels.empty()) {
            throw ConfigError("data.images/data.labels/data.test_images/data.test_labels: "
                              "required for data.source=mnist");
        }
    } else {
        forbid("data.images", "only applies to data.source=mnist");
        forbid("data.labels", "only applies to data.source=mnist");
        forbid("data.test_images", "only applies to data.source=mnist");
        forbid("data.test_labels", "only applies to data.source=mnist");
        forbid("data.limit", "only applies to data.source=mnist");
        forbid("data.test_limit", "only applies to data.source=mnist");
    }

    if (cfg.noise_type != "none" && cfg.noise_type != "pair" && cfg.noise_type != "symmetry" &&
        cfg.noise_type != "custom") {
        throw ConfigError("noise.type: expected none|pair|symmetry|custom, got '" +
                          cfg.noise_type + "'");
    }
    if (cfg.noise_type == "custom" && cfg.noise_file.empty()) {
        throw ConfigError("noise.file: required for noise.type=custom");
    }
    if (cfg.noise_type != "none" && cfg.noise_type != "custom") {
        if (cfg.noise_rate < 0.0 || cfg.noise_rate >= 1.0) {
            throw ConfigError("noise.rate: must lie in [0, 1)");
        }
        if (!seen.count("noise.rate")) {
            throw ConfigError("noise.rate: required for noise.type=" + cfg.noise_type);
        }
    }

    Algorithm alg = cfg.train.algorithm;
    bool bc_family = alg == Algorithm::BC || alg == Algorithm::NnBC || alg == Algorithm::PumpoutBC;
    if (bc_family && cfg.noise_type == "none") {
        throw ConfigError("train.algorithm: " + algorithm_name(alg) +
                          " needs a transition matrix; set noise.type to pair|symmetry|custom");
    }

    if (cfg.train.gamma < 0.0 || cfg.train.gamma > 1.0) {
        throw ConfigError("train.gamma: must lie in [0, 1]");
    }
    if (cfg.train.batch_size < 1) throw ConfigError("train.batch_size: must be >= 1");
    if (cfg.train.max_epochs < 1) throw ConfigError("train.epochs: must be >= 1");
    if (!(cfg.train.learning_rate > 0.0)) throw ConfigError("train.lr: must be > 0");
    if (cfg.train.warmup_epochs < 1) throw ConfigError("train.t_k: must be >= 1");
    if (cfg.train.eval_interval < 1) throw ConfigError("train.eval_interval: must be >= 1");
    for (int h : cfg.train.hidden) {
        if (h < 1) throw ConfigError("train.hidden: layer widths must be >= 1");
    }

    // The schedule's noise rate comes from the injection step.
    cfg.train.tau = cfg.noise_rate;
    cfg.name = file_stem(origin);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace pumpout
