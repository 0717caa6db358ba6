#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace fpuwave {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys{"model", "L",        "k",      "delta",    "deltas",
                                     "tol",   "max_iter", "output_dir", "emit", "toda_only"};
const std::set<std::string> kModelKeys{"name", "m", "c"};
const std::set<std::string> kEmitKeys{"profiles", "scaled", "sweep", "figures_data"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

ModelSpec model_from_json(const json& j) {
    if (j.is_string()) return ModelSpec::parse(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("'model' must be a string or an object");
    reject_unknown(j, kModelKeys, "model");
    if (!j.contains("name")) throw ConfigError("model name is missing");
    ModelSpec s;
    s.name = get_as<std::string>(j, "name");
    if (j.contains("m")) s.m = get_as<int>(j, "m");
    if (j.contains("c")) s.c = get_as<std::vector<double>>(j, "c");
    if (s.name != "power" && s.name != "toda") {
        throw ConfigError("unknown model '" + s.name + "' (expected power or toda)");
    }
    s.build();
    return s;
}

} // namespace

ForceModel ModelSpec::build() const {
    if (name == "toda") return toda();
    if (name == "power") {
        try {
            return power_family(m, c);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown model '" + name + "'");
}

ModelSpec ModelSpec::parse(const std::string& text) {
    if (text == "toda") return {"toda", 0, {}};
    if (text.rfind("power", 0) != 0) {
        throw ConfigError("unknown model '" + text + "' (expected toda or power:<m>[:c1,...])");
    }
    ModelSpec s{"power", 2, {}};
    if (text == "power") return s;
    if (text[5] != ':') throw ConfigError("malformed model '" + text + "'");
    std::string rest = text.substr(6);
    const auto colon = rest.find(':');
    try {
        std::size_t used = 0;
        const std::string ms = rest.substr(0, colon);
        s.m = std::stoi(ms, &used);
        if (used != ms.size()) throw std::invalid_argument(ms);
        if (colon != std::string::npos) {
            std::stringstream cs(rest.substr(colon + 1));
            std::string item;
            while (std::getline(cs, item, ',')) {
                s.c.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            }
        }
    } catch (const std::logic_error&) {
        throw ConfigError("malformed model '" + text + "'");
    }
    s.build();
    return s;
}

std::vector<double> default_sweep_deltas() { return {0.27, 0.18, 0.12, 0.09, 0.06, 0.03}; }

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, kTopKeys, "config");
    RunConfig c;
    if (j.contains("model") && !j.at("model").is_null()) c.model = model_from_json(j.at("model"));
    if (j.contains("L")) c.L = get_as<int>(j, "L");
    if (j.contains("k")) c.k = get_as<int>(j, "k");
    if (j.contains("delta") && j.contains("deltas")) {
        throw ConfigError("give either 'delta' or 'deltas', not both");
    }
    if (j.contains("delta")) c.deltas = {get_as<double>(j, "delta")};
    if (j.contains("deltas")) {
        c.deltas = get_as<std::vector<double>>(j, "deltas");
        if (c.deltas.empty()) throw ConfigError("'deltas' must not be empty");
    }
    if (j.contains("tol")) c.tol = get_as<double>(j, "tol");
    if (j.contains("max_iter")) c.max_iter = get_as<long>(j, "max_iter");
    if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j, "output_dir");
    if (j.contains("toda_only")) c.toda_only = get_as<bool>(j, "toda_only");
    if (j.contains("emit")) {
        const auto& e = j.at("emit");
        if (!e.is_object()) throw ConfigError("'emit' must be an object");
        reject_unknown(e, kEmitKeys, "emit");
        if (e.contains("profiles")) c.emit.profiles = get_as<bool>(e, "profiles");
        if (e.contains("scaled")) c.emit.scaled = get_as<bool>(e, "scaled");
        if (e.contains("sweep")) c.emit.sweep = get_as<bool>(e, "sweep");
        if (e.contains("figures_data")) c.emit.figures_data = get_as<bool>(e, "figures_data");
    }
    return c;
}

RunConfig RunConfig::from_text(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json j;
    if (model) {
        j["model"] = {{"name", model->name}};
        if (model->name == "power") {
            j["model"]["m"] = model->m;
            j["model"]["c"] = model->c;
        }
    } else {
        j["model"] = nullptr;
    }
    j["L"] = L;
    j["k"] = k;
    j["deltas"] = deltas;
    j["tol"] = tol;
    j["max_iter"] = max_iter;
    j["output_dir"] = output_dir;
    j["emit"] = {{"profiles", emit.profiles},
                 {"scaled", emit.scaled},
                 {"sweep", emit.sweep},
                 {"figures_data", emit.figures_data}};
    j["toda_only"] = toda_only;
    return j;
}

void RunConfig::normalise() {
    if (L < 3) throw ConfigError("L must be at least 3");
    if (k < 1) throw ConfigError("k must be at least 1");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tol must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
    for (double d : deltas) {
        if (!(d > 0.0 && d <= 0.5)) {
            std::ostringstream os;
            os << "delta must lie in (0, 0.5], got " << d;
            throw ConfigError(os.str());
        }
    }
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto last = std::unique(sorted.begin(), sorted.end());
    if (last != sorted.end()) {
        std::ostringstream os;
        os << "dropped " << (sorted.end() - last) << " duplicate delta value(s)";
        warnings.push_back(os.str());
        sorted.erase(last, sorted.end());
    }
    deltas = std::move(sorted);
    if (model) (void)model->build();
    if (output_dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        output_dir = (env && *env) ? env : "fpuwave-out";
    }
}

void RunConfig::require_model() const {
    if (!model) throw ConfigError("model name is missing");
    if (deltas.empty()) throw ConfigError("no delta given");
}

} // namespace fpuwave
