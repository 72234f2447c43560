#include "stablets/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "stablets/errors.hpp"
#include "stablets/inference.hpp"

namespace stablets {

void ExperimentConfig::validate() const {
    if (horizon < instance.num_arms()) {
        throw DomainError("T < K: horizon " + std::to_string(horizon) + " is smaller than the " +
                          std::to_string(instance.num_arms()) + " arms");
    }
    if (replications < 1) throw DomainError("replications must be at least 1");
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw DomainError("every alpha must lie in (0, 1)");
    }
    if (histogram_bins == 0) throw DomainError("histogram_bins must be positive");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (const auto* stable = std::get_if<StableThompsonSampling>(&policy); stable && horizon < 3) {
        throw DomainError("stable_ts needs horizon >= 3");
    }
}

std::vector<double> ExperimentConfig::alpha_grid() const { return alphas.empty() ? default_alpha_grid() : alphas; }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

double parse_real(std::string_view text, std::size_t line, const std::string& field) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(line, field, "expected a real number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_count(std::string_view text, std::size_t line, const std::string& field) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (!text.empty() && ec == std::errc() && ptr == end) return value;
    // allow integral scientific notation such as 1e4
    const double real = parse_real(text, line, field);
    if (real < 0.0 || real != std::floor(real) || real > 9.0e15) {
        throw ParseError(line, field, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return static_cast<std::uint64_t>(real);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::vector<ArmSpec> arms;
    std::optional<std::string> policy_kind;
    std::optional<double> gamma_c, gamma_b;
    std::set<std::string> seen;
    std::size_t gamma_line = 0;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "", "missing key");
        if (value.empty()) throw ParseError(line_no, key, "missing value");

        if (key == "arm") {
            const auto parts = split_list(value);
            if (parts.size() != 2) throw ParseError(line_no, key, "expected 'mean, variance'");
            const double mean = parse_real(parts[0], line_no, key);
            const double variance = parse_real(parts[1], line_no, key);
            if (!(variance > 0.0)) throw ParseError(line_no, key, "variance must be positive");
            arms.push_back({mean, variance});
            continue;
        }
        if (!seen.insert(key).second) throw ParseError(line_no, key, "duplicate key");

        if (key == "policy") {
            if (value != "ts" && value != "stable_ts" && value != "ucb") {
                throw ParseError(line_no, key, "expected ts, stable_ts or ucb");
            }
            policy_kind = std::string(value);
        } else if (key == "horizon") {
            config.horizon = parse_count(value, line_no, key);
        } else if (key == "replications") {
            config.replications = parse_count(value, line_no, key);
            if (config.replications < 1) throw ParseError(line_no, key, "must be at least 1");
        } else if (key == "seed") {
            config.master_seed = parse_count(value, line_no, key);
        } else if (key == "gamma_coefficient") {
            gamma_c = parse_real(value, line_no, key);
            gamma_line = line_no;
        } else if (key == "gamma_exponent") {
            gamma_b = parse_real(value, line_no, key);
            gamma_line = line_no;
        } else if (key == "levels") {
            for (auto part : split_list(value)) {
                const double level = parse_real(part, line_no, key);
                if (!(level > 0.0 && level < 1.0)) throw ParseError(line_no, key, "levels must lie in (0, 1)");
                config.alphas.push_back(1.0 - level);
            }
        } else if (key == "output_dir") {
            config.output_dir = std::string(value);
        } else if (key == "workers") {
            config.workers = static_cast<unsigned>(parse_count(value, line_no, key));
        } else if (key == "histogram_bins") {
            config.histogram_bins = parse_count(value, line_no, key);
        } else if (key == "epsilon") {
            config.epsilon = parse_real(value, line_no, key);
        } else {
            throw ParseError(line_no, key, "unknown key");
        }
    }

    for (const char* required : {"horizon", "replications", "seed"}) {
        if (!seen.count(required)) throw ParseError(0, required, "missing required key");
    }
    if (arms.size() < 2) throw ParseError(0, "arm", "at least 2 arm lines are required");

    const std::string kind = policy_kind.value_or("stable_ts");
    if ((gamma_c || gamma_b) && kind != "stable_ts") {
        throw ParseError(gamma_line, "gamma_coefficient", "gamma keys only apply to policy = stable_ts");
    }
    try {
        config.instance = BanditInstance(std::move(arms));
        if (kind == "ts") {
            config.policy = ThompsonSampling{};
        } else if (kind == "ucb") {
            config.policy = UpperConfidenceBound{};
        } else {
            config.policy = StableThompsonSampling{GammaSchedule(gamma_c.value_or(4.0), gamma_b.value_or(0.4))};
        }
        config.validate();
    } catch (const DomainError& e) {
        throw ParseError(0, "", e.what());
    }
    return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, path.string(), "cannot read config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string format_config(const ExperimentConfig& config) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "policy = " << policy_name(config.policy) << '\n';
    out << "horizon = " << config.horizon << '\n';
    out << "replications = " << config.replications << '\n';
    out << "seed = " << config.master_seed << '\n';
    if (const auto* stable = std::get_if<StableThompsonSampling>(&config.policy)) {
        out << "gamma_coefficient = " << num(stable->schedule.coefficient()) << '\n';
        out << "gamma_exponent = " << num(stable->schedule.exponent()) << '\n';
    }
    if (!config.alphas.empty()) {
        out << "levels = ";
        for (std::size_t i = 0; i < config.alphas.size(); ++i) out << (i ? ", " : "") << num(1.0 - config.alphas[i]);
        out << '\n';
    }
    out << "output_dir = " << config.output_dir.string() << '\n';
    out << "workers = " << config.workers << '\n';
    out << "histogram_bins = " << config.histogram_bins << '\n';
    out << "epsilon = " << num(config.epsilon) << '\n';
    for (const auto& arm : config.instance.arms()) out << "arm = " << num(arm.mean) << ", " << num(arm.variance) << '\n';
    return out.str();
}

}  // namespace stablets
