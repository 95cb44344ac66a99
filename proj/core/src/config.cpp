#include "slris/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slris {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value) {
    std::size_t consumed = 0;
    const double v = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument("trailing characters");
    return v;
}

std::size_t parse_size(const std::string& value) {
    const double v = parse_double(value);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw std::invalid_argument("expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_u64(const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw std::invalid_argument("expected an unsigned integer");
    return v;
}

std::vector<Scheme> parse_schemes(const std::string& value) {
    std::vector<Scheme> schemes;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "Proposed")
            schemes.push_back(Scheme::Proposed);
        else if (item == "AlwaysOn")
            schemes.push_back(Scheme::AlwaysOn);
        else if (item == "AlwaysOff")
            schemes.push_back(Scheme::AlwaysOff);
        else
            throw std::invalid_argument("unknown scheme '" + item + "'");
    }
    if (schemes.empty()) throw std::invalid_argument("empty scheme list");
    return schemes;
}

}  // namespace

void set_config_key(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
    ScenarioParams& sc = config.scenario;
    if (key == "d_ris_ud") sc.d_ris_ud = parse_double(value);
    else if (key == "d_ris_ui") sc.d_ris_ui = parse_double(value);
    else if (key == "d_ris_bs") sc.d_ris_bs = parse_double(value);
    else if (key == "angle_bs_ud") sc.angle_bs_ud_deg = parse_double(value);
    else if (key == "theta") sc.theta_deg = parse_double(value);
    else if (key == "K") sc.ris_count = parse_size(value);
    else if (key == "ris_spacing") sc.ris_spacing = parse_double(value);
    else if (key == "N") sc.elements_per_ris = parse_size(value);
    else if (key == "amp_coeff") sc.amp_coeff = parse_double(value);
    else if (key == "p_d") sc.p_d_dbm = parse_double(value);
    else if (key == "p_i") sc.p_i_dbm = parse_double(value);
    else if (key == "noise") sc.noise_dbm = parse_double(value);
    else if (key == "carrier") sc.carrier_hz = parse_double(value);
    else if (key == "pl_exp_direct") sc.pl_exp_direct = parse_double(value);
    else if (key == "pl_exp_ris") sc.pl_exp_ris = parse_double(value);
    else if (key == "theta_min") config.theta_min_deg = parse_double(value);
    else if (key == "theta_max") config.theta_max_deg = parse_double(value);
    else if (key == "theta_step") config.theta_step_deg = parse_double(value);
    else if (key == "k_min") config.k_min = parse_size(value);
    else if (key == "k_max") config.k_max = parse_size(value);
    else if (key == "theta_draw_lo") config.theta_draw_lo_deg = parse_double(value);
    else if (key == "theta_draw_hi") config.theta_draw_hi_deg = parse_double(value);
    else if (key == "window_len") config.window_len = parse_size(value);
    else if (key == "snr_lo") config.window_snr_lo_db = parse_double(value);
    else if (key == "snr_hi") config.window_snr_hi_db = parse_double(value);
    else if (key == "realizations") config.realizations = parse_size(value);
    else if (key == "seed") config.seed = parse_u64(value);
    else if (key == "schemes") config.schemes = parse_schemes(value);
    else if (key == "classifier_path") config.classifier_path = value;
    else if (key == "output_path") config.output_path = value;
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path.string());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_config_key(config, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
}

}  // namespace slris
