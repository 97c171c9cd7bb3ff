#include "loopsim/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loopsim {

Json state_to_json(const FockState& state) {
    Json j;
    j["dims"] = state.dims;
    j["convention"] = "hbar=1";
    Json data = Json::array();
    int d = state.total_dim();
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            data.push_back({state.rho(r, c).real(), state.rho(r, c).imag()});
    j["data"] = std::move(data);
    j["cutoff_warning"] = state.cutoff_warning;
    return j;
}

FockState state_from_json(const Json& j) {
    FockState s;
    s.dims = j.at("dims").get<std::vector<int>>();
    int d = s.total_dim();
    const Json& data = j.at("data");
    if (static_cast<int>(data.size()) != d * d)
        throw std::runtime_error("state_from_json: data size does not match dims");
    s.rho = Matrix(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const Json& e = data[r * d + c];
            s.rho(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    s.cutoff_warning = j.value("cutoff_warning", false);
    return s;
}

void save_state(const std::string& path, const FockState& state) {
    write_text_file(path, state_to_json(state).dump());
}

FockState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_state: cannot open " + path);
    Json j;
    in >> j;
    return state_from_json(j);
}

void write_dataset_csv(const std::string& path, const QuadratureDataset& data) {
    std::ostringstream out;
    out << "phase_deg,sample\n";
    for (const auto& g : data.groups) {
        std::string deg = format_fixed(g.phase * 180.0 / 3.14159265358979323846, 4);
        for (double s : g.samples) out << deg << ',' << format_fixed(s, 9) << '\n';
    }
    write_text_file(path, out.str());
}

QuadratureDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    QuadratureDataset data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_dataset_csv: malformed line: " + line);
        double deg = std::stod(line.substr(0, comma));
        double sample = std::stod(line.substr(comma + 1));
        double phase = deg * 3.14159265358979323846 / 180.0;
        if (data.groups.empty() ||
            std::abs(data.groups.back().phase - phase) > 1e-9) {
            data.groups.push_back({phase, {}});
        }
        data.groups.back().samples.push_back(sample);
    }
    return data;
}

Json dataset_to_json(const QuadratureDataset& data) {
    Json j;
    j["seed"] = data.seed;
    j["source"] = data.source;
    Json groups = Json::array();
    for (const auto& g : data.groups)
        groups.push_back({{"phase_rad", g.phase}, {"samples", g.samples}});
    j["groups"] = std::move(groups);
    return j;
}

void write_schedule_csv(const std::string& path, const ControlSchedule& schedule) {
    std::ostringstream out;
    out << "bin,time_ns,vbs_reflectivity,switch,hd_phase_deg,feedforward_gain\n";
    for (const auto& e : schedule.timeline) {
        out << e.bin << ',' << format_fixed(e.time_ns, 3) << ','
            << format_fixed(e.vbs_reflectivity, 6) << ',' << to_string(e.input_switch)
            << ',' << format_fixed(e.hd_phase_deg, 2) << ','
            << format_fixed(e.feedforward_gain, 6) << '\n';
    }
    write_text_file(path, out.str());
}

Json schedule_to_json(const ControlSchedule& schedule) {
    Json j;
    j["tau_ns"] = schedule.tau_ns;
    Json timeline = Json::array();
    for (const auto& e : schedule.timeline) {
        timeline.push_back({{"bin", e.bin},
                            {"time_ns", e.time_ns},
                            {"vbs_reflectivity", e.vbs_reflectivity},
                            {"switch", to_string(e.input_switch)},
                            {"hd_phase_deg", e.hd_phase_deg},
                            {"feedforward_gain", e.feedforward_gain}});
    }
    j["timeline"] = std::move(timeline);
    return j;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    // normalize "-0.0000" to "0.0000"
    std::string s(buf);
    bool all_zero = true;
    for (char c : s)
        if (c >= '1' && c <= '9') all_zero = false;
    if (all_zero && !s.empty() && s[0] == '-') s.erase(0, 1);
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

}  // namespace loopsim
