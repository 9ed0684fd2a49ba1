#include "spinent/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spinent {

namespace {

using nlohmann::json;

json state_json(const SpinState& s) {
    json amps = json::array();
    for (const auto& a : s.amplitudes) amps.push_back({a.real(), a.imag()});
    return json{{"twice_spin", s.twice_spin}, {"amplitudes", amps}};
}

SpinState parse_state(const json& j) {
    if (!j.is_object() || !j.contains("twice_spin") || !j.contains("amplitudes"))
        throw std::invalid_argument("state JSON needs twice_spin and amplitudes");
    int ts = j.at("twice_spin").get<int>();
    const json& amps = j.at("amplitudes");
    if (!amps.is_array()) throw std::invalid_argument("amplitudes must be an array");
    std::vector<std::complex<double>> v;
    v.reserve(amps.size());
    for (const auto& entry : amps) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("each amplitude must be a [re, im] pair");
        v.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    double norm = 0.0;
    for (const auto& a : v) norm += std::norm(a);
    norm = std::sqrt(norm);
    SpinState s = make_state(ts, std::move(v));
    if (std::abs(norm - 1.0) > 1e-6)
        std::cerr << "warning: state norm " << norm << " deviates from 1; renormalized\n";
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

json matrix_json(const Mat3& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    return rows;
}

}  // namespace

SpinState load_state(const std::string& path) {
    json j;
    try {
        j = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed state file: ") + e.what());
    }
    return parse_state(j);
}

void save_state(const SpinState& s, const std::string& path) { spit(path, state_json(s).dump(2) + "\n"); }

std::string state_to_json(const SpinState& s) { return state_json(s).dump(2); }

SpinState state_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed state JSON: ") + e.what());
    }
    return parse_state(j);
}

void save_optimization_report(const OptimizationReport& rep, const OptimizerConfig& cfg,
                              int twice_spin, const std::string& path) {
    json j;
    j["twice_spin"] = twice_spin;
    j["best_value"] = rep.best_value;
    j["best_restart"] = rep.best_restart;
    j["best_state"] = state_json(rep.best_state);
    j["restart_values"] = rep.restart_values;
    j["restart_iterations"] = rep.restart_iterations;
    j["restart_converged"] = json::array();
    for (bool c : rep.restart_converged) j["restart_converged"].push_back(c);
    j["locally_optimal"] = rep.locally_optimal;
    j["seed"] = rep.seed;
    j["wall_time_seconds"] = rep.wall_time_seconds;
    j["config"] = {{"restarts", cfg.restarts},
                   {"max_iterations", cfg.max_iterations},
                   {"gradient_tolerance", cfg.gradient_tolerance},
                   {"initial_step", cfg.initial_step},
                   {"backtrack_factor", cfg.backtrack_factor},
                   {"sufficient_decrease", cfg.sufficient_decrease},
                   {"seed", cfg.seed}};
    spit(path, j.dump(2) + "\n");
}

std::string point_group_to_json(const PointGroupReport& rep) {
    json j;
    j["continuous"] = rep.continuous;
    j["order"] = rep.order;
    j["proper_order"] = rep.proper_order;
    j["generators"] = json::array();
    for (const auto& g : rep.generators) j["generators"].push_back(matrix_json(g));
    return j.dump(2);
}

void save_constellation_csv(const Constellation& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "index,x,y,z,theta,phi\n";
    char buf[256];
    for (size_t i = 0; i < c.stars.size(); ++i) {
        const Vec3& s = c.stars[i];
        double theta = std::acos(std::clamp(s.z, -1.0, 1.0));
        double phi = std::atan2(s.y, s.x);
        if (phi < 0) phi += 2.0 * M_PI;
        std::snprintf(buf, sizeof buf, "%zu,%.15g,%.15g,%.15g,%.15g,%.15g\n", i, s.x, s.y, s.z,
                      theta, phi);
        out << buf;
    }
}

void save_qgrid_csv(const QGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "theta,phi,q\n";
    char buf[160];
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j) {
            std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g\n", g.theta(i), g.phi(j), g.at(i, j));
            out << buf;
        }
}

void save_qgrid_ppm(const QGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    double vmax = 0.0;
    for (double v : g.values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    out << "P6\n" << g.n_phi << " " << g.n_theta << "\n255\n";
    auto channel = [](double x) {
        return static_cast<unsigned char>(std::lround(255.0 * std::clamp(x, 0.0, 1.0)));
    };
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j) {
            double t = g.at(i, j) / vmax;
            double r, gr, b;
            if (t < 1.0 / 3.0) {  // blue to cyan
                r = 0.0;
                gr = 3.0 * t;
                b = 1.0;
            } else if (t < 2.0 / 3.0) {  // cyan to yellow
                r = 3.0 * t - 1.0;
                gr = 1.0;
                b = 2.0 - 3.0 * t;
            } else {  // yellow to red
                r = 1.0;
                gr = 3.0 - 3.0 * t;
                b = 0.0;
            }
            unsigned char px[3] = {channel(r), channel(gr), channel(b)};
            out.write(reinterpret_cast<const char*>(px), 3);
        }
}

}  // namespace spinent
