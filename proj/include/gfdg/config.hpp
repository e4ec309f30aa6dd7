/// @file config.hpp
/// Run configuration: flat `key = value` text with [section] headers,
/// UTF-8, diff-friendly, no external parser. parse(print(cfg)) == cfg.
#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfdg {

struct RunConfig {
    // [mesh]
    int dim = 2;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int nx = 8, ny = 8;
    std::string bc = "periodic";            // periodic | natural

    // [dg]
    int degree = 1;
    int quad_points = 0;                    // 0 = degree + 2

    // [potential]
    std::string potential = "swift-hohenberg";
    double epsilon = 0.025;
    double g = 0.0;
    double a = 1.0;
    double C0 = 1000.0;

    // [time]
    std::string tableau = "gl4";
    double tau = 1e-3;
    int steps = 0;                          // 0 = derive from t_final
    double t_final = 0.0;

    // [pc]
    int pc_iterations = 2;
    double pc_tolerance = 1e-10;

    // [init]
    std::string init_type = "named";        // named | random
    std::string init_name = "sine-half";
    std::uint64_t seed = 42;
    double amplitude = 0.1;

    // [source]
    std::string source = "none";            // none | sine-half | sine-quarter

    // [solver]
    std::string solver_mode = "direct";     // direct | frozen
    double solver_rtol = 1e-12;

    // [output]
    std::string energy_csv;
    std::string snapshot_dir;
    std::string snapshot_format = "vtk";    // vtk | csv
    int snapshot_every = 0;                 // steps between snapshots; 0 = off
    std::string snapshot_times;             // comma-separated absolute times
    int plot_samples = 4;

    bool operator==(const RunConfig&) const = default;

    int step_count() const
    {
        if (steps > 0) return steps;
        if (t_final > 0.0) {
            const double n = t_final / tau;
            const double rounded = std::round(n);
            if (std::abs(n - rounded) > 1e-8 * std::max(1.0, rounded))
                throw std::invalid_argument(
                    "config: t_final is not an integer multiple of tau");
            return static_cast<int>(rounded);
        }
        return 0;
    }
};

namespace detail {
inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line)
{
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": expected a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": trailing characters in number '" + v + "'");
    return x;
}

inline long long parse_int(const std::string& v, int line)
{
    std::size_t pos = 0;
    long long x;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": expected an integer, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": trailing characters in integer '" + v + "'");
    return x;
}

inline std::uint64_t parse_uint(const std::string& v, int line)
{
    std::size_t pos = 0;
    unsigned long long x;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": expected an unsigned integer, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": trailing characters in integer '" + v + "'");
    return x;
}
} // namespace detail

/// Assign one key of one section. Unknown keys are rejected.
inline void config_set(RunConfig& c, const std::string& section, const std::string& key,
                       const std::string& value, int line = 0)
{
    using detail::parse_double;
    using detail::parse_int;
    const std::string id = section + "." + key;
    if (id == "mesh.dim") c.dim = static_cast<int>(parse_int(value, line));
    else if (id == "mesh.x_min") c.x_min = parse_double(value, line);
    else if (id == "mesh.x_max") c.x_max = parse_double(value, line);
    else if (id == "mesh.y_min") c.y_min = parse_double(value, line);
    else if (id == "mesh.y_max") c.y_max = parse_double(value, line);
    else if (id == "mesh.nx") c.nx = static_cast<int>(parse_int(value, line));
    else if (id == "mesh.ny") c.ny = static_cast<int>(parse_int(value, line));
    else if (id == "mesh.bc") c.bc = value;
    else if (id == "dg.degree") c.degree = static_cast<int>(parse_int(value, line));
    else if (id == "dg.quad_points") c.quad_points = static_cast<int>(parse_int(value, line));
    else if (id == "potential.name") c.potential = value;
    else if (id == "potential.epsilon") c.epsilon = parse_double(value, line);
    else if (id == "potential.g") c.g = parse_double(value, line);
    else if (id == "potential.a") c.a = parse_double(value, line);
    else if (id == "potential.C0") c.C0 = parse_double(value, line);
    else if (id == "time.tableau") c.tableau = value;
    else if (id == "time.tau") c.tau = parse_double(value, line);
    else if (id == "time.steps") c.steps = static_cast<int>(parse_int(value, line));
    else if (id == "time.t_final") c.t_final = parse_double(value, line);
    else if (id == "pc.iterations") c.pc_iterations = static_cast<int>(parse_int(value, line));
    else if (id == "pc.tolerance") c.pc_tolerance = parse_double(value, line);
    else if (id == "init.type") c.init_type = value;
    else if (id == "init.name") c.init_name = value;
    else if (id == "init.seed") c.seed = parse_uint(value, line);
    else if (id == "init.amplitude") c.amplitude = parse_double(value, line);
    else if (id == "source.name") c.source = value;
    else if (id == "solver.mode") c.solver_mode = value;
    else if (id == "solver.rtol") c.solver_rtol = parse_double(value, line);
    else if (id == "output.energy_csv") c.energy_csv = value;
    else if (id == "output.snapshot_dir") c.snapshot_dir = value;
    else if (id == "output.snapshot_format") c.snapshot_format = value;
    else if (id == "output.snapshot_every") c.snapshot_every = static_cast<int>(parse_int(value, line));
    else if (id == "output.snapshot_times") c.snapshot_times = value;
    else if (id == "output.plot_samples") c.plot_samples = static_cast<int>(parse_int(value, line));
    else
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": unknown key '" + id + "'");
}

/// Enforce the config invariants shared by all commands.
inline void validate(const RunConfig& c)
{
    if (c.dim != 1 && c.dim != 2)
        throw std::invalid_argument("config: mesh.dim must be 1 or 2");
    if (!(c.tau > 0.0)) throw std::invalid_argument("config: time.tau must be positive");
    if (c.degree < 0 || c.degree > 4)
        throw std::invalid_argument("config: dg.degree must be in 0..4");
    if (c.bc != "periodic" && c.bc != "natural")
        throw std::invalid_argument("config: mesh.bc must be periodic or natural");
    if (c.init_type != "named" && c.init_type != "random")
        throw std::invalid_argument("config: init.type must be named or random");
    if (c.solver_mode != "direct" && c.solver_mode != "frozen")
        throw std::invalid_argument("config: solver.mode must be direct or frozen");
    if (c.snapshot_format != "vtk" && c.snapshot_format != "csv")
        throw std::invalid_argument("config: output.snapshot_format must be vtk or csv");
    if (c.steps < 0) throw std::invalid_argument("config: time.steps must be >= 0");
    c.step_count();   // throws when t_final is not commensurate with tau
}

inline RunConfig parse_config(std::istream& is)
{
    RunConfig c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside of any [section]");
        config_set(c, section, key, value, lineno);
    }
    return c;
}

inline RunConfig parse_config_string(const std::string& text)
{
    std::istringstream is(text);
    return parse_config(is);
}

inline std::string print_config(const RunConfig& c)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "[mesh]\n";
    os << "dim = " << c.dim << "\n";
    os << "x_min = " << c.x_min << "\nx_max = " << c.x_max << "\n";
    os << "y_min = " << c.y_min << "\ny_max = " << c.y_max << "\n";
    os << "nx = " << c.nx << "\nny = " << c.ny << "\n";
    os << "bc = " << c.bc << "\n";
    os << "\n[dg]\n";
    os << "degree = " << c.degree << "\n";
    os << "quad_points = " << c.quad_points << "\n";
    os << "\n[potential]\n";
    os << "name = " << c.potential << "\n";
    os << "epsilon = " << c.epsilon << "\n";
    os << "g = " << c.g << "\n";
    os << "a = " << c.a << "\n";
    os << "C0 = " << c.C0 << "\n";
    os << "\n[time]\n";
    os << "tableau = " << c.tableau << "\n";
    os << "tau = " << c.tau << "\n";
    os << "steps = " << c.steps << "\n";
    os << "t_final = " << c.t_final << "\n";
    os << "\n[pc]\n";
    os << "iterations = " << c.pc_iterations << "\n";
    os << "tolerance = " << c.pc_tolerance << "\n";
    os << "\n[init]\n";
    os << "type = " << c.init_type << "\n";
    os << "name = " << c.init_name << "\n";
    os << "seed = " << c.seed << "\n";
    os << "amplitude = " << c.amplitude << "\n";
    os << "\n[source]\n";
    os << "name = " << c.source << "\n";
    os << "\n[solver]\n";
    os << "mode = " << c.solver_mode << "\n";
    os << "rtol = " << c.solver_rtol << "\n";
    os << "\n[output]\n";
    os << "energy_csv = " << c.energy_csv << "\n";
    os << "snapshot_dir = " << c.snapshot_dir << "\n";
    os << "snapshot_format = " << c.snapshot_format << "\n";
    os << "snapshot_every = " << c.snapshot_every << "\n";
    os << "snapshot_times = " << c.snapshot_times << "\n";
    os << "plot_samples = " << c.plot_samples << "\n";
    return os.str();
}

/// Apply a command-line override of the form section.key=value.
inline void apply_override(RunConfig& c, const std::string& spec)
{
    const auto eq = spec.find('=');
    const auto dot = spec.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw std::invalid_argument("override '" + spec +
                                    "' is not of the form section.key=value");
    config_set(c, detail::trim(spec.substr(0, dot)),
               detail::trim(spec.substr(dot + 1, eq - dot - 1)),
               detail::trim(spec.substr(eq + 1)));
}

/// Comma-separated list of doubles (used for snapshot times).
inline std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> out;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
        token = detail::trim(token);
        if (!token.empty()) out.push_back(std::stod(token));
    }
    return out;
}

} // namespace gfdg
