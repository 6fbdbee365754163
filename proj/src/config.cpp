// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislocate/config.hpp"

#include "rislocate/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace rislocate {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"scene", {"bs", "ris", "ue", "scatterers_br", "scatterers_rm"}},
        {"arrays", {"n_bs", "n_ue", "n_ris", "spacing"}},
        {"waveform",
         {"carrier_hz", "bandwidth_hz", "n_subcarriers", "n_blocks", "n_stage1_symbols", "transmit_energy", "snr_db",
          "reflection_loss_db"}},
        {"solver",
         {"solvers", "max_iterations", "tolerance", "toa_grid_oversampling", "omp_atoms", "amp_iterations",
          "amp_damping", "amp_threshold"}},
        {"experiment",
         {"sweep", "values", "positions", "n_trials", "seed", "lattice_x_min", "lattice_x_max", "lattice_y_min",
          "lattice_y_max", "lattice_nx", "lattice_ny"}},
        {"output", {"directory", "prefix"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Reads typed values from one section and reports errors with the full key name.
class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    template <typename T, typename Parse>
    void read(const std::string& key, T& out, Parse parse) const {
        if (!tree_) return;
        const auto it = tree_->find(key);
        if (it == tree_->not_found()) return;
        const std::string raw = it->second.data();
        try {
            out = parse(raw);
        } catch (const ConfigTypeError&) {
            throw ConfigTypeError("[" + name_ + "] " + key + ": cannot parse '" + raw + "'");
        }
    }

    std::string qualified(const std::string& key) const { return "[" + name_ + "] " + key; }

private:
    std::string name_;
    const pt::ptree* tree_;
};

double to_double(const std::string& s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) throw ConfigTypeError(t);
    return v;
}

long long to_integer(const std::string& s) {
    const std::string t = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) throw ConfigTypeError(t);
    return v;
}

int to_int(const std::string& s) {
    const long long v = to_integer(s);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) throw ConfigTypeError(s);
    return static_cast<int>(v);
}

std::uint64_t to_seed(const std::string& s) {
    const std::string t = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) throw ConfigTypeError(t);
    return v;
}

Vec2 to_point(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw ConfigTypeError(s);
    return {to_double(parts[0]), to_double(parts[1])};
}

std::vector<Vec2> to_points(const std::string& s) {
    std::vector<Vec2> out;
    for (const auto& p : split(s, ';')) out.push_back(to_point(p));
    return out;
}

std::vector<double> to_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(to_double(p));
    return out;
}

std::vector<SolverKind> to_solvers(const std::string& s) {
    std::vector<SolverKind> out;
    for (const auto& p : split(s, ',')) {
        try {
            out.push_back(parse_solver(p));
        } catch (const InvalidArgument&) {
            throw ConfigTypeError(p);
        }
    }
    return out;
}

SweepVariable to_sweep(const std::string& s) {
    try {
        return parse_sweep_variable(trim(s));
    } catch (const InvalidArgument&) {
        throw ConfigTypeError(s);
    }
}

std::string to_string_value(const std::string& s) { return trim(s); }

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string format_point(const Vec2& p) { return format_double(p.x()) + ", " + format_double(p.y()); }

std::string format_points(const std::vector<Vec2>& ps) {
    std::string out;
    for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? "; " : "") + format_point(ps[i]);
    return out;
}

std::string format_doubles(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ", " : "") + format_double(vs[i]);
    return out;
}

RunConfig from_tree(const pt::ptree& tree) {
    const auto& keys = schema();
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigKeyError("unknown key '" + section + "' outside any section");
        const auto known = keys.find(section);
        if (known == keys.end()) throw ConfigKeyError("unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            if (!value.empty()) throw ConfigSyntaxError("[" + section + "] " + key + ": nested values not allowed");
            if (!known->second.count(key)) throw ConfigKeyError("unknown key '" + key + "' in [" + section + "]");
        }
    }
    auto section = [&](const std::string& name) {
        const auto it = tree.find(name);
        return Section(name, it == tree.not_found() ? nullptr : &it->second);
    };

    RunConfig c;
    const auto scene = section("scene");
    scene.read("bs", c.scene.bs, to_point);
    scene.read("ris", c.scene.ris, to_point);
    scene.read("ue", c.scene.ue, to_point);
    scene.read("scatterers_br", c.scene.scatterers_br, to_points);
    scene.read("scatterers_rm", c.scene.scatterers_rm, to_points);

    const auto arrays = section("arrays");
    arrays.read("n_bs", c.arrays.n_bs, to_int);
    arrays.read("n_ue", c.arrays.n_ue, to_int);
    arrays.read("n_ris", c.arrays.n_ris, to_int);
    arrays.read("spacing", c.arrays.spacing, to_double);

    const auto wf = section("waveform");
    wf.read("carrier_hz", c.waveform.carrier_hz, to_double);
    wf.read("bandwidth_hz", c.waveform.bandwidth_hz, to_double);
    wf.read("n_subcarriers", c.waveform.n_subcarriers, to_int);
    wf.read("n_blocks", c.waveform.n_blocks, to_int);
    wf.read("n_stage1_symbols", c.waveform.n_stage1_symbols, to_int);
    wf.read("transmit_energy", c.waveform.transmit_energy, to_double);
    wf.read("snr_db", c.snr_db, to_doubles);
    wf.read("reflection_loss_db", c.waveform.reflection_loss_db, to_double);

    const auto solver = section("solver");
    solver.read("solvers", c.solvers, to_solvers);
    solver.read("max_iterations", c.solver.max_iterations, to_int);
    solver.read("tolerance", c.solver.tolerance, to_double);
    solver.read("toa_grid_oversampling", c.solver.toa_grid_oversampling, to_int);
    solver.read("omp_atoms", c.solver.omp_atoms, to_int);
    solver.read("amp_iterations", c.solver.amp.iterations, to_int);
    solver.read("amp_damping", c.solver.amp.damping, to_double);
    solver.read("amp_threshold", c.solver.amp.threshold, to_double);

    const auto exp = section("experiment");
    exp.read("sweep", c.experiment.sweep, to_sweep);
    exp.read("values", c.experiment.values, to_doubles);
    exp.read("positions", c.experiment.positions, to_points);
    exp.read("n_trials", c.experiment.n_trials, to_int);
    exp.read("seed", c.experiment.seed, to_seed);
    exp.read("lattice_x_min", c.experiment.lattice.x_min, to_double);
    exp.read("lattice_x_max", c.experiment.lattice.x_max, to_double);
    exp.read("lattice_y_min", c.experiment.lattice.y_min, to_double);
    exp.read("lattice_y_max", c.experiment.lattice.y_max, to_double);
    exp.read("lattice_nx", c.experiment.lattice.nx, to_int);
    exp.read("lattice_ny", c.experiment.lattice.ny, to_int);

    const auto out = section("output");
    out.read("directory", c.output.directory, to_string_value);
    out.read("prefix", c.output.prefix, to_string_value);

    c.validate();
    return c;
}

pt::ptree read_tree(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigSyntaxError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

template <typename F>
void check(const std::string& key, F&& f) {
    try {
        f();
    } catch (const InvalidArgument& e) {
        throw ConfigValueError(key + ": " + e.what());
    }
}

} // namespace

Scenario RunConfig::scenario() const {
    Scenario s;
    s.scene = scene;
    s.arrays = arrays;
    s.waveform = waveform;
    s.solver = solver;
    s.snr_db = snr_db.empty() ? 0.0 : snr_db.front();
    return s;
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec spec;
    spec.variable = experiment.sweep;
    spec.values = experiment.values;
    if (spec.values.empty() && spec.variable == SweepVariable::SnrDb) spec.values = snr_db;
    spec.positions = experiment.positions;
    spec.solvers = solvers;
    spec.n_trials = experiment.n_trials;
    spec.base = scenario();
    spec.seed = experiment.seed;
    return spec;
}

void RunConfig::validate() const {
    check("[scene]", [&] { scene.validate(); });
    check("[arrays]", [&] { arrays.validate(); });
    check("[waveform]", [&] { waveform.validate(); });
    if (snr_db.empty()) throw ConfigValueError("[waveform] snr_db: at least one value required");
    for (double v : snr_db)
        if (!std::isfinite(v)) throw ConfigValueError("[waveform] snr_db: values must be finite");
    if (solvers.empty()) throw ConfigValueError("[solver] solvers: at least one solver required");
    if (solver.max_iterations < 1) throw ConfigValueError("[solver] max_iterations: must be at least 1");
    if (!(solver.tolerance >= 0.0)) throw ConfigValueError("[solver] tolerance: must be non-negative");
    if (solver.toa_grid_oversampling < 1) throw ConfigValueError("[solver] toa_grid_oversampling: must be >= 1");
    if (solver.omp_atoms < 1 || solver.omp_atoms > arrays.n_ris)
        throw ConfigValueError("[solver] omp_atoms: must lie in [1, n_ris]");
    if (solver.amp.iterations < 1) throw ConfigValueError("[solver] amp_iterations: must be at least 1");
    if (!(solver.amp.damping > 0.0) || solver.amp.damping > 1.0)
        throw ConfigValueError("[solver] amp_damping: must lie in (0, 1]");
    if (!(solver.amp.threshold >= 0.0)) throw ConfigValueError("[solver] amp_threshold: must be non-negative");
    if (experiment.n_trials < 1) throw ConfigValueError("[experiment] n_trials: must be at least 1");
    if (experiment.sweep == SweepVariable::RisPosition && experiment.positions.empty())
        throw ConfigValueError("[experiment] positions: required for ris_position sweeps");
    const auto& l = experiment.lattice;
    if (l.nx < 1 || l.ny < 1) throw ConfigValueError("[experiment] lattice_nx/lattice_ny: must be at least 1");
    if (!(l.x_max >= l.x_min) || !(l.y_max >= l.y_min))
        throw ConfigValueError("[experiment] lattice bounds: max must not be below min");
    check("[experiment] values", [&] { sweep_spec().validate(); });
    if (output.prefix.empty()) throw ConfigValueError("[output] prefix: must not be empty");
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigFileError("cannot open config file '" + path.string() + "'");
    return from_tree(read_tree(in));
}

RunConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return from_tree(read_tree(in));
}

std::string echo_config(const RunConfig& c) {
    std::ostringstream o;
    o << "[scene]\n"
      << "bs = " << format_point(c.scene.bs) << "\n"
      << "ris = " << format_point(c.scene.ris) << "\n"
      << "ue = " << format_point(c.scene.ue) << "\n"
      << "scatterers_br = " << format_points(c.scene.scatterers_br) << "\n"
      << "scatterers_rm = " << format_points(c.scene.scatterers_rm) << "\n\n"
      << "[arrays]\n"
      << "n_bs = " << c.arrays.n_bs << "\n"
      << "n_ue = " << c.arrays.n_ue << "\n"
      << "n_ris = " << c.arrays.n_ris << "\n"
      << "spacing = " << format_double(c.arrays.spacing) << "\n\n"
      << "[waveform]\n"
      << "carrier_hz = " << format_double(c.waveform.carrier_hz) << "\n"
      << "bandwidth_hz = " << format_double(c.waveform.bandwidth_hz) << "\n"
      << "n_subcarriers = " << c.waveform.n_subcarriers << "\n"
      << "n_blocks = " << c.waveform.n_blocks << "\n"
      << "n_stage1_symbols = " << c.waveform.n_stage1_symbols << "\n"
      << "transmit_energy = " << format_double(c.waveform.transmit_energy) << "\n"
      << "snr_db = " << format_doubles(c.snr_db) << "\n"
      << "reflection_loss_db = " << format_double(c.waveform.reflection_loss_db) << "\n\n"
      << "[solver]\n"
      << "solvers = ";
    for (std::size_t i = 0; i < c.solvers.size(); ++i) o << (i ? ", " : "") << solver_name(c.solvers[i]);
    o << "\n"
      << "max_iterations = " << c.solver.max_iterations << "\n"
      << "tolerance = " << format_double(c.solver.tolerance) << "\n"
      << "toa_grid_oversampling = " << c.solver.toa_grid_oversampling << "\n"
      << "omp_atoms = " << c.solver.omp_atoms << "\n"
      << "amp_iterations = " << c.solver.amp.iterations << "\n"
      << "amp_damping = " << format_double(c.solver.amp.damping) << "\n"
      << "amp_threshold = " << format_double(c.solver.amp.threshold) << "\n\n"
      << "[experiment]\n"
      << "sweep = " << sweep_variable_name(c.experiment.sweep) << "\n"
      << "values = " << format_doubles(c.experiment.values) << "\n"
      << "positions = " << format_points(c.experiment.positions) << "\n"
      << "n_trials = " << c.experiment.n_trials << "\n"
      << "seed = " << c.experiment.seed << "\n"
      << "lattice_x_min = " << format_double(c.experiment.lattice.x_min) << "\n"
      << "lattice_x_max = " << format_double(c.experiment.lattice.x_max) << "\n"
      << "lattice_y_min = " << format_double(c.experiment.lattice.y_min) << "\n"
      << "lattice_y_max = " << format_double(c.experiment.lattice.y_max) << "\n"
      << "lattice_nx = " << c.experiment.lattice.nx << "\n"
      << "lattice_ny = " << c.experiment.lattice.ny << "\n\n"
      << "[output]\n"
      << "directory = " << c.output.directory << "\n"
      << "prefix = " << c.output.prefix << "\n";
    return o.str();
}

} // namespace rislocate
