#include "qcnhc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcnhc {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        parse_fail(line, "key '" + key + "': not a number: '" + v + "'");
    }
}

long to_long(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long n = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return n;
    } catch (...) {
        parse_fail(line, "key '" + key + "': not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    parse_fail(line, "key '" + key + "': not a boolean: '" + v + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void apply_key(EnsembleConfig& c, const std::string& key, const std::string& val,
               int line) {
    if (key == "preset") {
        try {
            apply_preset(c, val);
        } catch (const std::exception& e) {
            parse_fail(line, e.what());
        }
    } else if (key == "scheme") {
        try {
            c.integ.scheme = scheme_from_string(val);
        } catch (const std::exception& e) {
            parse_fail(line, e.what());
        }
    } else if (key == "mode") {
        try {
            c.mode = mode_from_string(val);
        } catch (const std::exception& e) {
            parse_fail(line, e.what());
        }
    } else if (key == "n_traj") {
        c.n_traj = to_long(val, line, key);
    } else if (key == "t_max") {
        c.t_max = to_double(val, line, key);
    } else if (key == "dt") {
        c.integ.dt = to_double(val, line, key);
    } else if (key == "n_output") {
        c.n_output = static_cast<int>(to_long(val, line, key));
    } else if (key == "max_hops") {
        c.max_hops = static_cast<int>(to_long(val, line, key));
    } else if (key == "master_seed") {
        c.master_seed = static_cast<std::uint64_t>(to_long(val, line, key));
    } else if (key == "omega") {
        c.params.omega = to_double(val, line, key);
    } else if (key == "kondo") {
        c.params.kondo = to_double(val, line, key);
    } else if (key == "beta") {
        c.params.beta = to_double(val, line, key);
    } else if (key == "omega_max") {
        c.params.omega_max = to_double(val, line, key);
    } else if (key == "gamma_s") {
        c.params.gamma_s = to_double(val, line, key);
    } else if (key == "n_bath") {
        c.params.n_bath = static_cast<int>(to_long(val, line, key));
    } else if (key == "m_eta1") {
        c.params.m_eta1 = to_double(val, line, key);
    } else if (key == "m_eta2") {
        c.params.m_eta2 = to_double(val, line, key);
    } else if (key == "bath_kt") {
        // "match" resolves to the width-matched surrogate temperature once
        // beta and omega_max are known (deferred to validation time via a
        // sentinel); a number pins it directly, 0 disables.
        if (val == "match")
            c.params.bath_kt = -1.0;
        else
            c.params.bath_kt = to_double(val, line, key);
    } else if (key == "tau") {
        c.tau = to_double(val, line, key);
    } else if (key == "zeta") {
        c.integ.zeta = to_double(val, line, key);
    } else if (key == "n_respa") {
        c.integ.n_respa = static_cast<int>(to_long(val, line, key));
    } else if (key == "populations_only") {
        c.populations_only = to_bool(val, line, key);
    } else if (key == "workers") {
        c.n_workers = static_cast<int>(to_long(val, line, key));
    } else {
        parse_fail(line, "unknown key '" + key + "'");
    }
}

}  // namespace

EnsembleConfig parse_config(const std::string& text) {
    EnsembleConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) parse_fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) parse_fail(line, "expected 'key = value'");
        apply_key(cfg, key, val, line);
    }
    if (cfg.params.bath_kt < 0.0)
        cfg.params.bath_kt =
            width_matched_bath_kt(cfg.params.beta, cfg.params.omega_max);
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

EnsembleConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const EnsembleConfig& cfg) {
    std::ostringstream out;
    out << "scheme = " << to_string(cfg.integ.scheme) << "\n"
        << "mode = " << to_string(cfg.mode) << "\n"
        << "n_traj = " << cfg.n_traj << "\n"
        << "t_max = " << fmt(cfg.t_max) << "\n"
        << "dt = " << fmt(cfg.integ.dt) << "\n"
        << "n_output = " << cfg.n_output << "\n"
        << "max_hops = " << cfg.max_hops << "\n"
        << "master_seed = " << cfg.master_seed << "\n"
        << "omega = " << fmt(cfg.params.omega) << "\n"
        << "kondo = " << fmt(cfg.params.kondo) << "\n"
        << "beta = " << fmt(cfg.params.beta) << "\n"
        << "omega_max = " << fmt(cfg.params.omega_max) << "\n"
        << "gamma_s = " << fmt(cfg.params.gamma_s) << "\n"
        << "n_bath = " << cfg.params.n_bath << "\n"
        << "m_eta1 = " << fmt(cfg.params.m_eta1) << "\n"
        << "m_eta2 = " << fmt(cfg.params.m_eta2) << "\n"
        << "bath_kt = " << fmt(cfg.params.bath_kt) << "\n"
        << "tau = " << fmt(cfg.tau) << "\n"
        << "zeta = " << fmt(cfg.integ.zeta) << "\n"
        << "n_respa = " << cfg.integ.n_respa << "\n"
        << "populations_only = " << (cfg.populations_only ? "true" : "false") << "\n"
        << "workers = " << cfg.n_workers << "\n";
    return out.str();
}

void apply_preset(EnsembleConfig& cfg, const std::string& name) {
    cfg.params.omega = 1.0 / 3.0;
    cfg.params.omega_max = 3.0;
    cfg.params.gamma_s = 0.0;
    cfg.params.n_bath = 1;
    cfg.integ.scheme = Scheme::nhc;
    cfg.integ.dt = 0.01;
    cfg.t_max = 10.0;
    cfg.n_output = 200;
    cfg.max_hops = 6;
    if (name == "fig1") {
        cfg.params.beta = 0.3;
        cfg.params.kondo = 0.007;
        cfg.mode = Mode::adiabatic;
        cfg.n_traj = 10000;
    } else if (name == "fig2") {
        cfg.params.beta = 3.0;
        cfg.params.kondo = 0.1;
        cfg.mode = Mode::adiabatic;
        cfg.n_traj = 10000;
    } else if (name == "fig3") {
        cfg.params.beta = 0.3;
        cfg.params.kondo = 0.007;
        cfg.mode = Mode::nonadiabatic;
        cfg.n_traj = 100000;
    } else if (name == "fig4") {
        cfg.params.beta = 3.0;
        cfg.params.kondo = 0.1;
        cfg.mode = Mode::nonadiabatic;
        cfg.n_traj = 100000;
    } else if (name == "fig5") {
        cfg.params.beta = 3.0;
        cfg.params.kondo = 0.1;
        cfg.params.gamma_s = cfg.params.omega / 3.0;
        cfg.mode = Mode::adiabatic;
        cfg.n_traj = 10000;
        cfg.t_max = 40.0;
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (expected fig1..fig5)");
    }
    // Presets default to the single-oscillator thermostatted back-end:
    // prepare and thermostat it at the width-matched temperature and use a
    // chain timescale short enough to decorrelate the oscillator within its
    // own period.  The many-oscillator reference variant clears both.
    cfg.params.bath_kt =
        width_matched_bath_kt(cfg.params.beta, cfg.params.omega_max);
    cfg.tau = 0.1;
}

std::vector<std::pair<std::string, EnsembleConfig>> preset_variants(
    const std::string& name) {
    EnsembleConfig base;
    apply_preset(base, name);
    std::vector<std::pair<std::string, EnsembleConfig>> out;

    EnsembleConfig nve = base;
    nve.integ.scheme = Scheme::nve;
    nve.params.n_bath = 200;
    nve.params.bath_kt = 0.0;  // reference bath: Wigner sampling at 1/beta
    out.emplace_back("nve", nve);

    EnsembleConfig nhc = base;
    nhc.integ.scheme = Scheme::nhc;
    nhc.params.n_bath = 1;
    out.emplace_back("nhc", nhc);

    if (name != "fig5") {
        EnsembleConfig bd = base;
        bd.integ.scheme = Scheme::bd;
        bd.params.n_bath = 1;
        bd.integ.zeta = 1.0;
        out.emplace_back("bd", bd);
    }
    return out;
}

std::string make_manifest(const EnsembleConfig& cfg, const ObservableSeries& series,
                          double wall_seconds) {
    double max_imag_z = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series.imag_stderror[k] > 0.0)
            max_imag_z = std::max(max_imag_z,
                                  std::abs(series.imag_mean[k]) /
                                      series.imag_stderror[k]);
    }
    std::ostringstream out;
    out << "# qcnhc manifest, version 1\n"
        << "# wall_seconds: " << fmt(wall_seconds) << "\n"
        << "# aborted_fraction: " << fmt(series.aborted_fraction) << "\n"
        << "# capped_fraction: " << fmt(series.capped_fraction) << "\n"
        << "# max_drift: " << fmt(series.max_drift) << "\n"
        << "# max_hop_error: " << fmt(series.max_hop_error) << "\n"
        << "# max_imag_z: " << fmt(max_imag_z) << "\n"
        << serialize_config(cfg);
    return out.str();
}

std::string manifest_path_for(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    const auto slash = csv_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return csv_path + ".manifest";
    return csv_path.substr(0, dot) + ".manifest";
}

void write_series(const ObservableSeries& series, const std::string& manifest,
                  const std::string& path) {
    {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write: " + path);
        out << "t,mean,stderr,n_effective\n";
        for (std::size_t k = 0; k < series.size(); ++k)
            out << fmt(series.times[k]) << ',' << fmt(series.mean[k]) << ','
                << fmt(series.stderror[k]) << ',' << series.n_effective[k] << "\n";
        if (!out) throw std::runtime_error("write failed: " + path);
    }
    const std::string mpath = manifest_path_for(path);
    std::ofstream mout(mpath);
    if (!mout) throw std::runtime_error("cannot write: " + mpath);
    mout << manifest;
    if (!mout) throw std::runtime_error("write failed: " + mpath);
}

ObservableSeries read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,mean,stderr,n_effective")
        throw std::runtime_error("bad CSV header in " + path);
    ObservableSeries s;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        double t, mean, err;
        long n;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%ld", &t, &mean, &err, &n) != 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": bad CSV row");
        s.times.push_back(t);
        s.mean.push_back(mean);
        s.stderror.push_back(err);
        s.imag_mean.push_back(0.0);
        s.imag_stderror.push_back(0.0);
        s.n_effective.push_back(n);
    }
    return s;
}

}  // namespace qcnhc
