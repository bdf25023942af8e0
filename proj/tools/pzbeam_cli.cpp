// Command-line front end. Deliberately linked against the C API only.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pzbeam/pzbeam.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kTwoPi = 6.283185307179586476925;

// Locale-independent scientific format, 9 significant digits.
std::string fnum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

[[noreturn]] void die(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(1);
}

void check(pzb_status st, const std::string& what) {
    if (st != PZB_OK) die(what + ": " + pzb_last_error());
}

struct SweepConfig {
    double ratio_min = 0.2;
    double ratio_max = 1.4;
    int steps = 13;
    std::string vary = "h1_fixed_h2"; // or "fixed_total"
};

struct RunConfig {
    std::string materials;
    std::string piezo;
    std::string substrate;
    double h1 = 0.0, h2 = 0.0;
    std::optional<double> length;
    std::optional<double> calibrate_hz;
    std::vector<int> modes;
    std::vector<double> reference_hz;
    bool fem_enabled = false;
    int fem_n_elems = 128;
    bool fem_include_rho1 = false;
    std::vector<int> fem_meshes = {16, 32, 64, 128};
    std::optional<SweepConfig> sweep;
    std::string out_csv;
    std::string out_json;
    ordered_json echo; // raw config for the report
};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) die("cannot open config file '" + path + "'");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        die("config parse failure: " + std::string(e.what()));
    }

    RunConfig c;
    c.echo = doc;
    try {
        c.materials = doc.at("materials").get<std::string>();
        c.piezo = doc.at("piezo").get<std::string>();
        c.substrate = doc.at("substrate").get<std::string>();
        c.h1 = doc.at("h1").get<double>();
        c.h2 = doc.at("h2").get<double>();
        if (doc.contains("L")) c.length = doc.at("L").get<double>();
        if (doc.contains("calibrate")) c.calibrate_hz = doc.at("calibrate").get<double>();
        if (doc.contains("modes")) c.modes = doc.at("modes").get<std::vector<int>>();
        if (doc.contains("reference_hz"))
            c.reference_hz = doc.at("reference_hz").get<std::vector<double>>();
        if (doc.contains("fem")) {
            const auto& f = doc.at("fem");
            c.fem_enabled = f.value("enabled", false);
            c.fem_n_elems = f.value("n_elems", 128);
            c.fem_include_rho1 = f.value("include_rho1", false);
            if (f.contains("meshes")) c.fem_meshes = f.at("meshes").get<std::vector<int>>();
        }
        if (doc.contains("sweep")) {
            const auto& s = doc.at("sweep");
            SweepConfig sc;
            sc.ratio_min = s.value("ratio_min", 0.2);
            sc.ratio_max = s.value("ratio_max", 1.4);
            sc.steps = s.value("steps", 13);
            sc.vary = s.value("vary", std::string("h1_fixed_h2"));
            c.sweep = sc;
        }
        if (doc.contains("output")) {
            const auto& o = doc.at("output");
            c.out_csv = o.value("csv", std::string());
            c.out_json = o.value("json", std::string());
        }
    } catch (const std::exception& e) {
        die("config field error: " + std::string(e.what()));
    }

    if (!(c.h1 > 0.0)) die("config field 'h1' must be > 0");
    if (!(c.h2 > 0.0)) die("config field 'h2' must be > 0");
    if (!c.length && !c.calibrate_hz) die("config needs either 'L' or 'calibrate'");
    if (c.calibrate_hz && !(*c.calibrate_hz > 0.0))
        die("config field 'calibrate' must be > 0");
    if (c.sweep) {
        if (!(c.sweep->ratio_min < c.sweep->ratio_max))
            die("config sweep: ratio_min must be < ratio_max");
        if (c.sweep->steps < 2) die("config sweep: steps must be >= 2");
        if (c.sweep->vary != "h1_fixed_h2" && c.sweep->vary != "fixed_total")
            die("config sweep: vary must be 'h1_fixed_h2' or 'fixed_total'");
    }
    return c;
}

struct Session {
    pzb_material_db* db = nullptr;
    pzb_model* model = nullptr;
    double length = 0.0;

    ~Session() {
        pzb_model_free(model);
        pzb_material_db_free(db);
    }
};

// Loads materials, builds the model, resolves the length (calibrating if
// requested).
void open_session(const RunConfig& c, Session& s) {
    check(pzb_material_db_load(c.materials.c_str(), &s.db), "loading materials");
    const double initial_length = c.length ? *c.length : 1e-3;
    check(pzb_model_create(s.db, c.piezo.c_str(), c.substrate.c_str(), c.h1, c.h2,
                           initial_length, &s.model),
          "building model");
    if (c.calibrate_hz) {
        check(pzb_calibrate_length(s.model, *c.calibrate_hz, 1, &s.length),
              "calibrating length");
        check(pzb_model_set_length(s.model, s.length), "setting length");
    } else {
        s.length = *c.length;
    }
}

ordered_json section_json(const pzb_model* model) {
    pzb_section s{};
    check(pzb_model_section(model, &s), "reading section");
    ordered_json j;
    j["z0"] = s.z0;
    j["A11"] = s.A11;
    j["B11"] = s.B11;
    j["D11"] = s.D11;
    j["F"] = s.F;
    j["rho0"] = s.rho0;
    j["rho1"] = s.rho1;
    j["rho2"] = s.rho2;
    j["eta1"] = s.eta1;
    j["eta2"] = s.eta2;
    j["Dbar"] = s.Dbar;
    return j;
}

void write_file(const std::string& path, const std::string& body) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) die("cannot write '" + path + "'");
    out << body;
}

void write_json_report(const std::string& path, ordered_json& report,
                       const RunConfig& c, const Session& s, bool rad) {
    if (path.empty()) return;
    ordered_json doc;
    doc["config"] = c.echo;
    doc["length"] = s.length;
    doc["frequency_unit"] = rad ? "rad/s" : "Hz";
    doc["section"] = section_json(s.model);
    for (auto& [key, value] : report.items()) doc[key] = value;
    write_file(path, doc.dump(2) + "\n");
}

double unit(double freq_hz, bool rad) { return rad ? freq_hz * kTwoPi : freq_hz; }

struct ModeRow {
    pzb_mode closed{};
    pzb_mode sixth{};
    double fem_hz = 0.0;
};

std::vector<ModeRow> compute_modes(const RunConfig& c, const Session& s) {
    if (c.modes.empty()) die("config field 'modes' must be a non-empty list");
    std::vector<ModeRow> rows(c.modes.size());
    for (size_t i = 0; i < c.modes.size(); ++i) {
        check(pzb_mode_closed_form(s.model, c.modes[i], &rows[i].closed), "closed form");
        check(pzb_mode_sixth_order(s.model, c.modes[i], &rows[i].sixth), "sixth order");
    }
    if (c.fem_enabled) {
        const int kmax = *std::max_element(c.modes.begin(), c.modes.end());
        std::vector<double> fem(kmax);
        check(pzb_fem_flexural(s.model, c.fem_n_elems, c.fem_include_rho1 ? 1 : 0, kmax,
                               fem.data()),
              "fem solve");
        for (size_t i = 0; i < c.modes.size(); ++i) rows[i].fem_hz = fem[c.modes[i] - 1];
    }
    return rows;
}

int cmd_freq(const RunConfig& c, bool rad) {
    Session s;
    open_session(c, s);
    const auto rows = compute_modes(c, s);

    const std::string suffix = rad ? "_rad_s" : "_hz";
    std::ostringstream csv;
    csv << "m,symmetry,f_closed" << suffix << ",f_sixth" << suffix;
    if (c.fem_enabled) csv << ",f_fem" << suffix;
    csv << ",rel_sixth_vs_closed";
    if (c.fem_enabled) csv << ",rel_fem_vs_closed";
    csv << "\n";

    ordered_json jmodes = ordered_json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string sym = r.closed.symmetric ? "symmetric" : "antisymmetric";
        const double fc = unit(r.closed.freq_hz, rad), f6 = unit(r.sixth.freq_hz, rad);
        csv << r.closed.m << "," << sym << "," << fnum(fc) << "," << fnum(f6);
        if (c.fem_enabled) csv << "," << fnum(unit(r.fem_hz, rad));
        csv << "," << fnum((f6 - fc) / fc);
        if (c.fem_enabled) csv << "," << fnum((unit(r.fem_hz, rad) - fc) / fc);
        csv << "\n";

        ordered_json jm;
        jm["m"] = r.closed.m;
        jm["symmetry"] = sym;
        jm["f_closed"] = fc;
        jm["f_sixth"] = f6;
        if (c.fem_enabled) jm["f_fem"] = unit(r.fem_hz, rad);
        jm["rel_sixth_vs_closed"] = (f6 - fc) / fc;
        if (c.fem_enabled) jm["rel_fem_vs_closed"] = (unit(r.fem_hz, rad) - fc) / fc;
        jm["n1"] = r.closed.n1;
        jm["n3"] = r.closed.n3;
        jmodes.push_back(jm);
    }
    std::cout << csv.str();
    write_file(c.out_csv, csv.str());
    ordered_json rep;
    rep["modes"] = jmodes;
    write_json_report(c.out_json, rep, c, s, rad);
    return 0;
}

int cmd_compare(const RunConfig& c, const std::vector<double>& ref_cli, bool rad) {
    Session s;
    open_session(c, s);
    const auto rows = compute_modes(c, s);
    const std::vector<double>& ref = ref_cli.empty() ? c.reference_hz : ref_cli;
    if (ref.empty()) die("compare needs reference frequencies ('reference_hz' or --ref)");
    if (ref.size() != rows.size())
        die("reference list length (" + std::to_string(ref.size()) +
            ") does not match the mode list (" + std::to_string(rows.size()) + ")");

    // Error column convention of the source data: |f_model - f_ref| / f_model.
    std::ostringstream csv;
    const std::string suffix = rad ? "_rad_s" : "_hz";
    csv << "m,f_model" << suffix << ",f_ref" << suffix << ",error_pct\n";
    ordered_json jrows = ordered_json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        const double fm = unit(rows[i].closed.freq_hz, rad);
        const double fr = unit(ref[i], rad);
        const double err = std::abs(fm - fr) / fm * 100.0;
        csv << rows[i].closed.m << "," << fnum(fm) << "," << fnum(fr) << "," << fnum(err)
            << "\n";
        ordered_json j;
        j["m"] = rows[i].closed.m;
        j["f_model"] = fm;
        j["f_ref"] = fr;
        j["error_pct"] = err;
        jrows.push_back(j);
    }
    std::cout << csv.str();
    write_file(c.out_csv, csv.str());
    ordered_json rep;
    rep["comparison"] = jrows;
    write_json_report(c.out_json, rep, c, s, rad);
    return 0;
}

int cmd_sweep(const RunConfig& c, bool rad) {
    if (!c.sweep) die("config has no 'sweep' block");
    Session s;
    open_session(c, s);
    const SweepConfig& sw = *c.sweep;
    const double total = c.h1 + c.h2;

    std::ostringstream csv;
    const std::string suffix = rad ? "_rad_s" : "_hz";
    csv << "ratio,f1_analytic" << suffix << ",f1_fem" << suffix << ",rel_diff\n";
    ordered_json jrows = ordered_json::array();
    for (int i = 0; i < sw.steps; ++i) {
        const double ratio =
            sw.ratio_min + (sw.ratio_max - sw.ratio_min) * double(i) / (sw.steps - 1);
        double h1, h2;
        if (sw.vary == "h1_fixed_h2") {
            h2 = c.h2;
            h1 = ratio * h2;
        } else {
            h2 = total / (1.0 + ratio);
            h1 = total - h2;
        }
        pzb_model* point = nullptr;
        check(pzb_model_create(s.db, c.piezo.c_str(), c.substrate.c_str(), h1, h2,
                               s.length, &point),
              "building sweep model");
        pzb_mode mode{};
        double fem = 0.0;
        const pzb_status st1 = pzb_mode_closed_form(point, 1, &mode);
        const pzb_status st2 =
            pzb_fem_flexural(point, c.fem_n_elems, c.fem_include_rho1 ? 1 : 0, 1, &fem);
        pzb_model_free(point);
        if (st1 != PZB_OK || st2 != PZB_OK)
            die("sweep failed at ratio " + fnum(ratio) + ": " + pzb_last_error());
        const double fa = unit(mode.freq_hz, rad), ff = unit(fem, rad);
        csv << fnum(ratio) << "," << fnum(fa) << "," << fnum(ff) << ","
            << fnum((ff - fa) / fa) << "\n";
        ordered_json j;
        j["ratio"] = ratio;
        j["f1_analytic"] = fa;
        j["f1_fem"] = ff;
        j["rel_diff"] = (ff - fa) / fa;
        jrows.push_back(j);
    }
    std::cout << csv.str();
    write_file(c.out_csv, csv.str());
    ordered_json rep;
    rep["sweep"] = jrows;
    write_json_report(c.out_json, rep, c, s, rad);
    return 0;
}

int cmd_calibrate(const RunConfig& c, bool rad) {
    if (!c.calibrate_hz) die("config has no 'calibrate' target frequency");
    Session s;
    open_session(c, s);
    std::cout << "calibrated_length," << fnum(s.length) << "\n";
    ordered_json rep;
    rep["target_hz"] = *c.calibrate_hz;
    rep["calibrated_length"] = s.length;
    write_json_report(c.out_json, rep, c, s, rad);
    if (!c.out_csv.empty())
        write_file(c.out_csv, "calibrated_length\n" + fnum(s.length) + "\n");
    return 0;
}

int cmd_fem_report(const RunConfig& c, const std::string& dump_prefix, bool rad) {
    Session s;
    open_session(c, s);
    const int k = c.modes.empty() ? 3 : int(c.modes.size());
    const int nm = int(c.fem_meshes.size());
    std::vector<double> freqs(size_t(nm) * k);
    check(pzb_fem_convergence(s.model, c.fem_meshes.data(), nm, k, freqs.data()),
          "fem convergence");

    std::ostringstream csv;
    const std::string suffix = rad ? "_rad_s" : "_hz";
    csv << "n_elems,mode,freq" << suffix << ",rel_change\n";
    ordered_json jrows = ordered_json::array();
    for (int mi = 0; mi < nm; ++mi) {
        for (int j = 0; j < k; ++j) {
            const double f = unit(freqs[size_t(mi) * k + j], rad);
            double rel = 0.0;
            if (mi > 0) {
                const double p = unit(freqs[size_t(mi - 1) * k + j], rad);
                rel = (f - p) / p;
            }
            csv << c.fem_meshes[mi] << "," << (j + 1) << "," << fnum(f) << ","
                << fnum(rel);
            if (mi > 0 && rel > 0.0) csv << ",non-monotone";
            csv << "\n";
            ordered_json row;
            row["n_elems"] = c.fem_meshes[mi];
            row["mode"] = j + 1;
            row["freq"] = f;
            row["rel_change"] = rel;
            jrows.push_back(row);
        }
    }
    std::cout << csv.str();
    write_file(c.out_csv, csv.str());
    ordered_json rep;
    rep["convergence"] = jrows;
    write_json_report(c.out_json, rep, c, s, rad);

    if (!dump_prefix.empty())
        check(pzb_fem_dump_matrices(s.model, c.fem_n_elems, dump_prefix.c_str()),
              "matrix dump");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modal analysis of an asymmetric piezoelectric composite beam"};
    app.require_subcommand(1);

    std::string config_path, out_csv, out_json, ref_str, dump_prefix;
    bool rad = false;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out-csv", out_csv, "override CSV output path");
    app.add_option("--out-json", out_json, "override JSON report path");
    app.add_flag("--rad", rad, "report angular frequencies (rad/s) instead of Hz");

    auto* freq = app.add_subcommand("freq", "per-mode frequency table");
    auto* compare = app.add_subcommand("compare", "error table against reference data");
    compare->add_option("--ref", ref_str, "comma-separated reference frequencies in Hz");
    auto* sweep = app.add_subcommand("sweep", "thickness-ratio sweep of the first mode");
    auto* calibrate = app.add_subcommand("calibrate", "solve for the beam length");
    auto* femrep = app.add_subcommand("fem-report", "mesh-convergence table");
    femrep->add_option("--dump-matrices", dump_prefix,
                       "write K/M triplet dumps with this path prefix");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg = load_config(config_path);
    if (!out_csv.empty()) cfg.out_csv = out_csv;
    if (!out_json.empty()) cfg.out_json = out_json;

    std::vector<double> ref_cli;
    if (!ref_str.empty()) {
        std::stringstream ss(ref_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) ref_cli.push_back(std::stod(tok));
    }

    if (freq->parsed()) return cmd_freq(cfg, rad);
    if (compare->parsed()) return cmd_compare(cfg, ref_cli, rad);
    if (sweep->parsed()) return cmd_sweep(cfg, rad);
    if (calibrate->parsed()) return cmd_calibrate(cfg, rad);
    if (femrep->parsed()) return cmd_fem_report(cfg, dump_prefix, rad);
    return 1;
}
