#include "pzbeam/pzbeam.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pzbeam/fem.hpp"
#include "pzbeam/materials.hpp"
#include "pzbeam/modal.hpp"
#include "pzbeam/section.hpp"

struct pzb_material_db {
    pzbeam::MaterialDb db;
    std::vector<std::string> names; // sorted, stable storage for _name()
};

struct pzb_model {
    pzbeam::Layup layup;
    pzbeam::Section section;
};

namespace {

thread_local std::string g_last_error;

pzb_status set_error(pzb_status status, const std::string& msg) {
    g_last_error = msg;
    return status;
}

template <typename Fn>
pzb_status guarded(pzb_status failure_code, Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return set_error(PZB_ERR_INVALID, e.what());
    } catch (const std::runtime_error& e) {
        return set_error(failure_code, e.what());
    } catch (const std::exception& e) {
        return set_error(PZB_ERR_INTERNAL, e.what());
    }
}

pzbeam::ModalResult to_cpp(const pzb_mode& m) {
    pzbeam::ModalResult r;
    r.m = m.m;
    r.symmetry = m.symmetric ? pzbeam::Symmetry::Symmetric : pzbeam::Symmetry::Antisymmetric;
    r.omega = m.omega;
    r.freq_hz = m.freq_hz;
    r.n1 = m.n1;
    r.n3 = m.n3;
    r.alpha2 = m.alpha2;
    r.beta4 = m.beta4;
    r.b1 = m.b1;
    r.b2 = m.b2;
    r.b3 = m.b3;
    r.b4 = m.b4;
    r.length = m.length;
    return r;
}

void to_c(const pzbeam::ModalResult& r, pzb_mode* out) {
    out->m = r.m;
    out->symmetric = r.symmetry == pzbeam::Symmetry::Symmetric ? 1 : 0;
    out->omega = r.omega;
    out->freq_hz = r.freq_hz;
    out->n1 = r.n1;
    out->n3 = r.n3;
    out->alpha2 = r.alpha2;
    out->beta4 = r.beta4;
    out->b1 = r.b1;
    out->b2 = r.b2;
    out->b3 = r.b3;
    out->b4 = r.b4;
    out->length = r.length;
}

std::vector<double> flexural_freqs(const pzb_model* model, int n_elems, int include_rho1,
                                   int k) {
    pzbeam::FemOptions opts;
    opts.n_elems = n_elems;
    opts.include_rho1 = include_rho1 != 0;
    const pzbeam::FemModel fem = pzbeam::assemble(model->layup, model->section, opts);
    const auto modes = pzbeam::solve_modes(fem, k + 8);
    std::vector<double> out;
    for (const auto& md : modes)
        if (md.cls != pzbeam::ModeClass::Axial && int(out.size()) < k)
            out.push_back(md.freq_hz);
    if (int(out.size()) < k)
        throw std::runtime_error("fewer flexural modes available than requested");
    return out;
}

} // namespace

extern "C" {

const char* pzb_status_name(pzb_status status) {
    switch (status) {
        case PZB_OK: return "ok";
        case PZB_ERR_IO: return "io error";
        case PZB_ERR_PARSE: return "parse error";
        case PZB_ERR_INVALID: return "invalid argument";
        case PZB_ERR_NOT_FOUND: return "not found";
        case PZB_ERR_NO_COUPLING: return "no piezoelectric coupling";
        case PZB_ERR_SOLVER: return "solver failure";
        case PZB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* pzb_last_error(void) { return g_last_error.c_str(); }

pzb_status pzb_material_db_load(const char* path, pzb_material_db** out) {
    if (!path || !out) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_PARSE, [&] {
        std::ifstream probe(path);
        if (!probe) return set_error(PZB_ERR_IO, std::string("cannot open '") + path + "'");
        auto db = std::make_unique<pzb_material_db>();
        db->db = pzbeam::load_materials(path);
        for (const auto& [name, mat] : db->db) db->names.push_back(name);
        *out = db.release();
        return PZB_OK;
    });
}

pzb_status pzb_material_db_parse(const char* json_text, pzb_material_db** out) {
    if (!json_text || !out) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_PARSE, [&] {
        auto db = std::make_unique<pzb_material_db>();
        db->db = pzbeam::parse_materials(json_text);
        for (const auto& [name, mat] : db->db) db->names.push_back(name);
        *out = db.release();
        return PZB_OK;
    });
}

void pzb_material_db_free(pzb_material_db* db) { delete db; }

int pzb_material_db_count(const pzb_material_db* db) {
    return db ? int(db->names.size()) : 0;
}

const char* pzb_material_db_name(const pzb_material_db* db, int idx) {
    if (!db || idx < 0 || idx >= int(db->names.size())) return nullptr;
    return db->names[idx].c_str();
}

pzb_status pzb_model_create(const pzb_material_db* db, const char* piezo_name,
                            const char* substrate_name, double h1, double h2,
                            double length, pzb_model** out) {
    if (!db || !piezo_name || !substrate_name || !out)
        return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_INVALID, [&] {
        const auto pit = db->db.find(piezo_name);
        if (pit == db->db.end())
            return set_error(PZB_ERR_NOT_FOUND,
                             std::string("unknown material '") + piezo_name + "'");
        const auto sit = db->db.find(substrate_name);
        if (sit == db->db.end())
            return set_error(PZB_ERR_NOT_FOUND,
                             std::string("unknown material '") + substrate_name + "'");
        auto model = std::make_unique<pzb_model>();
        model->layup.piezo = pzbeam::reduce(pit->second, h1);
        model->layup.substrate = pzbeam::reduce(sit->second, h2);
        model->layup.length = length;
        model->layup.validate();
        model->section = pzbeam::section_properties(model->layup);
        *out = model.release();
        return PZB_OK;
    });
}

void pzb_model_free(pzb_model* model) { delete model; }

pzb_status pzb_model_set_length(pzb_model* model, double length) {
    if (!model) return set_error(PZB_ERR_INVALID, "null model");
    if (!(length > 0.0)) return set_error(PZB_ERR_INVALID, "length must be > 0");
    model->layup.length = length;
    return PZB_OK;
}

double pzb_model_length(const pzb_model* model) {
    return model ? model->layup.length : 0.0;
}

pzb_status pzb_model_section(const pzb_model* model, pzb_section* out) {
    if (!model || !out) return set_error(PZB_ERR_INVALID, "null argument");
    const pzbeam::Section& s = model->section;
    *out = pzb_section{s.z0, s.A11, s.B11, s.D11, s.F, s.rho0,
                       s.rho1, s.rho2, s.eta1, s.eta2, s.Dbar};
    return PZB_OK;
}

pzb_status pzb_mode_closed_form(const pzb_model* model, int m, pzb_mode* out) {
    if (!model || !out) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        to_c(pzbeam::frequency_closed_form(model->section, model->layup.length, m), out);
        return PZB_OK;
    });
}

pzb_status pzb_mode_sixth_order(const pzb_model* model, int m, pzb_mode* out) {
    if (!model || !out) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        to_c(pzbeam::frequency_sixth_order(model->section, model->layup.length, m), out);
        return PZB_OK;
    });
}

pzb_status pzb_mode_shape(const pzb_mode* mode, double x, double* w_out) {
    if (!mode || !w_out) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        *w_out = pzbeam::mode_shape(to_cpp(*mode), x);
        return PZB_OK;
    });
}

pzb_status pzb_electric_profile(const pzb_model* model, const pzb_mode* mode,
                                int n_samples, double* phi_out) {
    if (!model || !mode || !phi_out) return set_error(PZB_ERR_INVALID, "null argument");
    if (model->section.F == 0.0)
        return set_error(PZB_ERR_NO_COUPLING, "electric profile needs F != 0");
    return guarded(PZB_ERR_SOLVER, [&] {
        const auto p = pzbeam::electric_profile(to_cpp(*mode), model->section, n_samples);
        std::memcpy(phi_out, p.phi.data(), sizeof(double) * p.phi.size());
        return PZB_OK;
    });
}

pzb_status pzb_calibrate_length(const pzb_model* model, double target_hz, int m,
                                double* length_out) {
    if (!model || !length_out) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        *length_out = pzbeam::calibrate_length(model->section, target_hz, m);
        return PZB_OK;
    });
}

pzb_status pzb_fem_solve(const pzb_model* model, int n_elems, int include_rho1,
                         int k, pzb_fem_mode* out_modes) {
    if (!model || !out_modes) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        pzbeam::FemOptions opts;
        opts.n_elems = n_elems;
        opts.include_rho1 = include_rho1 != 0;
        const auto fem = pzbeam::assemble(model->layup, model->section, opts);
        const auto modes = pzbeam::solve_modes(fem, k);
        for (int i = 0; i < k; ++i) {
            out_modes[i].freq_hz = modes[i].freq_hz;
            out_modes[i].mode_class = int(modes[i].cls);
        }
        return PZB_OK;
    });
}

pzb_status pzb_fem_flexural(const pzb_model* model, int n_elems, int include_rho1,
                            int k, double* out_freqs) {
    if (!model || !out_freqs) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        const auto freqs = flexural_freqs(model, n_elems, include_rho1, k);
        std::memcpy(out_freqs, freqs.data(), sizeof(double) * freqs.size());
        return PZB_OK;
    });
}

pzb_status pzb_fem_convergence(const pzb_model* model, const int* meshes,
                               int n_meshes, int k, double* out_freqs) {
    if (!model || !meshes || !out_freqs) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_SOLVER, [&] {
        const std::vector<int> mesh_list(meshes, meshes + n_meshes);
        const auto rows =
            pzbeam::convergence_report(model->layup, model->section, mesh_list, k);
        for (const auto& r : rows) {
            // rows are mesh-major, mode-minor by construction
            const int mesh_idx =
                int(std::find(mesh_list.begin(), mesh_list.end(), r.n_elems) -
                    mesh_list.begin());
            out_freqs[mesh_idx * k + (r.mode - 1)] = r.freq_hz;
        }
        return PZB_OK;
    });
}

pzb_status pzb_fem_dump_matrices(const pzb_model* model, int n_elems,
                                 const char* path_prefix) {
    if (!model || !path_prefix) return set_error(PZB_ERR_INVALID, "null argument");
    return guarded(PZB_ERR_IO, [&] {
        pzbeam::FemOptions opts;
        opts.n_elems = n_elems;
        const auto fem = pzbeam::assemble(model->layup, model->section, opts);
        const std::string prefix(path_prefix);
        std::ofstream kf(prefix + "K.txt"), mf(prefix + "M.txt");
        if (!kf || !mf)
            throw std::runtime_error("cannot open matrix dump files at prefix '" + prefix + "'");
        pzbeam::dump_matrix(kf, fem.K);
        pzbeam::dump_matrix(mf, fem.M);
        return PZB_OK;
    });
}

} // extern "C"
