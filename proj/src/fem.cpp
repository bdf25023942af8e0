#include "pzbeam/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace pzbeam {

int FemModel::dofs_per_node() const {
    return (opts.include_axial ? 1 : 0) + 2 + ((has_phi && !condensed) ? 1 : 0);
}

int FemModel::dof_u(int node) const {
    return opts.include_axial ? node * dofs_per_node() : -1;
}

int FemModel::dof_w(int node) const {
    return node * dofs_per_node() + (opts.include_axial ? 1 : 0);
}

int FemModel::dof_t(int node) const { return dof_w(node) + 1; }

int FemModel::dof_phi(int node) const {
    return (has_phi && !condensed) ? dof_t(node) + 1 : -1;
}

double FemModel::node_x(int node) const {
    return length * (double(node) / (n_nodes - 1) - 0.5);
}

std::vector<int> FemModel::fixed_dofs() const {
    std::vector<int> fixed;
    fixed.push_back(dof_w(0));
    fixed.push_back(dof_w(n_nodes - 1));
    if (opts.include_axial) fixed.push_back(dof_u(0));
    std::sort(fixed.begin(), fixed.end());
    return fixed;
}

FemModel assemble(const Layup& layup, const Section& s, const FemOptions& opts) {
    layup.validate();
    if (opts.n_elems < 2)
        throw std::invalid_argument("assemble: n_elems must be >= 2");

    FemModel m;
    m.opts = opts;
    m.length = layup.length;
    m.n_nodes = opts.n_elems + 1;
    m.has_phi = layup.piezo.piezoelectric();

    const int nd = m.n_dofs();
    m.K = Eigen::MatrixXd::Zero(nd, nd);
    m.M = Eigen::MatrixXd::Zero(nd, nd);

    const double l = layup.length / opts.n_elems;
    const double h1 = layup.piezo.h;
    const double ke33 = layup.piezo.epsbar33 * h1 * h1 * h1 / 3.0;
    const double ke11 = layup.piezo.epsbar11 * std::pow(h1, 5) / 30.0;

    Eigen::Matrix2d kuu, muu, kp;
    kuu << 1, -1, -1, 1;
    kuu *= s.A11 / l;
    muu << 2, 1, 1, 2;
    muu *= s.rho0 * l / 6.0;
    // Electric-enthalpy phi block: negative definite.
    {
        Eigen::Matrix2d cmass, cgrad;
        cmass << 2, 1, 1, 2;
        cgrad << 1, -1, -1, 1;
        kp = -(ke33 * l / 6.0 * cmass + ke11 / l * cgrad);
    }

    Eigen::Matrix4d kww;
    kww << 12, 6 * l, -12, 6 * l,
        6 * l, 4 * l * l, -6 * l, 2 * l * l,
        -12, -6 * l, 12, -6 * l,
        6 * l, 2 * l * l, -6 * l, 4 * l * l;
    kww *= s.D11 / (l * l * l);

    Eigen::Matrix4d mww;
    mww << 156, 22 * l, 54, -13 * l,
        22 * l, 4 * l * l, 13 * l, -3 * l * l,
        54, 13 * l, 156, -22 * l,
        -13 * l, -3 * l * l, -22 * l, 4 * l * l;
    mww *= s.rho0 * l / 420.0;
    if (opts.include_rotary) {
        Eigen::Matrix4d mrot;
        mrot << 36, 3 * l, -36, 3 * l,
            3 * l, 4 * l * l, -3 * l, -l * l,
            -36, -3 * l, 36, -3 * l,
            3 * l, -l * l, -3 * l, 4 * l * l;
        mww += s.rho2 / (30.0 * l) * mrot;
    }

    // integral of N_w'' N_phi dx (exact, H'' linear, N_phi linear)
    Eigen::Matrix<double, 4, 2> cwp;
    cwp << -1 / l, 1 / l,
        -1, 0,
        1 / l, -1 / l,
        0, 1;
    const Eigen::Matrix<double, 4, 2> kwp = -s.F * cwp;

    // integral of N_u N_w' dx for the rho1 inertia coupling
    Eigen::Matrix<double, 2, 4> duw;
    duw << -0.5, l / 12, 0.5, -l / 12,
        -0.5, -l / 12, 0.5, l / 12;
    const Eigen::Matrix<double, 2, 4> muw = -s.rho1 * duw;

    for (int e = 0; e < opts.n_elems; ++e) {
        const int iw[4] = {m.dof_w(e), m.dof_t(e), m.dof_w(e + 1), m.dof_t(e + 1)};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                m.K(iw[a], iw[b]) += kww(a, b);
                m.M(iw[a], iw[b]) += mww(a, b);
            }
        if (opts.include_axial) {
            const int iu[2] = {m.dof_u(e), m.dof_u(e + 1)};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    m.K(iu[a], iu[b]) += kuu(a, b);
                    m.M(iu[a], iu[b]) += muu(a, b);
                }
            if (opts.include_rho1) {
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 4; ++b) {
                        m.M(iu[a], iw[b]) += muw(a, b);
                        m.M(iw[b], iu[a]) += muw(a, b);
                    }
            }
        }
        if (m.has_phi) {
            const int ip[2] = {m.dof_phi(e), m.dof_phi(e + 1)};
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) m.K(ip[a], ip[b]) += kp(a, b);
                for (int b = 0; b < 4; ++b) {
                    m.K(iw[b], ip[a]) += kwp(b, a);
                    m.K(ip[a], iw[b]) += kwp(b, a);
                }
            }
        }
    }
    return m;
}

FemModel condense_electric(const FemModel& model) {
    if (model.condensed)
        throw std::invalid_argument("condense_electric: model already condensed");

    FemModel out = model;
    out.condensed = true;
    out.mech_dofs.clear();
    out.elec_dofs.clear();
    if (!model.has_phi) {
        // Nothing to eliminate.
        out.phi_recovery.resize(0, model.n_dofs());
        for (int i = 0; i < model.n_dofs(); ++i) out.mech_dofs.push_back(i);
        return out;
    }
    for (int n = 0; n < model.n_nodes; ++n) out.elec_dofs.push_back(model.dof_phi(n));
    for (int i = 0; i < model.n_dofs(); ++i)
        if (std::find(out.elec_dofs.begin(), out.elec_dofs.end(), i) == out.elec_dofs.end())
            out.mech_dofs.push_back(i);

    const int nm = int(out.mech_dofs.size());
    const int np = int(out.elec_dofs.size());
    Eigen::MatrixXd kmm(nm, nm), kmp(nm, np), kpp(np, np), mmm(nm, nm);
    for (int a = 0; a < nm; ++a) {
        for (int b = 0; b < nm; ++b) {
            kmm(a, b) = model.K(out.mech_dofs[a], out.mech_dofs[b]);
            mmm(a, b) = model.M(out.mech_dofs[a], out.mech_dofs[b]);
        }
        for (int b = 0; b < np; ++b) kmp(a, b) = model.K(out.mech_dofs[a], out.elec_dofs[b]);
    }
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) kpp(a, b) = model.K(out.elec_dofs[a], out.elec_dofs[b]);

    // kpp is negative definite for a valid dielectric; factor its negation.
    Eigen::LLT<Eigen::MatrixXd> llt(-kpp);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("condense_electric: singular electric block "
                                 "(epsbar33 <= 0 or degenerate mesh)");

    // phi = -kpp^-1 kpm q = (-kpp)^-1 kpm q
    out.phi_recovery = llt.solve(kmp.transpose());
    out.K = kmm + kmp * out.phi_recovery; // kmm - kmp kpp^-1 kpm
    out.M = mmm;
    return out;
}

namespace {

// `v` is indexed by the model's own dof accessors (condensed layout for a
// condensed model, full layout otherwise).
ModeClass classify(const FemModel& model, const Eigen::VectorXd& v) {
    double un = 0.0, wn = 0.0;
    for (int n = 0; n < model.n_nodes; ++n) {
        if (model.opts.include_axial) un += v(model.dof_u(n)) * v(model.dof_u(n));
        wn += v(model.dof_w(n)) * v(model.dof_w(n));
    }
    if (un > wn) return ModeClass::Axial;
    double sym = 0.0, anti = 0.0;
    for (int n = 0; n < model.n_nodes; ++n) {
        const double a = v(model.dof_w(n));
        const double b = v(model.dof_w(model.n_nodes - 1 - n));
        sym += (a - b) * (a - b);
        anti += (a + b) * (a + b);
    }
    return sym <= anti ? ModeClass::FlexuralSymmetric : ModeClass::FlexuralAntisymmetric;
}

// Rows/cols of `a` restricted to `keep`.
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, const std::vector<int>& keep) {
    Eigen::MatrixXd out(keep.size(), keep.size());
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = 0; j < keep.size(); ++j) out(i, j) = a(keep[i], keep[j]);
    return out;
}

} // namespace

std::vector<FemMode> solve_modes(const FemModel& model, int k) {
    if (k < 1) throw std::invalid_argument("solve_modes: k must be >= 1");
    if (!model.condensed && model.has_phi) return solve_modes(condense_electric(model), k);

    const FemModel& m = model;
    std::vector<int> mech = m.mech_dofs;
    if (mech.empty()) {
        mech.resize(m.n_dofs());
        for (int i = 0; i < m.n_dofs(); ++i) mech[i] = i;
    }
    const int full_size = int(mech.size() + m.elec_dofs.size());

    // fixed_dofs() is expressed in the model's own (mech-position) layout.
    const std::vector<int> fixed = m.fixed_dofs();
    std::vector<int> free_idx;
    for (size_t i = 0; i < mech.size(); ++i)
        if (std::find(fixed.begin(), fixed.end(), int(i)) == fixed.end())
            free_idx.push_back(int(i));

    const Eigen::MatrixXd kc = submatrix(m.K, free_idx);
    const Eigen::MatrixXd mc = submatrix(m.M, free_idx);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kc, mc);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_modes: generalized eigensolver failed to converge");

    std::vector<FemMode> modes;
    const int avail = int(es.eigenvalues().size());
    for (int i = 0; i < avail && int(modes.size()) < k; ++i) {
        const double lam = es.eigenvalues()(i);
        if (!(lam > 0.0)) continue;
        FemMode md;
        md.freq_hz = std::sqrt(lam) / (2.0 * 3.14159265358979323846);
        Eigen::VectorXd qm = Eigen::VectorXd::Zero(mech.size());
        for (size_t j = 0; j < free_idx.size(); ++j) qm(free_idx[j]) = es.eigenvectors()(j, i);
        md.cls = classify(m, qm);
        // Expand into the original (uncondensed) dof layout.
        md.shape = Eigen::VectorXd::Zero(full_size);
        for (size_t j = 0; j < mech.size(); ++j) md.shape(mech[j]) = qm(j);
        if (!m.elec_dofs.empty()) {
            const Eigen::VectorXd phi = m.phi_recovery * qm;
            for (size_t j = 0; j < m.elec_dofs.size(); ++j) md.shape(m.elec_dofs[j]) = phi(j);
        }
        modes.push_back(std::move(md));
    }
    if (int(modes.size()) < k)
        throw std::runtime_error("solve_modes: fewer positive eigenvalues than requested");
    return modes;
}

std::vector<FemMode> solve_modes_coupled(const FemModel& model, int k) {
    if (model.condensed)
        throw std::invalid_argument("solve_modes_coupled: needs the uncondensed model");
    const std::vector<int> fixed = model.fixed_dofs();
    std::vector<int> free_idx;
    for (int i = 0; i < model.n_dofs(); ++i)
        if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) free_idx.push_back(i);

    Eigen::MatrixXd kc = submatrix(model.K, free_idx);
    Eigen::MatrixXd mc = submatrix(model.M, free_idx);

    // The electric block is tens of orders smaller than the mechanical one;
    // equilibrate symmetrically before inverting.
    const int n = int(free_idx.size());
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = 1.0 / std::sqrt(std::abs(kc(i, i)));
    kc = d.asDiagonal() * kc * d.asDiagonal();
    mc = d.asDiagonal() * mc * d.asDiagonal();

    // Infinite eigenvalues of the singular-mass pencil map to mu = 0 in
    // K^-1 M x = mu x; finite ones are mu = 1/omega^2.
    const Eigen::MatrixXd a = kc.partialPivLu().solve(mc);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_modes_coupled: eigensolver failed");

    std::vector<std::pair<double, int>> mus;
    for (int i = 0; i < n; ++i) {
        const std::complex<double> mu = es.eigenvalues()(i);
        if (mu.real() > 0.0 && std::abs(mu.imag()) <= 1e-8 * std::abs(mu.real()))
            mus.emplace_back(mu.real(), i);
    }
    std::sort(mus.begin(), mus.end(), std::greater<>()); // largest mu = lowest frequency
    if (int(mus.size()) < k)
        throw std::runtime_error("solve_modes_coupled: fewer modes than requested");

    std::vector<FemMode> modes;
    for (int i = 0; i < k; ++i) {
        FemMode md;
        md.freq_hz = std::sqrt(1.0 / mus[i].first) / (2.0 * 3.14159265358979323846);
        Eigen::VectorXd v = es.eigenvectors().col(mus[i].second).real();
        v = d.asDiagonal() * v; // undo equilibration
        md.shape = Eigen::VectorXd::Zero(model.n_dofs());
        for (size_t j = 0; j < free_idx.size(); ++j) md.shape(free_idx[j]) = v(j);
        const double mnorm = md.shape.dot(model.M * md.shape);
        if (mnorm > 0.0) md.shape /= std::sqrt(mnorm);
        md.cls = classify(model, md.shape);
        modes.push_back(std::move(md));
    }
    return modes;
}

std::vector<ConvergenceRow> convergence_report(const Layup& layup, const Section& s,
                                               const std::vector<int>& meshes, int k) {
    if (meshes.empty()) throw std::invalid_argument("convergence_report: empty mesh list");
    for (size_t i = 1; i < meshes.size(); ++i)
        if (meshes[i] <= meshes[i - 1])
            throw std::invalid_argument("convergence_report: mesh list must be ascending");

    std::vector<ConvergenceRow> rows;
    std::vector<double> prev;
    for (const int ne : meshes) {
        FemOptions opts;
        opts.n_elems = ne;
        const FemModel model = assemble(layup, s, opts);
        const std::vector<FemMode> modes = solve_modes(model, k + 8);
        std::vector<double> flex;
        for (const FemMode& md : modes)
            if (md.cls != ModeClass::Axial && int(flex.size()) < k) flex.push_back(md.freq_hz);
        if (int(flex.size()) < k)
            throw std::runtime_error("convergence_report: not enough flexural modes");
        for (int j = 0; j < k; ++j) {
            ConvergenceRow r;
            r.n_elems = ne;
            r.mode = j + 1;
            r.freq_hz = flex[j];
            if (!prev.empty()) {
                r.rel_change = (flex[j] - prev[j]) / prev[j];
                r.increased = flex[j] > prev[j];
            }
            rows.push_back(r);
        }
        prev = flex;
    }
    return rows;
}

void dump_matrix(std::ostream& os, const Eigen::MatrixXd& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) os << i << " " << j << " " << a(i, j) << "\n";
}

} // namespace pzbeam
