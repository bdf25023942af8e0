#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "pzbeam/modal.hpp"
#include "pzbeam/section.hpp"

namespace pzbeam {

enum class ModeClass { FlexuralSymmetric, FlexuralAntisymmetric, Axial };

struct FemOptions {
    int n_elems = 64;
    bool include_rho1 = false;   // axial/bending inertia coupling, off in the base model
    bool include_axial = true;
    bool include_rotary = true;  // rho2 w' inertia
};

/// 1D coupled electromechanical beam discretization on [-L/2, L/2].
/// DOFs per node: u (linear), w and w' (Hermite cubic), phi (linear,
/// massless electric amplitude). The stiffness is the electric-enthalpy
/// bilinear form, so the phi block is negative definite and Schur
/// condensation stiffens the bending response from D11 toward Dbar.
struct FemModel {
    FemOptions opts;
    double length = 0.0;
    int n_nodes = 0;
    bool has_phi = false;  // false when the top layer is not piezoelectric
    bool condensed = false;

    // Unconstrained matrices. For a condensed model they live on the
    // mechanical subset only, ordered as in mech_dofs.
    Eigen::MatrixXd K;
    Eigen::MatrixXd M;
    // Condensed bookkeeping: original indices of the mechanical DOFs and
    // the electric recovery map phi = phi_recovery * q_mech.
    std::vector<int> mech_dofs;
    std::vector<int> elec_dofs;
    Eigen::MatrixXd phi_recovery;

    int dofs_per_node() const;
    int n_dofs() const { return n_nodes * dofs_per_node(); }
    int dof_u(int node) const;
    int dof_w(int node) const;
    int dof_t(int node) const;
    int dof_phi(int node) const; // -1 if absent

    double node_x(int node) const;

    /// Simply supported constraints: w at both ends, u at the left end.
    std::vector<int> fixed_dofs() const;
};

struct FemMode {
    double freq_hz = 0.0;
    ModeClass cls = ModeClass::FlexuralSymmetric;
    Eigen::VectorXd shape; // full unconstrained dof vector, mass-orthonormal
};

FemModel assemble(const Layup& layup, const Section& s, const FemOptions& opts);

/// Eliminates the electric DOFs via the Schur complement of the phi block.
/// Throws on a singular electric block.
FemModel condense_electric(const FemModel& model);

/// First k modes of the simply supported beam, ascending. Condenses first
/// when given an uncondensed model; dense symmetric generalized solve.
std::vector<FemMode> solve_modes(const FemModel& model, int k);

/// Same spectrum from the uncondensed coupled pencil (dense nonsymmetric
/// solve of K^-1 M); used to cross-check the condensation path.
std::vector<FemMode> solve_modes_coupled(const FemModel& model, int k);

struct ConvergenceRow {
    int n_elems = 0;
    int mode = 0;        // 1-based flexural mode index
    double freq_hz = 0.0;
    double rel_change = 0.0; // vs previous mesh; 0 for the first mesh
    bool increased = false;  // flags a non-monotone step
};

std::vector<ConvergenceRow> convergence_report(const Layup& layup, const Section& s,
                                               const std::vector<int>& meshes, int k);

/// Plain-text (row, col, value) triplets of the nonzero entries.
void dump_matrix(std::ostream& os, const Eigen::MatrixXd& a);

} // namespace pzbeam
