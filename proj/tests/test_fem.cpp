#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "pzbeam/fem.hpp"

using namespace pzbeam;

namespace {

constexpr double kL = 6e-3;

struct Setup {
    Layup layup;
    Section section;
    Setup() : layup(testutil::reference_layup()), section(section_properties(layup)) {}
};

} // namespace

TEST_CASE("assembled matrices are symmetric, mass PSD, electric block ND") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 8;
    const FemModel fem = assemble(st.layup, st.section, opts);
    REQUIRE(fem.has_phi);
    REQUIRE_FALSE(fem.condensed);
    REQUIRE(fem.n_dofs() == fem.n_nodes * 4);

    CHECK((fem.K - fem.K.transpose()).cwiseAbs().maxCoeff() <
          1e-12 * fem.K.cwiseAbs().maxCoeff());
    CHECK((fem.M - fem.M.transpose()).cwiseAbs().maxCoeff() <
          1e-12 * fem.M.cwiseAbs().maxCoeff());

    // The electric block of the enthalpy stiffness is negative definite and
    // the electric DOFs are massless.
    Eigen::MatrixXd kpp(fem.n_nodes, fem.n_nodes);
    for (int i = 0; i < fem.n_nodes; ++i)
        for (int j = 0; j < fem.n_nodes; ++j)
            kpp(i, j) = fem.K(fem.dof_phi(i), fem.dof_phi(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kpp);
    CHECK(es.eigenvalues().maxCoeff() < 0.0);
    for (int i = 0; i < fem.n_nodes; ++i)
        CHECK(fem.M.row(fem.dof_phi(i)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("condensation equals an explicit Schur complement") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 4;
    const FemModel fem = assemble(st.layup, st.section, opts);
    const FemModel red = condense_electric(fem);
    REQUIRE(red.condensed);
    const int nm = int(red.mech_dofs.size());
    const int np = int(red.elec_dofs.size());
    REQUIRE(nm + np == fem.n_dofs());

    Eigen::MatrixXd kmm(nm, nm), kmp(nm, np), kpp(np, np);
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nm; ++j) kmm(i, j) = fem.K(red.mech_dofs[i], red.mech_dofs[j]);
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < np; ++j) kmp(i, j) = fem.K(red.mech_dofs[i], red.elec_dofs[j]);
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) kpp(i, j) = fem.K(red.elec_dofs[i], red.elec_dofs[j]);

    const Eigen::MatrixXd schur = kmm - kmp * kpp.inverse() * kmp.transpose();
    CHECK((red.K - schur).cwiseAbs().maxCoeff() < 1e-10 * schur.cwiseAbs().maxCoeff());
    // Condensation strictly stiffens bending (kpp is negative definite).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(red.K - kmm);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * schur.cwiseAbs().maxCoeff());
}

TEST_CASE("constant-curvature patch recovers the effective stiffness Dbar") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 6;
    const FemModel red = condense_electric(assemble(st.layup, st.section, opts));

    Eigen::VectorXd q = Eigen::VectorXd::Zero(int(red.mech_dofs.size()));
    for (int n = 0; n < red.n_nodes; ++n) {
        const double x = red.node_x(n);
        q(red.dof_w(n)) = 0.5 * x * x; // unit curvature
        q(red.dof_t(n)) = x;
    }
    const double energy = 0.5 * q.dot(red.K * q);
    const double expected = 0.5 * st.section.Dbar * kL;
    CHECK(energy == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("flexural frequencies track the sixth-order dispersion") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 64;
    const FemModel fem = assemble(st.layup, st.section, opts);
    const auto modes = solve_modes(fem, 13);

    std::vector<double> flex;
    for (const auto& md : modes)
        if (md.cls != ModeClass::Axial) flex.push_back(md.freq_hz);
    REQUIRE(flex.size() >= 5);

    for (int m = 1; m <= 5; ++m) {
        const double f6 = frequency_sixth_order(st.section, kL, m).freq_hz;
        CHECK(flex[m - 1] == doctest::Approx(f6).epsilon(1e-5));
    }
    // Symmetry classes alternate with the mode index.
    int idx = 0;
    for (const auto& md : modes) {
        if (md.cls == ModeClass::Axial) continue;
        const ModeClass expect = (idx % 2 == 0) ? ModeClass::FlexuralSymmetric
                                                : ModeClass::FlexuralAntisymmetric;
        CHECK(md.cls == expect);
        if (++idx == 5) break;
    }
}

TEST_CASE("axial branch appears at its rod frequency") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 64;
    const auto modes = solve_modes(assemble(st.layup, st.section, opts), 13);
    double first_axial = 0.0;
    for (const auto& md : modes)
        if (md.cls == ModeClass::Axial) {
            first_axial = md.freq_hz;
            break;
        }
    REQUIRE(first_axial > 0.0);
    // Fixed-free rod in u on [0, L]: f = (1/4L) sqrt(A11/rho0) for the
    // support set used here (u pinned at one end only).
    const double rod = 0.25 / kL * std::sqrt(st.section.A11 / st.section.rho0);
    CHECK(first_axial == doctest::Approx(rod).epsilon(1e-3));
}

TEST_CASE("condensed and monolithic eigensolves agree") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 24;
    const FemModel fem = assemble(st.layup, st.section, opts);
    const auto a = solve_modes(fem, 5);
    const auto b = solve_modes_coupled(fem, 5);
    REQUIRE(a.size() == 5);
    REQUIRE(b.size() == 5);
    for (int i = 0; i < 5; ++i)
        CHECK(a[i].freq_hz == doctest::Approx(b[i].freq_hz).epsilon(1e-10));
}

TEST_CASE("Rayleigh quotient of the analytic interpolant bounds mode 1") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 32;
    opts.include_axial = false;
    const FemModel red = condense_electric(assemble(st.layup, st.section, opts));
    const ModalResult r = frequency_sixth_order(st.section, kL, 1);

    Eigen::VectorXd q = Eigen::VectorXd::Zero(int(red.mech_dofs.size()));
    for (int n = 0; n < red.n_nodes; ++n) {
        const double x = red.node_x(n);
        q(red.dof_w(n)) = std::cos(r.n3 * x);
        q(red.dof_t(n)) = -r.n3 * std::sin(r.n3 * x);
    }
    const double num = q.dot(red.K * q);
    const double den = q.dot(red.M * q);
    const double omega = std::sqrt(num / den);
    CHECK(omega >= r.omega * (1.0 - 1e-12)); // upper-bound property
    CHECK(omega == doctest::Approx(r.omega).epsilon(1e-3));
}

TEST_CASE("modes are mass-orthonormal in the full layout") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 16;
    const FemModel fem = assemble(st.layup, st.section, opts);
    const auto modes = solve_modes(fem, 4);
    for (size_t i = 0; i < modes.size(); ++i) {
        REQUIRE(modes[i].shape.size() == fem.n_dofs());
        for (size_t j = 0; j <= i; ++j) {
            const double mij = modes[i].shape.dot(fem.M * modes[j].shape);
            CHECK(mij == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("recovered electric DOFs shrink toward the interior solution") {
    // The condensed phi field has a boundary layer at the supports; its end
    // slope relative to the peak slope halves with each mesh refinement.
    const Setup st;
    auto end_ratio = [&](int ne) {
        FemOptions opts;
        opts.n_elems = ne;
        const FemModel fem = assemble(st.layup, st.section, opts);
        const auto modes = solve_modes(fem, 1);
        const Eigen::VectorXd& v = modes[0].shape;
        const double h = kL / ne;
        double dmax = 0.0;
        double dend = std::abs(v(fem.dof_phi(1)) - v(fem.dof_phi(0))) / h;
        for (int n = 0; n + 1 < fem.n_nodes; ++n)
            dmax = std::max(dmax,
                            std::abs(v(fem.dof_phi(n + 1)) - v(fem.dof_phi(n))) / h);
        return dend / dmax;
    };
    const double r64 = end_ratio(64);
    const double r128 = end_ratio(128);
    CHECK(r128 < 0.75 * r64);
}

TEST_CASE("rho1 coupling is mass-only and a small effect") {
    const Setup st;
    FemOptions base;
    base.n_elems = 32;
    FemOptions with;
    with.n_elems = 32;
    with.include_rho1 = true;
    const FemModel a = assemble(st.layup, st.section, base);
    const FemModel b = assemble(st.layup, st.section, with);
    CHECK((a.K - b.K).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.M - b.M).cwiseAbs().maxCoeff() > 0.0);

    const double fa = solve_modes(a, 1)[0].freq_hz;
    const double fb = solve_modes(b, 1)[0].freq_hz;
    CHECK(fb == doctest::Approx(fa).epsilon(1e-3));
    CHECK(fb != fa);
}

TEST_CASE("convergence report structure and refinement behavior") {
    const Setup st;
    const std::vector<int> meshes{8, 16, 32};
    const auto rows = convergence_report(st.layup, st.section, meshes, 2);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        if (r.n_elems == meshes.front()) {
            CHECK(r.rel_change == 0.0);
        } else {
            // Conforming elements converge from above at these coarse meshes.
            CHECK(r.rel_change <= 0.0);
            CHECK_FALSE(r.increased);
        }
        CHECK(r.freq_hz > 0.0);
    }
    CHECK_THROWS(convergence_report(st.layup, st.section, {32, 16}, 1));
}

TEST_CASE("elastic top layer disables the electric field") {
    Layup layup = testutil::reference_layup();
    layup.piezo.ebar31 = 0.0;
    layup.piezo.epsbar11 = 0.0;
    layup.piezo.epsbar33 = 0.0;
    const Section s = section_properties(layup);
    CHECK(s.F == 0.0);
    CHECK(s.Dbar == s.D11);

    FemOptions opts;
    opts.n_elems = 64;
    const FemModel fem = assemble(layup, s, opts);
    CHECK_FALSE(fem.has_phi);
    CHECK(fem.n_dofs() == fem.n_nodes * 3);
    const double f1 = solve_modes(fem, 1)[0].freq_hz;
    CHECK(f1 == doctest::Approx(frequency_sixth_order(s, kL, 1).freq_hz).epsilon(1e-6));
}

TEST_CASE("matrix dump emits parseable triplets") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 2;
    const FemModel fem = assemble(st.layup, st.section, opts);
    std::ostringstream os;
    dump_matrix(os, fem.K);
    std::istringstream is(os.str());
    int row, col, count = 0;
    double val;
    while (is >> row >> col >> val) {
        CHECK(row >= 0);
        CHECK(row < fem.n_dofs());
        CHECK(col >= 0);
        CHECK(col < fem.n_dofs());
        ++count;
    }
    CHECK(count > 0);
}

TEST_CASE("support set") {
    const Setup st;
    FemOptions opts;
    opts.n_elems = 4;
    const FemModel fem = assemble(st.layup, st.section, opts);
    const auto fixed = fem.fixed_dofs();
    REQUIRE(fixed.size() == 3);
}
