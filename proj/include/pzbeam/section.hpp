#pragma once

#include "pzbeam/materials.hpp"

namespace pzbeam {

/// Two-layer cross section. The piezoelectric layer occupies z in [0, h1],
/// the substrate z in [-h2, 0]. All section quantities are per unit width;
/// the width is bookkeeping only.
struct Layup {
    ReducedLayer piezo;
    ReducedLayer substrate;
    double length = 0.0;
    double width = 1.0;

    void validate() const;
};

/// Laminate-level scalars. z0 is measured from the layer interface and is
/// chosen so that the bending-stretching coupling B11 vanishes.
struct Section {
    double z0 = 0.0;   // m
    double A11 = 0.0;  // N/m
    double B11 = 0.0;  // N, ~0 by construction
    double D11 = 0.0;  // N m
    double F = 0.0;    // C
    double rho0 = 0.0; // kg/m^2
    double rho1 = 0.0; // kg/m
    double rho2 = 0.0; // kg
    double eta1 = 0.0; // m^2
    double eta2 = 0.0; // N m / C
    double Dbar = 0.0; // N m, D11 + F*eta2
};

double neutral_axis(const Layup& layup);

/// Closed-form evaluation of all section scalars.
Section section_properties(const Layup& layup);

/// Recomputes every integral by composite 2-point Gauss quadrature with
/// `panels` subdivisions per layer, and z0 by bisection on B11(z0).
/// Test oracle, independent of the closed forms above.
Section quadrature_check(const Layup& layup, int panels);

} // namespace pzbeam
