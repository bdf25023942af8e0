#pragma once

#include <vector>

#include "pzbeam/section.hpp"

namespace pzbeam {

enum class Symmetry { Symmetric, Antisymmetric };

/// Coefficients and branch wavenumbers of the reduced fourth-order
/// equation w'''' + 2*alpha2*w'' - beta4*w = 0 at a given frequency.
/// n1 is the hyperbolic branch, n3 the trigonometric one; both real.
struct CharacteristicRoots {
    double alpha2 = 0.0; // m^-2
    double beta4 = 0.0;  // m^-4
    double n1 = 0.0;     // m^-1
    double n3 = 0.0;     // m^-1
};

/// One free-vibration mode of the simply supported beam on [-L/2, L/2].
/// The deflection shape is
///   w(x) = b1 cosh(n1 x) + b2 sinh(n1 x) + b3 cos(n3 x) + b4 sin(n3 x).
struct ModalResult {
    int m = 0;
    Symmetry symmetry = Symmetry::Symmetric;
    double omega = 0.0;   // rad/s
    double freq_hz = 0.0;
    double n1 = 0.0;
    double n3 = 0.0;
    double alpha2 = 0.0;
    double beta4 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
    double length = 0.0;
};

/// Samples of the electric amplitude phi(x). The full potential in the
/// piezoelectric layer is z*(h1 - z)*phi(x) times the harmonic time factor.
struct ElectricProfile {
    std::vector<double> x;
    std::vector<double> phi;
};

CharacteristicRoots characteristic_roots(const Section& s, double omega);

/// Closed-form simply supported frequency of the reduced model,
///   omega = (m pi/L)^2 sqrt(Dbar / (rho0 + (m pi/L)^2 (rho2 - eta1 rho0))).
/// Odd m are the cosine (symmetric) family, even m the sine family.
ModalResult frequency_closed_form(const Section& s, double L, int m);

/// Same mode from the full sixth-order characteristic relation, keeping the
/// eta1*D11 and eta1*rho2 terms the reduced model drops. With the trial
/// shape cos/sin(m pi x/L) the relation is linear in omega^2 and has a
/// single positive root. Throws if no positive root exists.
ModalResult frequency_sixth_order(const Section& s, double L, int m);

/// Deflection amplitude at x in [-L/2, L/2], normalized to max |w| = 1.
double mode_shape(const ModalResult& r, double x);

/// Electric amplitude recovered from the charge equation
/// eta1 phi'' + phi + eta2 w'' = 0, solved exactly per shape branch.
/// Throws if F = 0 (no piezoelectric coupling).
ElectricProfile electric_profile(const ModalResult& r, const Section& s, int grid);

/// Inverts frequency_closed_form for L at a target frequency in Hz.
double calibrate_length(const Section& s, double target_hz, int m = 1);

} // namespace pzbeam
