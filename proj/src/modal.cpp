#include "pzbeam/modal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pzbeam {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_mode_args(const Section& s, double L, int m) {
    if (m < 1) throw std::invalid_argument("mode number m must be >= 1");
    if (!(L > 0.0)) throw std::invalid_argument("beam length must be > 0");
    if (!(s.Dbar > 0.0) || !(s.rho0 > 0.0))
        throw std::invalid_argument("section requires Dbar > 0 and rho0 > 0");
}

} // namespace

CharacteristicRoots characteristic_roots(const Section& s, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
    CharacteristicRoots r;
    r.alpha2 = (s.rho2 - s.eta1 * s.rho0) * omega * omega / (2.0 * s.Dbar);
    r.beta4 = s.rho0 * omega * omega / s.Dbar;
    const double disc = std::sqrt(r.alpha2 * r.alpha2 + r.beta4);
    r.n1 = std::sqrt(-r.alpha2 + disc);
    r.n3 = std::sqrt(r.alpha2 + disc);
    return r;
}

ModalResult frequency_closed_form(const Section& s, double L, int m) {
    check_mode_args(s, L, m);
    const double n = m * kPi / L;
    const double denom = s.rho0 + n * n * (s.rho2 - s.eta1 * s.rho0);
    if (!(denom > 0.0))
        throw std::runtime_error("nonphysical section data: negative frequency denominator");

    ModalResult r;
    r.m = m;
    r.length = L;
    r.omega = n * n * std::sqrt(s.Dbar / denom);
    r.freq_hz = r.omega / (2.0 * kPi);
    const CharacteristicRoots cr = characteristic_roots(s, r.omega);
    r.alpha2 = cr.alpha2;
    r.beta4 = cr.beta4;
    r.n1 = cr.n1;
    r.n3 = cr.n3;
    if (m % 2 == 1) {
        r.symmetry = Symmetry::Symmetric; // cos family, antinode at midspan
        r.b3 = 1.0;
    } else {
        r.symmetry = Symmetry::Antisymmetric; // sin family
        r.b4 = 1.0;
    }
    return r;
}

ModalResult frequency_sixth_order(const Section& s, double L, int m) {
    check_mode_args(s, L, m);
    const double n = m * kPi / L;
    const double n2 = n * n, n4 = n2 * n2, n6 = n4 * n2;
    // cos/sin(n x) trial in the sixth-order relation is linear in omega^2:
    //   omega^2 = (Dbar n^4 - eta1 D11 n^6)
    //           / (rho0 + (rho2 - eta1 rho0) n^2 - eta1 rho2 n^4)
    const double num = s.Dbar * n4 - s.eta1 * s.D11 * n6;
    const double den = s.rho0 + (s.rho2 - s.eta1 * s.rho0) * n2 - s.eta1 * s.rho2 * n4;
    if (!(num > 0.0) || !(den > 0.0))
        throw std::runtime_error("sixth-order relation has no positive omega^2 root");

    ModalResult r;
    r.m = m;
    r.length = L;
    r.omega = std::sqrt(num / den);
    r.freq_hz = r.omega / (2.0 * kPi);
    r.n3 = n;
    // Effective reduced-equation coefficients consistent with n3 = m pi/L.
    r.alpha2 = (s.rho2 - s.eta1 * s.rho0) * r.omega * r.omega / (2.0 * s.Dbar);
    r.beta4 = n4 - 2.0 * r.alpha2 * n2;
    if (!(r.beta4 > 0.0))
        throw std::runtime_error("sixth-order mode outside the reduced-branch regime");
    r.n1 = std::sqrt(-r.alpha2 + std::sqrt(r.alpha2 * r.alpha2 + r.beta4));
    if (m % 2 == 1) {
        r.symmetry = Symmetry::Symmetric;
        r.b3 = 1.0;
    } else {
        r.symmetry = Symmetry::Antisymmetric;
        r.b4 = 1.0;
    }
    return r;
}

namespace {

double shape_raw(const ModalResult& r, double x) {
    return r.b1 * std::cosh(r.n1 * x) + r.b2 * std::sinh(r.n1 * x) +
           r.b3 * std::cos(r.n3 * x) + r.b4 * std::sin(r.n3 * x);
}

double shape_max(const ModalResult& r) {
    double mx = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double x = r.length * (double(i) / n - 0.5);
        mx = std::max(mx, std::abs(shape_raw(r, x)));
    }
    return mx;
}

} // namespace

double mode_shape(const ModalResult& r, double x) {
    if (std::abs(x) > r.length / 2.0 * (1.0 + 1e-12))
        throw std::invalid_argument("mode_shape: x outside [-L/2, L/2]");
    return shape_raw(r, x) / shape_max(r);
}

ElectricProfile electric_profile(const ModalResult& r, const Section& s, int grid) {
    if (s.F == 0.0)
        throw std::runtime_error("electric_profile: no piezoelectric coupling (F = 0)");
    if (grid < 16)
        throw std::invalid_argument("electric_profile: grid must be >= 16");

    // eta1 phi'' + phi = -eta2 w'' solved exactly per branch: the trig part
    // of w has w'' = -n3^2 w, the hyperbolic part w'' = +n1^2 w.
    const double dt = 1.0 - s.eta1 * r.n3 * r.n3;
    const double dh = 1.0 + s.eta1 * r.n1 * r.n1;
    if (dt == 0.0 || dh == 0.0)
        throw std::runtime_error("electric_profile: resonant electric denominator");
    const double kt = s.eta2 * r.n3 * r.n3 / dt;
    const double kh = -s.eta2 * r.n1 * r.n1 / dh;

    const double norm = shape_max(r);
    ElectricProfile p;
    p.x.resize(grid);
    p.phi.resize(grid);
    for (int i = 0; i < grid; ++i) {
        const double x = r.length * (double(i) / (grid - 1) - 0.5);
        p.x[i] = x;
        const double wt = r.b3 * std::cos(r.n3 * x) + r.b4 * std::sin(r.n3 * x);
        const double wh = r.b1 * std::cosh(r.n1 * x) + r.b2 * std::sinh(r.n1 * x);
        p.phi[i] = (kt * wt + kh * wh) / norm;
    }
    return p;
}

double calibrate_length(const Section& s, double target_hz, int m) {
    if (!(target_hz > 0.0))
        throw std::invalid_argument("calibration target frequency must be > 0");
    auto freq = [&](double L) { return frequency_closed_form(s, L, m).freq_hz; };

    // freq is strictly decreasing in L; expand a bracket around the target.
    double lo = 1e-6, hi = 1.0;
    int guard = 0;
    while (freq(lo) < target_hz && guard++ < 60) lo *= 0.5;
    guard = 0;
    while (freq(hi) > target_hz && guard++ < 60) hi *= 2.0;
    if (freq(lo) < target_hz || freq(hi) > target_hz)
        throw std::runtime_error("calibrate_length: failed to bracket the target frequency");

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = freq(mid);
        if (std::abs(f - target_hz) <= 1e-13 * target_hz) return mid;
        (f > target_hz ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace pzbeam
