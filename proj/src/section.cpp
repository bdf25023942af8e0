#include "pzbeam/section.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace pzbeam {

void Layup::validate() const {
    if (!(piezo.h > 0.0) || !(substrate.h > 0.0))
        throw std::invalid_argument("layer thicknesses must be > 0");
    if (!(piezo.cbar11 > 0.0) || !(substrate.cbar11 > 0.0))
        throw std::invalid_argument("reduced stiffnesses must be > 0");
    if (!(length > 0.0))
        throw std::invalid_argument("beam length must be > 0");
}

double neutral_axis(const Layup& layup) {
    layup.validate();
    const double c1 = layup.piezo.cbar11, h1 = layup.piezo.h;
    const double c2 = layup.substrate.cbar11, h2 = layup.substrate.h;
    return (c1 * h1 * h1 - c2 * h2 * h2) / (2.0 * (c1 * h1 + c2 * h2));
}

Section section_properties(const Layup& layup) {
    const double z0 = neutral_axis(layup);
    const double c1 = layup.piezo.cbar11, h1 = layup.piezo.h;
    const double c2 = layup.substrate.cbar11, h2 = layup.substrate.h;

    Section s;
    s.z0 = z0;
    s.A11 = c1 * h1 + c2 * h2;
    s.B11 = (c1 * h1 * h1 / 2.0 - c2 * h2 * h2 / 2.0) - z0 * s.A11;
    s.D11 = c1 * (h1 * h1 * h1 / 3.0 - h1 * h1 * z0 + h1 * z0 * z0) +
            c2 * (h2 * h2 * h2 / 3.0 + h2 * h2 * z0 + h2 * z0 * z0);
    s.F = -layup.piezo.ebar31 * h1 * h1 * h1 / 6.0;

    // rho_k = integral of rho (z - z0)^k over both layers
    auto mom = [z0](double rho, double za, double zb, int k) {
        const double a = za - z0, b = zb - z0;
        return rho * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
    };
    for (int k = 0; k <= 2; ++k) {
        const double v = mom(layup.piezo.rho, 0.0, h1, k) +
                         mom(layup.substrate.rho, -h2, 0.0, k);
        (k == 0 ? s.rho0 : k == 1 ? s.rho1 : s.rho2) = v;
    }

    if (layup.piezo.piezoelectric()) {
        s.eta1 = -h1 * h1 * layup.piezo.epsbar11 / (10.0 * layup.piezo.epsbar33);
        s.eta2 = 3.0 * s.F / (h1 * h1 * h1 * layup.piezo.epsbar33);
    }
    s.Dbar = s.D11 + s.F * s.eta2;
    return s;
}

namespace {

// Composite 2-point Gauss over [a, b] with n panels.
double gauss2(double a, double b, int n, const std::function<double(double)>& f) {
    const double w = (b - a) / n;
    const double g = 0.5 / std::sqrt(3.0);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mid = a + (i + 0.5) * w;
        sum += f(mid - g * w) + f(mid + g * w);
    }
    return sum * 0.5 * w;
}

} // namespace

Section quadrature_check(const Layup& layup, int panels) {
    layup.validate();
    if (panels < 2)
        throw std::invalid_argument("quadrature_check requires at least 2 panels");

    const double h1 = layup.piezo.h, h2 = layup.substrate.h;
    const double c1 = layup.piezo.cbar11, c2 = layup.substrate.cbar11;

    auto both = [&](const std::function<double(double, double, double)>& f) {
        // f(coef, rho, z); integrate piezo on [0,h1], substrate on [-h2,0]
        return gauss2(0.0, h1, panels,
                      [&](double z) { return f(c1, layup.piezo.rho, z); }) +
               gauss2(-h2, 0.0, panels,
                      [&](double z) { return f(c2, layup.substrate.rho, z); });
    };

    auto b11_of = [&](double z0) {
        return both([z0](double c, double, double z) { return c * (z - z0); });
    };

    // z0 as the root of B11(z0), bisected on (-h2, h1).
    double lo = -h2, hi = h1;
    if (b11_of(lo) * b11_of(hi) > 0.0)
        throw std::runtime_error("quadrature_check: B11 root not bracketed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (b11_of(lo) * b11_of(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double z0 = 0.5 * (lo + hi);

    Section s;
    s.z0 = z0;
    s.A11 = both([](double c, double, double) { return c; });
    s.B11 = b11_of(z0);
    s.D11 = both([z0](double c, double, double z) { return c * (z - z0) * (z - z0); });
    s.rho0 = both([](double, double r, double) { return r; });
    s.rho1 = both([z0](double, double r, double z) { return r * (z - z0); });
    s.rho2 = both([z0](double, double r, double z) { return r * (z - z0) * (z - z0); });
    s.F = gauss2(0.0, h1, panels, [&](double z) {
        return -layup.piezo.ebar31 * (2.0 * z - h1) * (z - z0);
    });
    if (layup.piezo.piezoelectric()) {
        const double i11 = layup.piezo.epsbar11 *
                           gauss2(0.0, h1, panels,
                                  [&](double z) { return z * z * (z - h1) * (z - h1); });
        const double i33 = layup.piezo.epsbar33 *
                           gauss2(0.0, h1, panels, [&](double z) {
                               return (2.0 * z - h1) * (2.0 * z - h1);
                           });
        s.eta1 = -i11 / i33;
        s.eta2 = s.F / i33;
    }
    s.Dbar = s.D11 + s.F * s.eta2;
    return s;
}

} // namespace pzbeam
