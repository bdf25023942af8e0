#pragma once

#include <map>
#include <string>

namespace pzbeam {

enum class MaterialKind { Elastic, Piezoelectric };

/// Raw constants of one layer, SI units throughout.
///
/// For elastic materials c33/c44/c66 may be omitted in the input file;
/// the isotropy closure c33 = c11 is applied on load. e15, c44 and c66
/// are stored for completeness but unused by the Bernoulli beam model.
struct Material {
    std::string name;
    MaterialKind kind = MaterialKind::Elastic;
    double c11 = 0.0;   // N/m^2
    double c12 = 0.0;
    double c13 = 0.0;
    double c33 = 0.0;
    double c44 = 0.0;
    double c66 = 0.0;
    double rho = 0.0;   // kg/m^3
    double e31 = 0.0;   // C/m^2
    double e33 = 0.0;
    double e15 = 0.0;
    double eps11 = 0.0; // clamped permittivity, F/m
    double eps33 = 0.0;
    std::string comment;

    bool piezoelectric() const { return kind == MaterialKind::Piezoelectric; }

    /// Throws std::invalid_argument naming the offending field and value.
    void validate() const;
};

/// Plane-reduced constants of one layer (sigma_3 = 0, gamma_2 = 0).
struct ReducedLayer {
    double cbar11 = 0.0;   // c11 - c13^2/c33
    double ebar31 = 0.0;   // e31 - (c13/c33) e33, zero for elastic layers
    double epsbar11 = 0.0; // eps11
    double epsbar33 = 0.0; // eps33 + e33^2/c33
    double rho = 0.0;
    double h = 0.0;

    bool piezoelectric() const { return epsbar33 > 0.0; }
};

ReducedLayer reduce(const Material& m, double h);

using MaterialDb = std::map<std::string, Material>;

/// Parses a JSON array of material objects. Unknown keys are rejected,
/// duplicates are an error, every entry is validated.
MaterialDb parse_materials(const std::string& json_text);
MaterialDb load_materials(const std::string& path);

} // namespace pzbeam
