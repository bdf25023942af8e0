#pragma once

#include <cstdlib>
#include <string>

#include "pzbeam/materials.hpp"
#include "pzbeam/section.hpp"

namespace testutil {

inline std::string data_dir() {
    const char* env = std::getenv("PZBEAM_DATA_DIR");
    return env ? env : "data";
}

inline pzbeam::MaterialDb table1() {
    return pzbeam::load_materials(data_dir() + "/table1.json");
}

// Reference configuration used across the suite: 200 um PZT-5A on a
// 500 um glass substrate, 6 mm span.
inline pzbeam::Layup reference_layup(double h1 = 200e-6, double h2 = 500e-6,
                                     double L = 6e-3) {
    const pzbeam::MaterialDb db = table1();
    pzbeam::Layup layup;
    layup.piezo = pzbeam::reduce(db.at("PZT-5A"), h1);
    layup.substrate = pzbeam::reduce(db.at("glass"), h2);
    layup.length = L;
    layup.validate();
    return layup;
}

} // namespace testutil
