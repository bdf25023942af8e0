#include "pzbeam/materials.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pzbeam {

namespace {

[[noreturn]] void fail_field(const std::string& mat, const std::string& field, double value,
                             const std::string& why) {
    std::ostringstream os;
    os << "material '" << mat << "': " << field << " = " << value << " " << why;
    throw std::invalid_argument(os.str());
}

} // namespace

void Material::validate() const {
    if (name.empty())
        throw std::invalid_argument("material with empty name");
    if (!(rho > 0.0)) fail_field(name, "rho", rho, "(must be > 0)");
    if (!(c11 > 0.0)) fail_field(name, "c11", c11, "(must be > 0)");
    if (!(c33 > 0.0)) fail_field(name, "c33", c33, "(must be > 0 after isotropy closure)");
    if (!(c11 * c33 - c13 * c13 > 0.0))
        fail_field(name, "c13", c13, "(c11*c33 - c13^2 must be > 0)");
    if (kind == MaterialKind::Elastic) {
        if (e31 != 0.0 || e33 != 0.0 || e15 != 0.0 || eps11 != 0.0 || eps33 != 0.0)
            throw std::invalid_argument("material '" + name +
                                        "': elastic kind requires zero piezoelectric and "
                                        "dielectric constants");
    } else {
        if (!(eps11 > 0.0)) fail_field(name, "eps11", eps11, "(must be > 0)");
        if (!(eps33 > 0.0)) fail_field(name, "eps33", eps33, "(must be > 0)");
    }
}

ReducedLayer reduce(const Material& m, double h) {
    m.validate();
    if (!(h > 0.0))
        throw std::invalid_argument("layer thickness must be > 0");
    ReducedLayer r;
    r.cbar11 = m.c11 - m.c13 * m.c13 / m.c33;
    r.rho = m.rho;
    r.h = h;
    if (m.piezoelectric()) {
        r.ebar31 = m.e31 - (m.c13 / m.c33) * m.e33;
        r.epsbar11 = m.eps11;
        r.epsbar33 = m.eps33 + m.e33 * m.e33 / m.c33;
    }
    return r;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "name", "kind", "c11", "c12", "c13", "c33", "c44", "c66",
    "rho",  "e31",  "e33", "e15", "eps11", "eps33", "comment"};

Material parse_one(const nlohmann::json& obj) {
    if (!obj.is_object())
        throw std::invalid_argument("material entry is not a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!kKnownKeys.count(it.key()))
            throw std::invalid_argument("unknown material key '" + it.key() + "'");
    }
    Material m;
    m.name = obj.at("name").get<std::string>();
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "elastic")
        m.kind = MaterialKind::Elastic;
    else if (kind == "piezoelectric")
        m.kind = MaterialKind::Piezoelectric;
    else
        throw std::invalid_argument("material '" + m.name + "': unknown kind '" + kind + "'");

    auto num = [&](const char* key, double fallback, bool required) {
        if (!obj.contains(key)) {
            if (required)
                throw std::invalid_argument("material '" + m.name + "': missing key '" + key + "'");
            return fallback;
        }
        if (!obj.at(key).is_number())
            throw std::invalid_argument("material '" + m.name + "': key '" + key +
                                        "' is not a number");
        return obj.at(key).get<double>();
    };

    const bool piezo = m.kind == MaterialKind::Piezoelectric;
    m.c11 = num("c11", 0.0, true);
    m.c12 = num("c12", 0.0, false);
    m.c13 = num("c13", 0.0, false);
    m.c33 = num("c33", m.c11, piezo); // isotropy closure for elastic materials
    m.c44 = num("c44", 0.0, false);
    m.c66 = num("c66", 0.0, false);
    m.rho = num("rho", 0.0, true);
    m.e31 = num("e31", 0.0, piezo);
    m.e33 = num("e33", 0.0, piezo);
    m.e15 = num("e15", 0.0, false);
    m.eps11 = num("eps11", 0.0, piezo);
    m.eps33 = num("eps33", 0.0, piezo);
    if (obj.contains("comment")) m.comment = obj.at("comment").get<std::string>();
    m.validate();
    return m;
}

} // namespace

MaterialDb parse_materials(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        // Syntax errors are a different failure class than invariant
        // violations; keep them distinguishable for the C API mapping.
        throw std::runtime_error(std::string("material file parse failure: ") + e.what());
    }
    if (!doc.is_array())
        throw std::runtime_error("material file top level must be a JSON array");
    MaterialDb db;
    for (const auto& obj : doc) {
        Material m = parse_one(obj);
        if (db.count(m.name))
            throw std::invalid_argument("duplicate material name '" + m.name + "'");
        db.emplace(m.name, std::move(m));
    }
    return db;
}

MaterialDb load_materials(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open material file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_materials(buf.str());
}

} // namespace pzbeam
