#include "kronred/network_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace kronred {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what)
{
    throw InputError(path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        schema_error(path.empty() ? "$" : path, "missing required key '" + key + "'");
    }
    return *it;
}

const json& require_array(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = require(obj, key, path);
    if (!v.is_array()) {
        schema_error(path + key, "expected an array");
    }
    return v;
}

Index as_index(const json& v, const std::string& path)
{
    if (v.is_number_unsigned()) {
        return v.get<Index>();
    }
    if (v.is_number_integer() && v.get<long long>() >= 0) {
        return static_cast<Index>(v.get<long long>());
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d)) {
            return static_cast<Index>(d);
        }
    }
    schema_error(path, "expected a nonnegative integer index");
}

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        schema_error(path, "expected a number");
    }
    return v.get<double>();
}

std::string at(const std::string& base, Index i)
{
    return base + "[" + std::to_string(i) + "]";
}

void line_column(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& col)
{
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

}  // namespace

CrnNetwork network_from_json(const json& doc)
{
    if (!doc.is_object()) {
        schema_error("$", "top-level value must be an object");
    }
    const json& species = require_array(doc, "species", "");
    std::vector<std::string> names;
    std::map<std::string, Index> species_index;
    for (Index i = 0; i < species.size(); ++i) {
        if (!species[i].is_string()) {
            schema_error(at("species", i), "expected a string");
        }
        names.push_back(species[i].get<std::string>());
        if (!species_index.emplace(names.back(), i).second) {
            schema_error(at("species", i), "duplicate species '" + names.back() + "'");
        }
    }

    const json& complexes = require_array(doc, "complexes", "");
    Matrix Z = Matrix::Zero(static_cast<Eigen::Index>(names.size()),
                            static_cast<Eigen::Index>(complexes.size()));
    for (Index j = 0; j < complexes.size(); ++j) {
        const std::string path = at("complexes", j);
        if (!complexes[j].is_object()) {
            schema_error(path, "expected an object mapping species to coefficients");
        }
        for (const auto& [key, value] : complexes[j].items()) {
            auto it = species_index.find(key);
            if (it == species_index.end()) {
                schema_error(path + "." + key, "unknown species");
            }
            Z(static_cast<Eigen::Index>(it->second), static_cast<Eigen::Index>(j))
                = as_number(value, path + "." + key);
        }
    }

    std::vector<Reaction> reactions;
    const json& rx = require_array(doc, "reactions", "");
    for (Index j = 0; j < rx.size(); ++j) {
        const std::string path = at("reactions", j);
        if (!rx[j].is_object()) {
            schema_error(path, "expected an object");
        }
        reactions.push_back({as_index(require(rx[j], "substrate", path), path + ".substrate"),
                             as_index(require(rx[j], "product", path), path + ".product"),
                             as_number(require(rx[j], "rate", path), path + ".rate")});
    }

    std::vector<Inflow> inflows;
    if (doc.contains("inflow")) {
        const json& in = require_array(doc, "inflow", "");
        for (Index j = 0; j < in.size(); ++j) {
            const std::string path = at("inflow", j);
            if (!in[j].is_object()) {
                schema_error(path, "expected an object");
            }
            Inflow f;
            f.complex = as_index(require(in[j], "complex", path), path + ".complex");
            f.channel = as_index(require(in[j], "channel", path), path + ".channel");
            if (in[j].contains("gain")) {
                f.gain = as_number(in[j]["gain"], path + ".gain");
            }
            inflows.push_back(f);
        }
    }

    std::vector<Outflow> outflows;
    if (doc.contains("outflow")) {
        const json& out = require_array(doc, "outflow", "");
        for (Index j = 0; j < out.size(); ++j) {
            const std::string path = at("outflow", j);
            if (!out[j].is_object()) {
                schema_error(path, "expected an object");
            }
            outflows.push_back({as_index(require(out[j], "complex", path), path + ".complex"),
                                as_number(require(out[j], "rate", path), path + ".rate")});
        }
    }

    std::vector<IndexList> outputs;
    const json& ys = require_array(doc, "outputs", "");
    for (Index j = 0; j < ys.size(); ++j) {
        if (!ys[j].is_array()) {
            schema_error(at("outputs", j), "expected an array of complex indices");
        }
        IndexList sel;
        for (Index k = 0; k < ys[j].size(); ++k) {
            sel.push_back(as_index(ys[j][k], at(at("outputs", j), k)));
        }
        outputs.push_back(std::move(sel));
    }

    return CrnNetwork(std::move(names), std::move(Z), std::move(reactions), std::move(inflows),
                      std::move(outflows), std::move(outputs));
}

CrnNetwork parse_network(std::string_view text, const std::string& source)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 0;
        std::size_t col = 0;
        line_column(text, e.byte == 0 ? 0 : e.byte - 1, line, col);
        std::ostringstream os;
        os << source << ":" << line << ":" << col << ": JSON syntax error: " << e.what();
        throw InputError(os.str());
    }
    try {
        return network_from_json(doc);
    } catch (const InputError& e) {
        throw InputError(source + ": " + e.what());
    }
}

CrnNetwork load_network(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path.string() + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str(), path.string());
}

json network_to_json(const CrnNetwork& net)
{
    json doc;
    doc["species"] = net.species_names();
    json complexes = json::array();
    const Matrix& Z = net.complex_matrix();
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        json cx = json::object();
        for (Eigen::Index i = 0; i < Z.rows(); ++i) {
            if (Z(i, j) != 0.0) {
                cx[net.species_names()[static_cast<Index>(i)]] = static_cast<long long>(Z(i, j));
            }
        }
        complexes.push_back(std::move(cx));
    }
    doc["complexes"] = std::move(complexes);
    json rx = json::array();
    for (const auto& r : net.reactions()) {
        rx.push_back({{"substrate", r.substrate}, {"product", r.product}, {"rate", r.rate}});
    }
    doc["reactions"] = std::move(rx);
    json in = json::array();
    for (const auto& f : net.inflows()) {
        in.push_back({{"complex", f.complex}, {"channel", f.channel}, {"gain", f.gain}});
    }
    doc["inflow"] = std::move(in);
    json out = json::array();
    for (const auto& f : net.outflows()) {
        out.push_back({{"complex", f.complex}, {"rate", f.rate}});
    }
    doc["outflow"] = std::move(out);
    doc["outputs"] = net.outputs();
    return doc;
}

}  // namespace kronred
