#include "loewdisc/model_io.hpp"

#include <cmath>
#include <array>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "loewdisc/error.hpp"

namespace loewdisc::io {

namespace {

using nlohmann::json;

RMatrix matrix_from_json(const json& j, const char* name) {
    if (j.is_number()) {
        return RMatrix::Constant(1, 1, j.get<double>());
    }
    if (!j.is_array()) {
        throw InvalidArgument(std::string("field '") + name + "' must be a nested array");
    }
    if (j.empty()) {
        return RMatrix(0, 0);
    }
    // A flat array is read as a row vector.
    if (!j.front().is_array()) {
        RMatrix m(1, static_cast<Eigen::Index>(j.size()));
        for (std::size_t c = 0; c < j.size(); ++c) {
            m(0, static_cast<Eigen::Index>(c)) = j[c].get<double>();
        }
        return m;
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    RMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidArgument(std::string("field '") + name + "' has ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                throw InvalidArgument(std::string("field '") + name + "' contains a non-number");
            }
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

json matrix_to_json(const RMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(std::move(row));
    }
    return out;
}

const json& field(const json& j, const char* name) {
    if (!j.contains(name)) {
        throw InvalidArgument(std::string("model file lacks field '") + name + "'");
    }
    return j.at(name);
}

// Restores the shapes of empty B/C blocks from D.
void fix_empty(RMatrix& a, RMatrix& b, RMatrix& c, const RMatrix& d) {
    if (a.size() == 0) {
        a.resize(0, 0);
        b.resize(0, d.cols());
        c.resize(d.rows(), 0);
    }
}

}  // namespace

AnyModel model_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidArgument("model file must contain a JSON object");
    }
    const std::string type = field(j, "type").get<std::string>();
    if (type == "css") {
        ContinuousStateSpace g{matrix_from_json(field(j, "A"), "A"), matrix_from_json(field(j, "B"), "B"),
                               matrix_from_json(field(j, "C"), "C"), matrix_from_json(field(j, "D"), "D")};
        fix_empty(g.A, g.B, g.C, g.D);
        g.validate();
        return g;
    }
    if (type == "dss") {
        DiscreteStateSpace g{matrix_from_json(field(j, "A"), "A"), matrix_from_json(field(j, "B"), "B"),
                             matrix_from_json(field(j, "C"), "C"), matrix_from_json(field(j, "D"), "D"),
                             field(j, "h").get<double>()};
        fix_empty(g.A, g.B, g.C, g.D);
        g.validate();
        return g;
    }
    if (type == "tds") {
        TimeDelayModel g;
        g.A0 = matrix_from_json(field(j, "A0"), "A0");
        g.A1 = matrix_from_json(field(j, "A1"), "A1");
        g.A2 = matrix_from_json(field(j, "A2"), "A2");
        g.B = matrix_from_json(field(j, "B"), "B");
        g.C = matrix_from_json(field(j, "C"), "C");
        g.tau = field(j, "tau").get<double>();
        g.gamma = field(j, "gamma").get<double>();
        g.validate();
        return g;
    }
    throw InvalidArgument("unknown model type '" + type + "' (expected css, dss or tds)");
}

json to_json(const ContinuousStateSpace& g) {
    return {{"type", "css"},
            {"A", matrix_to_json(g.A)},
            {"B", matrix_to_json(g.B)},
            {"C", matrix_to_json(g.C)},
            {"D", matrix_to_json(g.D)}};
}

json to_json(const TimeDelayModel& g) {
    return {{"type", "tds"},          {"A0", matrix_to_json(g.A0)}, {"A1", matrix_to_json(g.A1)},
            {"A2", matrix_to_json(g.A2)}, {"B", matrix_to_json(g.B)},   {"C", matrix_to_json(g.C)},
            {"tau", g.tau},           {"gamma", g.gamma}};
}

json to_json(const DiscreteStateSpace& g) {
    return {{"type", "dss"},
            {"A", matrix_to_json(g.A)},
            {"B", matrix_to_json(g.B)},
            {"C", matrix_to_json(g.C)},
            {"D", matrix_to_json(g.D)},
            {"h", g.h}};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

AnyModel load_model(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw InvalidArgument("cannot parse model file '" + path.string() + "': " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const json::exception& e) {
        throw InvalidArgument("malformed model file '" + path.string() + "': " + e.what());
    }
}

ContinuousModel as_continuous(const AnyModel& m) {
    if (const auto* css = std::get_if<ContinuousStateSpace>(&m)) {
        return *css;
    }
    if (const auto* tds = std::get_if<TimeDelayModel>(&m)) {
        return *tds;
    }
    throw Unsupported("a continuous-time model is required, got a discrete one");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dataset_to_csv(const FrequencyDataSet& data) {
    data.validate();
    std::ostringstream os;
    os << "# h = " << format_number(data.h) << "\n";
    os << "omega,re_node,im_node,re_value,im_value\n";
    for (std::size_t i = 0; i < data.pairs(); ++i) {
        const cdouble z = data.nodes[2 * i];
        const cdouble v = data.values[2 * i];
        os << format_number(data.omegas[i]) << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << ','
           << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
    }
    return os.str();
}

FrequencyDataSet dataset_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<double> h;
    bool header = false;
    std::vector<double> omegas;
    std::vector<cdouble> nodes, values;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (line.find("h") != std::string::npos && eq != std::string::npos) {
                h = std::stod(line.substr(eq + 1));
            }
            continue;
        }
        if (!header) {
            if (line != "omega,re_node,im_node,re_value,im_value") {
                throw InvalidArgument("data set CSV must start with the header omega,re_node,im_node,re_value,im_value");
            }
            header = true;
            continue;
        }
        std::array<double, 5> f{};
        std::istringstream ls(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= f.size()) {
                throw InvalidArgument("too many columns on data set line " + std::to_string(lineno));
            }
            try {
                f[c++] = std::stod(cell);
            } catch (const std::exception&) {
                throw InvalidArgument("bad number on data set line " + std::to_string(lineno));
            }
        }
        if (c != f.size()) {
            throw InvalidArgument("expected 5 columns on data set line " + std::to_string(lineno));
        }
        omegas.push_back(f[0]);
        nodes.emplace_back(f[1], f[2]);
        values.emplace_back(f[3], f[4]);
    }
    if (omegas.empty()) {
        throw InvalidArgument("data set CSV has no rows");
    }
    if (!h) {
        h = std::arg(nodes.front()) / omegas.front();
    }
    std::size_t idx = 0;
    FrequencyDataSet data = make_dataset(omegas, *h, [&](double) { return values[idx++]; });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(nodes[i] - data.nodes[2 * i]) > 1e-9) {
            throw InvalidArgument("data set node on row " + std::to_string(i + 1) + " is not exp(j omega h)");
        }
    }
    return data;
}

}  // namespace loewdisc::io
