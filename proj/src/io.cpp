#include "riem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "riem/error.hpp"

namespace riem::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::map<std::string, std::string> parse_key_value(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("malformed line (expected key = value): " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> read_key_value(const std::string& path) {
    return parse_key_value(slurp(path));
}

std::vector<double> parse_reals(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        size_t used = 0;
        double v;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number: " + tok);
        }
        if (used != tok.size()) throw ConfigError("not a number: " + tok);
        out.push_back(v);
    }
    return out;
}

Manifold manifold_from_file(const std::string& path) {
    const auto kv = read_key_value(path);
    const auto kind_it = kv.find("kind");
    const auto name_it = kv.find("name");
    if (kind_it == kv.end() || name_it == kv.end())
        throw ConfigError("manifold definition needs 'kind' and 'name': " + path);
    std::vector<double> params;
    if (auto it = kv.find("params"); it != kv.end()) params = parse_reals(it->second);
    if (kind_it->second == "builtin") return builtin(name_it->second, params);
    if (kind_it->second == "registered") return make_registered(name_it->second, params);
    throw ConfigError("unknown manifold kind: " + kind_it->second);
}

Manifold manifold_from_spec(const std::string& spec) {
    if (std::ifstream probe(spec); probe.good()) return manifold_from_file(spec);
    const auto colon = spec.find(':');
    const std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) params = parse_reals(spec.substr(colon + 1));
    return builtin(name, params);
}

std::vector<Vec> read_points_csv(const std::string& path) {
    const std::string text = slurp(path);
    std::istringstream in(text);
    std::string line;
    std::vector<Vec> pts;
    Eigen::Index dim = -1;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::vector<double> vals = parse_reals(line);
        Vec p(vals.size());
        for (size_t i = 0; i < vals.size(); ++i) p(static_cast<Eigen::Index>(i)) = vals[i];
        if (dim < 0) dim = p.size();
        if (p.size() != dim)
            throw ConfigError("dataset rows have inconsistent dimension: " + path);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw ConfigError("dataset is empty: " + path);
    return pts;
}

void write_points_csv(const std::vector<Vec>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    for (const Vec& p : points) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (i) out << ",";
            out << format_double(p(i));
        }
        out << "\n";
    }
}

std::string pga_model_to_json(const PgaModel& model, const Manifold& m) {
    nlohmann::ordered_json j;
    j["manifold"] = m.name();
    j["mode"] = model.mode == PgaMode::variance        ? "variance"
                : model.mode == PgaMode::reconstruction ? "reconstruction"
                                                         : "linearized";
    j["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
    nlohmann::ordered_json dirs = nlohmann::ordered_json::array();
    for (const Vec& d : model.directions)
        dirs.push_back(std::vector<double>(d.data(), d.data() + d.size()));
    j["directions"] = dirs;
    j["variances"] = model.variances;
    j["iterations"] = model.iterations;
    std::vector<bool> conv(model.converged.begin(), model.converged.end());
    j["converged"] = conv;
    return j.dump(2) + "\n";
}

void write_pga_model(const PgaModel& model, const Manifold& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << pga_model_to_json(model, m);
}

}  // namespace riem::io
