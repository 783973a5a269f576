#include "abtrace/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

namespace abtrace::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {
    "problem", "radius", "inner_radius", "alpha", "lattice", "cutoff", "ngon", "offset", "fit",
    "trace", "torus_vectors", "lengths", "out", "threads"};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <class T>
T get(const json& j, const char* key, const T& fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

std::optional<double> get_opt(const json& j, const char* key, const std::optional<double>& fallback) {
    if (!j.contains(key)) return fallback;
    if (j.at(key).is_null()) return std::nullopt;
    return get<double>(j, key, 0.0);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown config key '" + where + k + "'");
}

Vec2 get_vec(const json& j, const char* key, const Vec2& fallback) {
    const auto v = get<std::vector<double>>(j, key, {fallback.x(), fallback.y()});
    if (v.size() != 2) throw ConfigError(std::string("'") + key + "' must have two entries");
    return {v[0], v[1]};
}

} // namespace

double parse_angle(const std::string& text) {
    static const std::regex re(R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(pi)?(?:\s*/\s*(\d+\.?\d*))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re) || (!m[2].matched && !m[3].matched))
        throw ConfigError("cannot parse angle '" + text + "'");
    if (m[4].matched && !m[3].matched && !m[2].matched) throw ConfigError("cannot parse angle '" + text + "'");
    double v = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (m[3].matched) v *= kPi;
    if (m[4].matched) {
        const double den = std::stod(m[4].str());
        if (den == 0.0) throw ConfigError("zero denominator in angle '" + text + "'");
        v /= den;
    }
    return m[1].str() == "-" ? -v : v;
}

std::vector<double> parse_alpha_list(const std::string& text) {
    if (text == "sweep") return {0.0, kPi / 4, kPi / 3, kPi / 2, 2 * kPi / 3, kPi};
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
    if (out.empty()) throw ConfigError("empty alpha list");
    return out;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (problem != "disk" && problem != "annulus" && problem != "torus")
        fail("problem must be disk, annulus or torus");
    if (!(radius > 0.0) || !std::isfinite(radius)) fail("radius must be positive");
    if (problem == "annulus" && !(inner_radius > 0.0 && inner_radius < radius))
        fail("annulus needs 0 < inner_radius < radius");
    if (alpha.empty()) fail("alpha list is empty");
    for (double a : alpha)
        if (!std::isfinite(a)) fail("alpha must be finite");
    if (!(std::abs(e1.x() * e2.y() - e1.y() * e2.x()) > 1e-12 * e1.norm() * e2.norm()))
        fail("lattice vectors are linearly dependent");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) fail("cutoff must be positive");
    if (problem != "torus" && cutoff * radius > 400.0) fail("cutoff * radius must not exceed 400");
    if (ngon < 2) fail("ngon must be >= 2");
    if (!(std::abs(offset) < radius * std::sin(kPi / ngon))) fail("offset must lie inside the first side");
    if (fit_half_width && !(*fit_half_width > 0.0 && *fit_half_width <= 0.35))
        fail("fit half_width must lie in (0, 0.35]");
    if (background_degree < 0 || background_degree > 4) fail("background_degree must lie in [0, 4]");
    if (t_step && !(*t_step > 0.0)) fail("trace step must be positive");
    if (t_min && t_max && !(*t_min < *t_max)) fail("trace t_min must be below t_max");
    if (torus_vectors.empty()) fail("torus_vectors is empty");
    for (const auto& v : torus_vectors)
        if (v[0] == 0 && v[1] == 0) fail("torus_vectors may not contain the zero vector");
    if (length_max && !(*length_max > 0.0)) fail("lengths l_max must be positive");
    if (max_sides < 2) fail("lengths max_sides must be >= 2");
    if (!(isolation_half_width > 0.0)) fail("lengths half_width must be positive");
    if (threads < 1) fail("threads must be >= 1");
    if (out.empty()) fail("out directory is empty");
}

json ExperimentConfig::experiment_json() const {
    json j;
    j["problem"] = problem;
    j["radius"] = radius;
    j["inner_radius"] = inner_radius;
    j["alpha"] = alpha;
    j["lattice"] = {{"e1", {e1.x(), e1.y()}}, {"e2", {e2.x(), e2.y()}}};
    j["cutoff"] = cutoff;
    j["ngon"] = ngon;
    j["offset"] = offset;
    j["fit"] = {{"half_width", opt(fit_half_width)}, {"background_degree", background_degree}};
    j["trace"] = {{"t_min", opt(t_min)}, {"t_max", opt(t_max)}, {"step", opt(t_step)}};
    j["torus_vectors"] = torus_vectors;
    j["lengths"] = {{"l_max", opt(length_max)}, {"max_sides", max_sides}, {"half_width", isolation_half_width}};
    return j;
}

json ExperimentConfig::full_json() const {
    json j = experiment_json();
    j["out"] = out;
    j["threads"] = threads;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    check_keys(j, kKeys, "");
    ExperimentConfig c;
    c.problem = get<std::string>(j, "problem", c.problem);
    c.radius = get<double>(j, "radius", c.radius);
    c.inner_radius = get<double>(j, "inner_radius", c.inner_radius);
    if (j.contains("alpha")) {
        const json& a = j.at("alpha");
        if (a.is_number()) c.alpha = {a.get<double>()};
        else if (a.is_string()) c.alpha = parse_alpha_list(a.get<std::string>());
        else if (a.is_array()) {
            c.alpha.clear();
            for (const auto& x : a) {
                if (x.is_number()) c.alpha.push_back(x.get<double>());
                else if (x.is_string()) c.alpha.push_back(parse_angle(x.get<std::string>()));
                else throw ConfigError("alpha entries must be numbers or angle strings");
            }
        } else throw ConfigError("alpha must be a number, string or array");
    }
    if (j.contains("lattice")) {
        const json& l = j.at("lattice");
        check_keys(l, {"e1", "e2"}, "lattice.");
        c.e1 = get_vec(l, "e1", c.e1);
        c.e2 = get_vec(l, "e2", c.e2);
    }
    c.cutoff = get<double>(j, "cutoff", c.cutoff);
    c.ngon = get<int>(j, "ngon", c.ngon);
    c.offset = get<double>(j, "offset", c.offset);
    if (j.contains("fit")) {
        const json& f = j.at("fit");
        check_keys(f, {"half_width", "background_degree"}, "fit.");
        c.fit_half_width = get_opt(f, "half_width", c.fit_half_width);
        c.background_degree = get<int>(f, "background_degree", c.background_degree);
    }
    if (j.contains("trace")) {
        const json& t = j.at("trace");
        check_keys(t, {"t_min", "t_max", "step"}, "trace.");
        c.t_min = get_opt(t, "t_min", c.t_min);
        c.t_max = get_opt(t, "t_max", c.t_max);
        c.t_step = get_opt(t, "step", c.t_step);
    }
    if (j.contains("torus_vectors")) c.torus_vectors = get<std::vector<std::array<long, 2>>>(j, "torus_vectors", {});
    if (j.contains("lengths")) {
        const json& l = j.at("lengths");
        check_keys(l, {"l_max", "max_sides", "half_width"}, "lengths.");
        c.length_max = get_opt(l, "l_max", c.length_max);
        c.max_sides = get<int>(l, "max_sides", c.max_sides);
        c.isolation_half_width = get<double>(l, "half_width", c.isolation_half_width);
    }
    c.out = get<std::string>(j, "out", c.out);
    c.threads = get<int>(j, "threads", c.threads);
    return c;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = config.experiment_json().dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace abtrace::cli
