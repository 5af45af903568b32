#include "eife/config.hpp"

#include "eife/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace eife {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void syntax_error(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return std::string(line.substr(0, i));
    }
    return std::string(line);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::string parse_string(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') syntax_error(line, "malformed string " + s);
    return s.substr(1, s.size() - 2);
}

ConfigValue parse_value(const std::string& raw, int line) {
    ConfigValue v;
    v.line = line;
    if (raw.empty()) syntax_error(line, "missing value");
    if (raw.front() == '"') {
        v.value = parse_string(raw, line);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.value = raw == "true";
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') syntax_error(line, "unterminated array");
        const std::string body = raw.substr(1, raw.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        bool in_string = false;
        for (char c : body) {
            if (c == '"') in_string = !in_string;
            if (c == ',' && !in_string) {
                items.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        if (!items.empty() && items.front().front() == '"') {
            std::vector<std::string> strings;
            for (const auto& it : items) strings.push_back(parse_string(it, line));
            v.value = strings;
        } else {
            std::vector<double> numbers;
            for (const auto& it : items) {
                double d = 0.0;
                if (!parse_number(it, d)) syntax_error(line, "array element '" + it + "' is not a number");
                numbers.push_back(d);
            }
            v.value = numbers;
        }
        return v;
    }
    double d = 0.0;
    if (!parse_number(raw, d)) syntax_error(line, "cannot parse value '" + raw + "'");
    v.value = d;
    return v;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed",
        "problem.name", "problem.eps", "problem.theta", "problem.theta_c", "problem.seed",
        "problem.D", "problem.f", "problem.u0", "problem.exact", "problem.g",
        "mesh.lower", "mesh.upper", "mesh.n", "mesh.bc",
        "scheme.name", "scheme.c2",
        "time.T", "time.dt", "time.nt",
        "output.cadence", "output.snapshot_times", "output.report", "output.series", "output.snapshot_prefix",
        "numerics.initial", "numerics.error_reference", "numerics.reaction_load",
        "numerics.quadrature_points", "numerics.gradient_points",
        "study.mode", "study.meshes", "study.nt",
    };
    return keys;
}

class Reader {
public:
    explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

    const ConfigValue* find(const std::string& key) const {
        auto it = doc_.find(key);
        return it == doc_.end() ? nullptr : &it->second;
    }

    template <class T>
    const T& get(const std::string& key, const char* type) const {
        const ConfigValue* v = find(key);
        if (const T* p = std::get_if<T>(&v->value)) return *p;
        throw ConfigError("key '" + key + "' must be " + type);
    }

    std::optional<double> number(const std::string& key) const {
        if (!find(key)) return std::nullopt;
        return get<double>(key, "a number");
    }

    std::optional<std::size_t> count(const std::string& key) const {
        auto v = number(key);
        if (!v) return std::nullopt;
        if (*v < 0 || std::floor(*v) != *v) throw ConfigError("key '" + key + "' must be a non-negative integer");
        return static_cast<std::size_t>(*v);
    }

    std::optional<std::string> string(const std::string& key) const {
        if (!find(key)) return std::nullopt;
        return get<std::string>(key, "a string");
    }

    std::optional<bool> boolean(const std::string& key) const {
        if (!find(key)) return std::nullopt;
        return get<bool>(key, "true or false");
    }

    std::optional<std::vector<double>> numbers(const std::string& key) const {
        if (!find(key)) return std::nullopt;
        return get<std::vector<double>>(key, "an array of numbers");
    }

    // A bare number is read as a one-element array.
    std::optional<std::vector<double>> number_or_numbers(const std::string& key) const {
        const ConfigValue* v = find(key);
        if (!v) return std::nullopt;
        if (const auto* d = std::get_if<double>(&v->value)) return std::vector<double>{*d};
        return get<std::vector<double>>(key, "a number or an array of numbers");
    }

    std::optional<std::vector<std::string>> strings(const std::string& key) const {
        if (!find(key)) return std::nullopt;
        return get<std::vector<std::string>>(key, "an array of strings");
    }

private:
    const ConfigDocument& doc_;
};

std::vector<std::size_t> to_counts(const std::vector<double>& v, const std::string& key) {
    std::vector<std::size_t> out;
    for (double d : v) {
        if (d < 1 || std::floor(d) != d) throw ConfigError("key '" + key + "' must hold positive integers");
        out.push_back(static_cast<std::size_t>(d));
    }
    return out;
}

BoundaryKind builtin_bc(const std::string& name) {
    if (name == "linear_rd") return BoundaryKind::HomogeneousDirichlet;
    if (name == "allen_cahn_wave") return BoundaryKind::Dirichlet;
    return BoundaryKind::Periodic;
}

} // namespace

std::string_view to_string(RunMode mode) {
    switch (mode) {
    case RunMode::Run: return "run";
    case RunMode::Convergence: return "convergence";
    case RunMode::Timing: return "timing";
    }
    return "run";
}

ConfigDocument parse_config_document(std::string_view text) {
    ConfigDocument doc;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') syntax_error(line_no, "malformed section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty()) syntax_error(line_no, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) syntax_error(line_no, "expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) syntax_error(line_no, "missing key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (doc.count(full)) syntax_error(line_no, "duplicate key '" + full + "'");
        doc.emplace(full, parse_value(trim(std::string_view(line).substr(eq + 1)), line_no));
    }
    return doc;
}

std::vector<std::size_t> parse_resolution(std::string_view text) {
    std::vector<std::size_t> n;
    std::string cur;
    auto flush = [&] {
        double d = 0.0;
        if (!parse_number(cur, d) || d < 1 || std::floor(d) != d) {
            throw ConfigError("malformed resolution '" + std::string(text) + "'");
        }
        n.push_back(static_cast<std::size_t>(d));
        cur.clear();
    };
    for (char c : text) {
        if (c == 'x' || c == 'X') flush();
        else cur += c;
    }
    flush();
    return n;
}

RunConfig parse_config(std::string_view text) {
    const ConfigDocument doc = parse_config_document(text);
    for (const auto& [key, value] : doc) {
        if (!known_keys().count(key)) {
            throw ConfigError("unknown key '" + key + "' (line " + std::to_string(value.line) + ")");
        }
    }
    const Reader r(doc);
    RunConfig cfg;

    const auto name = r.string("problem.name");
    if (!name) throw ConfigError("missing required key 'problem.name'");
    cfg.problem = *name;
    static const std::set<std::string> problems = {"linear_rd", "allen_cahn_wave", "flory_huggins", "custom"};
    if (!problems.count(cfg.problem)) throw ConfigError("problem.name: unknown problem '" + cfg.problem + "'");
    if (auto v = r.number("problem.eps")) {
        if (!(*v > 0.0)) throw ConfigError("problem.eps must be positive");
        cfg.eps = *v;
    }
    if (auto v = r.number("problem.theta")) cfg.theta = *v;
    if (auto v = r.number("problem.theta_c")) cfg.theta_c = *v;
    if (auto v = r.count("problem.seed")) cfg.seed = *v;
    if (auto v = r.count("seed")) cfg.seed = *v;

    if (auto v = r.numbers("mesh.lower")) cfg.lower = *v;
    if (auto v = r.numbers("mesh.upper")) cfg.upper = *v;
    if (auto v = r.numbers("mesh.n")) cfg.n = to_counts(*v, "mesh.n");
    if (auto v = r.string("mesh.bc")) cfg.bc = parse_boundary_kind(*v);

    if (cfg.problem == "custom") {
        auto& c = cfg.custom;
        c.diffusion = r.number("problem.D").value_or(1.0);
        c.reaction = r.string("problem.f").value_or("");
        c.initial = r.string("problem.u0").value_or("");
        c.exact = r.string("problem.exact").value_or("");
        c.boundary = r.string("problem.g").value_or("");
        if (c.reaction.empty()) throw ConfigError("missing required key 'problem.f'");
        if (c.initial.empty() && c.exact.empty()) throw ConfigError("missing required key 'problem.u0'");
        if (cfg.lower.empty() || cfg.upper.empty()) throw ConfigError("missing required key 'mesh.lower'/'mesh.upper'");
        // Validate expressions now so errors name their key.
        for (const auto& [key, src] : {std::pair{"problem.f", c.reaction}, {"problem.u0", c.initial},
                                       {"problem.exact", c.exact}, {"problem.g", c.boundary}}) {
            if (src.empty()) continue;
            try {
                Expression::compile(src);
            } catch (const ConfigError& e) {
                throw ConfigError(std::string(key) + ": " + e.what());
            }
        }
    } else {
        for (const char* key : {"problem.D", "problem.f", "problem.u0", "problem.exact", "problem.g"}) {
            if (r.find(key)) throw ConfigError(std::string("key '") + key + "' is only valid for custom problems");
        }
        if (cfg.bc && *cfg.bc != builtin_bc(cfg.problem)) {
            throw ConfigError("mesh.bc: problem '" + cfg.problem + "' requires " +
                              std::string(to_string(builtin_bc(cfg.problem))) + " boundary conditions");
        }
    }

    if (auto v = r.string("scheme.name")) cfg.scheme = parse_scheme(*v);
    if (auto v = r.number("scheme.c2")) cfg.c2 = *v;
    if (cfg.scheme == Scheme::Eife2 && !(cfg.c2 > 0.0 && cfg.c2 <= 1.0)) throw ConfigError("scheme.c2 must lie in (0, 1]");

    cfg.final_time = r.number("time.T");
    cfg.dt = r.number("time.dt");
    cfg.nt = r.count("time.nt");
    if (cfg.final_time && !(*cfg.final_time >= 0.0)) throw ConfigError("time.T must be non-negative");
    if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("time.dt must be positive");

    cfg.cadence = r.count("output.cadence");
    if (cfg.cadence && *cfg.cadence == 0) throw ConfigError("output.cadence must be at least 1");
    if (auto v = r.numbers("output.snapshot_times")) cfg.snapshot_times = *v;
    if (auto v = r.string("output.report")) cfg.report_file = *v;
    if (auto v = r.string("output.series")) cfg.series_file = *v;
    if (auto v = r.string("output.snapshot_prefix")) cfg.snapshot_prefix = *v;

    if (auto v = r.string("numerics.initial")) {
        if (*v == "interpolate") cfg.initial = InitialMode::Interpolate;
        else if (*v == "projection") cfg.initial = InitialMode::L2Projection;
        else throw ConfigError("numerics.initial must be \"interpolate\" or \"projection\"");
    }
    if (auto v = r.string("numerics.error_reference")) cfg.norms.reference = parse_error_reference(*v);
    if (auto v = r.string("numerics.reaction_load")) {
        if (*v == "lumped") cfg.load.reaction = ReactionLoad::Lumped;
        else if (*v == "interpolated") cfg.load.reaction = ReactionLoad::Interpolated;
        else throw ConfigError("numerics.reaction_load must be \"lumped\" or \"interpolated\"");
    }
    if (auto v = r.count("numerics.quadrature_points")) {
        if (*v < 1 || *v > 8) throw ConfigError("numerics.quadrature_points must lie in 1..8");
        cfg.norms.points_per_axis = *v;
    }
    if (auto v = r.count("numerics.gradient_points")) {
        if (*v < 1 || *v > 8) throw ConfigError("numerics.gradient_points must lie in 1..8");
        cfg.norms.gradient_points_per_axis = *v;
    }

    if (auto v = r.string("study.mode")) {
        if (*v == "run") cfg.mode = RunMode::Run;
        else if (*v == "convergence") cfg.mode = RunMode::Convergence;
        else if (*v == "timing") cfg.mode = RunMode::Timing;
        else throw ConfigError("study.mode must be run, convergence or timing");
    }
    if (auto v = r.strings("study.meshes")) {
        for (const auto& s : *v) cfg.study_meshes.push_back(parse_resolution(s));
    }
    if (auto v = r.number_or_numbers("study.nt")) cfg.study_nt = to_counts(*v, "study.nt");

    // Cross-field checks that need the problem defaults.
    const Problem problem = cfg.make_problem();
    if (cfg.study_meshes.empty() && cfg.n.empty()) throw ConfigError("missing required key 'mesh.n'");
    // Builtin boxes may be run on their leading axes only.
    std::size_t dim = cfg.lower.empty() ? problem.dim() : cfg.lower.size();
    if (cfg.lower.empty()) {
        const std::size_t rank = cfg.n.empty() ? cfg.study_meshes.front().size() : cfg.n.size();
        if (rank >= 1 && rank <= dim) dim = rank;
    }
    if (dim < 1 || dim > 3) throw ConfigError("mesh.lower: 1, 2 or 3 axes required");
    if (!cfg.n.empty() && cfg.n.size() != dim) throw ConfigError("mesh.n: expected " + std::to_string(dim) + " entries");
    for (const auto& m : cfg.study_meshes) {
        if (m.size() != dim) throw ConfigError("study.meshes: expected " + std::to_string(dim) + " axes per entry");
    }
    if (cfg.dt && cfg.nt) {
        const double t_end = cfg.terminal_time(problem);
        if (std::abs(*cfg.dt * static_cast<double>(*cfg.nt) - t_end) > 1e-12 * std::max(1.0, t_end)) {
            throw ConfigError("time.dt: dt * nt must equal T when both are given");
        }
    }
    if (cfg.study_nt.empty() && !cfg.dt && !cfg.nt) throw ConfigError("missing required key 'time.nt' (or 'time.dt')");
    if (!cfg.study_meshes.empty() && !cfg.study_nt.empty() && cfg.study_meshes.size() > 1 &&
        cfg.study_nt.size() > 1 && cfg.study_meshes.size() != cfg.study_nt.size()) {
        throw ConfigError("study.nt: ladder length must match study.meshes");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Problem RunConfig::make_problem() const {
    Problem p;
    if (problem == "linear_rd") {
        p = builtin_linear_rd();
    } else if (problem == "allen_cahn_wave") {
        p = builtin_allen_cahn_wave(eps > 0.0 ? eps : 0.05);
    } else if (problem == "flory_huggins") {
        p = builtin_flory_huggins(eps > 0.0 ? eps : 0.01, theta, theta_c, seed);
    } else {
        CustomProblemSpec spec = custom;
        spec.bc = bc.value_or(BoundaryKind::HomogeneousDirichlet);
        spec.lower = lower;
        spec.upper = upper;
        spec.final_time = final_time.value_or(1.0);
        p = make_custom_problem(spec);
    }
    if (final_time) p.final_time = *final_time;
    return p;
}

TensorMesh RunConfig::make_mesh(const Problem& p) const {
    const std::vector<double>& lo = lower.empty() ? p.lower : lower;
    const std::vector<double>& hi = upper.empty() ? p.upper : upper;
    std::vector<std::size_t> counts = n;
    if (counts.empty() && !study_meshes.empty()) counts = study_meshes.front();
    // Builtins with a smaller configured rank use the leading axes of their default box.
    if (lower.empty() && counts.size() < lo.size()) {
        return TensorMesh::box(std::vector<double>(lo.begin(), lo.begin() + static_cast<long>(counts.size())),
                               std::vector<double>(hi.begin(), hi.begin() + static_cast<long>(counts.size())),
                               counts, p.bc);
    }
    return TensorMesh::box(lo, hi, counts, p.bc);
}

double RunConfig::terminal_time(const Problem& p) const { return final_time.value_or(p.final_time); }

std::size_t RunConfig::steps(const Problem& p) const {
    const double t_end = terminal_time(p);
    if (nt) return *nt;
    SchemeConfig s;
    s.scheme = scheme;
    s.c2 = c2;
    s.dt = *dt;
    s.final_time = t_end;
    return s.num_steps();
}

std::size_t RunConfig::observer_cadence(std::size_t n_steps) const {
    if (cadence) return *cadence;
    return std::max<std::size_t>(1, n_steps / 100);
}

StudySpec RunConfig::make_study(const Problem& p) const {
    StudySpec spec;
    spec.problem = p;
    spec.scheme = scheme;
    spec.c2 = c2;
    spec.final_time = terminal_time(p);
    spec.run.initial = initial;
    spec.run.load = load;
    spec.run.cadence = 1;
    spec.norms = norms;

    std::vector<std::vector<std::size_t>> meshes = study_meshes;
    if (meshes.empty()) meshes.push_back(n);
    std::vector<std::size_t> nts = study_nt;
    if (nts.empty()) nts.push_back(steps(p));
    const std::size_t rungs = std::max(meshes.size(), nts.size());
    for (std::size_t i = 0; i < rungs; ++i) {
        RunConfig one = *this;
        one.n = meshes[meshes.size() == 1 ? 0 : i];
        spec.rungs.push_back({one.make_mesh(p), nts[nts.size() == 1 ? 0 : i]});
    }
    return spec;
}

} // namespace eife
