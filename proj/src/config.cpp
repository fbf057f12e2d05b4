#include "chdbc/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <variant>

#include "chdbc/io.hpp"
#include "chdbc/version.hpp"

namespace chdbc {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Raw "key = value" lines; '#' starts a comment, keys are section.name and
// must not repeat.
std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key must be section.name");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("duplicate config key: " + key);
        }
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double r = v.empty() ? 0.0 : std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(r)) {
        throw ConfigError(key + ": not a finite number: '" + v + "'");
    }
    return r;
}

long to_long(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long r = v.empty() ? 0 : std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
    return r;
}

int to_int(const std::string& key, const std::string& v) {
    const long r = to_long(key, v);
    if (r < -1000000 || r > 1000000) {
        throw ConfigError(key + ": out of range: '" + v + "'");
    }
    return static_cast<int>(r);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    if (v.empty() || v[0] == '-') {
        throw ConfigError(key + ": not a non-negative integer: '" + v + "'");
    }
    char* end = nullptr;
    const unsigned long long r = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size()) {
        throw ConfigError(key + ": not a non-negative integer: '" + v + "'");
    }
    return static_cast<std::uint64_t>(r);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + ": expected true or false: '" + v + "'");
}

RunConfig build_config(std::map<std::string, std::string> kv) {
    RunConfig cfg;
    const auto take =
        [&kv](const std::string& key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("run.preset")) cfg.preset = *v;
    const auto steps_v = take("run.steps");
    const auto tfinal_v = take("run.t_final");
    if (steps_v && tfinal_v) {
        throw ConfigError("give run.steps or run.t_final, not both");
    }
    if (auto v = take("run.seed")) cfg.seed = to_u64("run.seed", *v);
    if (auto v = take("run.strict_stability")) {
        cfg.strict_stability = to_bool("run.strict_stability", *v);
    }

    if (auto v = take("grid.nx")) cfg.grid.nx = to_int("grid.nx", *v);
    if (auto v = take("grid.ny")) cfg.grid.ny = to_int("grid.ny", *v);
    if (auto v = take("grid.origin_x")) cfg.grid.origin_x = to_double("grid.origin_x", *v);
    if (auto v = take("grid.origin_y")) cfg.grid.origin_y = to_double("grid.origin_y", *v);
    if (auto v = take("grid.extent_x")) cfg.grid.extent_x = to_double("grid.extent_x", *v);
    if (auto v = take("grid.extent_y")) cfg.grid.extent_y = to_double("grid.extent_y", *v);

    if (auto v = take("params.epsilon")) cfg.params.epsilon = to_double("params.epsilon", *v);
    if (auto v = take("params.delta")) cfg.params.delta = to_double("params.delta", *v);
    if (auto v = take("params.kappa")) cfg.params.kappa = to_double("params.kappa", *v);
    if (auto v = take("params.s1")) cfg.params.s1 = to_double("params.s1", *v);
    if (auto v = take("params.s2")) cfg.params.s2 = to_double("params.s2", *v);
    if (auto v = take("params.tau")) cfg.params.tau = to_double("params.tau", *v);

    const auto take_potential = [&](const std::string& sec, Potential& p) {
        if (auto v = take(sec + ".potential")) {
            try {
                p.kind = parse_potential_kind(*v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(sec + ".potential: " + e.what());
            }
        }
        if (auto v = take(sec + ".gamma")) p.gamma = to_double(sec + ".gamma", *v);
        if (auto v = take(sec + ".cos_theta_s")) {
            p.cos_theta_s = to_double(sec + ".cos_theta_s", *v);
        }
    };
    take_potential("bulk", cfg.params.bulk);
    take_potential("surface", cfg.params.surface);

    std::string ictype = "const";
    if (auto v = take("ic.type")) ictype = *v;
    if (ictype == "stripe") {
        cfg.ic = Stripe{};
    } else if (ictype == "sincos") {
        cfg.ic = SinCos{};
    } else if (ictype == "const") {
        ConstBulkBoundary c;
        if (auto v = take("ic.bulk_value")) c.bulk_value = to_double("ic.bulk_value", *v);
        if (auto v = take("ic.boundary_value")) {
            c.boundary_value = to_double("ic.boundary_value", *v);
        }
        cfg.ic = c;
    } else if (ictype == "random_uniform") {
        RandomUniform r;
        r.seed = cfg.seed;
        if (auto v = take("ic.bulk_lo")) r.bulk_lo = to_double("ic.bulk_lo", *v);
        if (auto v = take("ic.bulk_hi")) r.bulk_hi = to_double("ic.bulk_hi", *v);
        if (auto v = take("ic.surf_lo")) r.surf_lo = to_double("ic.surf_lo", *v);
        if (auto v = take("ic.surf_hi")) r.surf_hi = to_double("ic.surf_hi", *v);
        if (auto v = take("ic.seed")) r.seed = to_u64("ic.seed", *v);
        cfg.ic = r;
    } else if (ictype == "square_droplet") {
        SquareDroplet d;
        if (auto v = take("ic.center_x")) d.center_x = to_double("ic.center_x", *v);
        if (auto v = take("ic.center_y")) d.center_y = to_double("ic.center_y", *v);
        if (auto v = take("ic.side")) d.side = to_double("ic.side", *v);
        if (auto v = take("ic.inside_value")) d.inside_value = to_double("ic.inside_value", *v);
        if (auto v = take("ic.outside_value")) {
            d.outside_value = to_double("ic.outside_value", *v);
        }
        cfg.ic = d;
    } else if (ictype == "from_file") {
        FromFile f;
        if (auto v = take("ic.path")) {
            f.path = *v;
        } else {
            throw ConfigError("ic.type = from_file requires ic.path");
        }
        cfg.ic = f;
    } else {
        throw ConfigError("unknown ic.type: " + ictype);
    }

    if (auto v = take("output.dir")) cfg.output.dir = *v;
    if (auto v = take("output.snapshot_every")) {
        cfg.output.snapshot_every = to_long("output.snapshot_every", *v);
    }
    if (auto v = take("output.diagnostics_every")) {
        cfg.output.diagnostics_every = to_long("output.diagnostics_every", *v);
    }

    if (auto v = take("solver.method")) {
        if (*v == "direct") {
            cfg.solver.method = SolveMethod::direct;
        } else if (*v == "krylov") {
            cfg.solver.method = SolveMethod::krylov;
        } else {
            throw ConfigError("solver.method: expected direct or krylov: '" +
                              *v + "'");
        }
    }
    if (auto v = take("solver.tol")) cfg.solver.tol = to_double("solver.tol", *v);
    if (auto v = take("solver.max_iters")) {
        cfg.solver.max_iters = to_int("solver.max_iters", *v);
    }
    if (auto v = take("solver.precond")) {
        if (*v == "ilut") {
            cfg.solver.precond = PrecondKind::ilut;
        } else if (*v == "none") {
            cfg.solver.precond = PrecondKind::none;
        } else {
            throw ConfigError("solver.precond: expected ilut or none: '" + *v +
                              "'");
        }
    }

    if (steps_v) {
        cfg.steps = to_long("run.steps", *steps_v);
    } else if (tfinal_v) {
        const double tf = to_double("run.t_final", *tfinal_v);
        if (!(cfg.params.tau > 0.0)) {
            throw ConfigError("run.t_final requires positive params.tau");
        }
        const double n = tf / cfg.params.tau;
        const double rn = std::round(n);
        if (!(rn >= 0.0) ||
            std::fabs(n - rn) > 1e-9 * std::max(1.0, std::fabs(rn))) {
            throw ConfigError(
                "run.t_final must be a non-negative integer multiple of "
                "params.tau");
        }
        cfg.steps = static_cast<long>(rn);
    }

    if (!kv.empty()) {
        throw ConfigError("unknown config key: " + kv.begin()->first);
    }
    validate_config(cfg);
    return cfg;
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string ic_summary(const InitialCondition& ic) {
    if (std::holds_alternative<Stripe>(ic)) return "stripe";
    if (std::holds_alternative<SinCos>(ic)) return "sincos";
    if (const auto* c = std::get_if<ConstBulkBoundary>(&ic)) {
        return "const(bulk " + fmt_g(c->bulk_value) + ", boundary " +
               fmt_g(c->boundary_value) + ")";
    }
    if (const auto* r = std::get_if<RandomUniform>(&ic)) {
        return "random(bulk " + fmt_g(r->bulk_lo) + ".." + fmt_g(r->bulk_hi) +
               ", surf " + fmt_g(r->surf_lo) + ".." + fmt_g(r->surf_hi) +
               ", seed " + std::to_string(r->seed) + ")";
    }
    if (const auto* d = std::get_if<SquareDroplet>(&ic)) {
        return "droplet(center (" + fmt_g(d->center_x) + ", " +
               fmt_g(d->center_y) + "), side " + fmt_g(d->side) + ")";
    }
    const auto& f = std::get<FromFile>(ic);
    return "from_file(" + f.path + ")";
}

// Step counts for the CI-scale preset variants.
long desk_steps(const std::string& paper_name) {
    if (paper_name == "stripe-A") return 200;
    if (paper_name == "sincos-B") return 100;
    if (paper_name == "bulk0-bound1-C") return 600;
    if (paper_name == "random-D") return 600;
    if (paper_name == "droplet") return 600;
    return 400;  // contact-60, contact-120
}

RunConfig paper_preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    c.grid.nx = 101;
    c.grid.ny = 101;
    c.output.dir = "out/" + name;
    Params& p = c.params;
    if (name == "stripe-A") {
        p.epsilon = 1.0;
        p.delta = 0.1;
        p.kappa = 1.0;
        p.s1 = 1.0;
        p.s2 = 10.0;
        p.tau = 1e-5;
        c.ic = Stripe{};
        c.steps = 200;
    } else if (name == "sincos-B") {
        p.epsilon = 0.02;
        p.delta = 0.02;
        p.kappa = 1.0;
        p.s1 = 50.0;
        p.s2 = 50.0;
        p.tau = 1e-5;
        c.ic = SinCos{};
        c.steps = 100;
    } else if (name == "bulk0-bound1-C") {
        p.epsilon = 0.02;
        p.delta = 0.02;
        p.kappa = 0.02;
        p.s1 = 100.0;
        p.s2 = 100.0;
        p.tau = 8e-6;
        c.ic = ConstBulkBoundary{0.0, 1.0};
        c.steps = 2500;
    } else if (name == "random-D") {
        p.epsilon = 0.02;
        p.delta = 0.02;
        p.kappa = 0.075;
        p.s1 = 100.0;
        p.s2 = 100.0;
        // The source experiment restates no step size; carried over from the
        // companion experiment in the same comparison set.
        p.tau = 8e-6;
        c.grid.extent_x = 0.5;
        c.grid.extent_y = 0.5;
        c.ic = RandomUniform{-0.1, 0.1, 0.4, 0.6, 1};
        c.steps = 3000;
    } else if (name == "droplet" || name == "contact-60" ||
               name == "contact-120") {
        p.epsilon = 0.02;
        p.delta = 0.02;
        p.kappa = 1.0;
        p.s1 = 100.0;
        p.s2 = 100.0;
        c.ic = SquareDroplet{};
        if (name == "droplet") {
            p.tau = 2e-4;
            c.steps = 2500;
        } else {
            p.tau = 1e-5;
            c.steps = 1000;
            p.surface =
                make_contact_line(name == "contact-60" ? 0.5 : -0.5);
        }
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return c;
}

RunConfig desk_variant(const std::string& paper_name) {
    RunConfig c = paper_preset(paper_name);
    c.preset = paper_name + "-desk";
    c.output.dir = "out/" + c.preset;
    // Same spacing h = 0.05 on both built-in domains.
    const int n = c.grid.extent_x < 1.0 ? 11 : 21;
    c.grid.nx = n;
    c.grid.ny = n;
    if (c.params.bulk.kind == PotentialKind::double_well) {
        c.params.bulk.kind = PotentialKind::truncated_double_well;
    }
    if (c.params.surface.kind == PotentialKind::double_well) {
        c.params.surface.kind = PotentialKind::truncated_double_well;
    }
    c.steps = desk_steps(paper_name);
    return c;
}

const std::vector<std::string>& paper_preset_names() {
    static const std::vector<std::string> names = {
        "stripe-A", "sincos-B",   "bulk0-bound1-C", "random-D",
        "droplet",  "contact-60", "contact-120"};
    return names;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv = parse_kv(text);
    // No keys at all means a wrong path or a truncated write, not a run.
    if (kv.empty()) throw ConfigError("config text holds no keys");
    return build_config(std::move(kv));
}

RunConfig load_config_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config_text(text);
}

std::string serialize_config(const RunConfig& cfg) {
    std::string o;
    const auto put = [&o](const std::string& k, const std::string& v) {
        o += k;
        o += " = ";
        o += v;
        o += '\n';
    };
    const auto putd = [&put](const std::string& k, double v) {
        put(k, format_g17(v));
    };

    if (!cfg.preset.empty()) put("run.preset", cfg.preset);
    put("run.steps", std::to_string(cfg.steps));
    put("run.seed", std::to_string(cfg.seed));
    put("run.strict_stability", cfg.strict_stability ? "true" : "false");

    put("grid.nx", std::to_string(cfg.grid.nx));
    put("grid.ny", std::to_string(cfg.grid.ny));
    putd("grid.origin_x", cfg.grid.origin_x);
    putd("grid.origin_y", cfg.grid.origin_y);
    putd("grid.extent_x", cfg.grid.extent_x);
    putd("grid.extent_y", cfg.grid.extent_y);

    putd("params.epsilon", cfg.params.epsilon);
    putd("params.delta", cfg.params.delta);
    putd("params.kappa", cfg.params.kappa);
    putd("params.s1", cfg.params.s1);
    putd("params.s2", cfg.params.s2);
    putd("params.tau", cfg.params.tau);

    const auto put_potential = [&](const std::string& sec, const Potential& p) {
        put(sec + ".potential", potential_kind_name(p.kind));
        putd(sec + ".gamma", p.gamma);
        putd(sec + ".cos_theta_s", p.cos_theta_s);
    };
    put_potential("bulk", cfg.params.bulk);
    put_potential("surface", cfg.params.surface);

    if (std::holds_alternative<Stripe>(cfg.ic)) {
        put("ic.type", "stripe");
    } else if (std::holds_alternative<SinCos>(cfg.ic)) {
        put("ic.type", "sincos");
    } else if (const auto* c = std::get_if<ConstBulkBoundary>(&cfg.ic)) {
        put("ic.type", "const");
        putd("ic.bulk_value", c->bulk_value);
        putd("ic.boundary_value", c->boundary_value);
    } else if (const auto* r = std::get_if<RandomUniform>(&cfg.ic)) {
        put("ic.type", "random_uniform");
        putd("ic.bulk_lo", r->bulk_lo);
        putd("ic.bulk_hi", r->bulk_hi);
        putd("ic.surf_lo", r->surf_lo);
        putd("ic.surf_hi", r->surf_hi);
        put("ic.seed", std::to_string(r->seed));
    } else if (const auto* d = std::get_if<SquareDroplet>(&cfg.ic)) {
        put("ic.type", "square_droplet");
        putd("ic.center_x", d->center_x);
        putd("ic.center_y", d->center_y);
        putd("ic.side", d->side);
        putd("ic.inside_value", d->inside_value);
        putd("ic.outside_value", d->outside_value);
    } else {
        const auto& f = std::get<FromFile>(cfg.ic);
        put("ic.type", "from_file");
        put("ic.path", f.path);
    }

    put("output.dir", cfg.output.dir);
    put("output.snapshot_every", std::to_string(cfg.output.snapshot_every));
    put("output.diagnostics_every",
        std::to_string(cfg.output.diagnostics_every));

    put("solver.method",
        cfg.solver.method == SolveMethod::direct ? "direct" : "krylov");
    putd("solver.tol", cfg.solver.tol);
    put("solver.max_iters", std::to_string(cfg.solver.max_iters));
    put("solver.precond",
        cfg.solver.precond == PrecondKind::ilut ? "ilut" : "none");
    return o;
}

void apply_overrides(RunConfig& cfg,
                     const std::vector<std::string>& assignments) {
    std::map<std::string, std::string> kv = parse_kv(serialize_config(cfg));
    for (const std::string& assignment : assignments) {
        const std::size_t eq = assignment.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must be key=value: " + assignment);
        }
        const std::string key = trim(assignment.substr(0, eq));
        const std::string value = trim(assignment.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos) {
            throw ConfigError("override key must be section.name: " +
                              assignment);
        }
        if (key == "run.t_final") kv.erase("run.steps");
        if (key == "run.steps") kv.erase("run.t_final");
        if (key == "ic.type") {
            // The old type's fields do not apply to the new one.
            for (auto it = kv.begin(); it != kv.end();) {
                it = it->first.rfind("ic.", 0) == 0 ? kv.erase(it)
                                                    : std::next(it);
            }
        }
        kv[key] = value;
    }
    cfg = build_config(std::move(kv));
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    apply_overrides(cfg, {assignment});
}

void validate_config(const RunConfig& cfg) {
    if (cfg.steps < 0) throw ConfigError("run.steps must be >= 0");
    make_grid(cfg.grid);

    const Params& p = cfg.params;
    if (!(p.epsilon > 0.0)) throw ConfigError("params.epsilon must be > 0");
    if (!(p.delta > 0.0)) throw ConfigError("params.delta must be > 0");
    if (!(p.kappa >= 0.0)) throw ConfigError("params.kappa must be >= 0");
    if (!(p.s1 >= 0.0)) throw ConfigError("params.s1 must be >= 0");
    if (!(p.s2 >= 0.0)) throw ConfigError("params.s2 must be >= 0");
    if (!(p.tau > 0.0)) throw ConfigError("params.tau must be > 0");

    const auto check_potential = [](const std::string& sec, const Potential& q) {
        if (q.kind != PotentialKind::contact_line) return;
        if (!(q.gamma > 0.0)) {
            throw ConfigError(sec + ".gamma must be > 0 for contact_line");
        }
        if (!(q.cos_theta_s >= -1.0 && q.cos_theta_s <= 1.0)) {
            throw ConfigError(sec + ".cos_theta_s must lie in [-1, 1]");
        }
    };
    check_potential("bulk", p.bulk);
    check_potential("surface", p.surface);

    if (const auto* r = std::get_if<RandomUniform>(&cfg.ic)) {
        if (!(r->bulk_lo < r->bulk_hi) || !(r->surf_lo < r->surf_hi)) {
            throw ConfigError("ic random ranges must satisfy lo < hi");
        }
    }
    if (const auto* d = std::get_if<SquareDroplet>(&cfg.ic)) {
        if (!(d->side > 0.0)) throw ConfigError("ic.side must be > 0");
    }
    if (const auto* f = std::get_if<FromFile>(&cfg.ic)) {
        if (f->path.empty()) throw ConfigError("ic.path must not be empty");
    }

    if (cfg.output.dir.empty()) throw ConfigError("output.dir must not be empty");
    if (cfg.output.snapshot_every < 0) {
        throw ConfigError("output.snapshot_every must be >= 0");
    }
    if (cfg.output.diagnostics_every < 1) {
        throw ConfigError("output.diagnostics_every must be >= 1");
    }
    if (!(cfg.solver.tol > 0.0 && cfg.solver.tol <= 1e-2)) {
        throw ConfigError("solver.tol must be in (0, 1e-2]");
    }
    if (cfg.solver.max_iters < 1) {
        throw ConfigError("solver.max_iters must be >= 1");
    }
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names = paper_preset_names();
    for (const std::string& n : paper_preset_names()) {
        names.push_back(n + "-desk");
    }
    return names;
}

bool is_preset_name(const std::string& name) {
    for (const std::string& n : preset_names()) {
        if (n == name) return true;
    }
    return false;
}

RunConfig preset_config(const std::string& name) {
    const std::string suffix = "-desk";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return desk_variant(name.substr(0, name.size() - suffix.size()));
    }
    return paper_preset(name);
}

std::string list_scenarios_text() {
    std::string o =
        "name                  grid     h      tau      steps  eps    delta  "
        "kappa  s1    s2    bulk                   surface                ic\n";
    for (const std::string& name : preset_names()) {
        const RunConfig c = preset_config(name);
        const double h = c.grid.extent_x / (c.grid.nx - 1);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "%-21s %3dx%-3d  %-6g %-8g %-6ld %-6g %-6g %-6g %-5g "
                      "%-5g %-22s %-22s ",
                      name.c_str(), c.grid.nx, c.grid.ny, h, c.params.tau,
                      c.steps, c.params.epsilon, c.params.delta,
                      c.params.kappa, c.params.s1, c.params.s2,
                      potential_kind_name(c.params.bulk.kind),
                      potential_kind_name(c.params.surface.kind));
        o += buf;
        o += ic_summary(c.ic);
        o += '\n';
    }
    return o;
}

Grid make_grid(const GridConfig& g) {
    try {
        return build_grid(g.nx, g.ny, g.origin_x, g.origin_y, g.extent_x,
                          g.extent_y);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::string manifest_text(const RunConfig& cfg,
                          const std::map<std::string, std::string>& extra) {
    std::string o;
    o += "manifest.version = ";
    o += kVersion;
    o += '\n';
    o += "manifest.rng = ";
    o += kRngId;
    o += '\n';
    for (const auto& [k, v] : extra) {
        o += "manifest." + k + " = " + v + '\n';
    }
    o += "# resolved configuration\n";
    o += serialize_config(cfg);
    return o;
}

}  // namespace chdbc
