#include "gapfield/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gapfield {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// raw key/value pairs per block ("" = top level), with line numbers
struct RawConfig {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> blocks;
};

RawConfig tokenize(const std::string& text, std::vector<std::string>& errors) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, block;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.back() == '{') {
            if (!block.empty()) {
                errors.push_back("line " + std::to_string(lineno) + ": nested blocks are not supported");
                continue;
            }
            block = trim(line.substr(0, line.size() - 1));
            if (block.empty())
                errors.push_back("line " + std::to_string(lineno) + ": unnamed block");
            continue;
        }
        if (line == "}") {
            if (block.empty())
                errors.push_back("line " + std::to_string(lineno) + ": stray '}'");
            block.clear();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        raw.blocks[block].push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    if (!block.empty()) errors.push_back("unterminated block '" + block + "'");
    return raw;
}

struct BlockReader {
    const std::vector<std::pair<std::string, std::string>>* kv = nullptr;
    std::string block;
    std::vector<std::string>* errors = nullptr;
    std::set<std::string> known;

    std::string label(const std::string& key) const {
        return block.empty() ? key : block + "." + key;
    }
    const std::string* find(const std::string& key) {
        known.insert(key);
        if (!kv) return nullptr;
        const std::string* last = nullptr;
        for (const auto& [k, v] : *kv)
            if (k == key) last = &v;
        return last;
    }
    void get(const std::string& key, double& out) {
        if (const std::string* v = find(key)) {
            try {
                std::size_t used = 0;
                out = std::stod(*v, &used);
                if (used != v->size()) throw std::invalid_argument("");
            } catch (...) {
                errors->push_back(label(key) + ": expected a number, got '" + *v + "'");
            }
        }
    }
    void get(const std::string& key, int& out) {
        if (const std::string* v = find(key)) {
            try {
                std::size_t used = 0;
                out = std::stoi(*v, &used);
                if (used != v->size()) throw std::invalid_argument("");
            } catch (...) {
                errors->push_back(label(key) + ": expected an integer, got '" + *v + "'");
            }
        }
    }
    void get(const std::string& key, std::uint64_t& out) {
        if (const std::string* v = find(key)) {
            try {
                out = std::stoull(*v);
            } catch (...) {
                errors->push_back(label(key) + ": expected an integer, got '" + *v + "'");
            }
        }
    }
    void get(const std::string& key, bool& out) {
        if (const std::string* v = find(key)) {
            if (*v == "true" || *v == "1")
                out = true;
            else if (*v == "false" || *v == "0")
                out = false;
            else
                errors->push_back(label(key) + ": expected true/false, got '" + *v + "'");
        }
    }
    void get(const std::string& key, std::string& out) {
        if (const std::string* v = find(key)) out = *v;
    }
    void get_list(const std::string& key, std::vector<double>& out) {
        if (const std::string* v = find(key)) {
            std::vector<double> vals;
            std::stringstream ss(*v);
            std::string item;
            bool bad = false;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                try {
                    std::size_t used = 0;
                    vals.push_back(std::stod(item, &used));
                    if (used != item.size()) throw std::invalid_argument("");
                } catch (...) {
                    bad = true;
                }
            }
            if (bad || vals.empty())
                errors->push_back(label(key) + ": expected a comma-separated number list");
            else
                out = vals;
        }
    }
    void finish() {
        if (!kv) return;
        for (const auto& [k, v] : *kv)
            if (!known.count(k)) errors->push_back("unknown key '" + label(k) + "'");
    }
};

BlockReader reader(const RawConfig& raw, const std::string& block,
                   std::vector<std::string>* errors) {
    BlockReader r;
    r.block = block;
    r.errors = errors;
    const auto it = raw.blocks.find(block);
    r.kv = it == raw.blocks.end() ? nullptr : &it->second;
    return r;
}

}  // namespace

ParseResult parse_config_text(const std::string& text) {
    ParseResult result;
    auto& errors = result.errors;
    RawConfig raw = tokenize(text, errors);

    const std::set<std::string> known_blocks = {"",      "geometry", "mesh",  "boundary",
                                                "coefficients", "sweep",    "oracle", "output"};
    for (const auto& [name, kv] : raw.blocks) {
        (void)kv;
        if (!known_blocks.count(name)) errors.push_back("unknown block '" + name + "'");
    }

    RunConfig& cfg = result.config;
    {
        auto r = reader(raw, "geometry", &errors);
        r.get("kind", cfg.geometry.kind);
        r.get("r", cfg.geometry.r);
        r.get("R", cfg.geometry.R);
        r.get("eps", cfg.geometry.eps);
        r.get("a", cfg.geometry.a);
        r.get("b", cfg.geometry.b);
        r.get("m", cfg.geometry.m);
        r.get("lambda", cfg.geometry.lambda);
        r.get("mode", cfg.geometry.mode);
        double R0 = -1.0;
        r.get("R0", R0);
        if (R0 > 0.0) cfg.geometry.R0_override = R0;
        r.finish();
        const std::set<std::string> kinds = {"disks", "annulus", "ellipse", "mprofile"};
        if (!kinds.count(cfg.geometry.kind))
            errors.push_back("geometry.kind: unknown kind '" + cfg.geometry.kind + "'");
        if (cfg.geometry.mode != "planar" && cfg.geometry.mode != "axisymmetric")
            errors.push_back("geometry.mode: expected planar or axisymmetric");
    }
    {
        auto r = reader(raw, "mesh", &errors);
        r.get("h_target", cfg.mesh.h_target);
        r.get("gap_layers", cfg.mesh.gap_layers);
        r.get("band_factor", cfg.mesh.band_factor);
        r.finish();
        if (cfg.mesh.h_target <= 0.0) errors.push_back("mesh.h_target: must be positive");
        if (cfg.mesh.gap_layers < 4) errors.push_back("mesh.gap_layers: must be >= 4");
        if (cfg.mesh.band_factor <= 0.0) errors.push_back("mesh.band_factor: must be positive");
    }
    {
        auto r = reader(raw, "boundary", &errors);
        r.get("phi", cfg.boundary.phi);
        r.finish();
        try {
            make_phi(cfg.boundary.phi);
        } catch (const std::exception& e) {
            errors.push_back(std::string("boundary.phi: ") + e.what());
        }
    }
    {
        auto r = reader(raw, "coefficients", &errors);
        r.get("preset", cfg.coefficients.preset);
        r.get("scale", cfg.coefficients.scale);
        r.get("a_off", cfg.coefficients.a_off);
        r.get("kappa", cfg.coefficients.kappa);
        r.get("theta0", cfg.coefficients.theta0);
        r.get("width", cfg.coefficients.width);
        r.finish();
        const std::set<std::string> presets = {"identity", "scaled", "constant-offdiag",
                                               "smooth-rotation"};
        if (!presets.count(cfg.coefficients.preset))
            errors.push_back("coefficients.preset: unknown preset '" + cfg.coefficients.preset +
                             "'");
    }
    {
        auto r = reader(raw, "sweep", &errors);
        r.get_list("eps", cfg.sweep.eps);
        r.finish();
        for (std::size_t i = 0; i < cfg.sweep.eps.size(); ++i) {
            const double e = cfg.sweep.eps[i];
            if (!(e > 0.0 && e < 0.5)) {
                errors.push_back("sweep.eps: value " + std::to_string(e) +
                                 " outside the admissible range (0, 1/2)");
                break;
            }
            if (i > 0 && !(e < cfg.sweep.eps[i - 1])) {
                errors.push_back("sweep.eps: list must be strictly decreasing");
                break;
            }
        }
    }
    {
        auto r = reader(raw, "oracle", &errors);
        r.get("n", cfg.oracle.n);
        r.get("m", cfg.oracle.m);
        r.get("R0", cfg.oracle.R0);
        r.get_list("eps", cfg.oracle.eps);
        r.finish();
        if (cfg.oracle.n < 2 || cfg.oracle.n > 5) errors.push_back("oracle.n: must be in {2,..,5}");
        if (cfg.oracle.m < 2) errors.push_back("oracle.m: must be >= 2");
    }
    {
        auto r = reader(raw, "output", &errors);
        r.get("dir", cfg.output_dir);
        r.get("dump_mesh", cfg.dump_mesh);
        r.finish();
    }
    {
        auto r = reader(raw, "", &errors);
        r.get("seed", cfg.seed);
        r.get("workers", cfg.workers);
        r.get("tol", cfg.tol);
        r.finish();
        if (cfg.workers < 1) errors.push_back("workers: must be >= 1");
        if (!(cfg.tol >= 1e-14 && cfg.tol <= 1e-6))
            errors.push_back("tol: must lie in [1e-14, 1e-6]");
    }
    return result;
}

ParseResult parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParseResult r;
        r.errors.push_back("cannot read config file '" + path + "'");
        return r;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

GapDomain build_domain(const GeometryConfig& g, double eps) {
    const WeightMode mode =
        g.mode == "axisymmetric" ? WeightMode::Axisymmetric : WeightMode::Planar;
    GapDomain dom;
    if (g.kind == "disks")
        dom = make_eccentric_disks(g.r, g.R, eps, mode);
    else if (g.kind == "annulus")
        dom = make_concentric_annulus(g.r, g.R, mode);
    else if (g.kind == "ellipse")
        dom = make_ellipse_in_circle(g.a, g.b, g.R, eps);
    else if (g.kind == "mprofile")
        dom = make_mprofile(g.m, g.lambda, eps);
    else
        throw ConfigError("unknown geometry kind '" + g.kind + "'");
    if (g.R0_override) {
        if (*g.R0_override <= 0.0) throw ConfigError("R0 override must be positive");
        dom.R0 = *g.R0_override;
    }
    return dom;
}

GapDomain build_domain(const GeometryConfig& g) { return build_domain(g, g.eps); }

std::function<GapDomain(double)> build_domain_family(const GeometryConfig& g) {
    return [g](double eps) { return build_domain(g, eps); };
}

MeshParams build_mesh_params(const MeshConfig& m) {
    MeshParams p;
    p.h_target = m.h_target;
    p.gap_layers = m.gap_layers;
    p.band_factor = m.band_factor;
    return p;
}

PhiSpec build_phi(const BoundaryConfig& b) { return make_phi(b.phi); }

CoefficientField build_coefficients(const CoefficientConfig& c) {
    CoefficientPreset p;
    p.name = c.preset;
    p.scale = c.scale;
    p.a_off = c.a_off;
    p.kappa = c.kappa;
    p.theta0 = c.theta0;
    p.bump_width = c.width;
    return make_preset(p);
}

SweepSpec build_sweep_spec(const RunConfig& cfg) {
    SweepSpec spec;
    spec.domain_family = build_domain_family(cfg.geometry);
    spec.eps_list = cfg.sweep.eps;
    spec.mesh = build_mesh_params(cfg.mesh);
    spec.phi = build_phi(cfg.boundary);
    spec.A = build_coefficients(cfg.coefficients);
    return spec;
}

}  // namespace gapfield
