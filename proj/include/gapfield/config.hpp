#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapfield/asymptotics.hpp"
#include "gapfield/coefficients.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/mesh.hpp"
#include "gapfield/phi.hpp"

namespace gapfield {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryConfig {
    std::string kind = "disks";  // disks | annulus | ellipse | mprofile
    double r = 0.5, R = 1.0;
    double eps = 1e-3;
    double a = 0.5, b = 0.3;   // ellipse
    int m = 3;                 // mprofile
    double lambda = 1.0;       // mprofile
    std::string mode = "planar";
    std::optional<double> R0_override;
};

struct MeshConfig {
    double h_target = 0.04;
    int gap_layers = 8;
    double band_factor = 0.3;
};

struct BoundaryConfig {
    std::string phi = "linear-xn";
};

struct CoefficientConfig {
    std::string preset = "identity";
    double scale = 1.0;
    double a_off = 0.0;
    double kappa = 1.0;
    double theta0 = 0.5;
    double width = 0.5;
};

struct SweepConfig {
    std::vector<double> eps = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
};

struct OracleConfig {
    int n = 2, m = 2;
    double R0 = 1.0;
    std::vector<double> eps = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
};

struct RunConfig {
    GeometryConfig geometry;
    MeshConfig mesh;
    BoundaryConfig boundary;
    CoefficientConfig coefficients;
    SweepConfig sweep;
    OracleConfig oracle;
    std::string output_dir = "out";
    bool dump_mesh = false;
    std::uint64_t seed = 12345;
    int workers = 1;
    double tol = 1e-10;
};

struct ParseResult {
    RunConfig config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

ParseResult parse_config(const std::string& path);
ParseResult parse_config_text(const std::string& text);

// Builders from a validated config.
GapDomain build_domain(const GeometryConfig& g);
GapDomain build_domain(const GeometryConfig& g, double eps);
std::function<GapDomain(double)> build_domain_family(const GeometryConfig& g);
MeshParams build_mesh_params(const MeshConfig& m);
PhiSpec build_phi(const BoundaryConfig& b);
CoefficientField build_coefficients(const CoefficientConfig& c);
SweepSpec build_sweep_spec(const RunConfig& cfg);

}  // namespace gapfield
