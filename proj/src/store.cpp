#include "gapfield/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <sys/stat.h>

namespace gapfield {

const char* kRecordsCsvHeader =
    "eps,n,m,a11,Q,C1,grad_mid,sup_diff_v1,sup_diff_v0,flux_residual,"
    "mesh_vertices,cg_iters_v1,cg_iters_v0,wall_ms";

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string record_csv_line(const SweepRecord& r) {
    std::ostringstream os;
    os << fmt(r.eps) << ',' << r.n << ',' << r.m << ',' << fmt(r.a11) << ',' << fmt(r.Q) << ','
       << fmt(r.C1) << ',' << fmt(r.grad_mid) << ',' << fmt(r.sup_diff_v1) << ','
       << fmt(r.sup_diff_v0) << ',' << fmt(r.flux_residual) << ',' << r.mesh_vertices << ','
       << r.cg_iters_v1 << ',' << r.cg_iters_v0 << ',' << fmt(r.wall_ms);
    return os.str();
}

void append_records_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    struct stat st {};
    const bool fresh = stat(path.c_str(), &st) != 0 || st.st_size == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open results file '" + path + "'");
    if (fresh) out << kRecordsCsvHeader << '\n';
    for (const auto& r : records) {
        if (!r.ok) continue;
        out << record_csv_line(r) << '\n';
    }
}

std::vector<SweepRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read results file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("results file is empty");
    if (line != kRecordsCsvHeader)
        throw std::runtime_error("results file header does not match the schema");
    std::vector<SweepRecord> records;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 14)
            throw std::runtime_error("results row " + std::to_string(lineno) +
                                     " has wrong arity");
        SweepRecord r;
        r.eps = std::stod(cells[0]);
        r.n = std::stoi(cells[1]);
        r.m = std::stoi(cells[2]);
        r.a11 = std::stod(cells[3]);
        r.Q = std::stod(cells[4]);
        r.C1 = std::stod(cells[5]);
        r.grad_mid = std::stod(cells[6]);
        r.sup_diff_v1 = std::stod(cells[7]);
        r.sup_diff_v0 = std::stod(cells[8]);
        r.flux_residual = std::stod(cells[9]);
        r.mesh_vertices = std::stoi(cells[10]);
        r.cg_iters_v1 = std::stoi(cells[11]);
        r.cg_iters_v0 = std::stoi(cells[12]);
        r.wall_ms = std::stod(cells[13]);
        r.ok = true;
        records.push_back(r);
    }
    return records;
}

std::string format_rate_fit_line(const std::string& quantity, const RateFit& fit,
                                 double predicted_exponent, bool pass) {
    std::ostringstream os;
    os << "{\"quantity\": \"" << quantity << "\", \"model\": \""
       << (fit.model == FitModel::Power ? "power" : "power-with-log") << "\", \"slope\": "
       << fmt(fit.slope) << ", \"residual\": " << fmt(fit.residual_rms)
       << ", \"n_points\": " << fit.n_points
       << ", \"predicted_exponent\": " << fmt(predicted_exponent) << ", \"pass\": "
       << (pass ? "true" : "false") << "}";
    return os.str();
}

std::vector<StoreVerdict> store_verdicts(const std::vector<SweepRecord>& records) {
    std::vector<StoreVerdict> verdicts;
    {
        StoreVerdict v;
        v.name = "a11-positive";
        v.pass = true;
        double worst = std::numeric_limits<double>::max();
        for (const auto& r : records) {
            worst = std::min(worst, r.a11);
            if (!(r.a11 > 0.0)) v.pass = false;
        }
        v.measured = "min a11 = " + fmt(worst);
        verdicts.push_back(v);
    }
    {
        StoreVerdict v;
        v.name = "flux-residual-small";
        v.pass = true;
        double worst = 0.0;
        for (const auto& r : records) {
            const double rel = std::abs(r.flux_residual) / (std::abs(r.a11) + std::abs(r.Q) + 1e-300);
            worst = std::max(worst, rel);
            if (rel > 1e-9) v.pass = false;
        }
        v.measured = "max |flux_residual|/(a11+|Q|) = " + fmt(worst);
        verdicts.push_back(v);
    }
    {
        StoreVerdict v;
        v.name = "values-finite";
        v.pass = true;
        for (const auto& r : records) {
            for (double x : {r.eps, r.a11, r.Q, r.C1, r.grad_mid, r.sup_diff_v1, r.sup_diff_v0})
                if (!std::isfinite(x)) v.pass = false;
        }
        v.measured = v.pass ? "all finite" : "non-finite entries present";
        verdicts.push_back(v);
    }
    return verdicts;
}

std::string render_records_table(const std::vector<SweepRecord>& records) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-10s %2s %2s %-12s %-12s %-12s %-12s %-9s %-8s\n", "eps", "n",
                  "m", "a11", "Q", "C1", "grad_mid", "vertices", "ms");
    os << buf;
    std::vector<SweepRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(),
              [](const SweepRecord& a, const SweepRecord& b) { return a.eps > b.eps; });
    for (const auto& r : sorted) {
        std::snprintf(buf, sizeof(buf), "%-10.3g %2d %2d %-12.6g %-12.6g %-12.6g %-12.6g %-9d %-8.1f\n",
                      r.eps, r.n, r.m, r.a11, r.Q, r.C1, r.grad_mid, r.mesh_vertices, r.wall_ms);
        os << buf;
    }
    return os.str();
}

}  // namespace gapfield
