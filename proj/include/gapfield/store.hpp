#pragma once

#include <string>
#include <vector>

#include "gapfield/asymptotics.hpp"

namespace gapfield {

// Append-only CSV of sweep records. Fixed column order; floats carry 17
// significant digits so a re-run with the same config reproduces the physics
// columns byte for byte (wall_ms is a timing and exempt).
extern const char* kRecordsCsvHeader;

std::string record_csv_line(const SweepRecord& rec);
void append_records_csv(const std::string& path, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records_csv(const std::string& path);

std::string format_rate_fit_line(const std::string& quantity, const RateFit& fit,
                                 double predicted_exponent, bool pass);

struct StoreVerdict {
    std::string name;
    std::string measured;
    bool pass = false;
};

// Sanity verdicts over a record store (used by the report command).
std::vector<StoreVerdict> store_verdicts(const std::vector<SweepRecord>& records);

std::string render_records_table(const std::vector<SweepRecord>& records);

}  // namespace gapfield
