#pragma once

#include <map>
#include <string>
#include <vector>

#include "east/tebd.hpp"

namespace eastsim {

/// One row per record time: t, n_1..n_L, S_1..S_{L-1}, energy, norm,
/// discarded. Values are written with round-trip precision.
void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          int length);

/// JSON sidecar next to a CSV.
void write_metadata_json(const std::string& path,
                         const std::map<std::string, std::string>& metadata);

/// Ground-state profile: columns site, mean_occupation.
void write_profile_csv(const std::string& path,
                       const std::vector<double>& occupation);

/// Generic table with a header row; cells are preformatted strings.
void write_table_csv(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

void ensure_directory(const std::string& path);

}  // namespace eastsim
