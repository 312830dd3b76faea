#include "east/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace eastsim {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}
}  // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          int length) {
  auto os = open_out(path);
  os << "t";
  for (int i = 1; i <= length; ++i) os << ",n_" << i;
  for (int r = 1; r <= length - 1; ++r) os << ",S_" << r;
  os << ",energy,norm,discarded\n";
  for (int row = 0; row < ts.rows(); ++row) {
    os << format_double(ts.times[row]);
    for (double v : ts.occupation[row]) os << ',' << format_double(v);
    for (double v : ts.entropy[row]) os << ',' << format_double(v);
    os << ',' << format_double(ts.energy[row]) << ','
       << format_double(ts.norm[row]) << ','
       << format_double(ts.discarded[row]) << '\n';
  }
}

void write_metadata_json(const std::string& path,
                         const std::map<std::string, std::string>& metadata) {
  nlohmann::json j(metadata);
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

void write_profile_csv(const std::string& path,
                       const std::vector<double>& occupation) {
  auto os = open_out(path);
  os << "site,mean_occupation\n";
  for (std::size_t i = 0; i < occupation.size(); ++i)
    os << (i + 1) << ',' << format_double(occupation[i]) << '\n';
}

void write_table_csv(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  auto os = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

}  // namespace eastsim
