#include <fstream>
#include <sstream>

#include "stars/errors.hpp"
#include "stars/format.hpp"
#include "stars/harness.hpp"

namespace stars::harness {

namespace {

constexpr const char* kTrialHeader = "k,nevals,f_true,acc";
constexpr const char* kAggregateHeader = "nevals,mean,median,q25,q75,min,max";

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create the directory of " + path.string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::int64_t parse_int(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw InvalidArgument("not an integer: '" + text + "'");
  return v;
}

template <class Row>
std::vector<Row> read_rows(const std::filesystem::path& path, const char* header, std::size_t width,
                           Row (*parse)(const std::vector<std::string>&)) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw IoError(path.string() + ": unexpected header");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    const auto cells = split(line);
    if (cells.size() != width) throw IoError(path.string() + ": malformed row '" + line + "'");
    rows.push_back(parse(cells));
  }
  return rows;
}

}  // namespace

void write_trial_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << kTrialHeader << '\n';
  for (const auto& r : trajectory.records)
    out << r.k << ',' << r.nevals << ',' << format_double(r.f_true) << ',' << format_double(r.acc)
        << '\n';
  finish(out, path);
}

void write_aggregate_csv(const AggregateSeries& series, const std::filesystem::path& path) {
  check_quantile_order(series);
  auto out = open_out(path);
  out << kAggregateHeader << '\n';
  for (const auto& p : series.points)
    out << p.nevals << ',' << format_double(p.mean) << ',' << format_double(p.median) << ','
        << format_double(p.q25) << ',' << format_double(p.q75) << ',' << format_double(p.min) << ','
        << format_double(p.max) << '\n';
  finish(out, path);
}

std::vector<TrajectoryRecord> read_trial_csv(const std::filesystem::path& path) {
  return read_rows<TrajectoryRecord>(path, kTrialHeader, 4, [](const std::vector<std::string>& c) {
    return TrajectoryRecord{parse_int(c[0]), parse_int(c[1]), parse_double(c[2]), parse_double(c[3])};
  });
}

AggregateSeries read_aggregate_csv(const std::filesystem::path& path) {
  AggregateSeries s;
  s.points = read_rows<AggregatePoint>(path, kAggregateHeader, 7, [](const std::vector<std::string>& c) {
    return AggregatePoint{parse_int(c[0]),     parse_double(c[1]), parse_double(c[2]),
                          parse_double(c[3]),  parse_double(c[4]), parse_double(c[5]),
                          parse_double(c[6])};
  });
  return s;
}

}  // namespace stars::harness
