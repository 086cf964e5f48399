#include "rggx/records_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rggx {

namespace {

constexpr int kFixedColumns = 7;

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, std::size_t row) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw std::runtime_error("records csv row " + std::to_string(row) + ": bad number '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t row) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw std::runtime_error("records csv row " + std::to_string(row) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string records_csv_header(std::size_t n_regions) {
  std::string h = "t_index,t,delta,replication,n_points,n_edges,crossings";
  for (std::size_t i = 0; i < n_regions; ++i) h += ",region_" + std::to_string(i);
  h += ",stress,F1,F2";
  return h;
}

void write_records_csv(std::ostream& out, const std::vector<ReplicationRecord>& records, std::size_t n_regions) {
  out << records_csv_header(n_regions) << '\n';
  for (const auto& r : records) {
    if (r.region_counts.size() != n_regions) throw std::invalid_argument("record region count mismatch");
    out << r.t_index << ',' << real(r.t) << ',' << real(r.delta) << ',' << r.replication << ',' << r.n_points << ','
        << r.n_edges << ',' << r.crossings;
    for (const auto c : r.region_counts) out << ',' << c;
    out << ',' << real(r.stress) << ',' << real(r.f1) << ',' << real(r.f2) << '\n';
  }
}

std::vector<ReplicationRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records csv: missing header");
  const auto header = split(line);
  if (header.size() < kFixedColumns + 3) throw std::runtime_error("records csv: short header");
  const std::size_t n_regions = header.size() - kFixedColumns - 3;
  if (line != records_csv_header(n_regions)) throw std::runtime_error("records csv: unexpected header");

  std::vector<ReplicationRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw std::runtime_error("records csv row " + std::to_string(row) + ": wrong column count");
    ReplicationRecord r;
    r.t_index = parse_int(cells[0], row);
    r.t = parse_real(cells[1], row);
    r.delta = parse_real(cells[2], row);
    r.replication = parse_int(cells[3], row);
    r.n_points = parse_int(cells[4], row);
    r.n_edges = parse_int(cells[5], row);
    r.crossings = parse_int(cells[6], row);
    for (std::size_t i = 0; i < n_regions; ++i) r.region_counts.push_back(parse_int(cells[kFixedColumns + i], row));
    r.stress = parse_real(cells[kFixedColumns + n_regions], row);
    r.f1 = parse_real(cells[kFixedColumns + n_regions + 1], row);
    r.f2 = parse_real(cells[kFixedColumns + n_regions + 2], row);
    records.push_back(std::move(r));
  }
  return records;
}

void write_reports_jsonl(std::ostream& out, const std::vector<TestReport>& reports) {
  for (const auto& r : reports) out << to_json_line(r) << '\n';
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace rggx
