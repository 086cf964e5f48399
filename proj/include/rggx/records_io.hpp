#pragma once

// Replication records as CSV (one row per replication) and test reports as
// JSON lines.
//
// CSV columns, in order:
//   t_index, t, delta, replication, n_points, n_edges, crossings,
//   region_0 ... region_{k-1}, stress, F1, F2
// Reals are written with 17 significant digits so a read reproduces the
// written doubles exactly; a disabled stress column holds "nan".

#include <iosfwd>
#include <string>
#include <vector>

#include "rggx/experiment.hpp"
#include "rggx/stats.hpp"

namespace rggx {

std::string records_csv_header(std::size_t n_regions);
void write_records_csv(std::ostream& out, const std::vector<ReplicationRecord>& records, std::size_t n_regions);
std::vector<ReplicationRecord> read_records_csv(std::istream& in);

void write_reports_jsonl(std::ostream& out, const std::vector<TestReport>& reports);

/// Writes `content` to `path` through a temporary file and a rename, so the
/// destination never holds a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rggx
