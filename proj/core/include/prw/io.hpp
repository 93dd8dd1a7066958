#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prw/environment.hpp"
#include "prw/estimators.hpp"
#include "prw/walker.hpp"

namespace prw {

// File formats. All writers are deterministic: doubles are printed with 17
// significant digits (round-trip exact) and nothing time- or host-dependent
// is emitted, so identical inputs give byte-identical files.

/// 4 lines of 4 decimal numbers, row-major in (E,N,W,S) order.
void write_matrix(std::ostream& os, const TransitionMatrix& q);
TransitionMatrix read_matrix(std::istream& is);
TransitionMatrix read_matrix_file(const std::string& path);

/// Environment snapshot: one header line
///   # prw-env v1 kind=<kind> seed=<seed> <key=value ...> box=<a:b,c:d>
/// then one line per site, "x1 x2" followed by the 16 matrix entries
/// row-major in (E,N,W,S) order. Comment lines start with '#'.
void write_env_snapshot(std::ostream& os, const Environment& env, const Box& box);

/// Appends an audit footer as '#' comment lines.
void write_audit_footer(std::ostream& os, const EnvAuditReport& report);

/// Loads a snapshot into a materialized environment (queries outside the
/// stored window throw OutOfSnapshotError).
Environment read_env_snapshot(std::istream& is);
Environment read_env_snapshot_file(const std::string& path);

/// Trajectory dump: initial state line "x1 x2 D", then one direction letter
/// per step on its own line.
void write_trajectory(std::ostream& os, const Trajectory& t);
Trajectory read_trajectory(std::istream& is);
Trajectory read_trajectory_file(const std::string& path);

/// Projected site sequence: one "x1 x2" line per entry.
void write_site_sequence(std::ostream& os, const std::vector<Site>& seq);
std::vector<Site> read_site_sequence(std::istream& is);

enum class ReportFormat : unsigned char { Csv, Jsonl };
bool report_format_from_string(const std::string& name, ReportFormat& out);

/// One row per checkpoint plus a summary record. The CSV schema is
/// versioned by its leading comment line; the JSONL variant emits one JSON
/// object per checkpoint and a final {"summary": ...} object.
void write_report(std::ostream& os, const StatReport& report, ReportFormat format);

std::string format_double(double v);

} // namespace prw
