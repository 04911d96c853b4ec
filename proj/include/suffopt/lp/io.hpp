#pragma once

// Fixed-format MPS and CPLEX-style LP text. Both writers use positional names
// (C0000001, R0000001) so any solver can read the file; the MPS writer adds
// `* alias` comment lines so our own parser restores the original names.
// Numbers are written in shortest round-trip form, so a file we parse back
// reproduces every coefficient bit for bit.

#include <iosfwd>
#include <string>

#include "suffopt/lp/instance.hpp"

namespace suffopt::lp {

enum class LpFormat { Mps, LpText };

LpFormat parse_lp_format(std::string_view text);          // "mps", "lp"
LpFormat format_from_path(const std::string& path);       // by extension, default MPS

std::string mps_column_name(int j);
std::string mps_row_name(int i);

void write_mps(std::ostream& out, const LpInstance& lp);
LpInstance read_mps(std::istream& in);
void write_lp_text(std::ostream& out, const LpInstance& lp);
LpInstance read_lp_text(std::istream& in);

// Throws std::runtime_error naming the path on I/O failure.
void export_lp(const LpInstance& lp, const std::string& path, LpFormat format);
LpInstance import_lp(const std::string& path, LpFormat format);

}  // namespace suffopt::lp
