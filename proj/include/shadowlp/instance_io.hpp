#pragma once

#include <iosfwd>
#include <string>

#include "shadowlp/lp.hpp"

namespace shadowlp {

/// Text format: a header line "n d", then n lines of d + 1 numbers (a_i, b_i),
/// then one line of d numbers (c). Blank lines and lines starting with '#'
/// are skipped. Throws ParseError carrying the offending line number.
LpInstance parse_instance(std::istream& in);
LpInstance read_instance_file(const std::string& path);

/// Round-trips exactly through parse_instance.
void write_instance(std::ostream& out, const LpInstance& lp);

}  // namespace shadowlp
