#pragma once

#include <istream>
#include <string>
#include <vector>

#include "monotone_ei/core.hpp"
#include "monotone_ei/micro_signs.hpp"

namespace monotone_ei {

// Aggregate table: delimited text with header `id,population,x_share,y_mean`,
// decimal point, UTF-8. Errors name the offending line.
std::vector<TableRow> read_aggregate_table(std::istream& in);
std::vector<TableRow> read_aggregate_file(const std::string& path);

// Micro table: header `x,y,x_n,weight,stratum`; the weight column may be
// omitted (header `x,y,x_n,stratum`) or left empty, defaulting to 1.
std::vector<MicroRecord> read_micro_table(std::istream& in);
std::vector<MicroRecord> read_micro_file(const std::string& path);

}  // namespace monotone_ei
