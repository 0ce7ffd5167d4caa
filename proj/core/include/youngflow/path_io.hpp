#pragma once

#include <filesystem>
#include <iosfwd>

#include "youngflow/paths.hpp"

namespace youngflow {

// CSV with header `t,x1,...,xd`, one row per sample, '.' decimal separator.
SampledPath read_path_csv(std::istream& in);
SampledPath read_path_csv(const std::filesystem::path& file);

// Values are written with 17 significant digits so a round trip is exact.
void write_path_csv(std::ostream& out, const SampledPath& path);
void write_path_csv(const std::filesystem::path& file, const SampledPath& path);

}  // namespace youngflow
