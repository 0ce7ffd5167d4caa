#include "youngflow/path_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "youngflow/errors.hpp"

namespace youngflow {
namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
    field = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        std::ostringstream os;
        os << "line " << line_no << ": cannot parse number '" << field << "'";
        throw DataError(os.str());
    }
    return v;
}

}  // namespace

SampledPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("empty path CSV");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3);  // UTF-8 BOM
    }
    const auto header = split(trim(line));
    if (header.size() < 2 || trim(header[0]) != "t") {
        throw DataError("line 1: path CSV header must be 't,x1,...,xd'");
    }
    const std::size_t dim = header.size() - 1;
    std::vector<double> times;
    std::vector<double> flat;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(trim(line));
        if (fields.size() != dim + 1) {
            std::ostringstream os;
            os << "line " << line_no << ": expected " << dim + 1 << " columns, got " << fields.size();
            throw DataError(os.str());
        }
        times.push_back(parse_number(fields[0], line_no));
        for (std::size_t k = 0; k < dim; ++k) {
            flat.push_back(parse_number(fields[k + 1], line_no));
        }
    }
    RowMatrix values(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = flat[i * dim + k];
        }
    }
    return SampledPath(std::move(times), std::move(values));
}

SampledPath read_path_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw DataError("cannot open path file " + file.string());
    }
    return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const SampledPath& path) {
    out << "t";
    for (std::size_t k = 0; k < path.dimension(); ++k) {
        out << ",x" << k + 1;
    }
    out << "\n";
    char buf[64];
    for (std::size_t i = 0; i < path.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", path.time(i));
        out << buf;
        for (std::size_t k = 0; k < path.dimension(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g",
                          path.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
            out << buf;
        }
        out << "\n";
    }
}

void write_path_csv(const std::filesystem::path& file, const SampledPath& path) {
    std::ofstream out(file);
    if (!out) {
        throw DataError("cannot write path file " + file.string());
    }
    write_path_csv(out, path);
}

}  // namespace youngflow
