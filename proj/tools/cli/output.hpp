#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fracstep::cli {

/// Round-trip formatting (%.17g).
std::string format_exact(double v);

/// Table formatting for solution values (%.12g).
std::string format_value(double v);

/// Header row plus one line per record; '\n' line ends, no trailing spaces.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// x,v pairs on the grid nodes.
CsvTable solution_table(double L, double h, std::span<const double> v);

/// UTC timestamp, ISO 8601.
std::string utc_now();

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace fracstep::cli
