#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vlc/types.hpp"

namespace vlc {

/// I/O and parse failures; the CLI maps these to exit code 2.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }

    /// Throws io_error when the column is missing.
    const std::vector<double>& column(const std::string& name) const;
};

/// Strict numeric CSV: UTF-8, comma-separated, one header row, every cell a
/// decimal number. Ragged or non-numeric rows raise io_error.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<string>");

/// Values are written with 17 significant digits so a read-back is
/// bit-identical.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit digest as fixed-width hex; used for input digests in run
/// manifests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace vlc
