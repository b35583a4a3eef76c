#include "vlc/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vlc {

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return columns[c];
    }
    throw io_error("no column named '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    cells.push_back(cell);
    return cells;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& origin) {
    CsvTable table;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty() && stream.eof()) break;
        const std::vector<std::string> cells = split_line(line);
        if (line_no == 1) {
            table.header = cells;
            table.columns.assign(cells.size(), {});
            continue;
        }
        if (cells.size() != table.header.size())
            throw io_error(origin + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(table.header.size()) + " cells, got " +
                           std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            char* end = nullptr;
            errno = 0;
            const double value = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE)
                throw io_error(origin + ":" + std::to_string(line_no) + ": cell '" + cell +
                               "' is not a number");
            table.columns[c].push_back(value);
        }
    }
    if (table.header.empty()) throw io_error(origin + ": empty file");
    return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw io_error("header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns) {
        if (col.size() != rows) throw io_error("column lengths differ");
    }

    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out.push_back(',');
        out += header[c];
    }
    out.push_back('\n');

    char buffer[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out.push_back(',');
            std::snprintf(buffer, sizeof buffer, "%.17g", columns[c][r]);
            out += buffer;
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    write_file(path, format_csv(header, columns));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) throw io_error("failed reading '" + path + "'");
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) throw io_error("failed writing '" + path + "'");
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

}  // namespace vlc
