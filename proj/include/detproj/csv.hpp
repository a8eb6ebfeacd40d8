#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "detproj/config.hpp"
#include "detproj/version.hpp"

namespace detproj::harness {

/// Fixed-format numeric cell: %.17g round-trips doubles, so identical values
/// give byte-identical files.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_num(int v) { return std::to_string(v); }

/// CSV emitter with the provenance header every artifact file carries:
/// version, config hash, seed, and the full resolved configuration as
/// comments.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        ensure(out_.good(), "csv: cannot open '" + path + "' for writing");
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void provenance(const RunConfig& cfg, std::uint64_t seed) {
        char hash[20];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(cfg.hash()));
        comment(std::string("detproj ") + version);
        comment(std::string("config-hash: ") + hash);
        comment("seed: " + std::to_string(seed));
        for (const auto& [k, v] : cfg.resolved()) comment(k + " = " + v);
    }

    void columns(const std::vector<std::string>& names) { write_row(names); }

    void row(const std::vector<std::string>& cells) { write_row(cells); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(csv_num(v));
        write_row(cells);
    }

  private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

/// Minimal CSV reader for the artifact's own files: '#' comments, one header
/// line, numeric-or-string cells.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }

    std::vector<double> column_as_double(const std::string& name) const {
        int ci = column_index(name);
        require(ci >= 0, "csv: no column '" + name + "'");
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) {
            double v = 0.0;
            ensure(detail::parse_double(row[ci], v), "csv: non-numeric cell in '" + name + "'");
            out.push_back(v);
        }
        return out;
    }
};

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (t.columns.empty())
            t.columns = cells;
        else
            t.rows.push_back(cells);
    }
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "csv: cannot open '" + path + "'");
    return read_csv(in);
}

}  // namespace detproj::harness
