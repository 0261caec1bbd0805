#include "cotab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cotab {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

double parse_value(const std::string& text, const std::string& context) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw InvalidData("cannot parse value '" + text + "' " + context);
    }
    return v;
}

/// Collects levels in first-appearance order; an explicit order wins.
class LevelIndex {
public:
    explicit LevelIndex(std::vector<std::string> explicit_order)
        : levels_(std::move(explicit_order)) {
        for (std::size_t i = 0; i < levels_.size(); ++i) index_[levels_[i]] = static_cast<int>(i);
        frozen_ = !levels_.empty();
    }

    int insert_or_get(const std::string& level) {
        auto it = index_.find(level);
        if (it != index_.end()) return it->second;
        if (frozen_) {
            throw HeterogeneousLevels("level '" + level + "' is not in the configured order");
        }
        const int id = static_cast<int>(levels_.size());
        levels_.push_back(level);
        index_[level] = id;
        return id;
    }

    const std::vector<std::string>& levels() const { return levels_; }
    int size() const { return static_cast<int>(levels_.size()); }

private:
    std::vector<std::string> levels_;
    std::map<std::string, int> index_;
    bool frozen_ = false;
};

TableSample assemble(const std::vector<LongRecord>& records, const CsvSchema& schema) {
    if (records.empty()) {
        throw IncompleteTable("<none>", "the file contains no data rows");
    }
    LevelIndex rows(schema.row_level_order);
    LevelIndex cols(schema.col_level_order);
    std::vector<std::string> sample_order;
    std::map<std::string, std::map<std::pair<int, int>, double>> samples;

    for (const auto& rec : records) {
        const int i = rows.insert_or_get(rec.row_level);
        const int j = cols.insert_or_get(rec.col_level);
        auto it = samples.find(rec.sample_id);
        if (it == samples.end()) {
            sample_order.push_back(rec.sample_id);
            it = samples.emplace(rec.sample_id, std::map<std::pair<int, int>, double>{}).first;
        }
        if (!it->second.emplace(std::make_pair(i, j), rec.value).second) {
            throw DuplicateKey("duplicate cell (" + rec.sample_id + ", " + rec.row_level + ", " +
                               rec.col_level + ")");
        }
        if (!(rec.value > 0.0) || !std::isfinite(rec.value)) {
            throw InvalidComposition("cell (" + rec.sample_id + ", " + rec.row_level + ", " +
                                     rec.col_level + ") is " + std::to_string(rec.value) +
                                     "; values must be positive");
        }
    }

    const int ni = rows.size();
    const int nj = cols.size();
    if (ni < 2 || nj < 2) {
        throw HeterogeneousLevels("a table sample needs at least 2 row levels and 2 column "
                                  "levels, found " + std::to_string(ni) + " and " +
                                  std::to_string(nj));
    }

    std::vector<CompositionalTable> tables;
    tables.reserve(sample_order.size());
    for (const auto& id : sample_order) {
        const auto& cells = samples.at(id);
        // A sample whose own level set differs from the global one is ragged;
        // a sample with the right levels but a hole is incomplete.
        std::set<int> seen_rows, seen_cols;
        for (const auto& [key, value] : cells) {
            seen_rows.insert(key.first);
            seen_cols.insert(key.second);
        }
        if (static_cast<int>(seen_rows.size()) != ni || static_cast<int>(seen_cols.size()) != nj) {
            throw HeterogeneousLevels("sample '" + id + "' does not use the same factor levels "
                                      "as the rest of the dataset");
        }
        Eigen::MatrixXd grid(ni, nj);
        for (int i = 0; i < ni; ++i) {
            for (int j = 0; j < nj; ++j) {
                const auto it = cells.find({i, j});
                if (it == cells.end()) {
                    throw IncompleteTable(id, rows.levels()[i] + ":" + cols.levels()[j]);
                }
                grid(i, j) = it->second;
            }
        }
        tables.emplace_back(std::move(grid), rows.levels(), cols.levels(), id);
    }
    return TableSample(std::move(tables), Part::whole);
}

std::vector<LongRecord> read_long(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IncompleteTable("<none>", "the file is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 4) {
        throw InvalidData("long-form CSV needs a sample_id,row_level,col_level,value header");
    }
    std::vector<LongRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw InvalidData("line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        }
        records.push_back(LongRecord{fields[0], fields[1], fields[2],
                                     parse_value(fields[3], "on line " + std::to_string(line_no))});
    }
    return records;
}

std::vector<LongRecord> read_wide(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IncompleteTable("<none>", "the file is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2) {
        throw InvalidData("wide-form CSV needs a sample_id column plus rowlevel:collevel columns");
    }
    std::vector<std::pair<std::string, std::string>> cell_of_column;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto pos = header[c].find(':');
        if (pos == std::string::npos || pos == 0 || pos + 1 == header[c].size()) {
            throw InvalidData("wide-form column '" + header[c] +
                              "' is not of the form rowlevel:collevel");
        }
        cell_of_column.emplace_back(header[c].substr(0, pos), header[c].substr(pos + 1));
    }

    std::vector<LongRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw InvalidData("line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        }
        for (std::size_t c = 1; c < fields.size(); ++c) {
            records.push_back(LongRecord{fields[0], cell_of_column[c - 1].first,
                                         cell_of_column[c - 1].second,
                                         parse_value(fields[c], "on line " + std::to_string(line_no))});
        }
    }
    return records;
}

} // namespace

TableSample ingest_csv(std::istream& in, const CsvSchema& schema) {
    return assemble(schema.format == CsvFormat::long_form ? read_long(in) : read_wide(in),
                    schema);
}

TableSample ingest_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidData("cannot open '" + path + "' for reading");
    }
    return ingest_csv(in, schema);
}

namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

void write_csv(const std::vector<CompositionalTable>& tables, std::ostream& out,
               CsvFormat format) {
    if (tables.empty()) {
        throw InvalidData("nothing to write: no tables");
    }
    const auto& first = tables.front();
    if (format == CsvFormat::long_form) {
        out << "sample_id,row_level,col_level,value\n";
        for (const auto& t : tables) {
            for (Eigen::Index j = 0; j < t.cols(); ++j) {
                for (Eigen::Index i = 0; i < t.rows(); ++i) {
                    out << csv_escape(t.sample_id()) << ',' << csv_escape(t.row_labels()[i])
                        << ',' << csv_escape(t.col_labels()[j]) << ','
                        << format_value(t.cells()(i, j)) << '\n';
                }
            }
        }
    } else {
        out << "sample_id";
        for (Eigen::Index j = 0; j < first.cols(); ++j) {
            for (Eigen::Index i = 0; i < first.rows(); ++i) {
                out << ',' << csv_escape(first.cell_label(i, j));
            }
        }
        out << '\n';
        for (const auto& t : tables) {
            out << csv_escape(t.sample_id());
            for (Eigen::Index j = 0; j < t.cols(); ++j) {
                for (Eigen::Index i = 0; i < t.rows(); ++i) {
                    out << ',' << format_value(t.cells()(i, j));
                }
            }
            out << '\n';
        }
    }
}

void write_csv(const TableSample& sample, std::ostream& out, CsvFormat format) {
    write_csv(sample.tables(), out, format);
}

void write_csv(const TableSample& sample, const std::string& path, CsvFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidData("cannot open '" + path + "' for writing");
    }
    write_csv(sample, out, format);
}

} // namespace cotab
