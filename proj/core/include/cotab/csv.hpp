#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cotab/pca.hpp"

namespace cotab {

/// One cell of a dataset in long form.
struct LongRecord {
    std::string sample_id;
    std::string row_level;
    std::string col_level;
    double value = 0.0;
};

enum class CsvFormat { long_form, wide_form };

/// Ingestion settings. Factor levels are ordered by first appearance in the
/// file unless an explicit order is given here.
struct CsvSchema {
    CsvFormat format = CsvFormat::long_form;
    std::vector<std::string> row_level_order;
    std::vector<std::string> col_level_order;
};

/// Read a UTF-8 CSV with header into a complete sample of I x J tables.
/// Long form: sample_id,row_level,col_level,value. Wide form: one row per
/// sample, data columns named "rowlevel:collevel".
TableSample ingest_csv(const std::string& path, const CsvSchema& schema = {});
TableSample ingest_csv(std::istream& in, const CsvSchema& schema = {});

void write_csv(const std::vector<CompositionalTable>& tables, std::ostream& out,
               CsvFormat format = CsvFormat::long_form);
void write_csv(const TableSample& sample, std::ostream& out,
               CsvFormat format = CsvFormat::long_form);
void write_csv(const TableSample& sample, const std::string& path,
               CsvFormat format = CsvFormat::long_form);

/// Split one CSV line into fields (comma separator, double-quote escaping).
std::vector<std::string> split_csv_line(const std::string& line);

/// Quote a field if it contains separators or quotes.
std::string csv_escape(const std::string& field);

} // namespace cotab
