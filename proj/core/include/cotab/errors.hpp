#pragma once

#include <stdexcept>
#include <string>

namespace cotab {

/// Coarse error class used to map failures to process exit codes:
/// data = 2, degenerate = 3, config = 4.
enum class ErrorCategory { data = 2, degenerate = 3, config = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

// -- data errors (exit code 2) ------------------------------------------

struct InvalidComposition : Error {
    explicit InvalidComposition(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct NotInClrPlane : Error {
    explicit NotInClrPlane(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct InvalidData : Error {
    explicit InvalidData(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct IncompleteTable : Error {
    IncompleteTable(const std::string& sample_id, const std::string& cell)
        : Error(ErrorCategory::data,
                "incomplete table for sample '" + sample_id + "': missing " + cell),
          sample_id(sample_id), cell(cell) {}

    std::string sample_id;
    std::string cell;
};

struct HeterogeneousLevels : Error {
    explicit HeterogeneousLevels(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct DuplicateKey : Error {
    explicit DuplicateKey(const std::string& m) : Error(ErrorCategory::data, m) {}
};

// -- numeric degeneracy (exit code 3) ------------------------------------

struct RankDeficient : Error {
    explicit RankDeficient(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

struct DegenerateData : Error {
    explicit DegenerateData(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

struct DegenerateAxis : Error {
    explicit DegenerateAxis(const std::string& m) : Error(ErrorCategory::degenerate, m) {}
};

// -- config errors (exit code 4) ------------------------------------------

struct IndexError : Error {
    explicit IndexError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct ComparisonError : Error {
    explicit ComparisonError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

} // namespace cotab
