#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cotab/pca.hpp"
#include "cotab/svg.hpp"
#include "cotab/table.hpp"

namespace cotab {

/// Settings of one full analysis run.
struct AnalysisConfig {
    EstimatorMethod method = EstimatorMethod::robust;
    double alpha = 0.75;              ///< MCD subset fraction, in [0.5, 1]
    double quantile_level = 0.975;    ///< outlier cutoff quantile, in (0.5, 1)
    std::uint64_t seed = 1;
    double kappa = 1.0;               ///< closure constant for emitted tables
    BiplotForm biplot_form = BiplotForm::covariance;
    std::string out_dir;              ///< empty: nothing written to disk
    bool emit_svg = false;

    void validate() const;
};

/// One analyzed representation: PCA model plus the outlier report, which is
/// absent (with a note) when the sample is too small for the MCD fit in that
/// part's coordinate dimension.
struct PartAnalysis {
    PcaModel model;
    std::optional<OutlierReport> outliers;
    std::string outlier_note;
    std::string summary;   ///< e.g. "3 out of all 42 samples flagged as outlying"
    std::vector<std::string> row_levels;
    std::vector<std::string> col_levels;
};

/// Fit one representation of the sample: PCA plus outlier detection. The
/// coordinate system is built on demand when not supplied.
PartAnalysis analyze_part(const AnalysisConfig& config, const TableSample& sample, Part part,
                          std::shared_ptr<const TableCoordinateSystem> sys = nullptr);

struct AnalysisBundle {
    std::vector<TableDecomposition> decompositions;  ///< one per input table
    std::vector<PartAnalysis> parts;                 ///< whole, independence, interaction
    std::shared_ptr<const TableCoordinateSystem> system;
    AnalysisConfig config;

    const PartAnalysis& part(Part p) const;
};

/// Run the full workflow on a sample: decompose every table, fit PCA of the
/// whole, independence and interaction representations, and detect outliers
/// per part. Deterministic for a fixed config and seed. When
/// config.out_dir is set, writes analysis.json (and biplot_<part>.svg when
/// config.emit_svg) atomically.
AnalysisBundle run_pipeline(const AnalysisConfig& config, const TableSample& sample);

/// JSON document of the bundle: an array of three per-part objects with keys
/// {shape:{I,J,row_levels,col_levels}, part, method, eigenvalues, explained,
/// loadings_clr, scores, outliers:{cutoff,distances,flags}|null, seed,
/// version}. Serialization is byte-stable for identical bundles.
std::string bundle_json(const AnalysisBundle& bundle);

/// JSON object for one fitted part (same schema as a bundle element).
std::string part_json(const PartAnalysis& part);

const char* library_version();

} // namespace cotab
