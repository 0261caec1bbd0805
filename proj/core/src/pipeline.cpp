#include "cotab/pipeline.hpp"

#include <filesystem>

#include <json.hpp>

#include "cotab/io_util.hpp"

namespace cotab {

const char* library_version() { return "0.1.0"; }

void AnalysisConfig::validate() const {
    if (!(alpha >= 0.5 && alpha <= 1.0)) {
        throw ConfigError("alpha must lie in [0.5, 1], got " + std::to_string(alpha));
    }
    if (!(quantile_level > 0.5 && quantile_level < 1.0)) {
        throw ConfigError("quantile level must lie in (0.5, 1), got " +
                          std::to_string(quantile_level));
    }
    if (!(kappa > 0.0)) {
        throw ConfigError("kappa must be positive, got " + std::to_string(kappa));
    }
}

const PartAnalysis& AnalysisBundle::part(Part p) const {
    for (const auto& pa : parts) {
        if (pa.model.part == p) return pa;
    }
    throw ComparisonError("bundle has no analysis for part " + std::string(to_string(p)));
}

PartAnalysis analyze_part(const AnalysisConfig& config, const TableSample& sample, Part part,
                          std::shared_ptr<const TableCoordinateSystem> sys) {
    config.validate();
    if (!sys) {
        sys = TableCoordinateSystem::build(static_cast<int>(sample.rows()),
                                           static_cast<int>(sample.cols()));
    }
    const TableSample tagged = sample.with_part(part);

    PartAnalysis out;
    out.model = fit_pca(tagged, config.method, sys, config.seed, config.alpha);
    out.row_levels = sample.tables().front().row_labels();
    out.col_levels = sample.tables().front().col_labels();

    const Eigen::MatrixXd z = coordinate_matrix(tagged, *sys);
    const auto n = z.rows();
    const auto p = z.cols();
    if (n < p + 1) {
        out.outlier_note = "outlier detection skipped: n=" + std::to_string(n) +
                           " samples cannot support a robust fit in dimension " +
                           std::to_string(p);
        out.summary = std::string(to_string(part)) + ": " + out.outlier_note;
        return out;
    }
    out.outliers = detect_outliers(z, config.alpha, config.quantile_level, config.seed);
    out.summary = std::to_string(out.outliers->flagged_count()) + " out of all " +
                  std::to_string(n) + " samples flagged as outlying (part=" + to_string(part) +
                  ", cutoff=" + std::to_string(out.outliers->cutoff) + ")";
    return out;
}

namespace {

nlohmann::ordered_json part_to_json(const PartAnalysis& pa) {
    using json = nlohmann::ordered_json;
    const auto& model = pa.model;

    json shape;
    shape["I"] = model.system->rows();
    shape["J"] = model.system->cols();
    shape["row_levels"] = pa.row_levels;
    shape["col_levels"] = pa.col_levels;

    json j;
    j["shape"] = std::move(shape);
    j["part"] = to_string(model.part);
    j["method"] = to_string(model.method);
    j["eigenvalues"] = std::vector<double>(model.eigenvalues.begin(), model.eigenvalues.end());
    j["explained"] = std::vector<double>(model.explained.begin(), model.explained.end());

    json loadings = json::array();
    for (Eigen::Index r = 0; r < model.loadings_clr.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < model.loadings_clr.cols(); ++c) {
            row.push_back(model.loadings_clr(r, c));
        }
        loadings.push_back(std::move(row));
    }
    j["loadings_clr"] = std::move(loadings);

    json scores = json::array();
    for (Eigen::Index r = 0; r < model.scores.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < model.scores.cols(); ++c) {
            row.push_back(model.scores(r, c));
        }
        scores.push_back(std::move(row));
    }
    j["scores"] = std::move(scores);

    if (pa.outliers) {
        json o;
        o["cutoff"] = pa.outliers->cutoff;
        o["distances"] =
            std::vector<double>(pa.outliers->distances.begin(), pa.outliers->distances.end());
        o["flags"] = pa.outliers->flags;
        j["outliers"] = std::move(o);
    } else {
        j["outliers"] = nullptr;
    }
    j["seed"] = model.seed;
    j["version"] = library_version();
    return j;
}

} // namespace

AnalysisBundle run_pipeline(const AnalysisConfig& config, const TableSample& sample) {
    config.validate();

    AnalysisBundle bundle;
    bundle.config = config;
    bundle.system = TableCoordinateSystem::build(static_cast<int>(sample.rows()),
                                                 static_cast<int>(sample.cols()));
    bundle.decompositions.reserve(sample.size());
    for (const auto& t : sample.tables()) {
        bundle.decompositions.push_back(decompose(t));
    }
    for (Part part : {Part::whole, Part::independence, Part::interaction}) {
        bundle.parts.push_back(analyze_part(config, sample, part, bundle.system));
    }

    if (!config.out_dir.empty()) {
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        write_text_atomic((dir / "analysis.json").string(), bundle_json(bundle));
        if (config.emit_svg) {
            for (const auto& pa : bundle.parts) {
                const auto geom = biplot_geometry(pa.model, 2, config.biplot_form);
                const std::string name =
                    "biplot_" + std::string(to_string(pa.model.part)) + ".svg";
                emit_biplot_svg(geom, (dir / name).string(),
                                std::string(to_string(pa.model.method)) + " biplot, " +
                                    to_string(pa.model.part) + " tables");
            }
        }
    }
    return bundle;
}

std::string bundle_json(const AnalysisBundle& bundle) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& pa : bundle.parts) {
        arr.push_back(part_to_json(pa));
    }
    return arr.dump(2) + "\n";
}

std::string part_json(const PartAnalysis& part) {
    return part_to_json(part).dump(2) + "\n";
}

} // namespace cotab
