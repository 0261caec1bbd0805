// cotab: compositional-table analysis from the command line.
//
// Subcommands: decompose, coords, pca, outliers, biplot, pipeline, simulate.
// Exit codes: 0 ok, 2 data error, 3 numeric degeneracy, 4 config error.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cotab/csv.hpp"
#include "cotab/io_util.hpp"
#include "cotab/pipeline.hpp"
#include "cotab/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string input;
    std::string format = "long";
    std::string part = "whole";
    std::string method = "robust";
    double alpha = 0.75;
    double quantile = 0.975;
    std::uint64_t seed = 1;
    double kappa = 1.0;
    std::string out_dir = "cotab_out";
    bool svg = false;
};

void add_common_input(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--input", args.input, "Input CSV file")->required();
    cmd->add_option("--format", args.format, "Input layout")
        ->check(CLI::IsMember({"long", "wide"}))
        ->capture_default_str();
}

void add_analysis_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--part", args.part, "Table representation to analyze")
        ->check(CLI::IsMember({"whole", "ind", "int"}))
        ->capture_default_str();
    cmd->add_option("--method", args.method, "Estimator for center and scatter")
        ->check(CLI::IsMember({"classical", "robust"}))
        ->capture_default_str();
    cmd->add_option("--alpha", args.alpha, "MCD subset fraction in [0.5, 1]")
        ->capture_default_str();
    cmd->add_option("--quantile", args.quantile, "Chi-squared outlier cutoff quantile")
        ->capture_default_str();
    cmd->add_option("--seed", args.seed, "RNG seed")->capture_default_str();
}

cotab::CsvSchema schema_of(const CommonArgs& args) {
    cotab::CsvSchema schema;
    schema.format = args.format == "wide" ? cotab::CsvFormat::wide_form
                                          : cotab::CsvFormat::long_form;
    return schema;
}

cotab::Part part_of(const std::string& name) {
    if (name == "whole") return cotab::Part::whole;
    if (name == "ind") return cotab::Part::independence;
    if (name == "int") return cotab::Part::interaction;
    throw cotab::ConfigError("unknown part '" + name + "'");
}

cotab::EstimatorMethod method_of(const std::string& name) {
    return name == "classical" ? cotab::EstimatorMethod::classical
                               : cotab::EstimatorMethod::robust;
}

fs::path ensure_out_dir(const CommonArgs& args) {
    fs::path dir(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

cotab::AnalysisConfig config_of(const CommonArgs& args, bool with_out_dir) {
    cotab::AnalysisConfig cfg;
    cfg.method = method_of(args.method);
    cfg.alpha = args.alpha;
    cfg.quantile_level = args.quantile;
    cfg.seed = args.seed;
    cfg.kappa = args.kappa;
    cfg.emit_svg = args.svg;
    if (with_out_dir) cfg.out_dir = args.out_dir;
    cfg.validate();
    return cfg;
}

int run_decompose(const CommonArgs& args) {
    const auto sample = cotab::ingest_csv(args.input, schema_of(args));
    const auto dir = ensure_out_dir(args);

    std::vector<cotab::TableDecomposition> decs;
    decs.reserve(sample.size());
    for (const auto& t : sample.tables()) {
        decs.push_back(cotab::decompose(t));
    }
    auto emit = [&](const char* name, auto pick) {
        std::vector<cotab::CompositionalTable> tables;
        tables.reserve(decs.size());
        for (const auto& d : decs) {
            tables.push_back(cotab::close(pick(d), args.kappa));
        }
        std::ostringstream out;
        cotab::write_csv(tables, out);
        cotab::write_text_atomic((dir / name).string(), out.str());
    };
    emit("independence.csv", [](const cotab::TableDecomposition& d) { return d.independence; });
    emit("interaction.csv", [](const cotab::TableDecomposition& d) { return d.interaction; });
    emit("row_projection.csv", [](const cotab::TableDecomposition& d) { return d.row_projection; });
    emit("col_projection.csv", [](const cotab::TableDecomposition& d) { return d.col_projection; });
    std::cout << "decomposed " << sample.size() << " tables into " << dir << "\n";
    return 0;
}

int run_coords(const CommonArgs& args) {
    const auto sample = cotab::ingest_csv(args.input, schema_of(args)).with_part(part_of(args.part));
    const auto sys = cotab::TableCoordinateSystem::build(static_cast<int>(sample.rows()),
                                                         static_cast<int>(sample.cols()));
    const Eigen::MatrixXd z = cotab::coordinate_matrix(sample, *sys);

    const std::vector<std::string>* names = nullptr;
    switch (sample.part()) {
        case cotab::Part::whole: names = &sys->full()->coordinate_names(); break;
        case cotab::Part::independence: names = &sys->independence()->coordinate_names(); break;
        case cotab::Part::interaction: names = &sys->interaction()->coordinate_names(); break;
    }

    std::ostringstream out;
    out << "sample_id";
    for (const auto& n : *names) out << ',' << n;
    out << '\n';
    out.precision(17);
    const auto ids = sample.sample_ids();
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        out << cotab::csv_escape(ids[i]);
        for (Eigen::Index j = 0; j < z.cols(); ++j) out << ',' << z(i, j);
        out << '\n';
    }
    const auto dir = ensure_out_dir(args);
    const std::string name = "coords_" + std::string(cotab::to_string(sample.part())) + ".csv";
    cotab::write_text_atomic((dir / name).string(), out.str());
    std::cout << "wrote " << (dir / name) << " (" << z.rows() << " x " << z.cols() << ")\n";
    return 0;
}

int run_pca(const CommonArgs& args, bool svg_only) {
    const auto sample = cotab::ingest_csv(args.input, schema_of(args));
    const auto cfg = config_of(args, false);
    const cotab::Part part = part_of(args.part);

    const auto analysis = cotab::analyze_part(cfg, sample, part);
    const auto dir = ensure_out_dir(args);
    const std::string part_name = cotab::to_string(part);

    if (!svg_only) {
        const std::string name = "pca_" + part_name + ".json";
        cotab::write_text_atomic((dir / name).string(), cotab::part_json(analysis));
        std::cout << "wrote " << (dir / name) << "\n";
    }
    if (args.svg || svg_only) {
        const auto geom = cotab::biplot_geometry(analysis.model, 2, cfg.biplot_form);
        const std::string name = "biplot_" + part_name + ".svg";
        cotab::emit_biplot_svg(geom, (dir / name).string(),
                               std::string(cotab::to_string(cfg.method)) + " biplot, " +
                                   part_name + " tables");
        std::cout << "wrote " << (dir / name) << "\n";
    }
    std::cout << analysis.summary << "\n";
    return 0;
}

int run_outliers(const CommonArgs& args) {
    const auto sample = cotab::ingest_csv(args.input, schema_of(args)).with_part(part_of(args.part));
    const auto cfg = config_of(args, false);
    const auto sys = cotab::TableCoordinateSystem::build(static_cast<int>(sample.rows()),
                                                         static_cast<int>(sample.cols()));
    const Eigen::MatrixXd z = cotab::coordinate_matrix(sample, *sys);
    const auto report = cotab::detect_outliers(z, cfg.alpha, cfg.quantile_level, cfg.seed);

    ordered_json j;
    j["part"] = cotab::to_string(sample.part());
    j["alpha"] = cfg.alpha;
    j["quantile_level"] = report.quantile_level;
    j["df"] = report.df;
    j["cutoff"] = report.cutoff;
    j["distances"] = std::vector<double>(report.distances.begin(), report.distances.end());
    j["flags"] = report.flags;
    j["sample_ids"] = sample.sample_ids();
    j["seed"] = cfg.seed;
    j["version"] = cotab::library_version();

    const auto dir = ensure_out_dir(args);
    const std::string name = "outliers_" + std::string(cotab::to_string(sample.part())) + ".json";
    cotab::write_text_atomic((dir / name).string(), j.dump(2) + "\n");
    std::cout << report.flagged_count() << " out of all " << z.rows()
              << " samples flagged as outlying (part=" << cotab::to_string(sample.part())
              << ", cutoff=" << report.cutoff << ")\n"
              << "wrote " << (dir / name) << "\n";
    return 0;
}

int run_full_pipeline(const CommonArgs& args) {
    const auto sample = cotab::ingest_csv(args.input, schema_of(args));
    auto cfg = config_of(args, true);
    const auto bundle = cotab::run_pipeline(cfg, sample);
    for (const auto& pa : bundle.parts) {
        std::cout << pa.summary << "\n";
    }
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "analysis.json") << "\n";
    return 0;
}

struct SimulateArgs {
    std::string shape = "2x4";
    int n = 100;
    double contamination = 0.0;
    double shift_norm = 0.0;
    int shift_axis = -1;   ///< 1-based coordinate axis; -1 means last
    double sigma = 1.0;
    double decay = 1.0;
    std::uint64_t seed = 1;
    std::string out_dir = "cotab_out";
};

int run_simulate(const SimulateArgs& args) {
    int rows = 0, cols = 0;
    char sep = 0;
    std::istringstream shape(args.shape);
    if (!(shape >> rows >> sep >> cols) || (sep != 'x' && sep != 'X') || rows < 2 || cols < 2) {
        throw cotab::ConfigError("--shape must look like 2x4 with I,J >= 2");
    }
    const int p = rows * cols - 1;

    cotab::GeneratorSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.base_table = cotab::close(
        cotab::CompositionalTable(Eigen::MatrixXd::Ones(rows, cols)), 1.0);
    Eigen::VectorXd variances(p);
    double v = args.sigma * args.sigma;
    for (int i = 0; i < p; ++i, v *= args.decay) variances[i] = v;
    spec.coordinate_covariance = variances.asDiagonal();
    spec.n = args.n;
    spec.contamination = args.contamination;
    spec.seed = args.seed;
    if (args.shift_norm != 0.0) {
        const int axis = args.shift_axis < 0 ? p : args.shift_axis;
        if (axis < 1 || axis > p) {
            throw cotab::ConfigError("--shift-axis out of range [1, " + std::to_string(p) + "]");
        }
        spec.contamination_shift = Eigen::VectorXd::Zero(p);
        spec.contamination_shift[axis - 1] = args.shift_norm;
    } else if (args.contamination > 0.0) {
        throw cotab::ConfigError("--contamination needs a nonzero --shift-norm");
    }

    const auto generated = cotab::generate(spec);
    fs::path dir(args.out_dir);
    fs::create_directories(dir);

    std::ostringstream csv;
    cotab::write_csv(generated.sample, csv);
    cotab::write_text_atomic((dir / "sample.csv").string(), csv.str());

    std::ostringstream truth;
    truth << "sample_id,is_outlier\n";
    const auto ids = generated.sample.sample_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        truth << ids[i] << ',' << (generated.is_outlier[i] ? 1 : 0) << '\n';
    }
    cotab::write_text_atomic((dir / "truth.csv").string(), truth.str());
    std::cout << "wrote " << (dir / "sample.csv") << " and " << (dir / "truth.csv") << " ("
              << args.n << " tables, " << static_cast<int>(args.contamination * args.n)
              << " shifted)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compositional tables: decomposition, robust PCA and biplots"};
    app.require_subcommand(1);

    CommonArgs args;
    SimulateArgs sim;

    auto* decompose = app.add_subcommand(
        "decompose", "Split each table into independence and interaction parts");
    add_common_input(decompose, args);
    decompose->add_option("--kappa", args.kappa, "Closure constant of emitted tables")
        ->capture_default_str();
    decompose->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();

    auto* coords = app.add_subcommand("coords", "Pivot coordinates of each table");
    add_common_input(coords, args);
    coords->add_option("--part", args.part, "Coordinate block")
        ->check(CLI::IsMember({"whole", "ind", "int"}))
        ->capture_default_str();
    coords->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();

    auto* pca = app.add_subcommand("pca", "Principal component analysis of a table sample");
    add_common_input(pca, args);
    add_analysis_flags(pca, args);
    pca->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();
    pca->add_flag("--svg", args.svg, "Also write the rank-2 biplot");

    auto* outliers = app.add_subcommand("outliers", "Robust Mahalanobis outlier detection");
    add_common_input(outliers, args);
    add_analysis_flags(outliers, args);
    outliers->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();

    auto* biplot = app.add_subcommand("biplot", "Rank-2 covariance biplot as SVG");
    add_common_input(biplot, args);
    add_analysis_flags(biplot, args);
    biplot->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();

    auto* pipeline = app.add_subcommand(
        "pipeline", "Full workflow: decomposition, three PCA fits, outliers per part");
    add_common_input(pipeline, args);
    add_analysis_flags(pipeline, args);
    pipeline->add_option("--kappa", args.kappa, "Closure constant of emitted tables")
        ->capture_default_str();
    pipeline->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();
    pipeline->add_flag("--svg", args.svg, "Also write the three rank-2 biplots");

    auto* simulate = app.add_subcommand(
        "simulate", "Generate a synthetic sample with optional planted outliers");
    simulate->add_option("--shape", sim.shape, "Table shape IxJ")->capture_default_str();
    simulate->add_option("--n", sim.n, "Number of tables")->capture_default_str();
    simulate->add_option("--contamination", sim.contamination, "Outlier fraction in [0, 0.4]")
        ->capture_default_str();
    simulate->add_option("--shift-norm", sim.shift_norm, "Coordinate-space outlier shift norm")
        ->capture_default_str();
    simulate->add_option("--shift-axis", sim.shift_axis,
                         "1-based coordinate axis of the shift (default: last)");
    simulate->add_option("--sigma", sim.sigma, "Base coordinate standard deviation")
        ->capture_default_str();
    simulate->add_option("--decay", sim.decay, "Geometric decay of coordinate variances")
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (decompose->parsed()) return run_decompose(args);
        if (coords->parsed()) return run_coords(args);
        if (pca->parsed()) return run_pca(args, false);
        if (outliers->parsed()) return run_outliers(args);
        if (biplot->parsed()) return run_pca(args, true);
        if (pipeline->parsed()) return run_full_pipeline(args);
        if (simulate->parsed()) return run_simulate(sim);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    } catch (const cotab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
