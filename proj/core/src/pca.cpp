#include "cotab/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace cotab {

const char* to_string(Part part) {
    switch (part) {
        case Part::whole: return "whole";
        case Part::independence: return "independence";
        case Part::interaction: return "interaction";
    }
    return "?";
}

const char* to_string(EstimatorMethod method) {
    return method == EstimatorMethod::classical ? "classical" : "robust";
}

TableSample::TableSample(std::vector<CompositionalTable> tables, Part part)
    : tables_(std::move(tables)), part_(part) {
    if (tables_.size() < 3) {
        throw InvalidData("a table sample needs at least 3 tables, got " +
                          std::to_string(tables_.size()));
    }
    const auto& first = tables_.front();
    for (const auto& t : tables_) {
        if (t.rows() != first.rows() || t.cols() != first.cols() ||
            t.row_labels() != first.row_labels() || t.col_labels() != first.col_labels()) {
            throw DimensionError("sample tables must share shape and factor labels ('" +
                                 t.sample_id() + "' differs)");
        }
    }
}

std::vector<std::string> TableSample::sample_ids() const {
    std::vector<std::string> ids;
    ids.reserve(tables_.size());
    for (const auto& t : tables_) ids.push_back(t.sample_id());
    return ids;
}

Eigen::MatrixXd part_contrast(const TableCoordinateSystem& sys, Part part) {
    switch (part) {
        case Part::whole: return sys.full()->contrast();
        case Part::independence: return sys.independence()->contrast();
        case Part::interaction: return sys.interaction()->contrast();
    }
    throw ConfigError("unknown part");
}

Eigen::MatrixXd coordinate_matrix(const TableSample& sample, const TableCoordinateSystem& sys) {
    if (sample.rows() != sys.rows() || sample.cols() != sys.cols()) {
        throw DimensionError("sample tables are " + std::to_string(sample.rows()) + "x" +
                             std::to_string(sample.cols()) + " but system was built for " +
                             std::to_string(sys.rows()) + "x" + std::to_string(sys.cols()));
    }
    const Eigen::MatrixXd v = part_contrast(sys, sample.part());
    Eigen::MatrixXd z(sample.size(), v.cols());
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
        z.row(i) = (v.transpose() * clr(vectorize(sample.tables()[i])).values).transpose();
    }
    return z;
}

double PcaModel::explained_at(int k) const {
    if (explained.size() == 0) return 0.0;
    const Eigen::Index idx = std::min<Eigen::Index>(k, explained.size()) - 1;
    return idx < 0 ? 0.0 : explained[idx];
}

PcaModel fit_pca(const TableSample& sample, EstimatorMethod method,
                 std::shared_ptr<const TableCoordinateSystem> sys, std::uint64_t seed,
                 double alpha) {
    if (!sys) throw ConfigError("fit_pca: null coordinate system");
    const Eigen::MatrixXd z = coordinate_matrix(sample, *sys);
    const Eigen::Index n = z.rows();
    const Eigen::Index p = z.cols();

    PcaModel model;
    model.method = method;
    model.part = sample.part();
    model.system = sys;
    model.seed = seed;
    model.sample_ids = sample.sample_ids();

    if (method == EstimatorMethod::robust) {
        if (n <= p) {
            throw RankDeficient("robust PCA needs n > p, got n=" + std::to_string(n) +
                                " p=" + std::to_string(p));
        }
        model.estimate = mcd_estimate(z, alpha, seed);
    } else {
        model.estimate = classical_estimate(z);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.estimate.scatter);
    if (solver.info() != Eigen::Success) {
        throw DegenerateData("eigendecomposition of the scatter matrix failed");
    }
    // Solver returns ascending order; flip to nonincreasing and clamp tiny or
    // slightly negative eigenvalues of the PSD scatter at 0.
    Eigen::VectorXd lambda = solver.eigenvalues().reverse();
    Eigen::MatrixXd g = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 1e-12) lambda[i] = 0.0;
    }

    const Eigen::MatrixXd v_part = part_contrast(*sys, sample.part());
    Eigen::MatrixXd g_clr = v_part * g;

    // Deterministic orientation: largest-magnitude clr entry of each column
    // positive, ties resolved by the lowest cell index.
    for (Eigen::Index c = 0; c < g_clr.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < g_clr.rows(); ++r) {
            const double a = std::abs(g_clr(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (g_clr(arg, c) < 0.0) {
            g_clr.col(c) = -g_clr.col(c);
            g.col(c) = -g.col(c);
        }
    }

    model.eigenvalues = std::move(lambda);
    model.loadings_coords = std::move(g);
    model.loadings_clr = std::move(g_clr);
    model.center_coords = model.estimate.center;
    model.scores = (z.rowwise() - model.center_coords.transpose()) * model.loadings_coords;

    const double total = model.eigenvalues.sum();
    model.explained.resize(p);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        acc += model.eigenvalues[i];
        model.explained[i] = total > 0.0 ? acc / total : 0.0;
    }

    const auto& first = sample.tables().front();
    model.cell_labels.reserve(first.rows() * first.cols());
    for (Eigen::Index j = 0; j < first.cols(); ++j) {
        for (Eigen::Index i = 0; i < first.rows(); ++i) {
            model.cell_labels.push_back(first.cell_label(i, j));
        }
    }
    return model;
}

BiplotGeometry biplot_geometry(const PcaModel& model, int k, BiplotForm form) {
    const Eigen::Index p = model.coordinate_dim();
    if (k < 1 || k > p) {
        throw ConfigError("biplot rank k=" + std::to_string(k) + " out of range [1, " +
                          std::to_string(p) + "]");
    }
    for (int i = 0; i < k; ++i) {
        if (model.eigenvalues[i] <= 0.0) {
            throw DegenerateAxis("principal axis " + std::to_string(i + 1) +
                                 " has zero variance");
        }
    }

    BiplotGeometry geom;
    geom.form = form;
    geom.part = model.part;
    geom.method = model.method;
    geom.arrows = model.loadings_clr.leftCols(k);
    geom.points = model.scores.leftCols(k);
    if (form == BiplotForm::covariance) {
        for (int j = 0; j < k; ++j) {
            const double s = std::sqrt(model.eigenvalues[j]);
            geom.arrows.col(j) *= s;
            geom.points.col(j) /= s;
        }
    }
    const double total = model.eigenvalues.sum();
    geom.axis_explained.resize(k);
    for (int j = 0; j < k; ++j) {
        geom.axis_explained[j] = total > 0.0 ? model.eigenvalues[j] / total : 0.0;
    }
    geom.arrow_labels = model.cell_labels;
    geom.point_labels = model.sample_ids;
    return geom;
}

RunComparison compare_runs(const PcaModel& a, const PcaModel& b, int k) {
    if (a.part != b.part) {
        throw ComparisonError("models analyze different parts (" + std::string(to_string(a.part)) +
                              " vs " + to_string(b.part) + ")");
    }
    if (a.coordinate_dim() != b.coordinate_dim() || a.scores.rows() != b.scores.rows()) {
        throw ComparisonError("models were fit on samples of different size or dimension");
    }
    const int kk = std::min<int>(k, static_cast<int>(a.coordinate_dim()));

    RunComparison cmp;
    cmp.explained2_a = a.explained_at(2);
    cmp.explained2_b = b.explained_at(2);

    // Principal angles between the leading k-dimensional loading subspaces;
    // singular values of Qa^T Qb are the cosines.
    const Eigen::MatrixXd qa = a.loadings_coords.leftCols(kk);
    const Eigen::MatrixXd qb = b.loadings_coords.leftCols(kk);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
    cmp.principal_angles.resize(kk);
    for (int i = 0; i < kk; ++i) {
        cmp.principal_angles[i] = std::acos(std::clamp(svd.singularValues()[i], 0.0, 1.0));
    }

    // Column-sign alignment before measuring score displacement.
    Eigen::MatrixXd sb = b.scores.leftCols(kk);
    for (int j = 0; j < kk; ++j) {
        if (qa.col(j).dot(qb.col(j)) < 0.0) sb.col(j) = -sb.col(j);
    }
    const Eigen::MatrixXd sa = a.scores.leftCols(kk);
    cmp.score_displacement.resize(sa.rows());
    for (Eigen::Index i = 0; i < sa.rows(); ++i) {
        cmp.score_displacement[i] = (sa.row(i) - sb.row(i)).norm();
    }
    return cmp;
}

} // namespace cotab
