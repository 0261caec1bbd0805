#include "cotab/composition.hpp"

#include <cmath>
#include <utility>

namespace cotab {

namespace {

void require_same_size(const Composition& x, const Composition& y, const char* op) {
    if (x.size() != y.size()) {
        throw DimensionError(std::string(op) + ": compositions have " +
                             std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                             " parts");
    }
}

// Validated at construction and reused everywhere: mean of logs, so large
// count data cannot overflow a naive product.
double log_geometric_mean(const Eigen::VectorXd& v) {
    return v.array().log().mean();
}

} // namespace

Composition::Composition(Eigen::VectorXd parts, std::vector<std::string> labels)
    : parts_(std::move(parts)), labels_(std::move(labels)) {
    if (parts_.size() < 2) {
        throw InvalidComposition("a composition needs at least 2 parts, got " +
                                 std::to_string(parts_.size()));
    }
    for (Eigen::Index i = 0; i < parts_.size(); ++i) {
        if (!std::isfinite(parts_[i]) || parts_[i] <= 0.0) {
            throw InvalidComposition("part " + std::to_string(i) + " is " +
                                     std::to_string(parts_[i]) + "; parts must be positive and finite");
        }
    }
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != parts_.size()) {
        throw DimensionError("label count " + std::to_string(labels_.size()) +
                             " does not match part count " + std::to_string(parts_.size()));
    }
}

Composition close(const Composition& x, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw InvalidComposition("closure constant must be positive and finite");
    }
    const double s = x.parts().sum();
    return Composition(x.parts() * (kappa / s), x.labels());
}

Composition perturb(const Composition& x, const Composition& y) {
    require_same_size(x, y, "perturb");
    return Composition(x.parts().cwiseProduct(y.parts()),
                       x.has_labels() ? x.labels() : y.labels());
}

Composition power(const Composition& x, double a) {
    return Composition(x.parts().array().pow(a).matrix(), x.labels());
}

double aitchison_inner(const Composition& x, const Composition& y) {
    require_same_size(x, y, "aitchison_inner");
    // Equivalent to the double sum over all logratio pairs; the brute-force
    // form is kept as a test oracle.
    const Eigen::VectorXd cx = clr(x).values;
    const Eigen::VectorXd cy = clr(y).values;
    return cx.dot(cy);
}

double aitchison_norm(const Composition& x) {
    return std::sqrt(aitchison_inner(x, x));
}

double aitchison_dist(const Composition& x, const Composition& y) {
    require_same_size(x, y, "aitchison_dist");
    return aitchison_norm(perturb(x, power(y, -1.0)));
}

ClrVector clr(const Composition& x) {
    const Eigen::ArrayXd logs = x.parts().array().log();
    return ClrVector{(logs - logs.mean()).matrix(), x.labels()};
}

Composition clr_inverse(const ClrVector& c) {
    const double s = c.values.sum();
    if (std::abs(s) > 1e-8) {
        throw NotInClrPlane("clr vector sums to " + std::to_string(s) +
                            "; entries of a clr vector must sum to zero");
    }
    return close(Composition(c.values.array().exp().matrix(), c.labels), 1.0);
}

CoordinateSystem::CoordinateSystem(Eigen::MatrixXd contrast,
                                   std::vector<std::string> coordinate_names)
    : contrast_(std::move(contrast)), names_(std::move(coordinate_names)) {
    if (static_cast<Eigen::Index>(names_.size()) != contrast_.cols()) {
        throw DimensionError("coordinate name count does not match contrast columns");
    }
    const Eigen::Index d = contrast_.cols();
    const Eigen::MatrixXd gram = contrast_.transpose() * contrast_;
    const double orth = (gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (orth > 1e-12) {
        throw InvalidSpec("contrast matrix is not orthonormal (max deviation " +
                          std::to_string(orth) + ")");
    }
    const double colsum = contrast_.colwise().sum().cwiseAbs().maxCoeff();
    if (colsum > 1e-12) {
        throw InvalidSpec("contrast columns must sum to zero (max deviation " +
                          std::to_string(colsum) + ")");
    }
}

std::shared_ptr<const CoordinateSystem> pivot_system(int d, int pivot_index) {
    if (d < 2) {
        throw InvalidComposition("pivot system needs D >= 2");
    }
    if (pivot_index < 1 || pivot_index > d) {
        throw IndexError("pivot index " + std::to_string(pivot_index) +
                         " out of range [1, " + std::to_string(d) + "]");
    }
    // Reordering (x_l, x_1, ..., x_{l-1}, x_{l+1}, ..., x_D): perm[i] is the
    // original index standing at reordered position i.
    std::vector<int> perm;
    perm.reserve(d);
    perm.push_back(pivot_index - 1);
    for (int i = 0; i < d; ++i) {
        if (i != pivot_index - 1) perm.push_back(i);
    }

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, d - 1);
    std::vector<std::string> names;
    names.reserve(d - 1);
    for (int i = 1; i < d; ++i) {
        const double c_pivot = std::sqrt(static_cast<double>(d - i) / (d - i + 1));
        const double c_rest = -std::sqrt(1.0 / (static_cast<double>(d - i) * (d - i + 1)));
        v(perm[i - 1], i - 1) = c_pivot;
        for (int t = i; t < d; ++t) {
            v(perm[t], i - 1) = c_rest;
        }
        names.push_back("z_" + std::to_string(i));
    }
    return std::make_shared<const CoordinateSystem>(std::move(v), std::move(names));
}

IlrVector to_coords(const Composition& x, std::shared_ptr<const CoordinateSystem> sys) {
    if (!sys) throw ConfigError("to_coords: null coordinate system");
    if (x.size() != sys->dim_in()) {
        throw DimensionError("to_coords: composition has " + std::to_string(x.size()) +
                             " parts, system expects " + std::to_string(sys->dim_in()));
    }
    return IlrVector{sys->contrast().transpose() * clr(x).values, std::move(sys)};
}

Composition from_coords(const IlrVector& z) {
    if (!z.system) throw ConfigError("from_coords: coordinate vector carries no system");
    if (z.values.size() != z.system->dim_out()) {
        throw DimensionError("from_coords: coordinate vector has " +
                             std::to_string(z.values.size()) + " entries, system expects " +
                             std::to_string(z.system->dim_out()));
    }
    return clr_inverse(ClrVector{z.system->contrast() * z.values, {}});
}

} // namespace cotab
