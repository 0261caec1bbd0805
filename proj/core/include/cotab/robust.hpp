#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cotab/errors.hpp"

namespace cotab {

enum class ScatterMethod { classical, mcd_raw, mcd_reweighted };

/// Location/scatter estimate of an n x p coordinate matrix. For MCD methods,
/// support_mask records which observations the final center/scatter were
/// computed from, best_subset the optimal h-subset, and subset_log_determinant
/// the log determinant of that subset's covariance (before the consistency
/// factor).
struct ScatterEstimate {
    Eigen::VectorXd center;
    Eigen::MatrixXd scatter;
    ScatterMethod method = ScatterMethod::classical;
    int h = 0;
    std::vector<bool> support_mask;
    std::vector<int> best_subset;
    double subset_log_determinant = 0.0;
    std::uint64_t seed = 0;
};

struct McdOptions {
    enum class Search { automatic, sampling, exact };

    bool reweight = true;          ///< one-step reweighting at the 0.975 cutoff
    int n_starts = 500;            ///< random (p+1)-element starts
    int n_csteps = 2;              ///< concentration steps per start
    int n_best = 10;               ///< candidates refined to convergence
    int max_refine_iterations = 100;
    double determinant_rel_tol = 1e-9;
    Search search = Search::automatic;
    std::size_t exact_enumeration_limit = 20000;  ///< max C(n,h) for exact mode
};

/// Arithmetic mean and sample covariance (denominator n-1). The estimate is
/// computed for any n >= 2; a singular scatter surfaces as RankDeficient at
/// the point of use (inversion).
ScatterEstimate classical_estimate(const Eigen::MatrixXd& z);

/// Minimum Covariance Determinant estimate: the h-subset mean and covariance
/// minimizing the covariance determinant, scaled by the chi-squared
/// consistency factor, with optional one-step reweighting. alpha sets
/// h = floor(alpha*n), clamped to [floor((n+p+1)/2), n]. Deterministic for a
/// fixed seed; when the number of h-subsets is small the search enumerates
/// them all instead of sampling.
ScatterEstimate mcd_estimate(const Eigen::MatrixXd& z, double alpha, std::uint64_t seed,
                             const McdOptions& options = {});

/// d_i = sqrt((z_i - t)^T C^{-1} (z_i - t)) for every row of z.
Eigen::VectorXd mahalanobis_distances(const Eigen::MatrixXd& z, const ScatterEstimate& est);

struct OutlierReport {
    Eigen::VectorXd distances;
    double cutoff = 0.0;
    std::vector<bool> flags;
    double quantile_level = 0.975;
    int df = 0;
    ScatterEstimate estimate;

    int flagged_count() const;
};

/// Robust distances from the (reweighted) MCD fit, flagged against the square
/// root of the chi-squared quantile at quantile_level with df = p.
OutlierReport detect_outliers(const Eigen::MatrixXd& z, double alpha,
                              double quantile_level = 0.975, std::uint64_t seed = 1,
                              const McdOptions& options = {});

/// Quantile of the chi-squared distribution; quantile_level >= 1 yields +inf.
double chi_squared_quantile(int df, double quantile_level);

/// Consistency factor alpha / F_{chi^2_{p+2}}(q_alpha) applied to truncated
/// covariances so MCD scatters are consistent at the normal model.
double mcd_consistency_factor(int p, double fraction);

} // namespace cotab
