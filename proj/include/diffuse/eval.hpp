#pragma once

#include <Eigen/Dense>
#include <vector>

#include "diffuse/grid.hpp"
#include "diffuse/models.hpp"

namespace diffuse {

struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    long n = 0;
};

// Sample mean and unbiased sample covariance; requires n >= dim + 1.
GaussianSummary fit_gaussian(const std::vector<Grid>& samples);

// Squared 2-Wasserstein distance between the fitted Gaussians:
// |mu_a - mu_b|^2 + tr(Sa + Sb - 2 (Sa^1/2 Sb Sa^1/2)^1/2).
// Matrix square roots via symmetric eigendecomposition, negative eigenvalues
// clamped to zero.
double gaussian_frechet(const GaussianSummary& a, const GaussianSummary& b);

// Pearson correlation with the one-pixel horizontal shift averaged with the
// vertical one. Throws UndefinedStatisticError for zero-variance grids.
double lag1_autocorr(const Grid& x);

// Mean of lag1_autocorr over a set of draws.
double mean_lag1_autocorr(const std::vector<Grid>& draws);

// Fraction of samples nearest (Mahalanobis) to each mixture component.
std::vector<double> mixture_occupancy(const std::vector<Grid>& samples,
                                      const GaussianMixture& gm);

// Pooled variance over upsampled-noise sites whose interpolation weights sit
// near the midpoint along exactly one axis (fraction in [0.45, 0.55]) and
// near a source site along the other (within 0.02). Theory puts the per-site
// variance of upsampled unit noise at these sites in [0.5, 0.505].
double midpoint_site_variance(const std::vector<Grid>& upsampled_draws, const Shape& input_shape,
                              int factor);

// Variance of all entries pooled across draws.
double pooled_variance(const std::vector<Grid>& draws);

}  // namespace diffuse
