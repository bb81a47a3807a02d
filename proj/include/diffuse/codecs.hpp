#pragma once

#include <Eigen/Dense>

#include "diffuse/grid.hpp"
#include "diffuse/rng.hpp"

namespace diffuse {

// Invertible affine latent codec: encode maps vec(x) to F*vec(x) + b,
// decode applies the (pseudo-)inverse. The left-inverse property
// inverse * forward == I is verified to 1e-10 on construction and on load.
class LinearCodec {
public:
    LinearCodec(Shape pixel_shape, Shape latent_shape, Eigen::MatrixXd forward,
                Eigen::VectorXd bias);

    static LinearCodec identity(const Shape& shape);
    static LinearCodec scaling(const Shape& shape, double factor);
    // Haar-distributed orthogonal map from QR of a Gaussian matrix, optionally
    // followed by a uniform scale.
    static LinearCodec random_orthogonal(const Shape& shape, RngStream& rng, double scale = 1.0);

    Grid encode(const Grid& x) const;
    Grid decode(const Grid& z) const;

    const Shape& pixel_shape() const { return pixel_shape_; }
    const Shape& latent_shape() const { return latent_shape_; }
    const Eigen::MatrixXd& forward_matrix() const { return forward_; }
    const Eigen::MatrixXd& inverse_matrix() const { return inverse_; }
    const Eigen::VectorXd& bias() const { return bias_; }

    // True when the forward map is a scaled orthogonal matrix; such codecs map
    // isotropic Gaussians to isotropic Gaussians, which the analytic mixture
    // oracles rely on. |scale| returned through the out parameter.
    bool is_scaled_orthogonal(double& scale, double tol = 1e-9) const;

private:
    Shape pixel_shape_;
    Shape latent_shape_;
    Eigen::MatrixXd forward_;   // latent_dim x pixel_dim
    Eigen::MatrixXd inverse_;   // pixel_dim x latent_dim
    Eigen::VectorXd bias_;      // latent_dim
};

// Mean over each factor x factor block; dims must divide evenly.
Grid downsample(const Grid& x, int factor);

// Corner-aligned bilinear interpolation to (H*f, W*f); both corners of the
// output grid coincide with the input corners.
Grid upsample_pixel(const Grid& x, int factor);

// Same interpolation applied directly to an intermediate noisy latent.
// Kept as the comparison baseline: it halves the noise variance at
// midpoint-interpolated sites and correlates neighbouring pixels.
Grid naive_upsample_latent(const Grid& z_t, int factor);

// Interpolation source weights for one axis of the corner-aligned upsample:
// output index i draws from floor(pos) and floor(pos)+1 with weights
// (1 - frac, frac), pos = i * (n - 1) / (n * f - 1).
struct AxisSample {
    int lo;
    double frac;  // weight of the hi neighbour
};
AxisSample upsample_axis_sample(int index, int in_size, int factor);

}  // namespace diffuse
