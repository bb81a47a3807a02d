#include "diffuse/codecs.hpp"

#include <cmath>

namespace diffuse {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const Grid& g) {
    return Eigen::Map<const Eigen::VectorXd>(g.data().data(),
                                             static_cast<Eigen::Index>(g.numel()));
}

}  // namespace

LinearCodec::LinearCodec(Shape pixel_shape, Shape latent_shape, Eigen::MatrixXd forward,
                         Eigen::VectorXd bias)
    : pixel_shape_(std::move(pixel_shape)),
      latent_shape_(std::move(latent_shape)),
      forward_(std::move(forward)),
      bias_(std::move(bias)) {
    auto pixel_dim = static_cast<Eigen::Index>(shape_numel(pixel_shape_));
    auto latent_dim = static_cast<Eigen::Index>(shape_numel(latent_shape_));
    if (forward_.rows() != latent_dim || forward_.cols() != pixel_dim)
        throw ShapeError("codec forward matrix must be latent_dim x pixel_dim");
    if (bias_.size() != latent_dim) throw ShapeError("codec bias must have latent_dim entries");
    if (latent_dim < pixel_dim)
        throw ShapeError("codec needs latent_dim >= pixel_dim to be invertible");

    inverse_ = forward_.completeOrthogonalDecomposition().pseudoInverse();
    double err = (inverse_ * forward_ - Eigen::MatrixXd::Identity(pixel_dim, pixel_dim))
                     .cwiseAbs()
                     .maxCoeff();
    if (err > 1e-10)
        throw ParamError("codec forward matrix is not invertible to 1e-10 (residual " +
                         std::to_string(err) + ")");
}

LinearCodec LinearCodec::identity(const Shape& shape) {
    auto dim = static_cast<Eigen::Index>(shape_numel(shape));
    return LinearCodec(shape, shape, Eigen::MatrixXd::Identity(dim, dim),
                       Eigen::VectorXd::Zero(dim));
}

LinearCodec LinearCodec::scaling(const Shape& shape, double factor) {
    if (factor == 0.0 || !std::isfinite(factor)) throw ParamError("codec scale must be finite and nonzero");
    auto dim = static_cast<Eigen::Index>(shape_numel(shape));
    return LinearCodec(shape, shape, factor * Eigen::MatrixXd::Identity(dim, dim),
                       Eigen::VectorXd::Zero(dim));
}

LinearCodec LinearCodec::random_orthogonal(const Shape& shape, RngStream& rng, double scale) {
    if (scale == 0.0 || !std::isfinite(scale)) throw ParamError("codec scale must be finite and nonzero");
    auto dim = static_cast<Eigen::Index>(shape_numel(shape));
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // Fix the sign convention so the map is a deterministic function of the draws.
    Eigen::VectorXd r_diag = qr.matrixQR().diagonal();
    for (Eigen::Index c = 0; c < dim; ++c)
        if (r_diag(c) < 0) q.col(c) = -q.col(c);
    return LinearCodec(shape, shape, scale * q, Eigen::VectorXd::Zero(dim));
}

Grid LinearCodec::encode(const Grid& x) const {
    if (x.shape() != pixel_shape_)
        throw ShapeError("encode: expected pixel shape " + shape_str(pixel_shape_) + ", got " +
                         shape_str(x.shape()));
    Eigen::VectorXd z = forward_ * as_vector(x) + bias_;
    std::vector<double> data(z.data(), z.data() + z.size());
    return Grid(latent_shape_, std::move(data));
}

Grid LinearCodec::decode(const Grid& z) const {
    if (z.shape() != latent_shape_)
        throw ShapeError("decode: expected latent shape " + shape_str(latent_shape_) + ", got " +
                         shape_str(z.shape()));
    Eigen::VectorXd x = inverse_ * (as_vector(z) - bias_);
    std::vector<double> data(x.data(), x.data() + x.size());
    return Grid(pixel_shape_, std::move(data));
}

bool LinearCodec::is_scaled_orthogonal(double& scale, double tol) const {
    if (forward_.rows() != forward_.cols()) return false;
    Eigen::MatrixXd gram = forward_.transpose() * forward_;
    double s2 = gram.diagonal().mean();
    if (s2 <= 0.0) return false;
    double err = (gram - s2 * Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
                     .cwiseAbs()
                     .maxCoeff();
    if (err > tol * std::max(1.0, s2)) return false;
    scale = std::sqrt(s2);
    return true;
}

Grid downsample(const Grid& x, int factor) {
    if (factor < 1) throw ParamError("downsample factor must be >= 1");
    if (x.shape().size() != 2) throw ShapeError("downsample expects a 2-D grid");
    int h = x.rows(), w = x.cols();
    if (h % factor != 0 || w % factor != 0)
        throw ShapeError("downsample: dims " + shape_str(x.shape()) + " not divisible by " +
                         std::to_string(factor));
    int oh = h / factor, ow = w / factor;
    Grid out = Grid::zeros({oh, ow});
    double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int dr = 0; dr < factor; ++dr)
                for (int dc = 0; dc < factor; ++dc) acc += x.at(r * factor + dr, c * factor + dc);
            out.at(r, c) = acc * inv;
        }
    }
    return out;
}

AxisSample upsample_axis_sample(int index, int in_size, int factor) {
    int out_size = in_size * factor;
    if (in_size == 1) return {0, 0.0};
    double pos = static_cast<double>(index) * (in_size - 1) / (out_size - 1);
    int lo = static_cast<int>(pos);
    if (lo >= in_size - 1) return {in_size - 2, 1.0};
    return {lo, pos - lo};
}

Grid upsample_pixel(const Grid& x, int factor) {
    if (factor < 2) throw ParamError("upsample factor must be >= 2");
    if (x.shape().size() != 2) throw ShapeError("upsample expects a 2-D grid");
    int h = x.rows(), w = x.cols();
    int oh = h * factor, ow = w * factor;
    Grid out = Grid::zeros({oh, ow});
    for (int r = 0; r < oh; ++r) {
        AxisSample rs = upsample_axis_sample(r, h, factor);
        int r1 = h == 1 ? 0 : rs.lo + 1;
        for (int c = 0; c < ow; ++c) {
            AxisSample cs = upsample_axis_sample(c, w, factor);
            int c1 = w == 1 ? 0 : cs.lo + 1;
            double top = x.at(rs.lo, cs.lo) * (1.0 - cs.frac) + x.at(rs.lo, c1) * cs.frac;
            double bot = x.at(r1, cs.lo) * (1.0 - cs.frac) + x.at(r1, c1) * cs.frac;
            out.at(r, c) = top * (1.0 - rs.frac) + bot * rs.frac;
        }
    }
    return out;
}

Grid naive_upsample_latent(const Grid& z_t, int factor) { return upsample_pixel(z_t, factor); }

}  // namespace diffuse
