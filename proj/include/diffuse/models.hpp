#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffuse/codecs.hpp"
#include "diffuse/grid.hpp"
#include "diffuse/rng.hpp"
#include "diffuse/schedule.hpp"

namespace diffuse {

// Toy analog of the text/style conditioning: unconditional, a class label, or
// a style label.
struct Condition {
    enum class Tag { unconditional, class_label, style_label };
    Tag tag = Tag::unconditional;
    int index = 0;

    static Condition none() { return {}; }
    static Condition class_label(int k) { return {Tag::class_label, k}; }
    static Condition style_label(int s) { return {Tag::style_label, s}; }

    bool operator==(const Condition&) const = default;
};

// Epsilon-prediction contract. Implementations are immutable after
// construction and safe to query from multiple threads.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual Grid predict_eps(const Grid& z, int t, const Condition& cond) const = 0;
    // Native latent shape; sampling draws its initial noise with this shape.
    virtual const Shape& latent_shape() const = 0;
};

// Isotropic Gaussian mixture; the analytic stand-in for a pretrained model's
// data distribution.
class GaussianMixture {
public:
    GaussianMixture(std::vector<double> weights, std::vector<Grid> means,
                    std::vector<double> variances);

    int components() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Grid>& means() const { return means_; }
    const std::vector<double>& variances() const { return variances_; }
    const Shape& shape() const { return means_.front().shape(); }
    std::size_t dim() const { return means_.front().numel(); }

    // Keep only the listed components, renormalizing the weights.
    GaussianMixture restricted(const std::vector<int>& keep) const;

    // Push the mixture through a scaled-orthogonal codec; isotropy is
    // preserved. Throws for general linear maps.
    GaussianMixture transformed(const LinearCodec& codec) const;

    Grid sample(RngStream& rng) const;
    std::vector<Grid> sample_many(int n, RngStream& rng) const;
    // Component picked for the most recent z draw path; sample_with_label
    // returns both for labelled datasets.
    std::pair<Grid, int> sample_with_label(RngStream& rng) const;

private:
    std::vector<double> weights_;
    std::vector<Grid> means_;
    std::vector<double> variances_;
};

// Exact minimizer of the noise-prediction objective for mixture data:
// eps*(z, t) = -sqrt(1 - abar_t) * grad log p_t(z), with
// p_t = sum_k w_k N(sqrt(abar_t) mu_k, (abar_t sigma_k^2 + 1 - abar_t) I).
Grid gm_predict_eps(const GaussianMixture& gm, const Grid& z_t, int t,
                    const NoiseSchedule& schedule);

// Denoiser wrapper around the analytic oracle. A class or style label
// conditions on the matching single component; unconditional uses the full
// mixture.
class GaussianMixtureDenoiser : public Denoiser {
public:
    GaussianMixtureDenoiser(GaussianMixture gm, NoiseSchedule schedule);

    Grid predict_eps(const Grid& z, int t, const Condition& cond) const override;
    const Shape& latent_shape() const override { return gm_.shape(); }

    const GaussianMixture& mixture() const { return gm_; }

private:
    GaussianMixture gm_;
    NoiseSchedule schedule_;
};

Eigen::VectorXd sinusoidal_embedding(double value, int dim);

struct MlpConfig {
    Shape data_shape;             // canonical (native) shape, rank 1 or 2
    std::vector<int> hidden_widths{64};
    int time_embed_dim = 16;
    int n_class = 0;
    int n_style = 0;
    int res_embed_dim = 0;        // 0 disables the resolution pathway
    int schedule_steps = 1000;    // recorded alongside the weights

    std::size_t data_dim() const { return shape_numel(data_shape); }
    int input_dim() const;
    bool operator==(const MlpConfig&) const = default;
};

struct TrainItem {
    Grid z;           // noisy input, native or half-resolution shape
    int t = 1;
    Condition cond;
    Grid target;      // same shape as z
};
using TrainBatch = std::vector<TrainItem>;

// Small tanh MLP epsilon-predictor. The input embedding concatenates the
// (flattened) latent, a sinusoidal embedding of t, a one-hot condition and,
// when enabled, a sinusoidal embedding of the resolution index. Grids at half
// the native resolution are bilinearly lifted to native at the input and the
// prediction is pooled back down, with the resolution embedding telling the
// network which regime it is in.
class MlpDenoiser : public Denoiser {
public:
    MlpDenoiser(MlpConfig cfg, std::vector<Eigen::MatrixXd> weights,
                std::vector<Eigen::VectorXd> biases);

    static MlpDenoiser random_init(const MlpConfig& cfg, RngStream& rng);
    static MlpDenoiser zero_init(const MlpConfig& cfg);

    Grid predict_eps(const Grid& z, int t, const Condition& cond) const override;
    const Shape& latent_shape() const override { return cfg_.data_shape; }

    const MlpConfig& config() const { return cfg_; }
    std::size_t parameter_count() const;
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& flat);

    // Mean over the batch of the per-item mean squared residual.
    double loss(const TrainBatch& batch) const;
    // Exact reverse-mode gradient of loss(), flat layout matching parameters().
    std::vector<double> gradients(const TrainBatch& batch) const;
    // Single-threaded reference path for the parallel gradient kernel.
    std::vector<double> gradients_serial(const TrainBatch& batch) const;
    // One fused pass; returns the loss and fills the flat gradient.
    double loss_and_gradients(const TrainBatch& batch, std::vector<double>& grad) const;

private:
    struct Trace;
    Eigen::VectorXd build_input(const Grid& z_native, int t, const Condition& cond,
                                int res_index) const;
    Trace forward(const Grid& z, int t, const Condition& cond) const;
    void backward(const Trace& trace, const Eigen::VectorXd& d_out,
                  std::vector<double>& grad_out) const;
    double item_gradient(const TrainItem& item, double batch_scale,
                         std::vector<double>& grad_out) const;

    MlpConfig cfg_;
    std::vector<Eigen::MatrixXd> weights_;  // out x in per layer
    std::vector<Eigen::VectorXd> biases_;
};

enum class ResolutionPolicy { native, upscale_low_res_into_pool, train_at_low_res };

struct TrainSpec {
    int t_lo = 1;
    int t_hi = 1000;               // inclusive range for sampled timesteps
    ResolutionPolicy resolution_policy = ResolutionPolicy::native;
    long steps = 1000;
    double learning_rate = 1e-2;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

// Uniformly sampled pool of (x0, condition) pairs.
struct Dataset {
    std::vector<Grid> items;
    std::vector<Condition> conds;

    std::size_t size() const { return items.size(); }
    void add(Grid x0, Condition cond = Condition::none());
    std::pair<const Grid*, const Condition*> draw(RngStream& rng) const;
};

// Union of the high-resolution items and bilinearly upscaled low-resolution
// items; sampling stays uniform over the combined pool.
Dataset make_structure_pool(const Dataset& high_res, const Dataset& low_res, int factor);

struct TrainResult {
    MlpDenoiser model;
    std::vector<double> loss_curve;  // one entry per optimizer step
};

// Plain fixed-rate SGD on the noise-prediction objective with
// t ~ Uniform{t_lo..t_hi}. Throws TrainingError with the step index if the
// loss goes non-finite.
TrainResult train_denoiser(MlpDenoiser model, const Dataset& data, const TrainSpec& spec,
                           const NoiseSchedule& schedule, RngStream& rng);

}  // namespace diffuse
