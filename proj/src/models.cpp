#include "diffuse/models.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "diffuse/sampling.hpp"

namespace diffuse {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const Grid& g) {
    return Eigen::Map<const Eigen::VectorXd>(g.data().data(),
                                             static_cast<Eigen::Index>(g.numel()));
}

Shape half_shape(const Shape& s) {
    Shape h = s;
    for (int& d : h) d /= 2;
    return h;
}

bool divisible_by_two(const Shape& s) {
    return std::all_of(s.begin(), s.end(), [](int d) { return d % 2 == 0 && d >= 2; });
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<double> weights, std::vector<Grid> means,
                                 std::vector<double> variances)
    : weights_(std::move(weights)), means_(std::move(means)), variances_(std::move(variances)) {
    if (weights_.empty() || weights_.size() != means_.size() ||
        weights_.size() != variances_.size())
        throw ParamError("mixture needs matching nonempty weights/means/variances");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw ParamError("mixture weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ParamError("mixture weights must sum to 1");
    for (double v : variances_)
        if (!(v > 0.0)) throw ParamError("mixture variances must be positive");
    for (const Grid& m : means_) require_same_shape(m, means_.front(), "mixture means");
}

GaussianMixture GaussianMixture::restricted(const std::vector<int>& keep) const {
    if (keep.empty()) throw ParamError("restricted mixture needs at least one component");
    std::vector<double> w;
    std::vector<Grid> m;
    std::vector<double> v;
    double sum = 0.0;
    for (int k : keep) {
        if (k < 0 || k >= components()) throw ParamError("component index out of range");
        sum += weights_[static_cast<std::size_t>(k)];
    }
    for (int k : keep) {
        auto i = static_cast<std::size_t>(k);
        w.push_back(weights_[i] / sum);
        m.push_back(means_[i]);
        v.push_back(variances_[i]);
    }
    // Guard against accumulated rounding in the renormalization.
    double total = 0.0;
    for (double wi : w) total += wi;
    w.back() += 1.0 - total;
    return GaussianMixture(std::move(w), std::move(m), std::move(v));
}

GaussianMixture GaussianMixture::transformed(const LinearCodec& codec) const {
    double scale = 1.0;
    if (!codec.is_scaled_orthogonal(scale))
        throw ParamError("mixture transform requires a scaled-orthogonal codec");
    std::vector<Grid> m;
    std::vector<double> v;
    m.reserve(means_.size());
    for (const Grid& mu : means_) m.push_back(codec.encode(mu));
    for (double var : variances_) v.push_back(var * scale * scale);
    return GaussianMixture(weights_, std::move(m), std::move(v));
}

std::pair<Grid, int> GaussianMixture::sample_with_label(RngStream& rng) const {
    double u = rng.uniform();
    int k = components() - 1;
    double acc = 0.0;
    for (int i = 0; i < components(); ++i) {
        acc += weights_[static_cast<std::size_t>(i)];
        if (u < acc) {
            k = i;
            break;
        }
    }
    const Grid& mu = means_[static_cast<std::size_t>(k)];
    double sigma = std::sqrt(variances_[static_cast<std::size_t>(k)]);
    Grid out = Grid::zeros(mu.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = mu[i] + sigma * rng.normal();
    return {std::move(out), k};
}

Grid GaussianMixture::sample(RngStream& rng) const { return sample_with_label(rng).first; }

std::vector<Grid> GaussianMixture::sample_many(int n, RngStream& rng) const {
    std::vector<Grid> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(sample(rng));
    return out;
}

Grid gm_predict_eps(const GaussianMixture& gm, const Grid& z_t, int t,
                    const NoiseSchedule& schedule) {
    if (t < 1 || t > schedule.total_steps())
        throw ParamError("gm_predict_eps: t must be in [1, T]");
    if (z_t.shape() != gm.shape())
        throw ShapeError("gm_predict_eps: latent shape " + shape_str(z_t.shape()) +
                         " does not match mixture shape " + shape_str(gm.shape()));

    double abar = schedule.alpha_bar(t);
    double sqrt_abar = std::sqrt(abar);
    double noise_var = 1.0 - abar;
    auto dim = static_cast<double>(gm.dim());
    int K = gm.components();

    Eigen::Map<const Eigen::VectorXd> z = as_vector(z_t);
    std::vector<double> log_resp(static_cast<std::size_t>(K));
    std::vector<double> diffused_var(static_cast<std::size_t>(K));
    double max_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        auto i = static_cast<std::size_t>(k);
        double s2 = abar * gm.variances()[i] + noise_var;
        diffused_var[i] = s2;
        double d2 = (z - sqrt_abar * as_vector(gm.means()[i])).squaredNorm();
        log_resp[i] = std::log(gm.weights()[i]) - 0.5 * dim * std::log(2.0 * M_PI * s2) -
                      0.5 * d2 / s2;
        max_log = std::max(max_log, log_resp[i]);
    }
    double lse = 0.0;
    for (int k = 0; k < K; ++k) lse += std::exp(log_resp[static_cast<std::size_t>(k)] - max_log);
    lse = max_log + std::log(lse);

    Eigen::VectorXd eps = Eigen::VectorXd::Zero(z.size());
    for (int k = 0; k < K; ++k) {
        auto i = static_cast<std::size_t>(k);
        double r = std::exp(log_resp[i] - lse);
        eps += (r / diffused_var[i]) * (z - sqrt_abar * as_vector(gm.means()[i]));
    }
    eps *= std::sqrt(noise_var);
    std::vector<double> data(eps.data(), eps.data() + eps.size());
    return Grid(z_t.shape(), std::move(data));
}

GaussianMixtureDenoiser::GaussianMixtureDenoiser(GaussianMixture gm, NoiseSchedule schedule)
    : gm_(std::move(gm)), schedule_(std::move(schedule)) {}

Grid GaussianMixtureDenoiser::predict_eps(const Grid& z, int t, const Condition& cond) const {
    switch (cond.tag) {
        case Condition::Tag::unconditional:
            return gm_predict_eps(gm_, z, t, schedule_);
        case Condition::Tag::class_label:
        case Condition::Tag::style_label:
            return gm_predict_eps(gm_.restricted({cond.index}), z, t, schedule_);
    }
    throw ParamError("unknown condition tag");
}

Eigen::VectorXd sinusoidal_embedding(double value, int dim) {
    if (dim < 2 || dim % 2 != 0) throw ParamError("embedding dim must be even and >= 2");
    int half = dim / 2;
    Eigen::VectorXd emb(dim);
    for (int j = 0; j < half; ++j) {
        double omega = std::exp(-std::log(10000.0) * j / half);
        emb(2 * j) = std::sin(value * omega);
        emb(2 * j + 1) = std::cos(value * omega);
    }
    return emb;
}

int MlpConfig::input_dim() const {
    return static_cast<int>(data_dim()) + time_embed_dim + n_class + n_style + res_embed_dim;
}

MlpDenoiser::MlpDenoiser(MlpConfig cfg, std::vector<Eigen::MatrixXd> weights,
                         std::vector<Eigen::VectorXd> biases)
    : cfg_(std::move(cfg)), weights_(std::move(weights)), biases_(std::move(biases)) {
    if (cfg_.data_shape.empty() || cfg_.data_shape.size() > 2)
        throw ShapeError("mlp data shape must be rank 1 or 2");
    if (cfg_.time_embed_dim < 2) throw ParamError("mlp needs a time embedding");
    if (cfg_.res_embed_dim > 0 &&
        (cfg_.data_shape.size() != 2 || !divisible_by_two(cfg_.data_shape)))
        throw ShapeError("resolution pathway needs an even 2-D data shape");
    if (weights_.size() != biases_.size() || weights_.empty())
        throw ParamError("mlp needs matching weight/bias layers");

    int expect_in = cfg_.input_dim();
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (weights_[l].cols() != expect_in || weights_[l].rows() != biases_[l].size())
            throw ShapeError("mlp layer " + std::to_string(l) + " has inconsistent dimensions");
        expect_in = static_cast<int>(weights_[l].rows());
    }
    if (expect_in != static_cast<int>(cfg_.data_dim()))
        throw ShapeError("mlp output layer must produce data_dim values");
    for (const auto& w : weights_)
        if (!w.allFinite()) throw ParamError("mlp weights must be finite");
    for (const auto& b : biases_)
        if (!b.allFinite()) throw ParamError("mlp biases must be finite");
}

MlpDenoiser MlpDenoiser::random_init(const MlpConfig& cfg, RngStream& rng) {
    std::vector<int> widths;
    widths.push_back(cfg.input_dim());
    for (int h : cfg.hidden_widths) {
        if (h < 1) throw ParamError("hidden widths must be positive");
        widths.push_back(h);
    }
    widths.push_back(static_cast<int>(cfg.data_dim()));

    std::vector<Eigen::MatrixXd> ws;
    std::vector<Eigen::VectorXd> bs;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        int fan_in = widths[l], fan_out = widths[l + 1];
        double limit = std::sqrt(6.0 / (fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                w(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
        ws.push_back(std::move(w));
        bs.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return MlpDenoiser(cfg, std::move(ws), std::move(bs));
}

MlpDenoiser MlpDenoiser::zero_init(const MlpConfig& cfg) {
    std::vector<int> widths;
    widths.push_back(cfg.input_dim());
    for (int h : cfg.hidden_widths) widths.push_back(h);
    widths.push_back(static_cast<int>(cfg.data_dim()));
    std::vector<Eigen::MatrixXd> ws;
    std::vector<Eigen::VectorXd> bs;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        ws.push_back(Eigen::MatrixXd::Zero(widths[l + 1], widths[l]));
        bs.push_back(Eigen::VectorXd::Zero(widths[l + 1]));
    }
    return MlpDenoiser(cfg, std::move(ws), std::move(bs));
}

Eigen::VectorXd MlpDenoiser::build_input(const Grid& z_native, int t, const Condition& cond,
                                         int res_index) const {
    Eigen::VectorXd in(cfg_.input_dim());
    Eigen::Index pos = 0;
    in.segment(pos, static_cast<Eigen::Index>(cfg_.data_dim())) = as_vector(z_native);
    pos += static_cast<Eigen::Index>(cfg_.data_dim());
    in.segment(pos, cfg_.time_embed_dim) = sinusoidal_embedding(t, cfg_.time_embed_dim);
    pos += cfg_.time_embed_dim;
    if (cfg_.n_class + cfg_.n_style > 0) {
        Eigen::VectorXd onehot = Eigen::VectorXd::Zero(cfg_.n_class + cfg_.n_style);
        if (cond.tag == Condition::Tag::class_label) {
            if (cond.index < 0 || cond.index >= cfg_.n_class)
                throw ParamError("class label out of range");
            onehot(cond.index) = 1.0;
        } else if (cond.tag == Condition::Tag::style_label) {
            if (cond.index < 0 || cond.index >= cfg_.n_style)
                throw ParamError("style label out of range");
            onehot(cfg_.n_class + cond.index) = 1.0;
        }
        in.segment(pos, cfg_.n_class + cfg_.n_style) = onehot;
        pos += cfg_.n_class + cfg_.n_style;
    }
    if (cfg_.res_embed_dim > 0) {
        in.segment(pos, cfg_.res_embed_dim) =
            sinusoidal_embedding(res_index, cfg_.res_embed_dim);
        pos += cfg_.res_embed_dim;
    }
    return in;
}

struct MlpDenoiser::Trace {
    Eigen::VectorXd input;
    std::vector<Eigen::VectorXd> hidden;  // post-tanh activations
    Eigen::VectorXd out;                  // native-resolution prediction
    bool low_res = false;
    Shape in_shape;
};

MlpDenoiser::Trace MlpDenoiser::forward(const Grid& z, int t, const Condition& cond) const {
    Trace tr;
    tr.in_shape = z.shape();
    int res_index = 1;
    const Grid* native = &z;
    Grid lifted;
    if (z.shape() != cfg_.data_shape) {
        if (cfg_.res_embed_dim > 0 && z.shape() == half_shape(cfg_.data_shape)) {
            lifted = upsample_pixel(z, 2);
            native = &lifted;
            res_index = 0;
            tr.low_res = true;
        } else {
            throw ShapeError("mlp input shape " + shape_str(z.shape()) +
                             " matches neither native " + shape_str(cfg_.data_shape) +
                             " nor the half-resolution shape");
        }
    }
    tr.input = build_input(*native, t, cond, res_index);

    Eigen::VectorXd a = tr.input;
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
        a = (weights_[l] * a + biases_[l]).array().tanh().matrix();
        tr.hidden.push_back(a);
    }
    tr.out = weights_.back() * a + biases_.back();
    return tr;
}

Grid MlpDenoiser::predict_eps(const Grid& z, int t, const Condition& cond) const {
    Trace tr = forward(z, t, cond);
    std::vector<double> data(tr.out.data(), tr.out.data() + tr.out.size());
    Grid native(cfg_.data_shape, std::move(data));
    if (tr.low_res) return downsample(native, 2);
    return native;
}

std::size_t MlpDenoiser::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        n += static_cast<std::size_t>(weights_[l].size()) +
             static_cast<std::size_t>(biases_[l].size());
    return n;
}

std::vector<double> MlpDenoiser::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const auto& w = weights_[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
        const auto& b = biases_[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) flat.push_back(b(i));
    }
    return flat;
}

void MlpDenoiser::set_parameters(const std::vector<double>& flat) {
    if (flat.size() != parameter_count()) throw ParamError("parameter vector has wrong length");
    std::size_t pos = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        auto& w = weights_[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[pos++];
        auto& b = biases_[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = flat[pos++];
    }
}

void MlpDenoiser::backward(const Trace& trace, const Eigen::VectorXd& d_out,
                           std::vector<double>& grad_out) const {
    std::size_t L = weights_.size();
    // Flat offsets per layer mirror parameters().
    std::vector<std::size_t> offsets(L);
    std::size_t pos = 0;
    for (std::size_t l = 0; l < L; ++l) {
        offsets[l] = pos;
        pos += static_cast<std::size_t>(weights_[l].size()) +
               static_cast<std::size_t>(biases_[l].size());
    }

    Eigen::VectorXd delta = d_out;
    for (std::size_t l = L; l-- > 0;) {
        const Eigen::VectorXd& a_prev = l == 0 ? trace.input : trace.hidden[l - 1];
        const auto& w = weights_[l];
        std::size_t off = offsets[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            double dr = delta(r);
            std::size_t row_off = off + static_cast<std::size_t>(r) * w.cols();
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                grad_out[row_off + static_cast<std::size_t>(c)] += dr * a_prev(c);
        }
        std::size_t b_off = off + static_cast<std::size_t>(w.size());
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            grad_out[b_off + static_cast<std::size_t>(r)] += delta(r);
        if (l > 0) {
            Eigen::VectorXd da = w.transpose() * delta;
            const Eigen::VectorXd& a = trace.hidden[l - 1];
            delta = (da.array() * (1.0 - a.array().square())).matrix();
        }
    }
}

double MlpDenoiser::item_gradient(const TrainItem& item, double batch_scale,
                                  std::vector<double>& grad_out) const {
    require_same_shape(item.z, item.target, "mlp training item");
    Trace tr = forward(item.z, item.t, item.cond);

    double item_loss = 0.0;
    Eigen::VectorXd d_out;
    if (tr.low_res) {
        std::vector<double> out_data(tr.out.data(), tr.out.data() + tr.out.size());
        Grid native(cfg_.data_shape, std::move(out_data));
        Grid pooled = downsample(native, 2);
        auto d_low = static_cast<double>(pooled.numel());
        // d loss / d pooled output, then the average-pool adjoint spreads each
        // entry uniformly over its 2x2 block.
        d_out = Eigen::VectorXd::Zero(tr.out.size());
        int lw = pooled.cols();
        int nw = cfg_.data_shape[1];
        for (int r = 0; r < pooled.rows(); ++r) {
            for (int c = 0; c < lw; ++c) {
                double resid = pooled.at(r, c) - item.target.at(r, c);
                item_loss += resid * resid;
                double spread = 2.0 * resid / d_low * batch_scale / 4.0;
                for (int dr = 0; dr < 2; ++dr)
                    for (int dc = 0; dc < 2; ++dc)
                        d_out((2 * r + dr) * nw + (2 * c + dc)) += spread;
            }
        }
        item_loss /= d_low;
    } else {
        auto d_native = static_cast<double>(cfg_.data_dim());
        Eigen::VectorXd resid = tr.out - as_vector(item.target);
        item_loss = resid.squaredNorm() / d_native;
        d_out = 2.0 * resid / d_native * batch_scale;
    }
    backward(tr, d_out, grad_out);
    return item_loss;
}

double MlpDenoiser::loss(const TrainBatch& batch) const {
    if (batch.empty()) throw ParamError("loss needs a nonempty batch");
    double total = 0.0;
    for (const auto& item : batch) {
        Grid pred = predict_eps(item.z, item.t, item.cond);
        require_same_shape(pred, item.target, "mlp loss");
        double acc = 0.0;
        for (std::size_t i = 0; i < pred.numel(); ++i) {
            double r = pred[i] - item.target[i];
            acc += r * r;
        }
        total += acc / static_cast<double>(pred.numel());
    }
    return total / static_cast<double>(batch.size());
}

double MlpDenoiser::loss_and_gradients(const TrainBatch& batch, std::vector<double>& grad) const {
    if (batch.empty()) throw ParamError("gradients need a nonempty batch");
    std::size_t P = parameter_count();
    auto B = static_cast<int>(batch.size());
    double scale = 1.0 / B;

    std::vector<std::vector<double>> partials(static_cast<std::size_t>(B));
    std::vector<double> losses(static_cast<std::size_t>(B), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < B; ++i) {
        auto& g = partials[static_cast<std::size_t>(i)];
        g.assign(P, 0.0);
        losses[static_cast<std::size_t>(i)] =
            item_gradient(batch[static_cast<std::size_t>(i)], scale, g);
    }
    // Fixed-order reduction keeps the result independent of the thread count.
    grad.assign(P, 0.0);
    double loss = 0.0;
    for (int i = 0; i < B; ++i) {
        loss += losses[static_cast<std::size_t>(i)];
        for (std::size_t p = 0; p < P; ++p) grad[p] += partials[static_cast<std::size_t>(i)][p];
    }
    return loss * scale;
}

std::vector<double> MlpDenoiser::gradients(const TrainBatch& batch) const {
    std::vector<double> grad;
    loss_and_gradients(batch, grad);
    return grad;
}

std::vector<double> MlpDenoiser::gradients_serial(const TrainBatch& batch) const {
    if (batch.empty()) throw ParamError("gradients need a nonempty batch");
    std::size_t P = parameter_count();
    auto B = static_cast<int>(batch.size());
    double scale = 1.0 / B;
    std::vector<double> grad(P, 0.0);
    std::vector<double> partial(P);
    for (int i = 0; i < B; ++i) {
        std::fill(partial.begin(), partial.end(), 0.0);
        item_gradient(batch[static_cast<std::size_t>(i)], scale, partial);
        for (std::size_t p = 0; p < P; ++p) grad[p] += partial[p];
    }
    return grad;
}

void Dataset::add(Grid x0, Condition cond) {
    items.push_back(std::move(x0));
    conds.push_back(cond);
}

std::pair<const Grid*, const Condition*> Dataset::draw(RngStream& rng) const {
    if (items.empty()) throw ParamError("cannot draw from an empty dataset");
    int idx = rng.uniform_int(static_cast<int>(items.size()));
    auto i = static_cast<std::size_t>(idx);
    return {&items[i], &conds[i]};
}

Dataset make_structure_pool(const Dataset& high_res, const Dataset& low_res, int factor) {
    if (high_res.items.empty()) throw ParamError("structure pool needs high-res items");
    const Shape& hi_shape = high_res.items.front().shape();
    for (const Grid& g : high_res.items) require_same_shape(g, high_res.items.front(), "high-res pool");

    Dataset pool = high_res;
    for (std::size_t i = 0; i < low_res.items.size(); ++i) {
        const Grid& lo = low_res.items[i];
        if (lo.shape().size() != 2 || hi_shape.size() != 2 ||
            lo.shape()[0] * factor != hi_shape[0] || lo.shape()[1] * factor != hi_shape[1])
            throw ShapeError("structure pool: low-res shape " + shape_str(lo.shape()) +
                             " x" + std::to_string(factor) + " does not match " +
                             shape_str(hi_shape));
        pool.add(upsample_pixel(lo, factor), low_res.conds[i]);
    }
    return pool;
}

TrainResult train_denoiser(MlpDenoiser model, const Dataset& data, const TrainSpec& spec,
                           const NoiseSchedule& schedule, RngStream& rng) {
    if (spec.t_lo < 1 || spec.t_hi > schedule.total_steps() || spec.t_lo > spec.t_hi)
        throw ParamError("train t_range must be a nonempty interval within [1, T]");
    if (spec.steps < 1) throw ParamError("train steps must be >= 1");
    if (!(spec.learning_rate > 0.0) || !std::isfinite(spec.learning_rate))
        throw ParamError("learning rate must be positive and finite");
    if (spec.batch_size < 1) throw ParamError("batch size must be >= 1");
    if (data.items.empty()) throw ParamError("training needs a nonempty dataset");
    bool low = spec.resolution_policy == ResolutionPolicy::train_at_low_res;
    if (low && model.config().res_embed_dim <= 0)
        throw ParamError("train_at_low_res needs a model with the resolution pathway enabled");

    std::vector<double> loss_curve;
    loss_curve.reserve(static_cast<std::size_t>(spec.steps));
    std::vector<double> params = model.parameters();

    for (long step = 0; step < spec.steps; ++step) {
        // All randomness is drawn serially up front; gradient evaluation over
        // the batch is then free to run in parallel.
        TrainBatch batch;
        batch.reserve(static_cast<std::size_t>(spec.batch_size));
        for (int b = 0; b < spec.batch_size; ++b) {
            auto [x0, cond] = data.draw(rng);
            Grid item_x0 = low ? downsample(*x0, 2) : *x0;
            int t = spec.t_lo + rng.uniform_int(spec.t_hi - spec.t_lo + 1);
            Grid eps = gaussian_noise(item_x0.shape(), rng);
            Grid z = q_sample(item_x0, t, eps, schedule);
            batch.push_back(TrainItem{std::move(z), t, *cond, std::move(eps)});
        }

        std::vector<double> grad;
        double loss = model.loss_and_gradients(batch, grad);
        if (!std::isfinite(loss)) throw TrainingError("training loss diverged", step);
        loss_curve.push_back(loss);

        for (std::size_t p = 0; p < params.size(); ++p)
            params[p] -= spec.learning_rate * grad[p];
        model.set_parameters(params);
    }
    return TrainResult{std::move(model), std::move(loss_curve)};
}

}  // namespace diffuse
