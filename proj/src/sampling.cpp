#include "diffuse/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace diffuse {

namespace {

constexpr double kAlphaBarFloor = 1e-12;

}  // namespace

void SamplerConfig::validate(const NoiseSchedule& schedule) const {
    if (timesteps.empty()) throw ParamError("sampler needs a nonempty timestep subsequence");
    int prev = schedule.total_steps() + 1;
    for (int t : timesteps) {
        if (t < 1 || t > schedule.total_steps())
            throw ParamError("sampler timestep " + std::to_string(t) + " outside [1, T]");
        if (t >= prev) throw ParamError("sampler timesteps must be strictly decreasing");
        prev = t;
    }
    if (method == SamplerMethod::ddim && (eta < 0.0 || !std::isfinite(eta)))
        throw ParamError("ddim eta must be >= 0");
}

std::vector<int> make_timesteps(int total_steps, int num_steps) {
    if (num_steps < 1 || num_steps > total_steps)
        throw ParamError("num_steps must be in [1, T]");
    std::vector<int> ts(static_cast<std::size_t>(num_steps));
    for (int i = 0; i < num_steps; ++i) {
        long v = static_cast<long>(total_steps) * (num_steps - i) / num_steps;
        ts[static_cast<std::size_t>(i)] = static_cast<int>(v);
    }
    // Rounding can collide for num_steps close to T; enforce strict descent.
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (ts[i] >= ts[i - 1]) ts[i] = ts[i - 1] - 1;
    if (ts.back() < 1) throw ParamError("num_steps too large for T");
    ts.front() = total_steps;
    return ts;
}

std::vector<int> make_timesteps_with_boundary(int total_steps, int num_steps, int boundary) {
    if (boundary < 0 || boundary >= total_steps)
        throw ParamError("boundary must lie in [0, T)");
    std::vector<int> ts = make_timesteps(total_steps, num_steps);
    if (boundary == 0) return ts;
    if (std::find(ts.begin(), ts.end(), boundary) != ts.end()) return ts;
    ts.push_back(boundary);
    std::sort(ts.begin(), ts.end(), std::greater<int>());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

void GuidanceSpec::validate() const {
    if (!std::isfinite(s) || !std::isfinite(s_style))
        throw ParamError("guidance scales must be finite");
    if (s_style != 0.0 && !style.has_value())
        throw ParamError("s_style requires a style label");
}

Grid q_sample(const Grid& x0, int t, const Grid& eps, const NoiseSchedule& schedule) {
    require_same_shape(x0, eps, "q_sample");
    if (t == 0) return x0;
    double abar = schedule.alpha_bar(t);
    double a = std::sqrt(abar), b = std::sqrt(1.0 - abar);
    Grid out = Grid::zeros(x0.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = a * x0[i] + b * eps[i];
    return out;
}

Grid predict_x0(const Grid& z_t, int t, const Grid& eps_pred, const NoiseSchedule& schedule) {
    require_same_shape(z_t, eps_pred, "predict_x0");
    double abar = schedule.alpha_bar(t);
    if (abar < kAlphaBarFloor)
        throw NumericalDomainError("predict_x0: alpha_bar below " +
                                   std::to_string(kAlphaBarFloor));
    double inv_a = 1.0 / std::sqrt(abar), b = std::sqrt(1.0 - abar);
    Grid out = Grid::zeros(z_t.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = (z_t[i] - b * eps_pred[i]) * inv_a;
    return out;
}

Grid invert_to_eps(const Grid& z_t, int t, const Grid& x0_like, const NoiseSchedule& schedule) {
    require_same_shape(z_t, x0_like, "invert_to_eps");
    double abar = schedule.alpha_bar(t);
    if (abar >= 1.0)
        throw NumericalDomainError("invert_to_eps undefined at alpha_bar = 1 (t = 0)");
    double a = std::sqrt(abar), inv_b = 1.0 / std::sqrt(1.0 - abar);
    Grid out = Grid::zeros(z_t.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = (z_t[i] - a * x0_like[i]) * inv_b;
    return out;
}

Grid sampler_step(const Grid& z_t, int t, int t_next, const Grid& eps,
                  const NoiseSchedule& schedule, const SamplerConfig& config, RngStream& rng) {
    if (t_next >= t) throw ParamError("sampler_step needs t > t_next");
    if (t_next < 0) throw ParamError("sampler_step needs t_next >= 0");
    Grid x0 = predict_x0(z_t, t, eps, schedule);
    if (t_next == 0) return x0;

    double abar_next = schedule.alpha_bar(t_next);
    double eta = config.method == SamplerMethod::ancestral ? 1.0 : config.eta;
    double sigma = 0.0;
    if (eta > 0.0) {
        double abar_t = schedule.alpha_bar(t);
        sigma = eta * std::sqrt((1.0 - abar_next) / (1.0 - abar_t)) *
                std::sqrt(1.0 - abar_t / abar_next);
    }
    double dir2 = 1.0 - abar_next - sigma * sigma;
    if (dir2 < 0.0) dir2 = 0.0;
    double a = std::sqrt(abar_next), b = std::sqrt(dir2);

    Grid out = Grid::zeros(z_t.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = a * x0[i] + b * eps[i];
    if (sigma > 0.0)
        for (std::size_t i = 0; i < out.numel(); ++i) out[i] += sigma * rng.normal();
    return out;
}

Grid guided_eps(const Grid& eps_uncond, const Grid& eps_cond, const Grid* eps_style,
                const GuidanceSpec& g) {
    g.validate();
    require_same_shape(eps_uncond, eps_cond, "guided_eps");
    if (g.s_style != 0.0 && eps_style == nullptr)
        throw ParamError("guided_eps: s_style is nonzero but no style prediction given");

    // Endpoint reductions are returned exactly, not through the affine form.
    if (g.s == 1.0 && g.s_style == 0.0) return eps_cond;
    if (g.s == 1.0 && g.s_style == 1.0 && eps_style != nullptr) return *eps_style;

    Grid out = Grid::zeros(eps_uncond.shape());
    for (std::size_t i = 0; i < out.numel(); ++i)
        out[i] = eps_uncond[i] + g.s * (eps_cond[i] - eps_uncond[i]);
    if (g.s_style != 0.0) {
        require_same_shape(*eps_style, eps_cond, "guided_eps style");
        for (std::size_t i = 0; i < out.numel(); ++i)
            out[i] += g.s_style * ((*eps_style)[i] - eps_cond[i]);
    }
    return out;
}

Grid guided_model_eps(const Denoiser& model, const Grid& z, int t, const Condition& cond,
                      const GuidanceSpec& g) {
    g.validate();
    Grid eps_cond = model.predict_eps(z, t, cond);
    if (g.s == 1.0 && g.s_style == 0.0) return eps_cond;
    Grid eps_uncond = g.s == 1.0 ? eps_cond : model.predict_eps(z, t, Condition::none());
    if (g.s_style == 0.0) return guided_eps(eps_uncond, eps_cond, nullptr, g);
    Grid eps_style = model.predict_eps(z, t, *g.style);
    return guided_eps(eps_uncond, eps_cond, &eps_style, g);
}

namespace {

Trajectory run_loop(const std::function<Grid(const Grid&, int)>& eps_at, const Shape& shape,
                    const SamplerConfig& config, const NoiseSchedule& schedule, RngStream& rng,
                    bool record_states) {
    Trajectory traj;
    Grid z = gaussian_noise(shape, rng);
    if (record_states) traj.states.emplace_back(config.timesteps.front(), z);
    for (std::size_t i = 0; i < config.timesteps.size(); ++i) {
        int t = config.timesteps[i];
        int t_next = i + 1 < config.timesteps.size() ? config.timesteps[i + 1] : 0;
        Grid eps = eps_at(z, t);
        z = sampler_step(z, t, t_next, eps, schedule, config, rng);
        if (record_states && t_next > 0) traj.states.emplace_back(t_next, z);
    }
    traj.x0 = std::move(z);
    return traj;
}

}  // namespace

Trajectory sample_loop(const Denoiser& model, const Condition& cond, const GuidanceSpec& g,
                       const SamplerConfig& config, const NoiseSchedule& schedule,
                       RngStream& rng, bool record_states) {
    config.validate(schedule);
    g.validate();
    if (config.timesteps.front() != schedule.total_steps())
        throw ParamError("sample_loop expects the subsequence to start at T");
    auto eps_at = [&](const Grid& z, int t) { return guided_model_eps(model, z, t, cond, g); };
    // The initial draw defines the latent shape; callers pick it via the model.
    return run_loop(eps_at, model.latent_shape(), config, schedule, rng, record_states);
}

Trajectory time_decoupled_sample(const Denoiser& struct_model, const Denoiser& texture_model,
                                 int t_struct, const Condition& cond, const GuidanceSpec& g,
                                 const SamplerConfig& config, const NoiseSchedule& schedule,
                                 RngStream& rng, bool record_states) {
    config.validate(schedule);
    g.validate();
    if (t_struct < 0 || t_struct >= schedule.total_steps())
        throw ParamError("t_struct must lie in [0, T)");
    if (struct_model.latent_shape() != texture_model.latent_shape())
        throw ShapeError("decoupled sampling needs matching latent shapes");
    if (t_struct > 0) {
        bool on_seq = std::find(config.timesteps.begin(), config.timesteps.end(), t_struct) !=
                      config.timesteps.end();
        if (!on_seq)
            throw ParamError("t_struct = " + std::to_string(t_struct) +
                             " is not on the timestep subsequence");
    }
    auto eps_at = [&](const Grid& z, int t) {
        const Denoiser& m = t > t_struct ? struct_model : texture_model;
        return guided_model_eps(m, z, t, cond, g);
    };
    return run_loop(eps_at, struct_model.latent_shape(), config, schedule, rng, record_states);
}

std::vector<Grid> run_chains(int chains, const RngStream& base, const ChainFn& fn) {
    if (chains < 1) throw ParamError("need at least one chain");
    std::vector<Grid> out(static_cast<std::size_t>(chains));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < chains; ++i)
        out[static_cast<std::size_t>(i)] = fn(base.split(static_cast<std::uint64_t>(i)));
    return out;
}

std::vector<Grid> run_chains_serial(int chains, const RngStream& base, const ChainFn& fn) {
    if (chains < 1) throw ParamError("need at least one chain");
    std::vector<Grid> out(static_cast<std::size_t>(chains));
    for (int i = 0; i < chains; ++i)
        out[static_cast<std::size_t>(i)] = fn(base.split(static_cast<std::uint64_t>(i)));
    return out;
}

std::vector<Grid> sample_chains(const Denoiser& model, const Condition& cond,
                                const GuidanceSpec& g, const SamplerConfig& config,
                                const NoiseSchedule& schedule, const RngStream& base,
                                int chains) {
    return run_chains(chains, base, [&](RngStream rng) {
        return sample_loop(model, cond, g, config, schedule, rng).x0;
    });
}

}  // namespace diffuse
