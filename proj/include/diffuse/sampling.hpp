#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "diffuse/grid.hpp"
#include "diffuse/models.hpp"
#include "diffuse/rng.hpp"
#include "diffuse/schedule.hpp"

namespace diffuse {

enum class SamplerMethod { ddim, ancestral };

// Reverse-process configuration: method plus the strictly decreasing timestep
// subsequence. The final listed step transitions to t = 0, where the clean
// prediction is returned directly.
struct SamplerConfig {
    SamplerMethod method = SamplerMethod::ddim;
    double eta = 0.0;  // ddim only; ancestral behaves like eta = 1
    std::vector<int> timesteps;

    void validate(const NoiseSchedule& schedule) const;
};

// Evenly spaced subsequence from T down, e.g. T=1000, n=50 gives
// 1000, 980, ..., 20.
std::vector<int> make_timesteps(int total_steps, int num_steps);
// Same, but with `boundary` forced into the sequence so a two-stage run hands
// off exactly there.
std::vector<int> make_timesteps_with_boundary(int total_steps, int num_steps, int boundary);

struct GuidanceSpec {
    double s = 1.0;        // classifier-free scale
    double s_style = 0.0;  // style extrapolation scale
    std::optional<Condition> style;

    void validate() const;
};

struct Trajectory {
    std::vector<std::pair<int, Grid>> states;  // (t, z_t), t strictly decreasing
    Grid x0;
};

// Forward diffusion of Eq.-(1) form: sqrt(abar_t) x0 + sqrt(1 - abar_t) eps.
// t = 0 returns x0 exactly.
Grid q_sample(const Grid& x0, int t, const Grid& eps, const NoiseSchedule& schedule);

// Single-step clean-data estimate: (z_t - sqrt(1 - abar_t) eps) / sqrt(abar_t).
Grid predict_x0(const Grid& z_t, int t, const Grid& eps_pred, const NoiseSchedule& schedule);

// Algebraic inverse of predict_x0 in the eps slot:
// (z_t - sqrt(abar_t) x0_like) / sqrt(1 - abar_t).
Grid invert_to_eps(const Grid& z_t, int t, const Grid& x0_like, const NoiseSchedule& schedule);

// One reverse step t -> t_next. DDIM with eta = 0 is deterministic; eta > 0
// and ancestral draw the standard stochastic term from rng. t_next = 0
// returns the clean prediction.
Grid sampler_step(const Grid& z_t, int t, int t_next, const Grid& eps,
                  const NoiseSchedule& schedule, const SamplerConfig& config, RngStream& rng);

// eps(empty) + s (eps(c) - eps(empty)) + s_style (eps(c_style) - eps(c)).
Grid guided_eps(const Grid& eps_uncond, const Grid& eps_cond, const Grid* eps_style,
                const GuidanceSpec& g);

// Applies classifier-free and style guidance for one model query.
Grid guided_model_eps(const Denoiser& model, const Grid& z, int t, const Condition& cond,
                      const GuidanceSpec& g);

Trajectory sample_loop(const Denoiser& model, const Condition& cond, const GuidanceSpec& g,
                       const SamplerConfig& config, const NoiseSchedule& schedule,
                       RngStream& rng, bool record_states = false);

// Two-stage inference: queries at t > t_struct go to the structure model,
// queries at t <= t_struct to the texture model; the handoff state passes
// through unmodified. t_struct must lie on the timestep subsequence (or be 0).
Trajectory time_decoupled_sample(const Denoiser& struct_model, const Denoiser& texture_model,
                                 int t_struct, const Condition& cond, const GuidanceSpec& g,
                                 const SamplerConfig& config, const NoiseSchedule& schedule,
                                 RngStream& rng, bool record_states = false);

// Runs `chains` independent sampling chains, chain i drawing from
// rng.split(i). The parallel driver and the serial reference produce
// bit-identical results.
using ChainFn = std::function<Grid(RngStream chain_rng)>;
std::vector<Grid> run_chains(int chains, const RngStream& base, const ChainFn& fn);
std::vector<Grid> run_chains_serial(int chains, const RngStream& base, const ChainFn& fn);

std::vector<Grid> sample_chains(const Denoiser& model, const Condition& cond,
                                const GuidanceSpec& g, const SamplerConfig& config,
                                const NoiseSchedule& schedule, const RngStream& base,
                                int chains);

}  // namespace diffuse
