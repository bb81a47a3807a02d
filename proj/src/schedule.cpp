#include "diffuse/schedule.hpp"

#include <cmath>

namespace diffuse {

NoiseSchedule::NoiseSchedule(int total_steps, std::vector<double> alpha_bar)
    : total_steps_(total_steps), alpha_bar_(std::move(alpha_bar)) {
    if (total_steps_ < 1) throw ParamError("schedule needs at least one step");
    if (alpha_bar_.size() != static_cast<std::size_t>(total_steps_) + 1)
        throw ParamError("alpha_bar must have T+1 entries");
    if (alpha_bar_[0] != 1.0) throw ParamError("alpha_bar[0] must be exactly 1");
    for (int t = 1; t <= total_steps_; ++t) {
        double a = alpha_bar_[static_cast<std::size_t>(t)];
        if (!(a > 0.0 && a <= 1.0)) throw ParamError("alpha_bar must stay in (0, 1]");
        if (!(a < alpha_bar_[static_cast<std::size_t>(t) - 1]))
            throw ParamError("alpha_bar must be strictly decreasing");
    }
}

NoiseSchedule build_schedule(int total_steps, double beta_min, double beta_max,
                             ScheduleKind kind) {
    if (kind != ScheduleKind::linear) throw ParamError("unknown schedule kind");
    if (total_steps < 1) throw ParamError("total_steps must be >= 1");
    if (!(beta_min > 0.0) || !(beta_min <= beta_max) || !(beta_max < 1.0))
        throw ParamError("beta range must satisfy 0 < beta_min <= beta_max < 1");

    std::vector<double> alpha_bar(static_cast<std::size_t>(total_steps) + 1);
    alpha_bar[0] = 1.0;
    double prod = 1.0;
    for (int s = 1; s <= total_steps; ++s) {
        double frac = total_steps == 1 ? 0.0 : static_cast<double>(s - 1) / (total_steps - 1);
        double beta = beta_min + (beta_max - beta_min) * frac;
        prod *= 1.0 - beta;
        alpha_bar[static_cast<std::size_t>(s)] = prod;
    }
    return NoiseSchedule(total_steps, std::move(alpha_bar));
}

}  // namespace diffuse
