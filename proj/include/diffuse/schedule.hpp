#pragma once

#include <string>
#include <vector>

#include "diffuse/errors.hpp"

namespace diffuse {

enum class ScheduleKind { linear };

// Cumulative signal fractions alpha_bar[0..T], alpha_bar[0] == 1 and strictly
// decreasing afterwards.
class NoiseSchedule {
public:
    NoiseSchedule(int total_steps, std::vector<double> alpha_bar);

    int total_steps() const { return total_steps_; }

    double alpha_bar(int t) const {
        if (t < 0 || t > total_steps_)
            throw ParamError("timestep " + std::to_string(t) + " outside [0, " +
                             std::to_string(total_steps_) + "]");
        return alpha_bar_[static_cast<std::size_t>(t)];
    }

    const std::vector<double>& alpha_bar_all() const { return alpha_bar_; }

private:
    int total_steps_;
    std::vector<double> alpha_bar_;
};

// Linear beta ramp from beta_min to beta_max over steps 1..T;
// alpha_bar[t] is the running product of (1 - beta_s).
NoiseSchedule build_schedule(int total_steps, double beta_min, double beta_max,
                             ScheduleKind kind = ScheduleKind::linear);

}  // namespace diffuse
