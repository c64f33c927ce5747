#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lfc/digraph.hpp"
#include "lfc/matrix.hpp"

namespace lfc {

/// Shared coupling delay r(t). abs_cos(a) means r(t) = a*|cos t|.
struct DelayFunction {
    enum class Kind { constant, abs_cos };

    Kind kind = Kind::constant;
    double value = 0.0; // seconds; the amplitude for abs_cos

    static DelayFunction constant(double seconds) { return {Kind::constant, seconds}; }
    static DelayFunction abs_cos(double amplitude) { return {Kind::abs_cos, amplitude}; }

    bool operator==(const DelayFunction&) const = default;
};

double evaluate_delay(const DelayFunction& d, double t);
double max_delay(const DelayFunction& d);

/// True iff sup_t r(t) < tau.
bool validate_delay_against_bound(const DelayFunction& d, double tau);

/// Cyclic topology schedule: order[i] is active on [i*dwell, (i+1)*dwell),
/// wrapping around at the end of the list.
struct SwitchingSchedule {
    std::vector<std::size_t> order;
    double dwell = 1.0;

    bool operator==(const SwitchingSchedule&) const = default;
};

std::size_t schedule_index_at(const SwitchingSchedule& s, double t);

struct SimConfig {
    std::vector<LeaderTopology> topologies;
    SwitchingSchedule schedule;
    double k = 0.0;
    DelayFunction delay;
    double v0 = 0.0;      // leader velocity, units/s
    double x0_init = 0.0; // leader position at t = 0
    Vector x_init;        // follower positions at t = 0
    Vector v_init;        // follower velocities at t = 0
    double t_end = 0.0;
    double dt = 0.0;
};

/// Throws on any violated config invariant (dimensions, positive steps,
/// history resolution dt <= max_delay/10, schedule indices in range).
void validate(const SimConfig& cfg);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> leader_x;
    std::vector<Vector> agent_x;
    std::vector<Vector> agent_v;
    std::vector<Vector> err_x; // agent_x - leader_x, stored post-rounding
    std::vector<Vector> err_v; // agent_v - v0, stored post-rounding
    std::vector<std::size_t> sigma;
    bool diverged = false;

    std::size_t samples() const { return times.size(); }
    std::size_t agents() const { return err_x.empty() ? 0 : err_x.front().size(); }
};

/// Coupling rule evaluated agent-by-agent from the arc list:
/// u_i = sum_j a_ij (x_j(t-r) - x_i(t-r)) + b_i (x0(t-r) - x_i(t-r)) + k (v0 - v_i).
Vector control_input(const LeaderTopology& t, double k, const Vector& x_delayed,
                     double x0_delayed, const Vector& v_now, double v0);

/// Fixed-step classical Runge-Kutta on the error dynamics with linear
/// interpolation into the state history for the delayed argument. The
/// pre-start history is the constant initial state; the leader moves in
/// closed form; the active topology is held over each full step.
Trajectory integrate(const SimConfig& cfg);

struct ErrorMetrics {
    double final_err_x = 0.0;
    double final_err_v = 0.0;
    std::optional<double> settle_time; // first time the error norm stays
                                       // within 1% of its initial value
};

ErrorMetrics error_metrics(const Trajectory& tr);

} // namespace lfc
