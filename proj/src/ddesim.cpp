#include "lfc/ddesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "lfc/errors.hpp"
#include "lfc/stability.hpp"

namespace lfc {

namespace {

constexpr double kDivergenceLimit = 1e9;

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

double evaluate_delay(const DelayFunction& d, double t) {
    switch (d.kind) {
    case DelayFunction::Kind::constant: return d.value;
    case DelayFunction::Kind::abs_cos: return d.value * std::abs(std::cos(t));
    }
    throw ValidationError("evaluate_delay: unknown delay kind");
}

double max_delay(const DelayFunction& d) {
    return d.value;
}

bool validate_delay_against_bound(const DelayFunction& d, double tau) {
    if (!(tau > 0.0))
        throw ValidationError("validate_delay_against_bound: tau must be positive");
    return max_delay(d) < tau;
}

std::size_t schedule_index_at(const SwitchingSchedule& s, double t) {
    if (s.order.empty())
        throw ValidationError("schedule: order is empty");
    if (!(s.dwell > 0.0))
        throw ValidationError("schedule: dwell must be positive");
    const double slot = std::floor(std::max(t, 0.0) / s.dwell);
    const auto idx = static_cast<std::size_t>(slot);
    return s.order[idx % s.order.size()];
}

void validate(const SimConfig& cfg) {
    if (cfg.topologies.empty())
        throw ValidationError("sim config: topologies must be non-empty");
    const std::size_t n = static_cast<std::size_t>(cfg.topologies.front().graph().order());
    for (const auto& t : cfg.topologies)
        if (static_cast<std::size_t>(t.graph().order()) != n)
            throw ValidationError("sim config: topologies must share the agent count");
    if (cfg.schedule.order.empty())
        throw ValidationError("sim config: switching order is empty");
    if (!(cfg.schedule.dwell > 0.0) || !std::isfinite(cfg.schedule.dwell))
        throw ValidationError("sim config: dwell must be positive and finite");
    for (std::size_t idx : cfg.schedule.order)
        if (idx >= cfg.topologies.size())
            throw ValidationError("sim config: switching order references topology " +
                                  std::to_string(idx) + " out of range");
    if (!std::isfinite(cfg.k))
        throw ValidationError("sim config: gain k must be finite");
    if (!(cfg.delay.value >= 0.0) || !std::isfinite(cfg.delay.value))
        throw ValidationError("sim config: delay value must be non-negative and finite");
    if (!std::isfinite(cfg.v0) || !std::isfinite(cfg.x0_init))
        throw ValidationError("sim config: leader state must be finite");
    if (cfg.x_init.size() != n || cfg.v_init.size() != n)
        throw ValidationError("sim config: x_init/v_init must have one entry per agent");
    if (!all_finite(cfg.x_init) || !all_finite(cfg.v_init))
        throw ValidationError("sim config: initial states must be finite");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
        throw ValidationError("sim config: t_end must be positive and finite");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw ValidationError("sim config: dt must be positive and finite");
    const double md = max_delay(cfg.delay);
    if (md > 0.0 && cfg.dt > md / 10.0)
        throw ValidationError("sim config: dt must be at most max_delay/10 = " +
                              std::to_string(md / 10.0) + " to resolve the history");
}

Vector control_input(const LeaderTopology& t, double k, const Vector& x_delayed,
                     double x0_delayed, const Vector& v_now, double v0) {
    const std::size_t n = static_cast<std::size_t>(t.graph().order());
    if (x_delayed.size() != n || v_now.size() != n)
        throw ValidationError("control_input: state dimension mismatch");
    Vector u(n, 0.0);
    for (const Arc& a : t.graph().arcs())
        u[static_cast<std::size_t>(a.from - 1)] +=
            a.weight * (x_delayed[static_cast<std::size_t>(a.to - 1)] -
                        x_delayed[static_cast<std::size_t>(a.from - 1)]);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] += t.leader_weights()[i] * (x0_delayed - x_delayed[i]);
        u[i] += k * (v0 - v_now[i]);
    }
    return u;
}

Trajectory integrate(const SimConfig& cfg) {
    validate(cfg);
    const std::size_t n = static_cast<std::size_t>(cfg.topologies.front().graph().order());
    const std::size_t dim = 2 * n;
    const double dt = cfg.dt;
    const auto steps = static_cast<std::size_t>(std::floor(cfg.t_end / dt + 1e-9));

    std::vector<Matrix> h;
    h.reserve(cfg.topologies.size());
    for (const auto& t : cfg.topologies) h.push_back(h_matrix(t));

    // Integration state is the error vector (x - x0, v - v0) per agent; the
    // consensus point is the origin regardless of the moving leader.
    std::vector<Vector> hist;
    hist.reserve(steps + 1);
    Vector init(dim);
    for (std::size_t i = 0; i < n; ++i) {
        init[i] = cfg.x_init[i] - cfg.x0_init;
        init[n + i] = cfg.v_init[i] - cfg.v0;
    }
    hist.push_back(init);

    // Linear interpolation of the x-part of the state at time d, given the
    // current step start (index `step`, time t0) and the most recent stage
    // point (ts, ys). d never exceeds ts because delays are non-negative.
    Vector xq(n);
    auto delayed_x = [&](double d, std::size_t step, double t0, double ts, const Vector& ys) {
        if (d <= 0.0) {
            std::copy_n(hist.front().begin(), n, xq.begin());
        } else if (d <= t0) {
            auto i0 = static_cast<std::size_t>(d / dt);
            if (i0 >= step) {
                std::copy_n(hist[step].begin(), n, xq.begin());
            } else {
                const double theta =
                    std::clamp((d - static_cast<double>(i0) * dt) / dt, 0.0, 1.0);
                const Vector& a = hist[i0];
                const Vector& b = hist[i0 + 1];
                for (std::size_t i = 0; i < n; ++i) xq[i] = a[i] + theta * (b[i] - a[i]);
            }
        } else if (d >= ts) {
            std::copy_n(ys.begin(), n, xq.begin());
        } else {
            const double theta = (d - t0) / (ts - t0);
            const Vector& a = hist[step];
            for (std::size_t i = 0; i < n; ++i) xq[i] = a[i] + theta * (ys[i] - a[i]);
        }
    };

    // deriv = (v_err, -H x_err(t - r) - k v_err), with sigma frozen at the
    // step start.
    auto deriv = [&](const Matrix& hs, double ts, std::size_t step, double t0, const Vector& y,
                     Vector& out) {
        const double d = ts - evaluate_delay(cfg.delay, ts);
        delayed_x(d, step, t0, ts, y);
        for (std::size_t i = 0; i < n; ++i) out[i] = y[n + i];
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc -= hs(i, j) * xq[j];
            out[n + i] = acc - cfg.k * y[n + i];
        }
    };

    Trajectory tr;
    auto record = [&](std::size_t idx) {
        const double t = static_cast<double>(idx) * dt;
        const double x0t = cfg.x0_init + cfg.v0 * t;
        const Vector& state = hist[idx];
        Vector ax(n), av(n), ex(n), ev(n);
        for (std::size_t i = 0; i < n; ++i) {
            ax[i] = state[i] + x0t;
            av[i] = state[n + i] + cfg.v0;
            ex[i] = ax[i] - x0t;
            ev[i] = av[i] - cfg.v0;
        }
        tr.times.push_back(t);
        tr.leader_x.push_back(x0t);
        tr.agent_x.push_back(std::move(ax));
        tr.agent_v.push_back(std::move(av));
        tr.err_x.push_back(std::move(ex));
        tr.err_v.push_back(std::move(ev));
        tr.sigma.push_back(schedule_index_at(cfg.schedule, t));
    };
    record(0);

    Vector k1(dim), k2(dim), k3(dim), k4(dim), stage(dim), next(dim);
    for (std::size_t step = 0; step < steps; ++step) {
        const double t0 = static_cast<double>(step) * dt;
        const Matrix& hs = h[schedule_index_at(cfg.schedule, t0)];
        const Vector& y = hist[step];

        deriv(hs, t0, step, t0, y, k1);
        for (std::size_t i = 0; i < dim; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
        deriv(hs, t0 + 0.5 * dt, step, t0, stage, k2);
        for (std::size_t i = 0; i < dim; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
        deriv(hs, t0 + 0.5 * dt, step, t0, stage, k3);
        for (std::size_t i = 0; i < dim; ++i) stage[i] = y[i] + dt * k3[i];
        deriv(hs, t0 + dt, step, t0, stage, k4);

        bool ok = true;
        for (std::size_t i = 0; i < dim; ++i) {
            next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(next[i]) || std::abs(next[i]) > kDivergenceLimit) ok = false;
        }
        if (!ok) {
            tr.diverged = true;
            break;
        }
        hist.push_back(next);
        record(step + 1);
    }
    return tr;
}

ErrorMetrics error_metrics(const Trajectory& tr) {
    if (tr.times.empty())
        throw ValidationError("error_metrics: trajectory is empty");
    ErrorMetrics m;
    m.final_err_x = inf_norm(tr.err_x.back());
    m.final_err_v = inf_norm(tr.err_v.back());

    const double initial = std::max(inf_norm(tr.err_x.front()), inf_norm(tr.err_v.front()));
    if (initial == 0.0) {
        m.settle_time = 0.0;
        return m;
    }
    const double band = 0.01 * initial;
    std::size_t first_inside = tr.times.size();
    for (std::size_t i = tr.times.size(); i-- > 0;) {
        if (std::max(inf_norm(tr.err_x[i]), inf_norm(tr.err_v[i])) > band) break;
        first_inside = i;
    }
    if (first_inside < tr.times.size() && !tr.diverged)
        m.settle_time = tr.times[first_inside];
    return m;
}

} // namespace lfc
