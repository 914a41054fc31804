#include "loopsoup/sle.hpp"

#include <cmath>

#include "loopsoup/parallel.hpp"
#include "loopsoup/rng.hpp"

namespace loopsoup {

namespace {

constexpr int kMaxHalvings = 20;
constexpr double kForcePointOffset = 1e-6;  // O starts this far left of W

// One substep of the (W, O) pair over h.
//
// Away from the force point this is plain Euler, halving (up to a bounded
// depth) when a step would cross O.  Once the gap Z = |W - O| falls under
// the sqrt(h) closeness guard the Euler drift rho h / Z is no longer usable;
// the squared gap Y = Z^2 is a squared Bessel process,
//   dY = 2 sqrt(kappa Y) dB + (kappa + 2 (rho + 2)) dt,
// so the substep advances Y with the symmetrized Euler scheme (the standard
// CIR treatment, correct liftoff law), integrates the singular drift as
// I = int dt/Z ~ 2h / (Z + Z') (exact for square-root growth), advances W by
// its own SDE with the shared Brownian increment, and sets O = W -+ Z'.
// For rho = 0 the W increment stays exactly Brownian.
void advance_wo(double& w, double& o, double h, double kappa, double rho, Rng& rng, double t,
                int depth) {
    if (depth > kMaxHalvings) throw StepFailure(t);
    const double gap = w - o;
    if (std::abs(gap) < std::sqrt(h)) {
        const double sign = gap >= 0.0 ? 1.0 : -1.0;
        const double z = std::abs(gap);
        const double xi = rng.gaussian();
        const double y_new =
            std::abs(z * z + (kappa + 2.0 * (rho + 2.0)) * h + 2.0 * std::sqrt(kappa * h) * z * xi);
        const double z_new = std::max(std::sqrt(y_new), 1e-12);
        const double drift_integral = 2.0 * h / (z + z_new);
        w = w + std::sqrt(kappa * h) * xi + sign * rho * drift_integral;
        o = w - sign * z_new;
        return;
    }
    const double dB = std::sqrt(h) * rng.gaussian();
    const double w_new = w + std::sqrt(kappa) * dB + rho * h / gap;
    const double o_new = o + 2.0 * h / (o - w);
    if ((w_new - o_new) * gap <= 0.0) {
        // Crossed the force point: refine instead.
        if (depth >= kMaxHalvings) throw StepFailure(t);
        advance_wo(w, o, h / 2.0, kappa, rho, rng, t, depth + 1);
        advance_wo(w, o, h / 2.0, kappa, rho, rng, t + h / 2.0, depth + 1);
        return;
    }
    w = w_new;
    o = o_new;
}

}  // namespace

DrivingPath sample_driving(double kappa, std::optional<double> rho, double horizon, double dt,
                           std::uint64_t seed) {
    if (!(kappa > 0.0)) throw std::invalid_argument("sample_driving: kappa must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_driving: dt must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_driving: horizon must be > 0");
    if (rho && !(*rho > -2.0)) throw std::invalid_argument("sample_driving: rho must be > -2");

    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-12));
    DrivingPath path;
    path.kappa = kappa;
    path.rho = rho;
    path.times.reserve(n_steps + 1);
    path.values.reserve(n_steps + 1);
    path.times.push_back(0.0);
    path.values.push_back(0.0);

    Rng rng(seed, streams::kDriving);
    const double sqrt_kappa = std::sqrt(kappa);

    if (!rho) {
        double w = 0.0;
        for (std::size_t k = 1; k <= n_steps; ++k) {
            w += sqrt_kappa * std::sqrt(dt) * rng.gaussian();
            path.times.push_back(static_cast<double>(k) * dt);
            path.values.push_back(w);
        }
        return path;
    }

    double w = 0.0;
    double o = -kForcePointOffset;
    path.force_point = o;
    path.force_values.reserve(n_steps + 1);
    path.force_values.push_back(o);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        advance_wo(w, o, dt, kappa, *rho, rng, static_cast<double>(k - 1) * dt, 0);
        path.times.push_back(static_cast<double>(k) * dt);
        path.values.push_back(w);
        path.force_values.push_back(o);
    }
    return path;
}

namespace {

// z <- w + sqrt((z - w)^2 - s), branch with Im >= 0.  s = 4 * dt.
inline void apply_inverse_slit(double& x, double& y, double w, double s) {
    const double a = x - w;
    const double re = a * a - y * y - s;
    const double im = 2.0 * a * y;
    const double r = std::sqrt(re * re + im * im);
    double u, v;
    if (re >= 0.0) {
        u = std::sqrt(0.5 * (r + re));
        v = (u > 0.0) ? std::abs(im) / (2.0 * u) : 0.0;
    } else {
        v = std::sqrt(0.5 * (r - re));
        u = (v > 0.0) ? std::abs(im) / (2.0 * v) : 0.0;
    }
    if (im < 0.0 || (im == 0.0 && a < 0.0)) u = -u;
    x = w + u;
    y = v;
}

// Forward slit map z -> w + sqrt((z - w)^2 + s), branch with Im >= 0.
inline void apply_forward_slit(double& x, double& y, double w, double s) {
    const double a = x - w;
    const double re = a * a - y * y + s;
    const double im = 2.0 * a * y;
    const double r = std::sqrt(re * re + im * im);
    double u, v;
    if (re >= 0.0) {
        u = std::sqrt(0.5 * (r + re));
        v = (u > 0.0) ? std::abs(im) / (2.0 * u) : 0.0;
    } else {
        v = std::sqrt(0.5 * (r - re));
        u = (v > 0.0) ? std::abs(im) / (2.0 * v) : 0.0;
    }
    if (im < 0.0 || (im == 0.0 && a < 0.0)) u = -u;
    x = w + u;
    y = v;
}

}  // namespace

SleTrace loewner_trace(const DrivingPath& driving, double capacity_step, unsigned n_threads) {
    if (driving.times.size() < 2 || driving.times.size() != driving.values.size())
        throw std::invalid_argument("loewner_trace: driving needs >= 2 aligned samples");
    if (driving.times.front() != 0.0)
        throw std::invalid_argument("loewner_trace: driving must start at t = 0");

    // Resample onto a uniform capacity grid when requested.
    std::vector<double> w;  // w[j] drives step j+1 over (t_j, t_{j+1}]
    std::vector<double> dt;
    if (capacity_step > 0.0) {
        const double horizon = driving.times.back();
        const auto n = static_cast<std::size_t>(std::floor(horizon / capacity_step + 1e-9));
        if (n < 1) throw std::invalid_argument("loewner_trace: capacity_step exceeds horizon");
        w.resize(n);
        dt.assign(n, capacity_step);
        std::size_t src = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double t = static_cast<double>(k) * capacity_step;
            while (src + 1 < driving.times.size() && driving.times[src + 1] < t) ++src;
            const double t0 = driving.times[src];
            const double t1 = driving.times[std::min(src + 1, driving.times.size() - 1)];
            const double w0 = driving.values[src];
            const double w1 = driving.values[std::min(src + 1, driving.values.size() - 1)];
            w[k - 1] = (t1 > t0) ? w0 + (w1 - w0) * (t - t0) / (t1 - t0) : w0;
        }
    } else {
        const std::size_t n = driving.times.size() - 1;
        w.resize(n);
        dt.resize(n);
        for (std::size_t k = 1; k <= n; ++k) {
            w[k - 1] = driving.values[k];
            dt[k - 1] = driving.times[k] - driving.times[k - 1];
            if (!(dt[k - 1] > 0.0))
                throw std::invalid_argument("loewner_trace: times must strictly increase");
        }
    }

    const std::size_t n = w.size();
    SleTrace trace;
    trace.driving = driving;
    trace.capacity_step = capacity_step > 0.0 ? capacity_step : dt.front();
    trace.points.assign(n + 1, Vec2{0.0, 0.0});

    // gamma(t_k): tip of slit k pulled back through slits k-1 .. 1.  Blocks
    // of consecutive points share one backward sweep over the maps, so the
    // per-map parameters are loaded once and the independent sqrt chains
    // pipeline.
    constexpr std::size_t kBlock = 32;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    parallel_for(
        n_blocks,
        [&](std::size_t block) {
            const std::size_t k_lo = block * kBlock + 1;          // first point index
            const std::size_t k_hi = std::min(k_lo + kBlock, n + 1);  // one past last
            const std::size_t m = k_hi - k_lo;
            double x[kBlock], y[kBlock];
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t k = k_lo + i;
                x[i] = w[k - 1];
                y[i] = 2.0 * std::sqrt(dt[k - 1]);
            }
            // Maps j = k_hi-2 .. 1 in one sweep; member i joins once j < k_lo + i.
            for (std::size_t j = k_hi - 2; j >= 1; --j) {
                const double wj = w[j - 1];
                const double sj = 4.0 * dt[j - 1];
                const std::size_t first = (j >= k_lo) ? (j - k_lo + 1) : 0;
                for (std::size_t i = first; i < m; ++i) apply_inverse_slit(x[i], y[i], wj, sj);
            }
            for (std::size_t i = 0; i < m; ++i) {
                if (std::isnan(x[i]) || std::isnan(y[i]))
                    throw std::runtime_error("loewner_trace: branch failure at step " +
                                             std::to_string(k_lo + i));
                trace.points[k_lo + i] = {x[i], y[i]};
            }
        },
        n_threads);
    return trace;
}

std::vector<double> recover_driving(const SleTrace& trace) {
    if (trace.points.size() < 2)
        throw std::invalid_argument("recover_driving: trace needs >= 2 points");
    const std::size_t n = trace.points.size() - 1;
    std::vector<double> w(n + 1, 0.0);
    std::vector<double> dt(n, 0.0);

    // Unzip forward: push gamma(t_k) through the k-1 already-known slit maps;
    // the image must be the fresh tip w_k + 2 i sqrt(dt_k).
    std::vector<double> w_steps;
    std::vector<double> s_steps;
    for (std::size_t k = 1; k <= n; ++k) {
        double x = trace.points[k].x;
        double y = trace.points[k].y;
        for (std::size_t j = 0; j < w_steps.size(); ++j)
            apply_forward_slit(x, y, w_steps[j], s_steps[j]);
        w[k] = x;
        dt[k - 1] = (y / 2.0) * (y / 2.0);
        w_steps.push_back(x);
        s_steps.push_back(y * y);
    }
    return w;
}

std::optional<DimensionEstimate> trace_dimension(const SleTrace& trace,
                                                 const std::vector<int>& box_sizes,
                                                 int resolution) {
    if (trace.points.size() < 10000)
        throw std::invalid_argument("trace_dimension: need >= 1e4 trace points");
    return polyline_box_dimension(trace.points, resolution, box_sizes);
}

}  // namespace loopsoup
