#include "tar/rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace tar {

namespace {

constexpr double kMinA = 1e-12;
constexpr double kMinK = -10.0;
constexpr double kMaxK = 2.0;

double clamp_a(double a) { return std::max(a, kMinA); }
double clamp_k(double k) { return std::clamp(k, kMinK, kMaxK); }

double sse(const std::vector<SamplePoint>& pts, double a, double k) {
    double s = 0.0;
    for (const auto& pt : pts) {
        const double r = a * std::pow(pt.x, k) - pt.p;
        s += r * r;
    }
    return s;
}

// Ordinary least squares of ln p on ln x over the points with p > 0.
RateFunction loglog_init(const std::vector<SamplePoint>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    double psum = 0.0;
    for (const auto& pt : pts) {
        if (pt.p <= 0.0) continue;
        const double lx = std::log(pt.x);
        const double ly = std::log(pt.p);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        psum += pt.p;
        ++n;
    }
    RateFunction init;
    const double denom = n * sxx - sx * sx;
    if (n >= 2 && std::abs(denom) > 1e-12) {
        init.k = clamp_k((n * sxy - sx * sy) / denom);
        init.a = clamp_a(std::exp((sy - init.k * sx) / n));
    } else {
        init.k = 0.0;
        init.a = clamp_a(n > 0 ? psum / n : 0.0);
    }
    return init;
}

}  // namespace

std::vector<SamplePoint> sample_points(const RelevanceSequence& seq, int window_size) {
    if (window_size < 1) throw std::runtime_error("sample_points: window_size must be >= 1");
    if (seq.size() < window_size)
        throw std::runtime_error("sample_points: sequence shorter than one window");
    std::vector<SamplePoint> out;
    const int num_windows = seq.size() / window_size;
    out.reserve(num_windows);
    for (int w = 0; w < num_windows; ++w) {
        const int first = w * window_size;  // 0-based
        double sum = 0.0;
        for (int i = first; i < first + window_size; ++i) {
            double v = seq.values[i];
            if (seq.provenance[i] == Provenance::PredictedScore && v < 0.5) v = 0.0;
            sum += v;
        }
        SamplePoint pt;
        // midpoint of 1-based positions first+1 .. first+window_size
        pt.x = first + (window_size + 1) / 2.0;
        pt.p = std::clamp(sum / window_size, 0.0, 1.0);
        out.push_back(pt);
    }
    return out;
}

FitDiagnostics fit_power_law_diagnostics(const std::vector<SamplePoint>& points,
                                         int max_iters) {
    if (points.size() < 2) throw std::runtime_error("fit_power_law: need at least 2 points");
    bool any_positive = false;
    for (const auto& pt : points) {
        if (pt.x < 1.0) throw std::runtime_error("fit_power_law: x must be >= 1");
        if (pt.p > 0.0) any_positive = true;
    }
    if (!any_positive) throw std::runtime_error("no signal");

    RateFunction best = loglog_init(points);
    double best_sse = sse(points, best.a, best.k);

    double a = best.a, k = best.k;
    double cur_sse = best_sse;
    double mu = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        // Residuals r_i = a x^k - p_i; J columns d/da = x^k, d/dk = a x^k ln x.
        double haa = 0, hak = 0, hkk = 0, ga = 0, gk = 0;
        for (const auto& pt : points) {
            const double xk = std::pow(pt.x, k);
            const double r = a * xk - pt.p;
            const double ja = xk;
            const double jk = a * xk * std::log(pt.x);
            haa += ja * ja;
            hak += ja * jk;
            hkk += jk * jk;
            ga += ja * r;
            gk += jk * r;
        }
        if (std::sqrt(ga * ga + gk * gk) < 1e-12) {
            converged = true;
            break;
        }
        // Damped normal equations (Levenberg-Marquardt).
        const double daa = haa + mu * std::max(haa, 1e-12);
        const double dkk = hkk + mu * std::max(hkk, 1e-12);
        const double det = daa * dkk - hak * hak;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double step_a = (-ga * dkk + gk * hak) / det;
        const double step_k = (-gk * daa + ga * hak) / det;
        const double trial_a = clamp_a(a + step_a);
        const double trial_k = clamp_k(k + step_k);
        const double trial_sse = sse(points, trial_a, trial_k);
        if (trial_sse < cur_sse) {
            const double rel_drop = (cur_sse - trial_sse) / std::max(cur_sse, 1e-300);
            a = trial_a;
            k = trial_k;
            cur_sse = trial_sse;
            mu = std::max(mu / 3.0, 1e-12);
            if (cur_sse < best_sse) {
                best = {a, k, true};
                best_sse = cur_sse;
            }
            if (rel_drop < 1e-14) {
                converged = true;
                break;
            }
        } else {
            mu *= 2.0;
            if (mu > 1e12) {
                converged = true;  // stuck at a local minimum of the damped step
                break;
            }
        }
    }

    FitDiagnostics diag;
    best.converged = converged || iter < max_iters;
    diag.rate = best;
    diag.residual_norm = std::sqrt(best_sse);
    diag.iterations = iter;
    diag.points = points;
    return diag;
}

RateFunction fit_power_law(const std::vector<SamplePoint>& points, int max_iters) {
    return fit_power_law_diagnostics(points, max_iters).rate;
}

double expected_count(const RateFunction& rate, long long from_pos, long long to_pos) {
    if (from_pos < 1) throw std::runtime_error("expected_count: positions start at 1");
    double sum = 0.0;
    for (long long x = from_pos; x <= to_pos; ++x)
        sum += rate.a * std::pow(static_cast<double>(x), rate.k);
    return sum;
}

std::string fit_diagnostics_to_json(const FitDiagnostics& diag) {
    nlohmann::json j;
    j["a"] = diag.rate.a;
    j["k"] = diag.rate.k;
    j["converged"] = diag.rate.converged;
    j["residual_norm"] = diag.residual_norm;
    j["iterations"] = diag.iterations;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& pt : diag.points) pts.push_back({pt.x, pt.p});
    j["points"] = std::move(pts);
    return j.dump();
}

}  // namespace tar
