#pragma once

#include <string>
#include <vector>

namespace tar {

enum class Provenance { Manual, PredictedLabel, PredictedScore };

/// Per-position relevance values over ranking positions 1..M. Manual
/// positions form a prefix; the remainder carries classifier output.
struct RelevanceSequence {
    std::vector<double> values;
    std::vector<Provenance> provenance;

    int size() const { return static_cast<int>(values.size()); }
};

/// Windowed relevance probability at window-midpoint position x.
struct SamplePoint {
    double x = 0.0;
    double p = 0.0;
};

/// Power-law rate lambda(x) = a * x^k.
struct RateFunction {
    double a = 0.0;
    double k = 0.0;
    bool converged = true;
};

struct FitDiagnostics {
    RateFunction rate;
    double residual_norm = 0.0;
    int iterations = 0;
    std::vector<SamplePoint> points;
};

/// Partitions the sequence into consecutive non-overlapping windows
/// (trailing partial window dropped); p = proportion relevant in each
/// window. Score-provenance values below 0.5 contribute 0.
std::vector<SamplePoint> sample_points(const RelevanceSequence& seq, int window_size);

/// Nonlinear least squares on the untransformed residuals: log-log linear
/// regression initialization, then Levenberg-Marquardt refinement.
/// a clamped to >= 1e-12, k clamped to [-10, 2]. Throws when every p is 0.
RateFunction fit_power_law(const std::vector<SamplePoint>& points, int max_iters = 200);

FitDiagnostics fit_power_law_diagnostics(const std::vector<SamplePoint>& points,
                                         int max_iters = 200);

/// Discrete mean measure: sum of a * x^k for integer positions
/// from_pos..to_pos. Empty range (from_pos > to_pos) gives 0.
double expected_count(const RateFunction& rate, long long from_pos, long long to_pos);

std::string fit_diagnostics_to_json(const FitDiagnostics& diag);

}  // namespace tar
