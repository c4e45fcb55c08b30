#include "qkdopt/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qkdopt/errors.hpp"

namespace qkdopt {

namespace {

constexpr int kNumParams = 5;
constexpr int kMinRows = 50;

struct FitPoint {
    double eta = 0.0;
    double d = 0.0;
    double target = 0.0;
};

double model_value(const FitPoint& pt, const std::array<double, kNumParams>& k) {
    const double s = pt.eta;  // sqrt(eta_a eta_b) with eta_a = eta_b
    const double phi = k[2] - k[3] * s - 2.0 * pt.eta;
    return k[0] * s + k[1] * (s * s * s * std::sin(phi) - 2.0 * pt.d) + k[4];
}

void jacobian_row(const FitPoint& pt, const std::array<double, kNumParams>& k,
                  std::array<double, kNumParams>& out) {
    const double s = pt.eta;
    const double s3 = s * s * s;
    const double phi = k[2] - k[3] * s - 2.0 * pt.eta;
    out[0] = s;
    out[1] = s3 * std::sin(phi) - 2.0 * pt.d;
    out[2] = k[1] * s3 * std::cos(phi);
    out[3] = -k[1] * s3 * std::cos(phi) * s;
    out[4] = 1.0;
}

double rms(const std::vector<FitPoint>& pts, const std::array<double, kNumParams>& k) {
    double ss = 0.0;
    for (const auto& pt : pts) {
        const double r = model_value(pt, k) - pt.target;
        ss += r * r;
    }
    return std::sqrt(ss / pts.size());
}

// Gaussian elimination with partial pivoting on the 5x5 normal system.
bool solve(std::array<std::array<double, kNumParams>, kNumParams> a,
           std::array<double, kNumParams> b, std::array<double, kNumParams>& x) {
    for (int col = 0; col < kNumParams; ++col) {
        int pivot = col;
        for (int r = col + 1; r < kNumParams; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = 0; r < kNumParams; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < kNumParams; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < kNumParams; ++i) x[i] = b[i] / a[i][i];
    return true;
}

std::array<double, kNumParams> levenberg_marquardt(
    const std::vector<FitPoint>& pts, std::array<double, kNumParams> k) {
    double lambda = 1e-3;
    double current = rms(pts, k);
    for (int iter = 0; iter < 200; ++iter) {
        std::array<std::array<double, kNumParams>, kNumParams> jtj{};
        std::array<double, kNumParams> jtr{};
        std::array<double, kNumParams> row{};
        for (const auto& pt : pts) {
            jacobian_row(pt, k, row);
            const double r = pt.target - model_value(pt, k);
            for (int i = 0; i < kNumParams; ++i) {
                jtr[i] += row[i] * r;
                for (int j = 0; j < kNumParams; ++j) jtj[i][j] += row[i] * row[j];
            }
        }

        bool improved = false;
        for (int attempt = 0; attempt < 20; ++attempt) {
            auto damped = jtj;
            for (int i = 0; i < kNumParams; ++i) damped[i][i] *= 1.0 + lambda;
            std::array<double, kNumParams> step{};
            if (solve(damped, jtr, step)) {
                auto trial = k;
                for (int i = 0; i < kNumParams; ++i) trial[i] += step[i];
                const double trial_rms = rms(pts, trial);
                if (trial_rms < current) {
                    k = trial;
                    current = trial_rms;
                    lambda = std::max(lambda * 0.3, 1e-12);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }
    return k;
}

}  // namespace

double eval_optimal_tf(double eta_a, double eta_b, double d_a, double d_b,
                       const ModelConstants& k) {
    if (eta_a < 0.0 || eta_a > 1.0 || eta_b < 0.0 || eta_b > 1.0)
        throw std::invalid_argument("eval_optimal_tf: efficiencies must be in [0,1]");
    if (d_a < 0.0 || d_b < 0.0)
        throw std::invalid_argument("eval_optimal_tf: dark probabilities must be >= 0");
    // Commutative groupings keep the party symmetry bit-exact.
    const double s = std::sqrt(eta_a * eta_b);
    const double phi = k.c - k.d_const * s - (eta_a + eta_b);
    return k.a * s + k.b * (s * s * s * std::sin(phi) - (d_a + d_b)) + k.e;
}

double noise_budget(double eta_a, double eta_b) {
    if (eta_a < 0.0 || eta_a > 1.0 || eta_b < 0.0 || eta_b > 1.0)
        throw std::invalid_argument("noise_budget: efficiencies must be in [0,1]");
    if (eta_a == 0.0 && eta_b == 0.0)
        throw std::invalid_argument("noise_budget: undefined for eta_a = eta_b = 0");
    return 0.0732 * eta_a * eta_b / (eta_a + eta_b);
}

RefitResult refit_constants(const std::vector<SweepRow>& sweep,
                            const ModelConstants& seed) {
    std::vector<FitPoint> pts;
    for (const auto& row : sweep)
        if (row.feasible) pts.push_back({row.eta, row.d, row.p_tf_star});
    if (static_cast<int>(pts.size()) < kMinRows)
        throw InsufficientDataError("refit_constants: need >= " +
                                    std::to_string(kMinRows) + " feasible rows, got " +
                                    std::to_string(pts.size()));

    const std::array<double, kNumParams> seed_k{seed.a, seed.b, seed.c, seed.d_const,
                                               seed.e};
    const auto fitted = levenberg_marquardt(pts, seed_k);

    RefitResult result;
    result.constants = {fitted[0], fitted[1], fitted[2], fitted[3], fitted[4]};
    result.rms_refit = rms(pts, fitted);
    result.rms_paper = rms(pts, seed_k);
    result.points_used = static_cast<int>(pts.size());
    return result;
}

ResidualStats compare_model_vs_sim(const std::vector<SweepRow>& sweep,
                                   const ModelConstants& k) {
    ResidualStats stats;
    for (const auto& row : sweep) {
        if (!row.feasible) continue;
        const double pred = eval_optimal_tf(row.eta, row.eta, row.d, row.d, k);
        if (!model_feasible(pred) || row.p_tf_star <= 0.0) continue;
        stats.rel_errors.push_back(std::abs(pred - row.p_tf_star) / row.p_tf_star);
    }
    if (stats.rel_errors.empty())
        throw InsufficientDataError(
            "compare_model_vs_sim: no rows feasible for both model and simulation");

    stats.points = static_cast<int>(stats.rel_errors.size());
    std::vector<double> sorted = stats.rel_errors;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    stats.median = (n % 2 == 1) ? sorted[n / 2]
                                : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    stats.max = sorted.back();
    return stats;
}

}  // namespace qkdopt
