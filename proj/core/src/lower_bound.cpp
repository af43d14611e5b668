#include "oscilab/lower_bound.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "oscilab/reduction.hpp"

namespace oscilab {

FresnelTable::FresnelTable(double a, double w_lo, double w_hi, double c_nyq)
    : a_(a), w_lo_(w_lo) {
    if (w_hi <= w_lo) throw std::invalid_argument("FresnelTable: empty range");
    const double w_abs = std::max(std::fabs(w_lo), std::fabs(w_hi));
    h_ = c_nyq / (1.0 + 2.0 * std::fabs(a) * w_abs);
    const std::size_t cells =
        static_cast<std::size_t>(std::ceil((w_hi - w_lo) / h_)) + 1;
    h_ = (w_hi - w_lo) / static_cast<double>(cells);
    cum_.resize(cells + 1);
    ComplexSum acc;
    cum_[0] = {0.0, 0.0};
    for (std::size_t k = 0; k < cells; ++k) {
        const double mid = w_lo_ + (static_cast<double>(k) + 0.5) * h_;
        const double ph = a_ * mid * mid;
        acc.add(std::complex<double>(std::cos(ph), std::sin(ph)) * h_);
        cum_[k + 1] = acc.value();
    }
}

std::complex<double> FresnelTable::at(double w) const {
    const double rel = (w - w_lo_) / h_;
    if (rel < -1e-9 || rel > static_cast<double>(cum_.size() - 1) + 1e-9)
        throw std::domain_error("FresnelTable: query outside tabulated range");
    const double clamped = std::min(std::max(rel, 0.0), static_cast<double>(cum_.size() - 1));
    const std::size_t k = std::min(static_cast<std::size_t>(clamped), cum_.size() - 2);
    const double frac = clamped - static_cast<double>(k);
    return cum_[k] * (1.0 - frac) + cum_[k + 1] * frac;
}

EvaluationGrid concentration_region(double lambda, const SlabRegionConfig& config) {
    if (lambda <= 0.0) throw std::invalid_argument("concentration_region: lambda > 0 required");
    const double sqrtl = std::sqrt(lambda);
    const double slab = config.tolerance / sqrtl;
    const double step_t = config.transverse_step_factor / sqrtl;
    const double step_2 = config.slab_step_fraction * slab;
    const double x2_lo = -slab * 2.0;
    const double x2_hi = config.x1_max * config.x3_max + slab * 2.0;
    const EvaluationGrid grid = EvaluationGrid::box(
        {0.0, x2_lo, config.x3_min}, {config.x1_max, x2_hi, config.x3_max},
        {step_t, step_2, step_t}, [&](std::span<const double> x) {
            return std::fabs(x[1] - x[0] * x[2]) <= slab;
        });
    if (grid.size() == 0)
        throw ResolutionError("concentration_region: slab misses every grid node", slab);
    return grid;
}

EllipticStripEvaluator::EllipticStripEvaluator(double lambda, StripConfig config)
    : lambda_(lambda), sqrtl_(std::sqrt(lambda)), config_(config) {
    if (lambda < 16.0) throw std::invalid_argument("EllipticStripEvaluator: lambda >= 16");
    strip_count_ = static_cast<int>(std::floor(config_.count_factor * sqrtl_)) + 1;
}

EllipticStripEvaluator::SquareForm EllipticStripEvaluator::square_form(const Vec& x,
                                                                       int s) const {
    const double x1s = x[0] - static_cast<double>(s) / sqrtl_;
    const double x3 = x[2];
    SquareForm form;
    form.quad_coeff = 0.5 * lambda_ * x3;
    form.u_shift = -x1s / x3;
    form.w_shift = (x1s * x3 - x[1]) / x3;
    form.constant =
        -0.5 * lambda_ * (x1s * x1s / x3 + (x1s * x3 - x[1]) * (x1s * x3 - x[1]) / x3);
    return form;
}

void EllipticStripEvaluator::prime(const std::vector<Vec>& xs) {
    for (const Vec& x : xs) {
        const double x3 = x[2];
        if (x3 <= 0.0) throw std::invalid_argument("EllipticStripEvaluator: x3 > 0 required");
        if (tables_.count(x3)) continue;
        // u = y1 + x3 y2 + u_shift with y1 in [0,1], y2 in [0, ~0.6] and
        // |u_shift| <= (|x1| + count/sqrtl)/x3; pad generously.
        const double shift_max = (0.6 + (strip_count_ + 1.0) / sqrtl_) / x3 + 1.0;
        const double a = 0.5 * lambda_ * x3;
        tables_.emplace(x3, FresnelTable(a, -shift_max, shift_max + 1.6, config_.c_nyq));
    }
}

std::vector<std::complex<double>> EllipticStripEvaluator::strips_at(const Vec& x) const {
    const auto it = tables_.find(x[2]);
    if (it == tables_.end())
        throw std::logic_error("EllipticStripEvaluator: x3 not primed");
    const FresnelTable& table = it->second;
    const double x3 = x[2];
    std::vector<std::complex<double>> out(static_cast<std::size_t>(strip_count_));
    for (int s = 0; s < strip_count_; ++s) {
        const SquareForm form = square_form(x, s);
        const double v_lo = static_cast<double>(s) / sqrtl_;
        const double v_hi = v_lo + config_.width_c / sqrtl_;
        const double a = form.quad_coeff;
        const double h_target = config_.c_nyq / (1.0 + 2.0 * a * 2.0);
        const int nv = std::max(1, static_cast<int>(std::ceil((v_hi - v_lo) / h_target)));
        const double hv = (v_hi - v_lo) / nv;
        ComplexSum acc;
        for (int k = 0; k < nv; ++k) {
            const double v = v_lo + (k + 0.5) * hv;
            const double ulo = x3 * v + form.u_shift;
            const std::complex<double> inner = table.at(ulo + 1.0) - table.at(ulo);
            const double w = v + form.w_shift;
            const double ph = a * w * w;
            acc.add(std::complex<double>(std::cos(ph), std::sin(ph)) * inner * hv);
        }
        const double c0 = form.constant;
        out[static_cast<std::size_t>(s)] =
            acc.value() * std::complex<double>(std::cos(c0), std::sin(c0));
    }
    return out;
}

EllipticExampleResult elliptic_example_norm(const EllipticExampleConfig& config) {
    EllipticStripEvaluator eval(config.lambda, config.strips);
    const EvaluationGrid region = concentration_region(config.lambda, config.region);
    const EvaluationGrid ball =
        EvaluationGrid::ball(config.ball_center, config.ball_radius, config.ball_spacing);

    std::vector<double> sigma(static_cast<std::size_t>(eval.strip_count()), 1.0);
    if (!config.averaged) {
        std::mt19937_64 rng(config.seed);
        for (auto& s : sigma) s = (rng() & 1) ? 1.0 : -1.0;
    }
    auto norm_over = [&](const EvaluationGrid& grid) {
        std::vector<Vec> xs = grid.nodes();
        eval.prime(xs);
        std::vector<double> magnitudes(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) {
            const auto strips = eval.strips_at(xs[i]);
            if (config.averaged) {
                double sq = 0.0;
                for (const auto& z : strips) sq += std::norm(z);
                magnitudes[i] = std::sqrt(sq);
            } else {
                std::complex<double> total{0.0, 0.0};
                for (std::size_t s = 0; s < strips.size(); ++s) total += sigma[s] * strips[s];
                magnitudes[i] = std::abs(total);
            }
        });
        CompensatedSum acc;
        for (const double m : magnitudes) acc.add(std::pow(m, config.q));
        return std::pow(acc.value() * grid.cell_volume(), 1.0 / config.q);
    };

    EllipticExampleResult result;
    result.region_norm = norm_over(region);
    result.full_norm = norm_over(ball);
    result.region_volume = region.total_volume();
    return result;
}

HyperbolicChirpEvaluator::HyperbolicChirpEvaluator(double lambda, double c_nyq)
    : lambda_(lambda),
      c_nyq_(c_nyq),
      table_(lambda, -1.6, 2.4, c_nyq) {  // covers |x1| <= 0.6, |x3| <= 1
    if (lambda < 16.0) throw std::invalid_argument("HyperbolicChirpEvaluator: lambda >= 16");
}

std::complex<double> HyperbolicChirpEvaluator::value_at(const Vec& x) const {
    // total phase lambda[(y1 + x3 y2)^2 - x1 y1 - x2 y2]
    //   = lambda[(u - x1/2)^2 - x1^2/4] + lambda (x1 x3 - x2) v,
    // u = y1 + x3 v in [x3 v, 1 + x3 v], v = y2 in [0, 1].
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    if (std::fabs(x1) > 0.6 || std::fabs(x3) > 1.0)
        throw std::domain_error("HyperbolicChirpEvaluator: x outside the tabulated window");
    const double defect = x1 * x3 - x2;
    const double h_target =
        c_nyq_ / (1.0 + lambda_ * std::fabs(defect) + 4.0 * std::sqrt(lambda_) * std::max(std::fabs(x3), 0.1));
    const int nv = std::max(1, static_cast<int>(std::ceil(1.0 / h_target)));
    const double hv = 1.0 / nv;
    const double base = -lambda_ * x1 * x1 / 4.0;
    const std::complex<double> base_factor(std::cos(base), std::sin(base));
    ComplexSum acc;
    for (int k = 0; k < nv; ++k) {
        const double v = (k + 0.5) * hv;
        const double ulo = x3 * v - 0.5 * x1;
        const std::complex<double> inner = table_.at(ulo + 1.0) - table_.at(ulo);
        const double ph = lambda_ * defect * v;
        acc.add(std::complex<double>(std::cos(ph), std::sin(ph)) * inner * hv);
    }
    return acc.value() * base_factor;
}

RateCertificate lq_rate_certificate(const std::vector<std::pair<double, double>>& sweep,
                                    double claimed_slope, double tolerance) {
    if (sweep.size() < 4)
        throw std::invalid_argument("lq_rate_certificate: at least 4 scale samples required");
    double lo = sweep.front().first, hi = sweep.front().first;
    for (const auto& [scale, value] : sweep) {
        lo = std::min(lo, scale);
        hi = std::max(hi, scale);
    }
    if (hi < 8.0 * lo)
        throw std::invalid_argument("lq_rate_certificate: scales must span at least a factor 8");
    RateCertificate cert;
    cert.fit = loglog_fit(sweep);
    cert.claimed = claimed_slope;
    cert.tolerance = tolerance;
    cert.pass = std::fabs(cert.fit.slope - claimed_slope) <= tolerance;
    return cert;
}

}  // namespace oscilab
