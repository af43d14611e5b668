#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "oscilab/exponents.hpp"
#include "oscilab/field.hpp"

namespace oscilab {

/// Cumulative table of F(w) = int_{w_lo}^{w} e^{i a tau^2} d tau on a lattice
/// fine enough for the quadrature guard, queried by linear interpolation.
/// Only differences F(b) - F(a) are meaningful.
class FresnelTable {
public:
    FresnelTable(double a, double w_lo, double w_hi, double c_nyq = 1.0 / 6.0);
    std::complex<double> at(double w) const;
    double coefficient() const { return a_; }

private:
    double a_;
    double w_lo_;
    double h_;
    std::vector<std::complex<double>> cum_;
};

/// Concentration slab: nodes with x3 in [x3_min, x3_max] and
/// |x2 - x1 x3| <= tolerance / sqrt(lambda), carved from an anisotropic
/// lattice whose transverse steps scale like 1/sqrt(lambda).
struct SlabRegionConfig {
    double tolerance = 0.1;
    double x1_max = 0.25;
    double x3_min = 0.5;
    double x3_max = 1.0;
    double transverse_step_factor = 1.0 / 3.0;  // x1/x3 step = factor / sqrt(lambda)
    double slab_step_fraction = 2.0 / 3.0;      // x2 step as a fraction of the slab half-width
};

EvaluationGrid concentration_region(double lambda, const SlabRegionConfig& config = {});

struct StripConfig {
    double width_c = 0.5;       // strip width is width_c / sqrt(lambda)
    double count_factor = 0.5;  // strips s = 0 .. floor(count_factor * sqrt(lambda))
    double c_nyq = 1.0 / 6.0;
};

/// Strip integrals I_s(x) of the twisted elliptic phase against the chirped
/// strip family: the phase plus its strip carrier is evaluated through the
/// exact completed-square form, with the inner integral served by per-x3
/// Fresnel tables. prime() must see every x3 before strips_at() is called;
/// afterwards evaluation is lock-free and thread-safe.
class EllipticStripEvaluator {
public:
    explicit EllipticStripEvaluator(double lambda, StripConfig config = {});

    double lambda() const { return lambda_; }
    int strip_count() const { return strip_count_; }

    void prime(const std::vector<Vec>& xs);
    std::vector<std::complex<double>> strips_at(const Vec& x) const;

    struct SquareForm {
        double quad_coeff;  // lambda * x3 / 2
        double u_shift;     // u = y1 + x3 y2 + u_shift
        double w_shift;     // w = y2 + w_shift
        double constant;    // additive phase constant
    };
    /// Exact decomposition: lambda (phi(x, y) + (s/sqrt(lambda)) y1)
    ///   = quad_coeff (u^2 + w^2) + constant.
    SquareForm square_form(const Vec& x, int s) const;

private:
    double lambda_;
    double sqrtl_;
    StripConfig config_;
    int strip_count_;
    std::map<double, FresnelTable> tables_;
};

struct EllipticExampleConfig {
    double lambda = 64.0;
    double q = 10.0 / 3.0;
    bool averaged = true;        // square-function mode; otherwise fixed signs
    std::uint64_t seed = 0;      // sign pattern seed for fixed mode
    StripConfig strips;
    SlabRegionConfig region;
    Vec ball_center = {0.125, 0.09, 0.75};
    double ball_radius = 0.7;
    double ball_spacing = 0.05;
};

struct EllipticExampleResult {
    double region_norm = 0.0;
    double full_norm = 0.0;
    double region_volume = 0.0;
};

/// L^q norms of the chirped-strip construction on the concentration region
/// and on a reporting ball.
EllipticExampleResult elliptic_example_norm(const EllipticExampleConfig& config);

/// The hyperbolic chirp value: integral over [0,1]^2 of
/// e^{i lambda [(y1 + x3 y2)^2 - x1 y1 - x2 y2]}, via the exact shear and a
/// single Fresnel table per lambda.
class HyperbolicChirpEvaluator {
public:
    explicit HyperbolicChirpEvaluator(double lambda, double c_nyq = 1.0 / 6.0);
    double lambda() const { return lambda_; }
    std::complex<double> value_at(const Vec& x) const;

private:
    double lambda_;
    double c_nyq_;
    FresnelTable table_;
};

struct RateCertificate {
    ExponentFit fit;
    double claimed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Least-squares slope against a claimed exponent. Refuses sweeps with fewer
/// than 4 samples or spanning less than a factor 8 in scale.
RateCertificate lq_rate_certificate(const std::vector<std::pair<double, double>>& sweep,
                                    double claimed_slope, double tolerance);

}  // namespace oscilab
