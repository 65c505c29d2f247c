#pragma once

#include "hawkes/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hawkes {

// F in 2RV_{alpha,rho}(A): (F(tx)/F(t) - x^alpha)/A(t) -> x^alpha int_1^x u^{rho-1} du.
struct SecondOrderParams {
    double alpha = 0.0;
    double rho = 0.0;
    RealFn A;                      // auxiliary function, RV_rho, -> 0
    std::optional<double> C_F;     // lim t^{-alpha} F(t), when it exists

    // at_zero: the limit is taken as t -> 0, where rho >= 0
    void validate(bool at_zero = false) const;
};

// A(t) = c t^rho, the shape used by the test families.
struct PowerAuxiliary {
    double c = 0.0;
    double rho = 0.0;

    double operator()(double t) const;
    // int_1^t A(s)/s ds
    double log_integral(double t) const;
    RealFn fn() const;
};

// x^alpha (x^rho - 1)/rho, or x^alpha log x when rho == 0.
double second_order_target(double alpha, double rho, double x);

// (F(tx)/F(t) - x^alpha) / A(t). Throws DomainError when F(t) or A(t) is zero.
double second_order_limit(const RealFn& F, const SecondOrderParams& p, double t, double x);

// (F(tx) - F(t)) / (F(t) A(t)); equals the 2RV pre-limit when alpha == 0.
double pi_variation_prelimit(const RealFn& F, const RealFn& A, double t, double x);

struct MembershipPolicy {
    std::vector<double> t_values{1e4, 1e5, 1e6};
    std::vector<double> x_values{0.5, 2.0, 5.0};
    double rel_tol = 0.02;
    bool require_monotone = true;
    double noise_floor = 1e-9;  // errors below this count as converged for the monotonicity test

    void validate() const;
    // t -> 0 variant used for membership at zero.
    static MembershipPolicy at_zero();
};

struct MembershipSample {
    double t = 0.0;
    double x = 0.0;
    double value = 0.0;
    double target = 0.0;
    double rel_error = 0.0;
};

struct MembershipReport {
    bool pass = false;
    std::vector<MembershipSample> samples;
    std::string reason;
};

// Pre-limit within rel_tol of the target at every (t, x), with errors not growing along t.
MembershipReport check_membership(const RealFn& F, const SecondOrderParams& p, const MembershipPolicy& policy = {});

// Same check as t -> 0 (policy.t_values should be small). Reciprocity: F(1/.) is checked here
// with (-alpha, -rho, -A(1/.)).
MembershipReport check_membership_at_zero(const RealFn& F, const SecondOrderParams& p,
                                          const MembershipPolicy& policy = MembershipPolicy::at_zero());

// F(t) = zeta1 (1 + zeta2 A1(t)) exp{int_1^t A1(s)/s ds} t^alpha
class KaramataRepresentation {
public:
    double operator()(double t) const;
    RealFn fn() const;
    // (alpha, rho, (1 + rho zeta2) A1), C_F = zeta1 exp{int_1^inf A1/s} when rho < 0.
    SecondOrderParams params() const;

    double alpha() const { return alpha_; }
    double zeta1() const { return zeta1_; }
    double zeta2() const { return zeta2_; }
    double rho() const { return rho_; }

private:
    friend KaramataRepresentation build_karamata_representation(double, double, double, double, RealFn,
                                                                std::optional<RealFn>);
    double alpha_ = 0.0, zeta1_ = 1.0, zeta2_ = 0.0, rho_ = 0.0;
    RealFn A1_;
    RealFn inner_;  // int_1^t A1(s)/s ds
    std::optional<double> inner_limit_;
};

// inner_integral(t) = int_1^t A1(s)/s ds; computed by quadrature when absent.
KaramataRepresentation build_karamata_representation(double alpha, double zeta1, double zeta2, double rho, RealFn A1,
                                                     std::optional<RealFn> inner_integral = std::nullopt);
KaramataRepresentation build_karamata_representation(double alpha, double zeta1, double zeta2,
                                                     const PowerAuxiliary& A1);

enum class KaramataDirection { Up, Down };

std::string to_string(KaramataDirection d);

// Up:   (t^theta F(t) / int_{t0}^t s^{theta-1} F(s) ds - (alpha + theta)) / A(t),   theta > -alpha - rho
// Down: (t^theta F(t) / int_t^inf s^{theta-1} F(s) ds + (alpha + theta)) / A(t),   theta < -alpha
// integral: closed form of the relevant integral as a function of t (t0 is baked in for Up);
// quadrature with a regularly varying tail is used when absent.
double second_order_karamata_ratio(const RealFn& F, const SecondOrderParams& p, double theta, double t0, double t,
                                   KaramataDirection direction, std::optional<RealFn> integral = std::nullopt);

// (alpha + theta)/(alpha + theta + rho) for Up, its negative for Down.
double karamata_ratio_target(const SecondOrderParams& p, double theta, KaramataDirection direction);

// F1 * F2 in 2RV_{a1+a2+1, max(rho1, rho2)}(A0), A0 built from beta-function weights.
// Throws DomainError when A0 is not comparable to |A1| + |A2| on the check grid.
SecondOrderParams convolve_2rv_params(const SecondOrderParams& p1, const SecondOrderParams& p2,
                                      const std::vector<double>& check_grid = {1e2, 1e3, 1e4, 1e5, 1e6});

// |F|^theta in 2RV_{theta alpha, rho}(theta A)
SecondOrderParams power_2rv_params(const SecondOrderParams& p, double theta);

// Representation-based auxiliary of G with G(t) ~ C t^alpha (1 + A_G(t)/rho):
// A_G(t) = rho (G(t) / (C t^alpha) - 1).
double representation_auxiliary(const RealFn& G, double alpha, double rho, double C, double t);

// Auxiliary function of G(lambda) = F^(1/lambda), measured through the representation above with
// C = Gamma(1 + alpha) C_F. The second-order Tauberian theorem predicts
// tauberian_auxiliary_factor(alpha, rho) A(lambda).
double measured_tauberian_auxiliary(const RealFn& F, const SecondOrderParams& p, double lambda);

// Test families F(t) = t^alpha (1 + amplitude t^rho), with A(t) = amplitude rho t^rho.
struct PowerPerturbedFamily {
    double alpha = 0.5;
    double rho = -0.2;
    double amplitude = 1.0;

    double operator()(double t) const;
    RealFn fn() const;
    SecondOrderParams params() const;
    // int_{t0}^t s^{theta-1} F(s) ds and int_t^inf s^{theta-1} F(s) ds in closed form.
    double up_integral(double theta, double t0, double t) const;
    double down_integral(double theta, double t) const;
};

} // namespace hawkes
