#pragma once

#include "hawkes/special_functions.hpp"

#include <json.hpp>

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hawkes {

enum class KernelFamily { Exponential, ParetoTail, MittagLeffler, MixedMittagLeffler, Zero, Custom };

std::string to_string(KernelFamily f);

struct ExponentialParams {
    double m = 0.5;
    double beta = 1.0;
};

// phi constant on [0, cutoff), c*alpha*t^{-alpha-1} beyond; tail c*t^{-alpha} for t >= cutoff.
struct ParetoTailParams {
    double alpha = 1.5;
    double c = 1.0;
    double cutoff = 1.0;
};

// mass * beta t^{alpha-1} E_{alpha,alpha}(-beta t^alpha)
struct MittagLefflerParams {
    double alpha = 0.5;
    double beta = 1.0;
    double mass = 1.0;
};

// f^{alpha1,beta1} * f^{alpha2,beta2}
struct MixedMittagLefflerParams {
    double alpha1 = 0.5;
    double beta1 = 1.0;
    double alpha2 = 0.5;
    double beta2 = 1.0;
    int table_nodes = 4096;
    double table_horizon = 1e6;
};

struct ZeroParams {};

struct KernelSpec {
    std::variant<ExponentialParams, ParetoTailParams, MittagLefflerParams, MixedMittagLefflerParams, ZeroParams>
        params;

    KernelFamily family() const;
    void validate() const;
};

nlohmann::json to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);
KernelSpec kernel_spec_from_string(const std::string& text);

// Behaviour of one kernel family. Kernel wraps a shared immutable model.
// Only phi, tail, m and tail_index are mandatory; the rest have generic fallbacks.
class KernelModel {
public:
    virtual ~KernelModel() = default;

    virtual std::string name() const = 0;
    virtual KernelFamily family() const { return KernelFamily::Custom; }

    virtual double phi(double t) const = 0;
    virtual double tail(double t) const = 0;
    virtual double m() const = 0;
    // Index a of Phi in RV_{-a}; +infinity for light (exponentially decaying) tails.
    virtual double tail_index() const = 0;

    // K(t) = int_0^t phi, evaluated without cancellation when possible.
    virtual double cumulative(double t) const { return m() - tail(t); }
    // int_0^t K(s) ds
    virtual double integrated_cumulative(double t) const;
    // int_0^t Phi(s) ds
    virtual double integrated_tail(double t) const;
    virtual double psi(double beta, double t) const;
    virtual double sigma() const;
    virtual double psi2_infinity() const;
    virtual std::optional<double> laplace_phi(double /*lambda*/) const { return std::nullopt; }
    // Non-increasing bound on phi; equals phi for monotone kernels.
    virtual double majorant(double t) const { return phi(t); }
    // int_a^b (s - a) phi(s) ds. Default: closed form through K and K2 on [0, b],
    // Gauss-Legendre on smooth pieces (split at kinks()) otherwise.
    virtual double cell_moment(double a, double b) const;
    // Points where phi is not smooth.
    virtual std::vector<double> kinks() const { return {}; }
    virtual bool bounded_at_zero() const { return std::isfinite(majorant(0.0)); }
    virtual std::optional<KernelSpec> spec() const { return std::nullopt; }
};

class Kernel {
public:
    Kernel() = default;
    explicit Kernel(std::shared_ptr<const KernelModel> model);

    double phi(double t) const { return model_->phi(t); }
    double tail(double t) const { return model_->tail(t); }
    double cumulative(double t) const { return model_->cumulative(t); }
    double integrated_cumulative(double t) const { return model_->integrated_cumulative(t); }
    double integrated_tail(double t) const { return model_->integrated_tail(t); }
    double psi(double beta, double t) const { return model_->psi(beta, t); }
    double m() const { return model_->m(); }
    double sigma() const { return model_->sigma(); }
    double psi2_infinity() const { return model_->psi2_infinity(); }
    double tail_index() const { return model_->tail_index(); }
    std::optional<double> laplace_phi(double lambda) const { return model_->laplace_phi(lambda); }
    double majorant(double t) const { return model_->majorant(t); }
    bool bounded_at_zero() const { return model_->bounded_at_zero(); }
    std::string name() const { return model_->name(); }
    KernelFamily family() const { return model_->family(); }
    std::optional<KernelSpec> spec() const { return model_->spec(); }
    const KernelModel& model() const { return *model_; }

    // int_a^b phi from closed-form cumulative/tail differences.
    double cell_mass(double a, double b) const;
    // int_a^b (s - a) phi(s) ds
    double cell_moment(double a, double b) const { return model_->cell_moment(a, b); }

private:
    std::shared_ptr<const KernelModel> model_;
};

Kernel build_kernel(const KernelSpec& spec);

enum class Regime { Subcritical, WeaklyCritical, StronglyCritical };

std::string to_string(Regime r);

// Tolerance used to decide m == 1.
inline constexpr double critical_mass_tolerance = 1e-10;

Regime classify_regime(const Kernel& k);

// C_beta t^{-alpha1} / Gamma(1 - alpha1), C_beta = 1/beta1 + [alpha1 == alpha2]/beta2.
double mixed_ml_tail_asymptote(const MixedMittagLefflerParams& p, double t);
double mixed_ml_c_beta(const MixedMittagLefflerParams& p);

} // namespace hawkes
