#include "hawkes/kernels.hpp"

#include "hawkes/error.hpp"
#include "hawkes/mixed_ml.hpp"
#include "hawkes/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hawkes {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Integral of g over [0, t], with the integrable singularity at 0 handled separately
// from the bulk which may span many decades.
double integrate_from_zero(const RealFn& g, double t)
{
    if (t <= 0.0)
        return 0.0;
    if (t <= 1.0)
        return integrate_singular(g, 0.0, t);
    return integrate_singular(g, 0.0, 1.0) + integrate_log_panels(g, 1.0, t);
}

// int_0^inf g for g ~ g(T) (T/s)^p beyond T, p > 1; light tails integrate to infinity directly.
double integrate_regularly_varying(const RealFn& g, double p)
{
    if (std::isinf(p))
        return integrate_singular(g, 0.0, 1.0) + integrate_to_infinity(g, 1.0);
    const double T = 1e6;
    return integrate_from_zero(g, T) + g(T) * T / (p - 1.0);
}

class ExponentialModel final : public KernelModel {
public:
    explicit ExponentialModel(ExponentialParams p) : p_(p) {}
    std::string name() const override { return "Exponential"; }
    KernelFamily family() const override { return KernelFamily::Exponential; }
    double phi(double t) const override { return t < 0.0 ? 0.0 : p_.m * p_.beta * std::exp(-p_.beta * t); }
    double tail(double t) const override { return t <= 0.0 ? p_.m : p_.m * std::exp(-p_.beta * t); }
    double m() const override { return p_.m; }
    double tail_index() const override { return inf; }
    double cumulative(double t) const override { return t <= 0.0 ? 0.0 : -p_.m * std::expm1(-p_.beta * t); }
    double integrated_cumulative(double t) const override
    {
        const double x = p_.beta * t;
        if (x < 1e-3)
            return p_.m * t * x * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
        return p_.m * (t + std::expm1(-x) / p_.beta);
    }
    double integrated_tail(double t) const override { return -p_.m * std::expm1(-p_.beta * t) / p_.beta; }
    double psi(double beta, double t) const override
    {
        // m beta int_0^t s^b e^{-beta s} ds = m beta^{-b} gamma(b+1, beta t)
        if (t <= 0.0)
            return 0.0;
        if (std::isinf(t))
            return p_.m * std::pow(p_.beta, -beta) * std::tgamma(beta + 1.0);
        return p_.m * std::pow(p_.beta, -beta) * boost::math::tgamma_lower(beta + 1.0, p_.beta * t);
    }
    double sigma() const override { return p_.m / p_.beta; }
    double psi2_infinity() const override { return 2.0 * p_.m / (p_.beta * p_.beta); }
    std::optional<double> laplace_phi(double lambda) const override { return p_.m * p_.beta / (p_.beta + lambda); }
    std::optional<KernelSpec> spec() const override { return KernelSpec{p_}; }

private:
    ExponentialParams p_;
};

class ParetoTailModel final : public KernelModel {
public:
    explicit ParetoTailModel(ParetoTailParams p)
        : p_(p), phi0_(p.c * p.alpha * std::pow(p.cutoff, -p.alpha - 1.0)),
          m_(p.c * std::pow(p.cutoff, -p.alpha) * (1.0 + p.alpha))
    {
    }
    std::string name() const override { return "ParetoTail"; }
    KernelFamily family() const override { return KernelFamily::ParetoTail; }
    double phi(double t) const override
    {
        if (t < 0.0)
            return 0.0;
        return t < p_.cutoff ? phi0_ : p_.c * p_.alpha * std::pow(t, -p_.alpha - 1.0);
    }
    double tail(double t) const override
    {
        if (t <= 0.0)
            return m_;
        if (t < p_.cutoff)
            return p_.c * std::pow(p_.cutoff, -p_.alpha) + phi0_ * (p_.cutoff - t);
        return p_.c * std::pow(t, -p_.alpha);
    }
    double m() const override { return m_; }
    double tail_index() const override { return p_.alpha; }
    double cumulative(double t) const override
    {
        if (t <= 0.0)
            return 0.0;
        if (t < p_.cutoff)
            return phi0_ * t;
        return m_ - tail(t);
    }
    double integrated_tail(double t) const override
    {
        const double tc = p_.cutoff;
        const double a = p_.alpha;
        if (t <= 0.0)
            return 0.0;
        if (t < tc)
            return p_.c * std::pow(tc, -a) * t + phi0_ * (tc * t - 0.5 * t * t);
        const double head = p_.c * std::pow(tc, 1.0 - a) + 0.5 * phi0_ * tc * tc;
        if (a == 1.0)
            return head + p_.c * std::log(t / tc);
        return head + p_.c * (std::pow(t, 1.0 - a) - std::pow(tc, 1.0 - a)) / (1.0 - a);
    }
    double integrated_cumulative(double t) const override
    {
        if (t < p_.cutoff)
            return 0.5 * phi0_ * t * t;
        return m_ * t - integrated_tail(t);
    }
    double psi(double beta, double t) const override
    {
        const double tc = p_.cutoff;
        const double a = p_.alpha;
        if (t <= 0.0)
            return 0.0;
        if (t < tc)
            return phi0_ * std::pow(t, beta + 1.0) / (beta + 1.0);
        const double head = phi0_ * std::pow(tc, beta + 1.0) / (beta + 1.0);
        if (std::isinf(t))
            return beta < a ? head + p_.c * a * std::pow(tc, beta - a) / (a - beta) : inf;
        if (beta == a)
            return head + p_.c * a * std::log(t / tc);
        return head + p_.c * a * (std::pow(t, beta - a) - std::pow(tc, beta - a)) / (beta - a);
    }
    double sigma() const override { return psi(1.0, inf); }
    double psi2_infinity() const override { return psi(2.0, inf); }
    std::vector<double> kinks() const override { return {p_.cutoff}; }
    std::optional<KernelSpec> spec() const override { return KernelSpec{p_}; }

private:
    ParetoTailParams p_;
    double phi0_;
    double m_;
};

class MittagLefflerModel final : public KernelModel {
public:
    explicit MittagLefflerModel(MittagLefflerParams p)
        : p_(p), e_a_(p.alpha, p.alpha), e_1_(p.alpha, 1.0), e_1a_(p.alpha, 1.0 + p.alpha), e_2_(p.alpha, 2.0),
          e_2a_(p.alpha, 2.0 + p.alpha)
    {
    }
    std::string name() const override { return "MittagLeffler"; }
    KernelFamily family() const override { return KernelFamily::MittagLeffler; }
    double phi(double t) const override
    {
        if (t < 0.0)
            return 0.0;
        if (t == 0.0)
            return inf;
        return p_.mass * p_.beta * std::pow(t, p_.alpha - 1.0) * e_a_(-arg(t));
    }
    double tail(double t) const override { return t <= 0.0 ? p_.mass : p_.mass * e_1_(-arg(t)); }
    double m() const override { return p_.mass; }
    double tail_index() const override { return p_.alpha; }
    double cumulative(double t) const override
    {
        if (t <= 0.0)
            return 0.0;
        const double x = arg(t);
        return p_.mass * x * e_1a_(-x);
    }
    double integrated_cumulative(double t) const override
    {
        if (t <= 0.0)
            return 0.0;
        const double x = arg(t);
        return p_.mass * t * x * e_2a_(-x);
    }
    double integrated_tail(double t) const override { return t <= 0.0 ? 0.0 : p_.mass * t * e_2_(-arg(t)); }
    double psi(double beta, double t) const override
    {
        if (beta == 0.0)
            return std::isinf(t) ? p_.mass : cumulative(t);
        if (std::isinf(t))
            return inf;
        if (beta == 1.0) {
            if (t <= 0.0)
                return 0.0;
            const double x = arg(t);
            return p_.mass * t * (e_2_(-x) - e_1_(-x));
        }
        return KernelModel::psi(beta, t);
    }
    double sigma() const override { return inf; }
    double psi2_infinity() const override { return inf; }
    std::optional<double> laplace_phi(double lambda) const override
    {
        return p_.mass * p_.beta / (p_.beta + std::pow(lambda, p_.alpha));
    }
    std::optional<KernelSpec> spec() const override { return KernelSpec{p_}; }

private:
    double arg(double t) const { return p_.beta * std::pow(t, p_.alpha); }

    MittagLefflerParams p_;
    MittagLeffler e_a_;
    MittagLeffler e_1_;
    MittagLeffler e_1a_;
    MittagLeffler e_2_;
    MittagLeffler e_2a_;
};

class ZeroModel final : public KernelModel {
public:
    std::string name() const override { return "Zero"; }
    KernelFamily family() const override { return KernelFamily::Zero; }
    double phi(double) const override { return 0.0; }
    double tail(double) const override { return 0.0; }
    double m() const override { return 0.0; }
    double tail_index() const override { return inf; }
    double cumulative(double) const override { return 0.0; }
    double integrated_cumulative(double) const override { return 0.0; }
    double integrated_tail(double) const override { return 0.0; }
    double psi(double, double) const override { return 0.0; }
    double sigma() const override { return 0.0; }
    double psi2_infinity() const override { return 0.0; }
    std::optional<double> laplace_phi(double) const override { return 0.0; }
    double cell_moment(double, double) const override { return 0.0; }
    std::optional<KernelSpec> spec() const override { return KernelSpec{ZeroParams{}}; }
};

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw InvalidSpec(msg);
}

} // namespace

std::string to_string(KernelFamily f)
{
    switch (f) {
    case KernelFamily::Exponential: return "Exponential";
    case KernelFamily::ParetoTail: return "ParetoTail";
    case KernelFamily::MittagLeffler: return "MittagLeffler";
    case KernelFamily::MixedMittagLeffler: return "MixedMittagLeffler";
    case KernelFamily::Zero: return "Zero";
    case KernelFamily::Custom: return "Custom";
    }
    return "Custom";
}

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::Subcritical: return "Subcritical";
    case Regime::WeaklyCritical: return "WeaklyCritical";
    case Regime::StronglyCritical: return "StronglyCritical";
    }
    return "Subcritical";
}

KernelFamily KernelSpec::family() const
{
    switch (params.index()) {
    case 0: return KernelFamily::Exponential;
    case 1: return KernelFamily::ParetoTail;
    case 2: return KernelFamily::MittagLeffler;
    case 3: return KernelFamily::MixedMittagLeffler;
    default: return KernelFamily::Zero;
    }
}

void KernelSpec::validate() const
{
    if (auto p = std::get_if<ExponentialParams>(&params)) {
        require(std::isfinite(p->m) && p->m >= 0.0, "Exponential: m must be >= 0");
        require(std::isfinite(p->beta) && p->beta > 0.0, "Exponential: beta must be > 0");
    } else if (auto p = std::get_if<ParetoTailParams>(&params)) {
        require(std::isfinite(p->alpha) && p->alpha > 0.0, "ParetoTail: alpha must be > 0");
        require(std::isfinite(p->c) && p->c > 0.0, "ParetoTail: c must be > 0");
        require(std::isfinite(p->cutoff) && p->cutoff > 0.0, "ParetoTail: cutoff must be > 0");
    } else if (auto p = std::get_if<MittagLefflerParams>(&params)) {
        require(p->alpha > 0.0 && p->alpha < 1.0, "MittagLeffler: alpha must lie in (0, 1)");
        require(std::isfinite(p->beta) && p->beta > 0.0, "MittagLeffler: beta must be > 0");
        require(std::isfinite(p->mass) && p->mass > 0.0, "MittagLeffler: mass must be > 0");
    } else if (auto p = std::get_if<MixedMittagLefflerParams>(&params)) {
        require(p->alpha1 > 0.0 && p->alpha1 <= p->alpha2 && p->alpha2 < 1.0,
                "MixedMittagLeffler: need 0 < alpha1 <= alpha2 < 1");
        require(std::isfinite(p->beta1) && p->beta1 > 0.0 && std::isfinite(p->beta2) && p->beta2 > 0.0,
                "MixedMittagLeffler: beta1, beta2 must be > 0");
        require(p->table_nodes >= 64, "MixedMittagLeffler: table_nodes must be >= 64");
        require(p->table_horizon > 1.0, "MixedMittagLeffler: table_horizon must be > 1");
    }
}

namespace {

double get_param(const nlohmann::json& params, const char* key, std::optional<double> fallback,
                 std::set<std::string>& seen)
{
    seen.insert(key);
    if (!params.contains(key)) {
        if (fallback)
            return *fallback;
        throw InvalidSpec(std::string("kernel spec: missing parameter '") + key + "'");
    }
    const auto& v = params.at(key);
    if (!v.is_number())
        throw InvalidSpec(std::string("kernel spec: parameter '") + key + "' must be a number");
    return v.get<double>();
}

} // namespace

nlohmann::json to_json(const KernelSpec& spec)
{
    nlohmann::json j;
    j["family"] = to_string(spec.family());
    nlohmann::json p = nlohmann::json::object();
    if (auto e = std::get_if<ExponentialParams>(&spec.params)) {
        p = {{"m", e->m}, {"beta", e->beta}};
    } else if (auto e = std::get_if<ParetoTailParams>(&spec.params)) {
        p = {{"alpha", e->alpha}, {"c", e->c}, {"cutoff", e->cutoff}};
    } else if (auto e = std::get_if<MittagLefflerParams>(&spec.params)) {
        p = {{"alpha", e->alpha}, {"beta", e->beta}, {"mass", e->mass}};
    } else if (auto e = std::get_if<MixedMittagLefflerParams>(&spec.params)) {
        p = {{"alpha1", e->alpha1}, {"beta1", e->beta1},           {"alpha2", e->alpha2},
             {"beta2", e->beta2},   {"table_nodes", e->table_nodes}, {"table_horizon", e->table_horizon}};
    }
    j["params"] = p;
    return j;
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
        throw InvalidSpec("kernel spec: expected an object with a string 'family'");
    for (const auto& item : j.items())
        if (item.key() != "family" && item.key() != "params")
            throw InvalidSpec("kernel spec: unknown key '" + item.key() + "'");
    const std::string family = j.at("family").get<std::string>();
    const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
    if (!params.is_object())
        throw InvalidSpec("kernel spec: 'params' must be an object");

    std::set<std::string> seen;
    KernelSpec spec;
    if (family == "Exponential") {
        ExponentialParams p;
        p.m = get_param(params, "m", std::nullopt, seen);
        p.beta = get_param(params, "beta", 1.0, seen);
        spec.params = p;
    } else if (family == "ParetoTail") {
        ParetoTailParams p;
        p.alpha = get_param(params, "alpha", std::nullopt, seen);
        p.c = get_param(params, "c", 1.0, seen);
        p.cutoff = get_param(params, "cutoff", 1.0, seen);
        spec.params = p;
    } else if (family == "MittagLeffler") {
        MittagLefflerParams p;
        p.alpha = get_param(params, "alpha", std::nullopt, seen);
        p.beta = get_param(params, "beta", 1.0, seen);
        p.mass = get_param(params, "mass", 1.0, seen);
        spec.params = p;
    } else if (family == "MixedMittagLeffler") {
        MixedMittagLefflerParams p;
        p.alpha1 = get_param(params, "alpha1", std::nullopt, seen);
        p.beta1 = get_param(params, "beta1", 1.0, seen);
        p.alpha2 = get_param(params, "alpha2", std::nullopt, seen);
        p.beta2 = get_param(params, "beta2", 1.0, seen);
        p.table_nodes = static_cast<int>(get_param(params, "table_nodes", 4096.0, seen));
        p.table_horizon = get_param(params, "table_horizon", 1e6, seen);
        spec.params = p;
    } else if (family == "Zero") {
        spec.params = ZeroParams{};
    } else {
        throw InvalidSpec("kernel spec: unknown family '" + family + "'");
    }
    for (const auto& item : params.items())
        if (!seen.count(item.key()))
            throw InvalidSpec("kernel spec: unknown parameter '" + item.key() + "' for family " + family);
    spec.validate();
    return spec;
}

KernelSpec kernel_spec_from_string(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidSpec(std::string("kernel spec: invalid JSON: ") + e.what());
    }
    return kernel_spec_from_json(j);
}

double KernelModel::integrated_tail(double t) const
{
    return integrate_from_zero([this](double s) { return tail(s); }, t);
}

double KernelModel::integrated_cumulative(double t) const
{
    if (t <= 0.0)
        return 0.0;
    return integrate_from_zero([this](double s) { return cumulative(s); }, t);
}

double KernelModel::psi(double beta, double t) const
{
    if (std::isinf(t)) {
        if (beta == 0.0)
            return m();
        if (beta == 1.0)
            return sigma();
        if (beta == 2.0)
            return psi2_infinity();
        if (!(beta < tail_index()))
            return inf;
        // int s^b phi = b int s^{b-1} Phi
        return beta * integrate_regularly_varying([this, beta](double s) { return std::pow(s, beta - 1.0) * tail(s); },
                                                  tail_index() - beta + 1.0);
    }
    if (t <= 0.0)
        return 0.0;
    if (beta == 0.0)
        return cumulative(t);
    return integrate_from_zero([this, beta](double s) { return s > 0.0 ? std::pow(s, beta) * phi(s) : 0.0; }, t);
}

double KernelModel::sigma() const
{
    const double a = tail_index();
    if (!(a > 1.0))
        return inf;
    return integrate_regularly_varying([this](double s) { return tail(s); }, a);
}

double KernelModel::psi2_infinity() const
{
    const double a = tail_index();
    if (!(a > 2.0))
        return inf;
    return 2.0 * integrate_regularly_varying([this](double s) { return s * tail(s); }, a - 1.0);
}

double KernelModel::cell_moment(double a, double b) const
{
    if (!(b > a))
        return 0.0;
    if (a == 0.0)
        return b * cumulative(b) - integrated_cumulative(b);
    std::vector<double> cuts{a};
    for (double k : kinks())
        if (k > a && k < b)
            cuts.push_back(k);
    cuts.push_back(b);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        sum += gauss_legendre10([this, a](double s) { return (s - a) * phi(s); }, cuts[i], cuts[i + 1]);
    return sum;
}

Kernel::Kernel(std::shared_ptr<const KernelModel> model) : model_(std::move(model))
{
    if (!model_)
        throw InvalidSpec("Kernel: null model");
}

double Kernel::cell_mass(double a, double b) const
{
    if (!(b > a))
        return 0.0;
    const double ta = model_->tail(a);
    // Differences of the smaller of tail / cumulative keep relative accuracy.
    if (ta < 0.5 * model_->m())
        return ta - model_->tail(b);
    return model_->cumulative(b) - model_->cumulative(a);
}

Kernel build_kernel(const KernelSpec& spec)
{
    spec.validate();
    switch (spec.family()) {
    case KernelFamily::Exponential:
        return Kernel(std::make_shared<ExponentialModel>(std::get<ExponentialParams>(spec.params)));
    case KernelFamily::ParetoTail:
        return Kernel(std::make_shared<ParetoTailModel>(std::get<ParetoTailParams>(spec.params)));
    case KernelFamily::MittagLeffler:
        return Kernel(std::make_shared<MittagLefflerModel>(std::get<MittagLefflerParams>(spec.params)));
    case KernelFamily::MixedMittagLeffler:
        return Kernel(std::make_shared<MixedMittagLefflerModel>(std::get<MixedMittagLefflerParams>(spec.params)));
    case KernelFamily::Zero:
    case KernelFamily::Custom:
        break;
    }
    return Kernel(std::make_shared<ZeroModel>());
}

Regime classify_regime(const Kernel& k)
{
    const double m = k.m();
    if (m > 1.0 + critical_mass_tolerance)
        throw UnsupportedRegime("classify_regime: supercritical kernel (m > 1) is not supported");
    if (m < 1.0 - critical_mass_tolerance)
        return Regime::Subcritical;
    return std::isfinite(k.sigma()) ? Regime::WeaklyCritical : Regime::StronglyCritical;
}

double mixed_ml_c_beta(const MixedMittagLefflerParams& p)
{
    return 1.0 / p.beta1 + (p.alpha1 == p.alpha2 ? 1.0 / p.beta2 : 0.0);
}

double mixed_ml_tail_asymptote(const MixedMittagLefflerParams& p, double t)
{
    if (!(t > 0.0))
        throw DomainError("mixed_ml_tail_asymptote: t must be positive");
    KernelSpec{p}.validate();
    return mixed_ml_c_beta(p) * std::pow(t, -p.alpha1) / gamma_fn(1.0 - p.alpha1);
}

} // namespace hawkes
