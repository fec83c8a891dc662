#include "matmi/recon.hpp"

#include <cmath>
#include <limits>

#include "matmi/forward.hpp"
#include "matmi/transport.hpp"

namespace matmi {

AdmissibilityLostError::AdmissibilityLostError(int iteration, std::size_t node, double value)
    : Error("iterate " + std::to_string(iteration) + " lost admissibility at node "
            + std::to_string(node) + " (value " + std::to_string(value) + ")"),
      iteration_(iteration),
      node_(node),
      value_(value)
{
}

std::string to_string(StopReason reason)
{
    switch (reason) {
    case StopReason::UpdateTolerance:
        return "update-tolerance";
    case StopReason::MisfitTolerance:
        return "misfit-tolerance";
    case StopReason::IterationCap:
        return "iteration-cap";
    }
    return "unknown";
}

void validate(const ReconConfig& config)
{
    if (config.max_iterations < 1) {
        throw PreconditionError("max_iterations must be at least 1");
    }
    if (!(config.tolerance_update > 0.0) || !(config.tolerance_misfit > 0.0)) {
        throw PreconditionError("stopping tolerances must be positive");
    }
    if (!config.initial.mesh_ptr()) {
        throw PreconditionError("initial conductivity is not set");
    }
    if (config.truth) {
        require_same_mesh(config.initial.mesh(), config.truth->mesh());
    }
    require_positive(config.initial, config.admissibility_floor);
}

namespace {

struct State {
    VectorField velocity;
    std::optional<AdvectionOperator> op;
};

void update_state(State& s, const ScalarField& sigma)
{
    s.velocity = cross_b0(compute_field(sigma).field);
    s.op.emplace(assemble_advection(sigma.mesh_ptr(), s.velocity));
}

void record_errors(IterationRecord& rec, const ScalarField& sigma,
                   const std::optional<ScalarField>& truth)
{
    if (!truth) {
        return;
    }
    const double abs_err = l2_norm(sigma - *truth);
    rec.absolute_error = abs_err;
    rec.relative_error = abs_err / l2_norm(*truth);
}

} // namespace

ReconResult reconstruct(const ScalarField& g, const ReconConfig& config)
{
    validate(config);
    require_same_mesh(g.mesh(), config.initial.mesh());

    ReconResult result{config.initial, {}};
    ReconReport& report = result.report;
    ScalarField& sigma = result.sigma;

    State state;
    update_state(state, sigma);

    IterationRecord first;
    first.iteration = 0;
    first.update_norm = std::numeric_limits<double>::quiet_NaN();
    first.misfit = l2_norm(g - apply_projected(*state.op, sigma));
    record_errors(first, sigma, config.truth);
    report.records.push_back(first);

    report.stop_reason = StopReason::IterationCap;
    for (int k = 1; k <= config.max_iterations; ++k) {
        ScalarField next = transport_solve(*state.op, g, config.initial);
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (!(next[i] >= config.admissibility_floor)) {
                throw AdmissibilityLostError(k, i, next[i]);
            }
        }

        IterationRecord rec;
        rec.iteration = k;
        rec.update_norm = l2_norm(next - sigma);
        sigma = std::move(next);

        update_state(state, sigma);
        rec.misfit = l2_norm(g - apply_projected(*state.op, sigma));
        record_errors(rec, sigma, config.truth);
        report.records.push_back(rec);
        report.iterations = k;

        if (rec.update_norm <= config.tolerance_update) {
            report.stop_reason = StopReason::UpdateTolerance;
            break;
        }
        if (rec.misfit <= config.tolerance_misfit) {
            report.stop_reason = StopReason::MisfitTolerance;
            break;
        }
    }

    if (config.truth) {
        const double floor = 10.0 * kSolverTolerance;
        for (std::size_t k = 2; k < report.records.size(); ++k) {
            const double prev = *report.records[k - 1].relative_error;
            const double cur = *report.records[k].relative_error;
            if (prev > floor && cur > floor && cur > prev) {
                report.error_monotone = false;
            }
        }
        try {
            report.fit = fit_convergence_factor(report);
        } catch (const PreconditionError&) {
            report.fit.reset();
        }
    }
    return result;
}

ConvergenceFit fit_convergence_factor(std::span<const int> iterations,
                                      std::span<const double> errors, double solver_floor)
{
    if (iterations.size() != errors.size()) {
        throw PreconditionError("iteration and error columns differ in length");
    }
    const double threshold = 10.0 * solver_floor;
    std::vector<double> ks;
    std::vector<double> ys;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (iterations[i] >= 1 && errors[i] > threshold && std::isfinite(errors[i])) {
            ks.push_back(iterations[i]);
            ys.push_back(std::log(errors[i]));
        }
    }
    if (ks.size() < 5) {
        throw PreconditionError("convergence fit needs at least 5 error entries above "
                                + std::to_string(threshold) + ", got "
                                + std::to_string(ks.size()));
    }

    const double n = static_cast<double>(ks.size());
    double mk = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mk += ks[i];
        my += ys[i];
    }
    mk /= n;
    my /= n;
    double skk = 0.0;
    double sky = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        skk += (ks[i] - mk) * (ks[i] - mk);
        sky += (ks[i] - mk) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sky / skk;
    ConvergenceFit fit;
    fit.factor = std::exp(slope);
    fit.r_squared = syy > 0.0 ? (sky * sky) / (skk * syy) : 1.0;
    fit.points = static_cast<int>(ks.size());
    return fit;
}

ConvergenceFit fit_convergence_factor(const ReconReport& report, double solver_floor)
{
    std::vector<int> ks;
    std::vector<double> errs;
    for (const auto& rec : report.records) {
        if (!rec.relative_error) {
            throw PreconditionError("report has no error column (no truth supplied)");
        }
        ks.push_back(rec.iteration);
        errs.push_back(*rec.relative_error);
    }
    return fit_convergence_factor(ks, errs, solver_floor);
}

StabilityResult stability_check(const ScalarField& sigma1, const ScalarField& sigma2)
{
    require_same_mesh(sigma1.mesh(), sigma2.mesh());
    const ScalarField f1 = forward_map(sigma1);
    const ScalarField f2 = forward_map(sigma2);

    StabilityResult r;
    r.difference_norm = l2_norm(sigma1 - sigma2);
    r.data_difference_norm = l2_norm(f1 - f2);
    const double floor = 10.0 * kSolverTolerance * std::max(l2_norm(f1), 1.0);
    if (r.data_difference_norm <= floor) {
        r.degenerate = true;
        r.ratio = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.ratio = r.difference_norm / r.data_difference_norm;
    return r;
}

double cross_gradient_residual(const ScalarField& sigma1, const ScalarField& sigma2)
{
    require_same_mesh(sigma1.mesh(), sigma2.mesh());
    double m = 0.0;
    for (std::size_t e = 0; e < sigma1.mesh().num_elements(); ++e) {
        const Vec2 a = sigma1.element_gradient(e);
        const Vec2 b = sigma2.element_gradient(e);
        m = std::max(m, std::abs(a.x() * b.y() - a.y() * b.x()));
    }
    return m;
}

} // namespace matmi
