#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matmi/error.hpp"
#include "matmi/fem.hpp"
#include "matmi/phantoms.hpp"

namespace matmi {

struct ReconConfig {
    int max_iterations = 200;
    double tolerance_update = 1e-8;   ///< on ||sigma_k - sigma_{k-1}||_{L2}
    double tolerance_misfit = 1e-10;  ///< on ||g - F(sigma_k)||_{L2}
    ScalarField initial;              ///< sigma_0, also the boundary data
    std::optional<ScalarField> truth;
    double admissibility_floor = kAdmissibilityFloor;
};

void validate(const ReconConfig& config);

struct IterationRecord {
    int iteration = 0;
    double update_norm = 0.0;  ///< NaN for k = 0
    double misfit = 0.0;
    std::optional<double> relative_error;
    std::optional<double> absolute_error;
};

enum class StopReason { UpdateTolerance, MisfitTolerance, IterationCap };

std::string to_string(StopReason reason);

struct ConvergenceFit {
    double factor = 0.0;     ///< c in ||sigma_k - sigma||  ~ c^k
    double r_squared = 0.0;
    int points = 0;
};

struct ReconReport {
    std::vector<IterationRecord> records;
    StopReason stop_reason = StopReason::IterationCap;
    int iterations = 0;
    /// False if the error grew between two iterates above the solver floor.
    bool error_monotone = true;
    std::optional<ConvergenceFit> fit;
};

struct ReconResult {
    ScalarField sigma;
    ReconReport report;
};

/// An iterate dropped below the admissibility floor; no clamping is applied.
class AdmissibilityLostError : public Error {
public:
    AdmissibilityLostError(int iteration, std::size_t node, double value);

    int iteration() const noexcept { return iteration_; }
    std::size_t node() const noexcept { return node_; }
    double value() const noexcept { return value_; }

private:
    int iteration_;
    std::size_t node_;
    double value_;
};

/// Fixed-point iteration: field solve for sigma_k, then the transport solve
/// div(sigma_{k+1} E_k x B0) = g with sigma_{k+1} = sigma_0 on the boundary.
/// At least one iteration is always taken.
ReconResult reconstruct(const ScalarField& g, const ReconConfig& config);

/// Least-squares fit of log(error_k) against k over iterates k >= 1 whose
/// error exceeds 10 * solver_floor. Needs at least five such entries.
ConvergenceFit fit_convergence_factor(const ReconReport& report,
                                      double solver_floor = kSolverTolerance);
ConvergenceFit fit_convergence_factor(std::span<const int> iterations,
                                      std::span<const double> errors,
                                      double solver_floor = kSolverTolerance);

struct StabilityResult {
    double ratio = 0.0;  ///< ||s1 - s2|| / ||F(s1) - F(s2)||, NaN when degenerate
    double difference_norm = 0.0;
    double data_difference_norm = 0.0;
    bool degenerate = false;
};

StabilityResult stability_check(const ScalarField& sigma1, const ScalarField& sigma2);

/// max over elements of |grad s1 x grad s2 . B0|
double cross_gradient_residual(const ScalarField& sigma1, const ScalarField& sigma2);

} // namespace matmi
