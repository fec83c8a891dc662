// Acceptance checks: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "matmi/error.hpp"
#include "matmi/field_io.hpp"
#include "matmi/forward.hpp"
#include "matmi/frechet.hpp"
#include "matmi/phantoms.hpp"
#include "matmi/recon.hpp"
#include "matmi/transport.hpp"

using namespace matmi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

MeshPtr unit_mesh(int n) { return std::make_shared<const Mesh>(n, n); }

ScalarField bump_field(const MeshPtr& m, std::uint64_t seed, double amplitude)
{
    PhantomSpec spec;
    spec.bumps = random_bumps(seed, 3, amplitude);
    return make_phantom(spec, m);
}

ScalarField collar_direction(const MeshPtr& m, std::uint64_t seed)
{
    return bump_field(m, seed, 0.06) - ScalarField(m, 0.2);
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ReconResult invert(const ScalarField& truth, const ScalarField& initial)
{
    ReconConfig c;
    c.initial = initial;
    c.truth = truth;
    return reconstruct(forward_map(truth), c);
}

Outcome constant_forward()
{
    const auto m = unit_mesh(64);
    const ScalarField g = forward_map(ScalarField(m, 0.2));
    const double dev = (g.values().array() - 0.2).abs().maxCoeff();
    return {dev <= 1e-9, "max |g - 0.2| = " + fmt("%.3e", dev)};
}

Outcome reverse_experiment()
{
    const auto m = unit_mesh(64);
    const ReconResult r = invert(ScalarField(m, 0.2), make_phantom(single_bump_phantom(), m));
    const double err = *r.report.records.back().absolute_error;
    return {r.report.iterations <= 2 && err < 1e-7,
            "iterations " + std::to_string(r.report.iterations) + ", abs error " + fmt("%.3e", err)};
}

double single_bump_c = NAN;

Outcome single_bump()
{
    const auto m = unit_mesh(64);
    const ReconResult r = invert(make_phantom(single_bump_phantom(), m), ScalarField(m, 0.2));
    const double rel = *r.report.records.back().relative_error;
    const bool fit = r.report.fit.has_value();
    const double c = fit ? r.report.fit->factor : NAN;
    const double r2 = fit ? r.report.fit->r_squared : NAN;
    single_bump_c = c;
    return {r.report.iterations <= 30 && rel <= 1e-6 && fit && c < 1.0 && r2 > 0.98,
            "iterations " + std::to_string(r.report.iterations) + ", rel error " + fmt("%.3e", rel)
                + ", c " + fmt("%.4f", c) + ", r^2 " + fmt("%.5f", r2)};
}

Outcome gradient_trend()
{
    const auto m = unit_mesh(64);
    const ScalarField truth = make_phantom(three_bump_phantom(), m);
    const ReconResult r = invert(truth, ScalarField(m, 0.2));
    const double c = r.report.fit ? r.report.fit->factor : NAN;
    return {r.report.fit.has_value() && c > single_bump_c,
            "three-bump c " + fmt("%.4f", c) + " vs single-bump c " + fmt("%.4f", single_bump_c)
                + " (max |grad| " + fmt("%.3f", max_gradient_norm(truth)) + ")"};
}

Outcome frechet_remainder()
{
    const auto m = unit_mesh(32);
    const ScalarField sigma = make_phantom(single_bump_phantom(), m);
    double lo = 1e300;
    double hi = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const std::vector<double> r = fd_validate(sigma, collar_direction(m, 900 + seed));
        for (std::size_t k = 0; k + 1 < r.size(); ++k) {
            lo = std::min(lo, r[k] / r[k + 1]);
            hi = std::max(hi, r[k] / r[k + 1]);
        }
    }
    return {lo >= 3.2 && hi <= 4.8, "r(t)/r(t/2) in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]"};
}

Outcome derivative_lower_bound()
{
    const auto m = unit_mesh(64);
    const ScalarField sigma(m, 0.2);
    double worst = 1e300;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScalarField h = collar_direction(m, 1100 + seed);
        worst = std::min(worst, l2_norm(frechet_derivative(sigma, h).value) / l2_norm(h));
    }
    return {worst >= 0.45, "min ||DF(h)||/||h|| over 20 h = " + fmt("%.4f", worst)};
}

Outcome nonlinear_stability()
{
    const auto m = unit_mesh(64);
    const ScalarField s1(m, 0.2);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const StabilityResult s = stability_check(s1, bump_field(m, 1300 + seed, 0.06));
        worst = std::max(worst, s.degenerate ? INFINITY : s.ratio);
    }
    return {worst <= 2.1, "max ratio over 20 pairs = " + fmt("%.4f", worst)};
}

Outcome field_bound_and_identity()
{
    const auto m = unit_mesh(64);
    int within = 0;
    double tightest = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScalarField sigma = bump_field(m, 1500 + seed, 0.06);
        const double ratio = l2_norm(compute_field(sigma).field) / field_bound(sigma);
        within += ratio <= 1.0;
        tightest = std::max(tightest, ratio);
    }
    std::vector<double> e;
    for (int n : {16, 32, 64}) {
        e.push_back(divergence_identity_error(compute_field(ScalarField(unit_mesh(n), 0.2)).field));
    }
    const double q1 = e[0] / e[1];
    const double q2 = e[1] / e[2];
    return {within == 20 && q1 >= 1.5 && q2 >= 1.5,
            "field bound holds " + std::to_string(within) + "/20 (max ||E||/C1 " + fmt("%.4f", tightest)
                + "); divergence-identity error " + fmt("%.4f", e[0]) + ", " + fmt("%.4f", e[1]) + ", "
                + fmt("%.4f", e[2]) + " at n=16,32,64, reduction " + fmt("%.3f", q1) + ", "
                + fmt("%.3f", q2) + " (need >= 1.5)"};
}

Outcome solver_contracts()
{
    const auto m = unit_mesh(48);
    const ScalarField sigma = make_phantom(three_bump_phantom(), m);

    const SparseMatrix k = assemble_weighted_stiffness(*m, sigma);
    double worst_row = 0.0;
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
        double sum = 0.0;
        double scale = 0.0;
        for (SparseMatrix::InnerIterator it(k, r); it; ++it) {
            sum += it.value();
            scale = std::max(scale, std::abs(it.value()));
        }
        worst_row = std::max(worst_row, std::abs(sum) / scale);
    }

    const ElectricField f = compute_field(sigma);
    const AdvectionOperator op = assemble_advection(m, cross_b0(f.field));
    SolveStats mass_stats;
    SolveStats transport_stats;
    const ScalarField g = solve_test_mass(op, op.matrix() * sigma.values(), &mass_stats);
    transport_solve(op, g, ScalarField(m, 0.2), &transport_stats);
    const double worst_residual = std::max(
        {f.stats.relative_residual, mass_stats.relative_residual, transport_stats.relative_residual});

    // Every solve inside a reconstruction throws if it misses the contract.
    bool recon_ok = true;
    std::string first;
    std::string second;
    try {
        const ReconResult a = invert(sigma, ScalarField(m, 0.2));
        const ReconResult b = invert(sigma, ScalarField(m, 0.2));
        first = field_csv(a.sigma) + field_csv(simulate_forward(sigma).data);
        second = field_csv(b.sigma) + field_csv(simulate_forward(sigma).data);
    } catch (const SolverError&) {
        recon_ok = false;
    }
    const bool identical = recon_ok && first == second;
    return {worst_row <= 1e-12 && worst_residual <= kSolverTolerance && recon_ok && identical,
            "row sums " + fmt("%.2e", worst_row) + ", worst residual " + fmt("%.2e", worst_residual)
                + ", reconstruction solves " + (recon_ok ? "ok" : "failed") + ", reruns "
                + (identical ? "byte-identical" : "differ")};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, 1.0, constant_forward},       {2, 2.0, reverse_experiment},
        {3, 30.0, single_bump},           {4, 60.0, gradient_trend},
        {5, 10.0, frechet_remainder},     {6, 20.0, derivative_lower_bound},
        {7, 30.0, nonlinear_stability},   {8, 30.0, field_bound_and_identity},
        {9, 5.0, solver_contracts},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && secs <= c.budget_s;
        failures += !pass;
        std::printf("criterion %d: %s  %s  [%.2f s of %.0f s]\n", c.id, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
