#include "matmi/commands.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "matmi/error.hpp"
#include "matmi/field_io.hpp"
#include "matmi/forward.hpp"
#include "matmi/phantoms.hpp"
#include "matmi/recon.hpp"

namespace matmi {

namespace fs = std::filesystem;

namespace {

MeshPtr make_mesh(const RunConfig& c, int n)
{
    return std::make_shared<const Mesh>(n, n, c.bounds);
}

fs::path prepare_output(const RunConfig& c)
{
    const fs::path dir(c.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    return dir;
}

std::string opt_real(const std::optional<double>& v)
{
    return v ? format_real(*v) : std::string();
}

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows)
{
    std::string out = "quantity,value\n";
    for (const auto& [k, v] : rows) {
        out += k + ',' + v + '\n';
    }
    return out;
}

/// Synthetic data for a truth phantom, on the reconstruction mesh or on the
/// twice-refined mesh restricted by injection.
ScalarField synthesize_data(const RunConfig& c, const PhantomSpec& truth, const MeshPtr& mesh)
{
    if (c.data_mode == DataMode::InCrime) {
        return forward_map(make_phantom(truth, mesh));
    }
    const MeshPtr fine = make_mesh(c, 2 * mesh->nx());
    return restrict_to(forward_map(make_phantom(truth, fine)), mesh);
}

struct InvertRun {
    MeshPtr mesh;
    ScalarField data;
    std::optional<ScalarField> truth;
    ReconResult result;
};

InvertRun run_inversion(const RunConfig& c, const PhantomSpec& truth_spec, int n)
{
    InvertRun run;
    run.mesh = make_mesh(c, n);
    if (!c.data_file.empty()) {
        run.data = read_field_csv(c.data_file, run.mesh);
    } else {
        run.truth = make_phantom(truth_spec, run.mesh);
        run.data = synthesize_data(c, truth_spec, run.mesh);
    }
    ReconConfig rc;
    rc.max_iterations = c.max_iterations;
    rc.tolerance_update = c.tolerance_update;
    rc.tolerance_misfit = c.tolerance_misfit;
    rc.initial = make_phantom(c.initial, run.mesh);
    rc.truth = run.truth;
    run.result = reconstruct(run.data, rc);
    return run;
}

std::string report_csv(const ReconReport& report)
{
    std::string out = "k,update,misfit,rel_error,abs_error\n";
    for (const auto& r : report.records) {
        out += std::to_string(r.iteration) + ',' + format_real(r.update_norm) + ','
            + format_real(r.misfit) + ',' + opt_real(r.relative_error) + ','
            + opt_real(r.absolute_error) + '\n';
    }
    return out;
}

std::string csv_safe(std::string s)
{
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    }
    return s;
}

PhantomSpec scaled(PhantomSpec spec, double scale)
{
    for (auto& b : spec.bumps) {
        b.amplitude *= scale;
    }
    return spec;
}

} // namespace

void cmd_phantom(const RunConfig& c, std::ostream& log)
{
    validate(c);
    const MeshPtr mesh = make_mesh(c, c.mesh_n);
    const ScalarField sigma = make_phantom(effective_phantom(c), mesh);

    const std::string summary = key_value_csv({
        {"n", std::to_string(c.mesh_n)},
        {"min", format_real(sigma.min())},
        {"max", format_real(sigma.max())},
        {"max_gradient", format_real(max_gradient_norm(sigma))},
        {"w1inf", format_real(w1inf_norm(sigma))},
        {"l2", format_real(l2_norm(sigma))},
    });

    const fs::path dir = prepare_output(c);
    write_field_csv(dir / "sigma.csv", sigma);
    write_file_atomic(dir / "phantom_summary.csv", summary);
    if (c.write_vtk) {
        write_vtk(dir / "phantom.vtk", *mesh, {{"sigma", &sigma}});
    }
    log << "phantom: n=" << c.mesh_n << " min=" << format_real(sigma.min())
        << " max=" << format_real(sigma.max()) << '\n';
}

void cmd_forward(const RunConfig& c, std::ostream& log)
{
    validate(c);
    const MeshPtr mesh = make_mesh(c, c.mesh_n);
    const ScalarField sigma = make_phantom(effective_phantom(c), mesh);
    const ForwardResult fwd = simulate_forward(sigma);

    const std::string diagnostics = key_value_csv({
        {"n", std::to_string(c.mesh_n)},
        {"field_l2_norm", format_real(fwd.field_norm)},
        {"field_bound", format_real(field_bound(sigma))},
        {"divergence_identity_error", format_real(fwd.divergence_identity_error)},
        {"weak_divergence_residual", format_real(fwd.weak_divergence_residual)},
        {"data_l2_norm", format_real(l2_norm(fwd.data))},
        {"data_bound", format_real(forward_bound(sigma))},
        {"data_min", format_real(fwd.data.min())},
        {"data_max", format_real(fwd.data.max())},
        {"sigma_w1inf", format_real(w1inf_norm(sigma))},
    });

    const fs::path dir = prepare_output(c);
    write_field_csv(dir / "sigma.csv", sigma);
    write_field_csv(dir / "potential.csv", fwd.potential);
    write_field_csv(dir / "data.csv", fwd.data);
    write_vector_csv(dir / "field.csv", fwd.field);
    write_file_atomic(dir / "diagnostics.csv", diagnostics);
    if (c.write_vtk) {
        write_vtk(dir / "forward.vtk", *mesh,
                  {{"sigma", &sigma}, {"potential", &fwd.potential}, {"data", &fwd.data}});
    }
    log << "forward: n=" << c.mesh_n << " |E|=" << format_real(fwd.field_norm)
        << " div-identity=" << format_real(fwd.divergence_identity_error) << '\n';
}

void cmd_invert(const RunConfig& c, std::ostream& log)
{
    validate(c);
    if (!c.data_file.empty() && !fs::is_regular_file(c.data_file)) {
        throw IoError("data file not found: " + c.data_file);
    }
    const InvertRun run = run_inversion(c, effective_phantom(c), c.mesh_n);
    const ReconReport& report = run.result.report;

    std::vector<std::pair<std::string, std::string>> fit_rows = {
        {"iterations", std::to_string(report.iterations)},
        {"stop_reason", to_string(report.stop_reason)},
        {"error_monotone", report.error_monotone ? "true" : "false"},
    };
    if (report.fit) {
        fit_rows.emplace_back("c", format_real(report.fit->factor));
        fit_rows.emplace_back("r_squared", format_real(report.fit->r_squared));
        fit_rows.emplace_back("fit_points", std::to_string(report.fit->points));
    }

    const fs::path dir = prepare_output(c);
    write_field_csv(dir / "sigma.csv", run.result.sigma);
    write_field_csv(dir / "data.csv", run.data);
    write_file_atomic(dir / "report.csv", report_csv(report));
    write_file_atomic(dir / "fit.csv", key_value_csv(fit_rows));
    if (run.truth) {
        write_field_csv(dir / "truth.csv", *run.truth);
    }
    if (c.write_vtk) {
        std::vector<NamedField> fields = {{"sigma", &run.result.sigma}, {"data", &run.data}};
        if (run.truth) fields.emplace_back("truth", &*run.truth);
        write_vtk(dir / "invert.vtk", *run.mesh, fields);
    }

    const auto& last = report.records.back();
    log << "invert: iterations=" << report.iterations << " stop=" << to_string(report.stop_reason)
        << " misfit=" << format_real(last.misfit);
    if (last.relative_error) log << " rel_error=" << format_real(*last.relative_error);
    if (report.fit) log << " c=" << format_real(report.fit->factor);
    log << '\n';
}

void cmd_study(const RunConfig& c, std::ostream& log)
{
    validate(c);
    if (c.study.mesh_sizes.empty() && c.study.amplitude_scales.empty()) {
        throw ConfigError("empty sweep", "study");
    }
    const std::vector<int> sizes =
        c.study.mesh_sizes.empty() ? std::vector<int>{c.mesh_n} : c.study.mesh_sizes;
    const std::vector<double> scales = c.study.amplitude_scales.empty()
        ? std::vector<double>{1.0}
        : c.study.amplitude_scales;
    const PhantomSpec base = effective_phantom(c);

    std::string summary = "run,n,amplitude_scale,gradient_sup_norm,iterations,final_rel_error,"
                          "final_abs_error,c,r_squared,divergence_identity_error,status\n";
    int run_id = 0;
    for (int n : sizes) {
        for (double scale : scales) {
            const PhantomSpec spec = scaled(base, scale);
            std::string row = std::to_string(run_id++) + ',' + std::to_string(n) + ','
                + format_real(scale) + ',';
            try {
                const MeshPtr mesh = make_mesh(c, n);
                const ScalarField truth = make_phantom(spec, mesh);
                const double div_err = divergence_identity_error(compute_field(truth).field);
                const InvertRun run = run_inversion(c, spec, n);
                const ReconReport& report = run.result.report;
                const auto& last = report.records.back();
                row += format_real(max_gradient_norm(truth)) + ',' + std::to_string(report.iterations)
                    + ',' + opt_real(last.relative_error) + ',' + opt_real(last.absolute_error) + ','
                    + (report.fit ? format_real(report.fit->factor) : std::string()) + ','
                    + (report.fit ? format_real(report.fit->r_squared) : std::string()) + ','
                    + format_real(div_err) + ",ok\n";
            } catch (const Error& e) {
                row += ",,,,,,," + csv_safe(std::string("failed: ") + e.what()) + '\n';
            }
            log << "study: " << row;
            summary += row;
        }
    }

    const fs::path dir = prepare_output(c);
    write_file_atomic(dir / "summary.csv", summary);
}

int exit_code_for_current_exception(std::ostream& err)
{
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "config error";
        if (e.line() > 0) err << " (line " << e.line() << ")";
        if (!e.key().empty()) err << " [" << e.key() << "]";
        err << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitSolver;
    }
}

int run_command(const RunConfig& config, std::ostream& log, std::ostream& err)
{
    try {
        switch (config.command) {
        case Command::Phantom:
            cmd_phantom(config, log);
            break;
        case Command::Forward:
            cmd_forward(config, log);
            break;
        case Command::Invert:
            cmd_invert(config, log);
            break;
        case Command::Study:
            cmd_study(config, log);
            break;
        }
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
    return kExitOk;
}

} // namespace matmi
