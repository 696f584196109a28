#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gheat/csv.hpp"
#include "gheat/fujita.hpp"
#include "gheat/run_config.hpp"
#include "gheat/svg.hpp"

namespace gheat {

/// What a run leaves behind: the one-line stdout summary and the
/// artifact paths written (all atomically, complete-or-absent).
struct RunOutcome {
    std::string summary;
    std::vector<std::filesystem::path> artifacts;
};

namespace run_detail {

/// Pass thresholds for the axiom report, pinned once so the stdout
/// verdict and any test built on it agree.
constexpr double axiom_symmetry_tol = 1e-10;
constexpr double axiom_conservation_tol = 1e-9;
constexpr double axiom_semigroup_tol = 1e-9;
constexpr double axiom_heat_equation_tol = 1e-5;

inline bool axioms_pass(const KernelAxiomReport& rep) {
    return rep.max_symmetry_error <= axiom_symmetry_tol && rep.min_kernel_value > 0.0 &&
           rep.max_conservation_defect <= axiom_conservation_tol &&
           rep.max_semigroup_defect <= axiom_semigroup_tol &&
           rep.max_heat_equation_residual <= axiom_heat_equation_tol;
}

inline std::string axiom_text(const KernelAxiomReport& rep) {
    std::string out;
    out += "times:";
    for (double t : rep.times) out += " " + format_double(t);
    out += "\n";
    out += "max_symmetry_error: " + format_double(rep.max_symmetry_error) + "\n";
    out += "min_kernel_value: " + format_double(rep.min_kernel_value) + "\n";
    out += "max_conservation_defect: " + format_double(rep.max_conservation_defect) + "\n";
    out += "max_semigroup_defect: " + format_double(rep.max_semigroup_defect) + "\n";
    out += "max_heat_equation_residual: " + format_double(rep.max_heat_equation_residual) + "\n";
    out += std::string("verdict: ") + (axioms_pass(rep) ? "pass" : "fail") + "\n";
    return out;
}

inline std::string bounds_text(const std::vector<BoundCheckReport>& reports) {
    std::string out;
    for (const BoundCheckReport& rep : reports) {
        out += std::string(to_string(rep.id)) + ": " + (rep.holds ? "holds" : "fails");
        out += " worst_ratio=" + format_double(rep.worst_ratio);
        out += " at t=" + format_double(rep.worst_t) + " x=" + std::to_string(rep.worst_x) +
               " y=" + std::to_string(rep.worst_y);
        out += " t_range=[" + format_double(rep.t_min) + "," + format_double(rep.t_max) + "]";
        if (rep.id == BoundId::diagonal_upper)
            out += " fitted_c1=" + format_double(rep.fitted_c1);
        if (rep.clipped) out += " clipped";
        out += "\n";
    }
    return out;
}

inline std::string bound_samples_csv(const std::vector<BoundCheckReport>& reports) {
    std::string out = "bound,t,x,y,kernel,reference\n";
    for (const BoundCheckReport& rep : reports)
        for (const BoundSample& s : rep.samples) {
            out += std::string(to_string(rep.id));
            out += "," + format_double(s.t) + "," + std::to_string(s.x) + "," +
                   std::to_string(s.y) + "," + format_double(s.kernel) + "," +
                   format_double(s.reference) + "\n";
        }
    return out;
}

inline std::string classification_text(const Classification& cls, const Trajectory& traj) {
    std::string out;
    out += std::string("status: ") + std::string(to_string(traj.status)) + "\n";
    out += std::string("verdict: ") + std::string(to_string(cls.verdict)) + "\n";
    out += "horizon: " + format_double(cls.horizon) + "\n";
    out += "initial_sup: " + format_double(cls.initial_sup) + "\n";
    out += "final_sup: " + format_double(cls.final_sup) + "\n";
    out += "max_sup: " + format_double(cls.max_sup) + "\n";
    out += "initial_metric: " + format_double(cls.initial_metric) + "\n";
    out += "final_metric: " + format_double(cls.final_metric) + "\n";
    out += "mass_growth_rate: " + format_double(cls.mass_growth_rate) + "\n";
    if (traj.status == TrajectoryStatus::blew_up) {
        out += "blow_up_time: " + format_double(traj.blow_up_time) + "\n";
        out += "blow_up_bracket: " + format_double(traj.blow_up_bracket) + "\n";
    }
    return out;
}

/// Wrap a fixed-point grid iterate as a trajectory so the CSV/SVG
/// writers can be reused verbatim.
inline Trajectory state_to_trajectory(const Graph& g, const PicardState& state, double alpha) {
    Trajectory traj;
    traj.alpha = alpha;
    traj.status = TrajectoryStatus::completed_horizon;
    traj.times = state.grid.nodes;
    traj.states = state.iterate;
    traj.mass_series.reserve(state.iterate.size());
    traj.reaction_series.reserve(state.iterate.size());
    for (const Field& u : state.iterate) {
        traj.mass_series.push_back(integrate(g, u));
        traj.reaction_series.push_back(
            integrate(g, Field(u.array().pow(1.0 + alpha).matrix())));
    }
    return traj;
}

inline std::filesystem::path put(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content,
                                 std::vector<std::filesystem::path>& artifacts) {
    const std::filesystem::path target = dir / name;
    write_file_atomic(target, content);
    artifacts.push_back(target);
    return target;
}

}  // namespace run_detail

/**
 * Execute one validated configuration: build or load the graph, run the
 * selected command, write its artifacts atomically under out_dir, and
 * return the one-line summary for stdout. Module errors propagate as
 * gheat::error so the caller can map them to exit codes.
 */
inline RunOutcome run(const RunConfig& config) {
    namespace rd = run_detail;
    RunOutcome outcome;
    const std::filesystem::path& dir = config.out_dir;
    Graph g = config.graph.build();

    switch (config.command) {
        case Command::graph: {
            rd::put(dir, config.graph_params.save, graph_to_json(g), outcome.artifacts);
            const StructuralConstants sc = g.structural_constants();
            std::string text;
            text += "vertices: " + std::to_string(g.vertex_count()) + "\n";
            text += "edges: " + std::to_string(g.edges().size()) + "\n";
            text += "total_measure: " + format_double(g.total_measure()) + "\n";
            text += "diameter: " + std::to_string(g.diameter()) + "\n";
            text += "max_degree: " + std::to_string(sc.max_degree) + "\n";
            text += "weight_range: [" + format_double(sc.min_weight) + "," +
                    format_double(sc.max_weight) + "]\n";
            text += "measure_range: [" + format_double(sc.min_mu) + "," +
                    format_double(sc.max_mu) + "]\n";
            text += "d_mu: " + format_double(sc.d_mu) + "\n";
            std::string fit_note;
            if (config.graph_params.fit_volume) {
                std::vector<int> centers = config.graph_params.volume_centers;
                if (centers.empty()) centers.push_back(0);
                const VolumeGrowthFit fit =
                    fit_volume_growth(g, centers, config.graph_params.volume_r_max,
                                      config.graph_params.volume_r_min);
                text += "growth_exponent: " + format_double(fit.exponent) + "\n";
                text += "growth_prefactor: " + format_double(fit.prefactor) + "\n";
                text += "growth_fit_residual: " + format_double(fit.residual) + "\n";
                text += "growth_fit_radii: [" + std::to_string(fit.r_min) + "," +
                        std::to_string(fit.r_max) + "]\n";
                fit_note = " growth_exponent=" + format_double(fit.exponent);
            }
            rd::put(dir, "summary.txt", text, outcome.artifacts);
            outcome.summary = "graph vertices=" + std::to_string(g.vertex_count()) +
                              " edges=" + std::to_string(g.edges().size()) +
                              " diameter=" + std::to_string(g.diameter()) + fit_note;
            break;
        }
        case Command::kernel: {
            const HeatKernelOperator hk(g, config.kernel.size_cap);
            outcome.summary = "kernel";
            if (config.kernel.axioms) {
                const KernelAxiomReport rep = verify_kernel_axioms(hk, config.kernel.times);
                rd::put(dir, "axioms.txt", rd::axiom_text(rep), outcome.artifacts);
                outcome.summary +=
                    std::string(" axioms=") + (rd::axioms_pass(rep) ? "pass" : "fail");
            } else {
                outcome.summary += " axioms=skipped";
            }
            if (!config.kernel.bounds.empty()) {
                const auto reports = verify_bounds(hk, config.kernel.bounds);
                rd::put(dir, "bounds.txt", rd::bounds_text(reports), outcome.artifacts);
                std::size_t holding = 0, sampled = 0;
                for (const auto& rep : reports) {
                    holding += rep.holds ? 1 : 0;
                    sampled += rep.samples.size();
                }
                if (sampled > 0)
                    rd::put(dir, "bound_samples.csv", rd::bound_samples_csv(reports),
                            outcome.artifacts);
                outcome.summary += " bounds=" + std::to_string(holding) + "/" +
                                   std::to_string(reports.size()) + " hold";
            }
            break;
        }
        case Command::curvature: {
            const CurvatureParams& p = config.curvature;
            const auto reports = falsify_curvature(g, p.condition, p.n, p.K, p.budget,
                                                   config.seed, p.options);
            rd::put(dir, "curvature.txt", format_curvature_reports(reports),
                    outcome.artifacts);
            std::size_t violated = 0;
            double worst = 0.0;
            for (const auto& rep : reports)
                if (rep.verdict == CurvatureVerdict::violated) {
                    ++violated;
                    worst = std::min(worst, rep.witness_residual);
                }
            if (violated == 0)
                outcome.summary = "no_violation_found " + std::to_string(reports.size()) + "/" +
                                  std::to_string(reports.size()) + " vertices";
            else
                outcome.summary = "violated " + std::to_string(violated) + "/" +
                                  std::to_string(reports.size()) +
                                  " vertices worst_residual=" + format_double(worst);
            break;
        }
        case Command::simulate: {
            const SimulateParams& p = config.simulate;
            ProblemSpec spec{g, p.alpha, p.initial.materialize(g), p.base_vertex};
            const Trajectory traj = integrate_semilinear(spec, p.control);
            const Classification cls =
                classify_trajectory(traj, p.control.horizon, p.decay_factor, p.use_spread);
            const std::string csv = trajectory_to_csv(traj);
            rd::put(dir, "trajectory.csv", csv, outcome.artifacts);
            rd::put(dir, "trajectory.svg", emit_plot(csv, "semilinear trajectory"),
                    outcome.artifacts);
            rd::put(dir, "classification.txt", rd::classification_text(cls, traj),
                    outcome.artifacts);
            if (traj.status == TrajectoryStatus::blew_up)
                outcome.summary = "blew_up T_b=" + format_double(traj.blow_up_time);
            else if (traj.status == TrajectoryStatus::step_underflow)
                outcome.summary =
                    "step_underflow final_sup=" + format_double(cls.final_sup);
            else
                outcome.summary = std::string(to_string(cls.verdict)) +
                                  " final_sup=" + format_double(cls.final_sup);
            break;
        }
        case Command::sweep: {
            const SweepParams& p = config.sweep;
            SweepFamily family{g, p.initial.materialize(g), p.volume_centers, p.volume_r_max};
            const auto rows = fujita_sweep(family, p.alphas, p.scales, p.control,
                                           p.decay_factor);
            const std::string csv = sweep_to_csv(rows);
            rd::put(dir, "sweep.csv", csv, outcome.artifacts);
            rd::put(dir, "sweep.svg", emit_plot(csv, "alpha/scale sweep"), outcome.artifacts);
            std::size_t blow = 0, decay = 0, open = 0;
            for (const SweepRow& row : rows) {
                if (row.verdict == Verdict::blow_up)
                    ++blow;
                else if (row.verdict == Verdict::decay_on_horizon)
                    ++decay;
                else
                    ++open;
            }
            outcome.summary = "sweep rows=" + std::to_string(rows.size()) +
                              " blow_up=" + std::to_string(blow) +
                              " decay_on_horizon=" + std::to_string(decay) +
                              " undetermined=" + std::to_string(open);
            break;
        }
        case Command::picard: {
            const PicardParams& p = config.picard;
            const HeatKernelOperator hk(g);
            Field a;
            if (p.initial.kind == InitialSpec::Kind::delta_weight) {
                const int e = *p.base_vertex;
                require(e >= 0 && e < g.vertex_count(), errc::unknown_vertex,
                        "picard.base_vertex out of range");
                a = Field(g.vertex_count());
                for (int x = 0; x < g.vertex_count(); ++x)
                    a[x] = p.initial.delta * hk.value(p.gamma, e, x);
                a = a.cwiseMax(0.0);  // spectral roundoff can dip below zero far from e
            } else {
                a = p.initial.materialize(g);
            }
            const PicardResult res = picard_solve(hk, a, p.alpha, p.gamma, p.grid,
                                                  p.max_iter, p.tol, p.base_vertex);
            std::string text = format_picard_result(res);
            text += std::string("delta_admissible: ") +
                    (delta_admissible(res.delta, p.alpha, res.c_tilde_grid_value) ? "true"
                                                                                  : "false") +
                    "\n";
            const Trajectory grid_traj =
                rd::state_to_trajectory(g, res.solution, p.alpha);
            const std::string csv = trajectory_to_csv(grid_traj);
            rd::put(dir, "solution.csv", csv, outcome.artifacts);
            rd::put(dir, "solution.svg", emit_plot(csv, "fixed-point solution"),
                    outcome.artifacts);
            outcome.summary = std::string(res.converged ? "converged" : "not_converged") +
                              " iterations=" + std::to_string(res.iterations) +
                              " residual=" + format_double(res.fixed_point_residual);
            if (p.crosscheck) {
                IntegrationControl control;
                control.rel_tol = 1e-10;
                control.abs_tol = 1e-12;
                control.horizon = p.grid.horizon();
                control.sample_times.assign(p.grid.nodes.begin() + 1, p.grid.nodes.end());
                ProblemSpec spec{g, p.alpha, a, res.solution.base_vertex};
                const Trajectory traj = integrate_semilinear(spec, control);
                const double gap = crosscheck_with_integrator(res.solution, traj);
                text += "integrator_crosscheck_gap: " + format_double(gap) + "\n";
                outcome.summary += " crosscheck_gap=" + format_double(gap);
            }
            rd::put(dir, "picard.txt", text, outcome.artifacts);
            break;
        }
    }
    return outcome;
}

}  // namespace gheat
