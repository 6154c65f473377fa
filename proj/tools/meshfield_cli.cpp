#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meshfield/analysis.hpp"
#include "meshfield/analytic.hpp"
#include "meshfield/centres.hpp"
#include "meshfield/fit.hpp"
#include "meshfield/grid.hpp"
#include "meshfield/hhd.hpp"
#include "meshfield/sample_set.hpp"

namespace mf = meshfield;

namespace {

struct GlobalOptions {
    std::string kernel = "gaussian";
    double sigma = 1.0;
    std::optional<double> support;
    double epsilon = 1e-10;
    unsigned seed = 1;
    double delta = 1.0;
    std::string config_path;

    mf::Kernel make_kernel() const {
        return mf::Kernel(mf::Kernel::family_from_name(kernel), sigma, support);
    }
};

/// Registers the shared flags on a subcommand; every subcommand accepts the
/// full global set so "--config file" plus overrides works uniformly.
void add_globals(CLI::App* cmd, GlobalOptions& g) {
    cmd->add_option("--kernel", g.kernel, "kernel family name");
    cmd->add_option("--sigma", g.sigma, "kernel shape parameter");
    cmd->add_option("--support", g.support, "support radius for local kernels");
    cmd->add_option("--epsilon", g.epsilon, "regularization added to normal equations");
    cmd->add_option("--seed", g.seed, "seed for every stochastic choice");
    cmd->add_option("--delta", g.delta, "weight of the vector term in the fit energy");
    cmd->add_option("--config", g.config_path, "JSON file with defaults for these flags");
}

/// Values from the JSON config file apply only where the command line did
/// not set the flag explicitly.
void apply_config(const CLI::App* cmd, GlobalOptions& g) {
    if (g.config_path.empty()) return;
    std::ifstream in(g.config_path);
    if (!in) throw mf::InputError("cannot read config file '" + g.config_path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
    if (j.contains("kernel") && unset("--kernel")) g.kernel = j["kernel"].get<std::string>();
    if (j.contains("sigma") && unset("--sigma")) g.sigma = j["sigma"].get<double>();
    if (j.contains("support") && unset("--support")) g.support = j["support"].get<double>();
    if (j.contains("epsilon") && unset("--epsilon")) g.epsilon = j["epsilon"].get<double>();
    if (j.contains("seed") && unset("--seed")) g.seed = j["seed"].get<unsigned>();
    if (j.contains("delta") && unset("--delta")) g.delta = j["delta"].get<double>();
}

mf::Box parse_box(const std::vector<double>& bounds, int dim) {
    if (static_cast<int>(bounds.size()) != 2 * dim)
        throw mf::ConfigError("--box needs " + std::to_string(2 * dim) +
                              " numbers (lo,hi per axis)");
    mf::Box box;
    for (int a = 0; a < dim; ++a) {
        box.lo[a] = bounds[2 * a];
        box.hi[a] = bounds[2 * a + 1];
        if (!(box.lo[a] < box.hi[a])) throw mf::ConfigError("--box bounds must be increasing");
    }
    return box;
}

/// Point list CSV (x,y[,z] header); lines starting with '#' are skipped.
std::vector<mf::Vec3> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mf::InputError("cannot read '" + path + "'");
    std::vector<mf::Vec3> pts;
    std::string line;
    bool header_seen = false;
    int dim = 2;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            dim = line.find('z') != std::string::npos ? 3 : 2;
            continue;
        }
        std::istringstream row(line);
        mf::Vec3 p = mf::Vec3::Zero();
        char comma;
        row >> p.x() >> comma >> p.y();
        if (dim == 3) row >> comma >> p.z();
        if (!row) throw mf::InputError("malformed point row: " + line);
        pts.push_back(p);
    }
    return pts;
}

void write_points_csv(const std::string& path, const std::vector<mf::Vec3>& pts, int dim,
                      unsigned seed) {
    std::ofstream out(path);
    if (!out) throw mf::InputError("cannot open '" + path + "' for writing");
    out << "# seed " << seed << '\n';
    out << (dim == 3 ? "x,y,z" : "x,y") << '\n';
    out.precision(17);
    for (const mf::Vec3& p : pts) {
        out << p.x() << ',' << p.y();
        if (dim == 3) out << ',' << p.z();
        out << '\n';
    }
}

mf::CentreStrategy parse_strategy(const std::string& name) {
    if (name == "importance") return mf::CentreStrategy::KernelImportance;
    if (name == "uniform") return mf::CentreStrategy::Uniform;
    if (name == "random") return mf::CentreStrategy::Random;
    if (name == "adaptive") return mf::CentreStrategy::AdaptiveResidual;
    if (name == "kmeans") return mf::CentreStrategy::KMeans;
    throw mf::ConfigError("unknown centre strategy '" + name +
                          "' (importance|uniform|random|adaptive|kmeans)");
}

/// A model file may hold either potential type; the type tag decides.
struct LoadedModel {
    std::optional<mf::ScalarPotentialModel> scalar;
    std::optional<mf::VectorPotentialModel> vector;

    int dimension() const { return scalar ? scalar->dimension() : vector->dimension(); }
    const std::vector<mf::Vec3>& centres() const {
        return scalar ? scalar->centres() : vector->centres();
    }
    mf::Vec3 field(const mf::Vec3& p) const {
        return scalar ? scalar->gradient(p) : vector->curl(p);
    }
};

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mf::InputError("cannot read model file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buffer.str());
    LoadedModel m;
    std::string type = j.value("type", "");
    if (type == "scalar_potential")
        m.scalar = mf::ScalarPotentialModel::from_json(buffer.str());
    else if (type == "vector_potential")
        m.vector = mf::VectorPotentialModel::from_json(buffer.str());
    else
        throw mf::InputError("model file '" + path + "' has unknown type '" + type + "'");
    return m;
}

mf::Box box_from_points(const std::vector<mf::Vec3>& pts) {
    mf::Box box;
    box.lo = box.hi = pts.at(0);
    for (const mf::Vec3& p : pts) {
        box.lo = box.lo.cwiseMin(p);
        box.hi = box.hi.cwiseMax(p);
    }
    return box;
}

// ---------------------------------------------------------------- commands

int cmd_fit(const GlobalOptions& g, const std::string& input, const std::string& output,
            const std::string& strategy, int centre_count, const std::string& centres_file) {
    mf::SampleSet samples = mf::read_samples_csv_file(input);
    samples.validate();

    mf::FitConfig cfg;
    cfg.kernel = g.make_kernel();
    cfg.delta = g.delta;
    cfg.epsilon = g.epsilon;
    if (!centres_file.empty()) {
        cfg.centres = read_points_csv(centres_file);
    } else if (!strategy.empty()) {
        mf::CentreSelection sel;
        sel.strategy = parse_strategy(strategy);
        sel.target_count = centre_count;
        sel.seed = g.seed;
        sel.fit_kernel = cfg.kernel;
        sel.fit_epsilon = g.epsilon;
        cfg.centres = mf::select_centres(samples, sel);
    }

    mf::FitReport report;
    mf::ScalarPotentialModel model = mf::fit_mixed(samples, cfg, &report);
    model.save(output);

    std::cout << "seed: " << g.seed << '\n'
              << "samples: " << samples.size() << "  centres: " << model.centres().size() << '\n'
              << "energy: " << report.energy << '\n'
              << "relative residual: " << report.relative_residual << '\n'
              << "condition estimate: " << report.condition_estimate << '\n';
    for (const std::string& w : report.warnings) std::cout << "warning: " << w << '\n';
    std::cout << "model written to " << output << '\n';
    return 0;
}

int cmd_hhd(const GlobalOptions& g, const std::string& input, const std::string& outdir,
            const std::string& strategy, int quadrature, const std::string& fit_mode,
            const std::string& centres_file) {
    mf::SampleSet samples = mf::read_samples_csv_file(input);
    samples.validate();

    mf::HHDConfig cfg;
    cfg.kernel = g.make_kernel();
    cfg.epsilon = g.epsilon;
    cfg.quadrature = quadrature;
    if (strategy == "direct")
        cfg.strategy = mf::HHDStrategy::Direct;
    else if (strategy == "weighted")
        cfg.strategy = mf::HHDStrategy::Weighted;
    else if (strategy == "laplace")
        cfg.strategy = mf::HHDStrategy::Laplace;
    else
        throw mf::ConfigError("unknown strategy '" + strategy + "' (direct|weighted|laplace)");
    if (fit_mode == "sequential")
        cfg.fit_mode = mf::HHDFitMode::SequentialResidual;
    else if (fit_mode != "independent")
        throw mf::ConfigError("unknown fit mode '" + fit_mode + "' (independent|sequential)");
    if (!centres_file.empty()) cfg.centres = read_points_csv(centres_file);

    mf::HHDResult result = mf::decompose(samples, cfg);
    result.conservative.save(outdir + "/u_model.json");
    result.solenoidal.save(outdir + "/w_model.json");

    mf::SampleSet harmonic = samples;
    harmonic.scalar_values.clear();
    harmonic.vector_values.clear();
    for (std::size_t i = 0; i < samples.size(); ++i)
        harmonic.vector_values.emplace_back(static_cast<int>(i), result.harmonic_samples[i]);
    std::ofstream hout(outdir + "/harmonic.csv");
    if (!hout) throw mf::InputError("cannot write to output directory '" + outdir + "'");
    mf::write_samples_csv(hout, harmonic);

    mf::ExactnessDiagnostics diag = mf::residual_diagnostics(result, samples, 200, g.seed);
    std::ostringstream report;
    report << "seed: " << g.seed << '\n'
           << "strategy: " << result.diagnostics.strategy << '\n'
           << mf::to_string(diag)
           << "condition (conservative): " << result.diagnostics.condition_conservative << '\n'
           << "condition (solenoidal): " << result.diagnostics.condition_solenoidal << '\n';
    if (cfg.strategy == mf::HHDStrategy::Laplace)
        report << "regularization shift: " << result.diagnostics.regularization_shift << '\n';
    std::ofstream dout(outdir + "/diagnostics.txt");
    dout << report.str();
    std::cout << report.str() << "components written to " << outdir << '\n';
    return 0;
}

int cmd_centres(const GlobalOptions& g, const std::string& input, const std::string& output,
                const std::string& strategy, int count, const std::string& source,
                double residual_threshold, int max_count) {
    mf::SampleSet samples = mf::read_samples_csv_file(input);
    samples.validate();
    mf::CentreSelection sel;
    sel.strategy = parse_strategy(strategy);
    sel.target_count = count;
    sel.seed = g.seed;
    sel.residual_threshold = residual_threshold;
    sel.max_count = max_count;
    sel.fit_kernel = g.make_kernel();
    sel.fit_epsilon = g.epsilon;
    if (source == "potential")
        sel.importance_source = mf::ImportanceSource::PotentialValue;
    else if (source != "field")
        throw mf::ConfigError("unknown importance source '" + source + "' (field|potential)");
    std::vector<mf::Vec3> centres = mf::select_centres(samples, sel);
    write_points_csv(output, centres, samples.dimension, g.seed);
    std::cout << "seed: " << g.seed << '\n'
              << "selected " << centres.size() << " centres -> " << output << '\n';
    return 0;
}

int cmd_eval_grid(const GlobalOptions& g, const std::string& model_path,
                  const std::vector<int>& resolution, const std::vector<double>& box_bounds,
                  const std::string& output, const std::string& vtk_path,
                  const std::string& reference_field) {
    LoadedModel model = load_model(model_path);
    const int dim = model.dimension();

    mf::GridSpec spec;
    spec.dimension = dim;
    if (resolution.size() == 1)
        spec.resolution = {resolution[0], resolution[0], dim == 3 ? resolution[0] : 1};
    else if (static_cast<int>(resolution.size()) == dim) {
        spec.resolution = {resolution[0], resolution[1], dim == 3 ? resolution[2] : 1};
    } else {
        throw mf::ConfigError("--resolution needs 1 value or one per axis");
    }
    spec.box = box_bounds.empty() ? box_from_points(model.centres()) : parse_box(box_bounds, dim);
    spec.validate();

    mf::GridField grid = model.scalar
                             ? mf::eval_grid(*model.scalar, spec)
                             : mf::eval_grid([&](const mf::Vec3& p) { return model.field(p); },
                                             spec);

    std::ofstream out(output);
    if (!out) throw mf::InputError("cannot open '" + output + "' for writing");
    out << "# seed " << g.seed << '\n';
    mf::write_grid_csv(out, grid);
    if (!vtk_path.empty()) mf::write_grid_vtk_file(vtk_path, grid, "meshfield grid");

    mf::FootprintReport fp = mf::footprint(model.centres().size(), dim, spec);
    std::cout << "seed: " << g.seed << '\n'
              << "grid nodes: " << spec.node_count() << " (" << fp.grid_numbers << " numbers)\n"
              << "model numbers: " << fp.model_numbers << '\n'
              << "compression ratio: " << fp.compression_ratio << '\n'
              << "centre/point ratio p: " << fp.centre_point_ratio << '\n';

    if (!reference_field.empty()) {
        mf::AnalyticField ref = mf::make_analytic_field(reference_field);
        double max_diff = 0.0, max_ref = 0.0;
        for (std::size_t i = 0; i < grid.points.size(); ++i) {
            mf::Vec3 exact = ref.field(grid.points[i]);
            max_diff = std::max(max_diff, (grid.vectors[i] - exact).norm());
            max_ref = std::max(max_ref, exact.norm());
        }
        std::cout << "linf error vs " << reference_field << ": "
                  << (max_ref > 0 ? max_diff / max_ref : max_diff) << '\n';
    }
    std::cout << "grid written to " << output << '\n';
    return 0;
}

int cmd_streamlines(const GlobalOptions& g, const std::string& model_path,
                    const std::string& seeds_path, double step, int max_steps,
                    const std::string& direction, const std::vector<double>& box_bounds,
                    const std::string& output) {
    LoadedModel model = load_model(model_path);
    const int dim = model.dimension();

    mf::StreamlineSpec spec;
    spec.seed_points = read_points_csv(seeds_path);
    spec.step_size = step;
    spec.max_steps = max_steps;
    if (direction == "forward")
        spec.direction = mf::TraceDirection::Forward;
    else if (direction == "backward")
        spec.direction = mf::TraceDirection::Backward;
    else if (direction == "both")
        spec.direction = mf::TraceDirection::Both;
    else
        throw mf::ConfigError("unknown direction '" + direction + "' (forward|backward|both)");

    mf::Box box = box_bounds.empty() ? box_from_points(model.centres()).padded(0.05)
                                     : parse_box(box_bounds, dim);
    auto lines = mf::trace_streamlines([&](const mf::Vec3& p) { return model.field(p); }, spec,
                                       box, dim);
    std::ofstream out(output);
    if (!out) throw mf::InputError("cannot open '" + output + "' for writing");
    out << "# seed " << g.seed << '\n';
    mf::write_streamlines_csv(out, lines, dim);

    int outside = 0;
    for (const auto& l : lines)
        if (l.seed_outside) ++outside;
    std::cout << "seed: " << g.seed << '\n'
              << "traced " << lines.size() << " streamlines -> " << output << '\n';
    if (outside > 0)
        std::cout << "warning: " << outside << " seed(s) outside the box, left empty\n";
    return 0;
}

int cmd_critical_points(const GlobalOptions& g, const std::string& model_path,
                        const std::string& guesses_path, int per_axis,
                        const std::vector<double>& box_bounds, double tolerance,
                        int max_iterations, const std::string& output) {
    LoadedModel loaded = load_model(model_path);
    if (!loaded.scalar)
        throw mf::InputError("critical-points needs a scalar potential model");
    const mf::ScalarPotentialModel& model = *loaded.scalar;
    const int dim = model.dimension();

    mf::Box box = box_bounds.empty() ? box_from_points(model.centres())
                                     : parse_box(box_bounds, dim);
    std::vector<mf::Vec3> guesses = guesses_path.empty()
                                        ? mf::default_critical_point_guesses(box, dim, per_axis)
                                        : read_points_csv(guesses_path);

    mf::CriticalPointOptions opts;
    opts.tolerance = tolerance;
    opts.max_iterations = max_iterations;
    opts.restrict_to_box = true;
    opts.box = box;
    auto points = mf::find_critical_points(model, guesses, opts);

    std::ofstream out(output);
    if (!out) throw mf::InputError("cannot open '" + output + "' for writing");
    out << "# seed " << g.seed << '\n';
    out << (dim == 3 ? "x,y,z" : "x,y") << ",type,gradient_norm,iterations,converged\n";
    out.precision(17);
    std::cout << "seed: " << g.seed << '\n';
    for (const auto& cp : points) {
        out << cp.location.x() << ',' << cp.location.y();
        if (dim == 3) out << ',' << cp.location.z();
        out << ',' << mf::to_string(cp.classification) << ',' << cp.gradient_norm << ','
            << cp.iterations << ',' << (cp.converged ? 1 : 0) << '\n';
        if (cp.converged)
            std::cout << mf::to_string(cp.classification) << " at (" << cp.location.x() << ", "
                      << cp.location.y() << (dim == 3 ? ", " + std::to_string(cp.location.z()) : "")
                      << ")  |grad u| = " << cp.gradient_norm << '\n';
    }
    std::cout << "critical points written to " << output << '\n';
    return 0;
}

int cmd_metrics(const GlobalOptions& g, const std::string& reference_path,
                const std::string& candidate_path) {
    mf::SampleSet ref = mf::read_samples_csv_file(reference_path);
    mf::SampleSet cand = mf::read_samples_csv_file(candidate_path);
    if (ref.vector_values.size() != cand.vector_values.size())
        throw mf::InputError("reference and candidate carry different numbers of vectors");
    std::vector<mf::Vec3> a, b;
    for (const auto& [idx, v] : ref.vector_values) a.push_back(v);
    for (const auto& [idx, v] : cand.vector_values) b.push_back(v);
    std::cout << "seed: " << g.seed << '\n' << mf::to_string(mf::compute_metrics(a, b, ref.dimension));
    return 0;
}

int cmd_noise(const GlobalOptions& g, const std::string& input, double level,
              const std::string& output) {
    mf::SampleSet samples = mf::read_samples_csv_file(input);
    mf::SampleSet noisy = mf::add_noise(samples, level, g.seed);
    std::ofstream out(output);
    if (!out) throw mf::InputError("cannot open '" + output + "' for writing");
    mf::write_samples_csv(out, noisy);
    std::cout << "seed: " << g.seed << '\n'
              << "noise level " << level << " applied -> " << output << '\n';
    return 0;
}

int cmd_bound(const GlobalOptions& g, const std::string& model_path,
              const std::string& samples_path, double noise_norm) {
    LoadedModel model = load_model(model_path);
    mf::SampleSet samples = mf::read_samples_csv_file(samples_path);
    double bound = model.scalar
                       ? mf::gradient_stability_bound(*model.scalar, samples.points, noise_norm)
                       : mf::rotor_stability_bound(*model.vector, samples.points, noise_norm);
    std::cout << "seed: " << g.seed << '\n'
              << (model.scalar ? "gradient" : "rotor") << " stability bound: " << bound << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meshless potential fitting, decomposition, and field analysis"};
    app.require_subcommand(1);
    GlobalOptions g;

    // fit
    std::string in_path, out_path = "model.json", centres_file, strategy, source = "field";
    int count = 100;
    auto* fit = app.add_subcommand("fit", "fit a scalar potential to sampled data");
    fit->add_option("input", in_path, "sample CSV")->required();
    fit->add_option("-o,--output", out_path, "model file path");
    fit->add_option("--centres-strategy", strategy,
                    "importance|uniform|random|adaptive|kmeans (default: all constrained points)");
    fit->add_option("--centres-count", count, "target centre count");
    fit->add_option("--centres-file", centres_file, "explicit centre CSV");
    add_globals(fit, g);

    // hhd
    std::string hhd_out = ".", hhd_strategy = "direct", fit_mode = "independent";
    int quadrature = 32;
    auto* hhd = app.add_subcommand("hhd", "decompose a sampled vector field");
    hhd->add_option("input", in_path, "sample CSV with vector values")->required();
    hhd->add_option("-o,--output-dir", hhd_out, "output directory");
    hhd->add_option("--strategy", hhd_strategy, "direct|weighted|laplace");
    hhd->add_option("--quadrature", quadrature, "quadrature nodes per axis (weighted)");
    hhd->add_option("--fit-mode", fit_mode, "independent|sequential");
    hhd->add_option("--centres-file", centres_file, "explicit centre CSV");
    add_globals(hhd, g);

    // centres
    std::string centre_strategy = "importance";
    double residual_threshold = 0.05;
    int max_count = 5000;
    auto* centres = app.add_subcommand("centres", "select RBF centres from samples");
    centres->add_option("input", in_path, "sample CSV")->required();
    centres->add_option("-o,--output", out_path, "centre CSV path")->required();
    centres->add_option("--strategy", centre_strategy,
                        "importance|uniform|random|adaptive|kmeans");
    centres->add_option("--count", count, "target centre count");
    centres->add_option("--importance", source, "field|potential");
    centres->add_option("--residual-threshold", residual_threshold,
                        "adaptive stop threshold");
    centres->add_option("--max-count", max_count, "adaptive centre cap");
    add_globals(centres, g);

    // eval-grid
    std::string model_path, vtk_path, reference_field;
    std::vector<int> resolution;
    std::vector<double> box_bounds;
    auto* eval = app.add_subcommand("eval-grid", "evaluate a model on a regular grid");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--resolution", resolution, "nodes per axis (1 value or one per axis)")
        ->required()
        ->delimiter(',');
    eval->add_option("--box", box_bounds, "lo,hi per axis (default: centre bounding box)")
        ->delimiter(',');
    eval->add_option("-o,--output", out_path, "grid CSV path");
    eval->add_option("--vtk", vtk_path, "also write legacy VTK structured points");
    eval->add_option("--reference", reference_field,
                     "analytic field name to report the linf error against");
    add_globals(eval, g);

    // streamlines
    std::string seeds_path, direction = "forward";
    double step = 1e-2;
    int max_steps = 1000;
    auto* stream = app.add_subcommand("streamlines", "trace field streamlines");
    stream->add_option("--model", model_path, "model file")->required();
    stream->add_option("--seeds", seeds_path, "seed point CSV")->required();
    stream->add_option("--step", step, "integration step size");
    stream->add_option("--max-steps", max_steps, "step cap per direction");
    stream->add_option("--direction", direction, "forward|backward|both");
    stream->add_option("--box", box_bounds, "tracing bounds, lo,hi per axis")->delimiter(',');
    stream->add_option("-o,--output", out_path, "polyline CSV path")->required();
    add_globals(stream, g);

    // critical-points
    std::string guesses_path;
    int per_axis = 5;
    double tolerance = 1e-12;
    int max_iterations = 100;
    auto* crit = app.add_subcommand("critical-points", "locate and classify zeros of grad u");
    crit->add_option("--model", model_path, "scalar potential model file")->required();
    crit->add_option("--guesses", guesses_path, "seed guess CSV (default: regular grid)");
    crit->add_option("--per-axis", per_axis, "default guess grid resolution");
    crit->add_option("--box", box_bounds, "search bounds, lo,hi per axis")->delimiter(',');
    crit->add_option("--tolerance", tolerance, "gradient norm convergence threshold");
    crit->add_option("--max-iterations", max_iterations, "iteration cap per guess");
    crit->add_option("-o,--output", out_path, "critical point CSV path")->required();
    add_globals(crit, g);

    // metrics
    std::string reference_path, candidate_path;
    auto* metrics = app.add_subcommand("metrics", "compare two sampled vector fields");
    metrics->add_option("--reference", reference_path, "reference sample CSV")->required();
    metrics->add_option("--candidate", candidate_path, "candidate sample CSV")->required();
    add_globals(metrics, g);

    // noise
    double level = 0.0;
    auto* noise = app.add_subcommand("noise", "perturb vector samples with Gaussian noise");
    noise->add_option("input", in_path, "sample CSV")->required();
    noise->add_option("--level", level, "std as a fraction of the per-component RMS")
        ->required();
    noise->add_option("-o,--output", out_path, "noisy sample CSV path")->required();
    add_globals(noise, g);

    // bound
    double noise_norm = 0.0;
    auto* bound = app.add_subcommand("bound", "perturbation stability bound for a model");
    bound->add_option("--model", model_path, "model file")->required();
    bound->add_option("--samples", in_path, "sample CSV defining the system points")->required();
    bound->add_option("--noise-norm", noise_norm, "norm of the data perturbation")->required();
    add_globals(bound, g);

    try {
        app.parse(argc, argv);
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub, g);
        if (sub == fit) return cmd_fit(g, in_path, out_path, strategy, count, centres_file);
        if (sub == hhd)
            return cmd_hhd(g, in_path, hhd_out, hhd_strategy, quadrature, fit_mode, centres_file);
        if (sub == centres)
            return cmd_centres(g, in_path, out_path, centre_strategy, count, source,
                               residual_threshold, max_count);
        if (sub == eval)
            return cmd_eval_grid(g, model_path, resolution, box_bounds, out_path, vtk_path,
                                 reference_field);
        if (sub == stream)
            return cmd_streamlines(g, model_path, seeds_path, step, max_steps, direction,
                                   box_bounds, out_path);
        if (sub == crit)
            return cmd_critical_points(g, model_path, guesses_path, per_axis, box_bounds,
                                       tolerance, max_iterations, out_path);
        if (sub == metrics) return cmd_metrics(g, reference_path, candidate_path);
        if (sub == noise) return cmd_noise(g, in_path, level, out_path);
        if (sub == bound) return cmd_bound(g, model_path, in_path, noise_norm);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
