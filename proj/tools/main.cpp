// baysc: Bayesian spatial-domain clustering from the command line.
//
// Exit codes: 0 ok, 2 usage / invalid argument, 3 input format, 4 numeric
// failure, 1 anything else.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baysc/errors.hpp"
#include "commands.hpp"

namespace {

void add_model_options(CLI::App* cmd, baysc::cli::ModelOptions& o) {
    auto& f = o.fit;
    cmd->add_option("--sim", o.sims, "Similarity input, [name=]path (.bin cache or CSV with ids); repeatable")
        ->required();
    cmd->add_option("--coords", o.coords, "Coordinates CSV: cell_id,x,y")->required();
    cmd->add_option("--weight", o.weights, "Modality weight name=value; repeatable (default 1 each)");
    cmd->add_option("--lambda", f.lambda, "MRF interaction strength")->capture_default_str();
    cmd->add_option("--delta", f.delta, "Neighborhood distance threshold")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "MFM Dirichlet concentration")->capture_default_str();
    cmd->add_option("--iterations", f.n_iterations, "Gibbs sweeps")->capture_default_str();
    cmd->add_option("--burnin", f.n_burnin, "Discarded initial sweeps")->capture_default_str();
    cmd->add_option("--thin", f.thin, "Keep every thin-th post-burn-in sweep")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--init-k", f.init_k, "Initial number of domains")->capture_default_str();
    cmd->add_option("--init", o.init, "Initial labels: kmeans or uniform")->capture_default_str();
    cmd->add_option("--k0", f.k0, "Normal-Gamma prior sample size")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Normal-Gamma shape")->capture_default_str();
    cmd->add_option("--beta", f.beta, "Normal-Gamma rate")->capture_default_str();
    cmd->add_flag("--normalized-likelihood", f.normalized_likelihood,
                  "Include the -log(2 pi)/2 constant in label scores");
    cmd->add_flag("--diagonal-in-blocks", f.include_diagonal_in_blocks,
                  "Pool self-similarities into within-domain blocks");
    cmd->add_flag("--random-scan", f.random_scan, "Random cell order each sweep");
    cmd->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--timings", o.timings, "Record wall-clock timings (outputs then differ between runs)");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace baysc::cli;
    std::vector<std::string> args(argv + 1, argv + argc);

    CLI::App app{"Bayesian spatial-domain clustering"};
    app.set_version_flag("--version", BAYSC_VERSION);
    app.require_subcommand(1);

    PreprocessOptions pre;
    auto* c_pre = app.add_subcommand("preprocess", "Counts or embeddings to similarity caches");
    c_pre->add_option("--rna", pre.rna, "RNA counts CSV (cell_id column + features)");
    c_pre->add_option("--atac", pre.atac, "ATAC counts CSV");
    c_pre->add_option("--adt", pre.adt, "ADT counts CSV");
    c_pre->add_option("--embedding", pre.embeddings, "Precomputed embedding name=path; repeatable");
    c_pre->add_option("--components", pre.components, "Components per modality, name=count; repeatable");
    c_pre->add_option("--library-size", pre.library_size, "RNA library size target (0: median)");
    c_pre->add_flag("--log2", pre.log2, "RNA log2(1+x) instead of natural log");
    c_pre->add_option("--coords", pre.coords, "Coordinates CSV, checked against cell ids");
    c_pre->add_option("--delta", pre.delta, "Also write the neighborhood edge list at this threshold");
    c_pre->add_option("--out-dir", pre.out_dir, "Output directory")->capture_default_str();

    FitOptions fit;
    auto* c_fit = app.add_subcommand("fit", "Run the sampler at fixed (lambda, delta)");
    add_model_options(c_fit, fit.model);
    c_fit->add_option("--trace", fit.trace, "Write the per-sweep chain trace here");

    SelectOptions sel;
    auto* c_sel = app.add_subcommand("select", "Grid search over (lambda, delta) by mDIC");
    add_model_options(c_sel, sel.model);
    c_sel->add_option("--lambda-grid", sel.lambda_grid, "Comma-separated lambda values")->delimiter(',');
    c_sel->add_option("--delta-grid", sel.delta_grid, "Comma-separated delta values")->delimiter(',');
    c_sel->add_option("--n-lambda", sel.n_lambda, "Automatic lambda grid size")->capture_default_str();
    c_sel->add_option("--k-estimate", sel.k_estimate, "Domain count for the automatic lambda range (default init-k)");
    c_sel->add_option("--jobs", sel.jobs, "Parallel grid points")->capture_default_str();
    c_sel->add_flag("--independent-seeds", sel.independent_seeds, "Derive a different seed per grid point");

    EvalOptions ev;
    auto* c_ev = app.add_subcommand("eval", "Compare predicted labels with ground truth");
    c_ev->add_option("--truth", ev.truth, "Truth labels TSV")->required();
    c_ev->add_option("--pred", ev.pred, "Predicted labels TSV")->required();
    c_ev->add_option("--coords", ev.coords, "Coordinates CSV (needed for morans_i, spari)");
    c_ev->add_option("--metrics", ev.metrics, "Comma-separated subset of the metrics")->capture_default_str();
    c_ev->add_option("--delta", ev.delta, "Neighborhood threshold for Moran's I")->capture_default_str();
    c_ev->add_option("--spari-weight", ev.spari_weight, "spARI pair weight: constant or linear")->capture_default_str();
    c_ev->add_option("--spari-dmax", ev.spari_dmax, "Distance at which the linear weight reaches 1")
        ->capture_default_str();
    c_ev->add_option("--out", ev.out, "Write the metrics JSON here instead of stdout");

    SimulateOptions sim;
    auto* c_sim = app.add_subcommand("simulate", "Synthetic band benchmark with known truth");
    c_sim->add_option("--grid-side", sim.grid_side)->capture_default_str();
    c_sim->add_option("--k-true", sim.k_true)->capture_default_str();
    c_sim->add_option("--mu-within", sim.mu_within)->capture_default_str();
    c_sim->add_option("--mu-between", sim.mu_between)->capture_default_str();
    c_sim->add_option("--precision", sim.precision)->capture_default_str();
    c_sim->add_option("--modalities", sim.modalities)->capture_default_str();
    c_sim->add_option("--seed", sim.seed)->capture_default_str();
    c_sim->add_flag("--null", sim.null_coords, "Shuffle coordinates across cells");
    c_sim->add_option("--out-dir", sim.out_dir)->capture_default_str();

    RenderOptionsCli ren;
    auto* c_ren = app.add_subcommand("render", "SVG domain map");
    c_ren->add_option("--labels", ren.labels, "Labels TSV (uncertainty column adds a second panel)")->required();
    c_ren->add_option("--coords", ren.coords, "Coordinates CSV")->required();
    c_ren->add_option("--out", ren.out, "Output SVG")->capture_default_str();
    c_ren->add_option("--panel-size", ren.panel_size)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_pre) return cmd_preprocess(pre, args);
        if (*c_fit) return cmd_fit(fit, args);
        if (*c_sel) return cmd_select(sel, args);
        if (*c_ev) return cmd_eval(ev, args);
        if (*c_sim) return cmd_simulate(sim, args);
        if (*c_ren) return cmd_render(ren, args);
    } catch (const baysc::InputFormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const baysc::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
