#pragma once
// Subcommand implementations behind the baysc executable. Each returns the
// process exit code; library exceptions propagate to main for mapping.

#include <optional>
#include <string>
#include <vector>

#include "baysc/gibbs_engine.hpp"

namespace baysc::cli {

struct PreprocessOptions {
    std::optional<std::string> rna, atac, adt;
    std::vector<std::string> embeddings;  // name=path, precomputed (standardization only)
    std::vector<std::string> components;  // name=count overrides
    double library_size = 0.0;
    bool log2 = false;
    std::optional<std::string> coords;
    std::optional<double> delta;
    std::string out_dir = ".";
};

// Options shared by fit and select.
struct ModelOptions {
    std::vector<std::string> sims;  // [name=]path, .bin cache or CSV
    std::string coords;
    std::vector<std::string> weights;  // name=value
    FitConfig fit;
    std::string init = "kmeans";
    std::string out_dir = ".";
    bool timings = false;
};

struct FitOptions {
    ModelOptions model;
    std::optional<std::string> trace;
};

struct SelectOptions {
    ModelOptions model;
    std::vector<double> lambda_grid;
    std::vector<double> delta_grid;
    int n_lambda = 5;
    int k_estimate = 0;  // 0: use init_k
    int jobs = 1;
    bool independent_seeds = false;
};

struct EvalOptions {
    std::string truth, pred;
    std::optional<std::string> coords;
    std::string metrics = "ari,ami,nmi,homogeneity,morans_i,spari";
    double delta = 1.0;
    std::string spari_weight = "constant";
    double spari_dmax = 1.0;
    std::optional<std::string> out;
};

struct SimulateOptions {
    int grid_side = 12;
    int k_true = 3;
    double mu_within = 0.8;
    double mu_between = 0.0;
    double precision = 4.0;
    int modalities = 1;
    std::uint64_t seed = 1;
    bool null_coords = false;
    std::string out_dir = ".";
};

struct RenderOptionsCli {
    std::string labels, coords;
    std::string out = "domains.svg";
    double panel_size = 480.0;
};

int cmd_preprocess(const PreprocessOptions& opt, const std::vector<std::string>& argv);
int cmd_fit(const FitOptions& opt, const std::vector<std::string>& argv);
int cmd_select(const SelectOptions& opt, const std::vector<std::string>& argv);
int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv);
int cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv);
int cmd_render(const RenderOptionsCli& opt, const std::vector<std::string>& argv);

}  // namespace baysc::cli
