#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "baysc/errors.hpp"
#include "baysc/eval_metrics.hpp"
#include "baysc/feature_pipeline.hpp"
#include "baysc/io.hpp"
#include "baysc/model_selection.hpp"
#include "baysc/render.hpp"
#include "baysc/similarity_graph.hpp"
#include "baysc/synthetic_bench.hpp"

namespace baysc::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::pair<std::string, std::string> split_assignment(const std::string& s, const std::string& flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
        throw std::invalid_argument(flag + " expects name=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument(what + ": '" + s + "' is not a number");
    return v;
}

std::string out_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputFormatError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputFormatError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

class Manifest {
public:
    Manifest(std::string command, const std::vector<std::string>& argv) {
        j_["tool"] = "baysc";
        j_["command"] = std::move(command);
        j_["argv"] = argv;
        j_["versions"] = {{"baysc", BAYSC_VERSION},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)}};
        j_["inputs"] = json::array();
        j_["outputs"] = json::array();
    }

    void input(const std::string& role, const std::string& path) {
        j_["inputs"].push_back({{"role", role}, {"path", path}, {"sha256", io::sha256_file(path)}});
    }
    void output(const std::string& path) {
        j_["outputs"].push_back({{"path", fs::path(path).filename().string()}, {"sha256", io::sha256_file(path)}});
    }
    json& operator[](const char* key) { return j_[key]; }
    void write(const std::string& path) const { write_json(path, j_); }

private:
    json j_;
};

json config_json(const FitConfig& c) {
    return {{"lambda", c.lambda},
            {"delta", c.delta},
            {"gamma", c.gamma},
            {"weights", c.weights},
            {"iterations", c.n_iterations},
            {"burnin", c.n_burnin},
            {"thin", c.thin},
            {"seed", c.seed},
            {"init_k", c.init_k},
            {"init", to_string(c.init_method)},
            {"k0", c.k0},
            {"alpha", c.alpha},
            {"beta", c.beta},
            {"normalized_likelihood", c.normalized_likelihood},
            {"include_diagonal_in_blocks", c.include_diagonal_in_blocks},
            {"random_scan", c.random_scan}};
}

struct LoadedModel {
    std::vector<std::string> names;
    std::vector<SimilarityMatrix> sims;
    io::CoordinateTable coords;
    FitConfig fit;
};

LoadedModel load_model(const ModelOptions& opt, Manifest& manifest) {
    if (opt.sims.empty()) throw std::invalid_argument("at least one --sim is required");
    LoadedModel m;
    m.coords = io::read_coordinates_csv(opt.coords);
    manifest.input("coords", opt.coords);
    const std::size_t n = m.coords.cell_ids.size();

    for (const auto& spec : opt.sims) {
        std::string name, path;
        if (const auto eq = spec.find('='); eq != std::string::npos) {
            name = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            path = spec;
            name = fs::path(path).stem().string();
            if (const auto dot = name.find('.'); dot != std::string::npos) name = name.substr(0, dot);
        }
        if (std::find(m.names.begin(), m.names.end(), name) != m.names.end())
            throw std::invalid_argument("duplicate modality name '" + name + "'");
        const int id = static_cast<int>(m.sims.size());
        SimilarityMatrix a;
        if (fs::path(path).extension() == ".bin") {
            a = io::read_similarity_bin(path, id);
        } else {
            auto t = io::read_numeric_csv(path, true);
            if (t.values.rows() != t.values.cols())
                throw InputFormatError(path + ": similarity matrix is " + std::to_string(t.values.rows()) + "x" +
                                       std::to_string(t.values.cols()));
            if (t.row_ids != m.coords.cell_ids) throw InputFormatError(path + ": cell ids differ from " + opt.coords);
            a.values = std::move(t.values);
            a.modality_id = id;
        }
        if (static_cast<std::size_t>(a.n()) != n)
            throw InputFormatError(path + ": " + std::to_string(a.n()) + " cells but " + opt.coords + " has " +
                                   std::to_string(n));
        manifest.input("similarity:" + name, path);
        m.names.push_back(name);
        m.sims.push_back(std::move(a));
    }

    m.fit = opt.fit;
    m.fit.init_method = parse_init_method(opt.init);
    if (!opt.weights.empty()) {
        m.fit.weights.assign(m.names.size(), 1.0);
        std::set<std::string> seen;
        for (const auto& w : opt.weights) {
            const auto [name, value] = split_assignment(w, "--weight");
            const auto it = std::find(m.names.begin(), m.names.end(), name);
            if (it == m.names.end()) throw std::invalid_argument("--weight names unknown modality '" + name + "'");
            if (!seen.insert(name).second) throw std::invalid_argument("--weight given twice for '" + name + "'");
            m.fit.weights[static_cast<std::size_t>(it - m.names.begin())] = parse_number(value, "--weight " + name);
        }
    }
    m.fit.validate(m.sims.size());
    return m;
}

void write_labels(const std::string& path, const std::vector<std::string>& ids, const PosteriorSummary& s) {
    io::LabelTable t;
    t.cell_ids = ids;
    for (int z : s.point_partition.labels) t.domains.push_back(z + 1);
    t.uncertainty = s.scores.uncertainty;
    io::write_labels_tsv(path, t);
}

json summary_json(const LoadedModel& m, const PosteriorSummary& s, const MdicResult& md, double lambda, double delta,
                  int dahl_iteration) {
    json j;
    j["lambda"] = lambda;
    j["delta"] = delta;
    j["k_hat"] = s.k_hat;
    j["n_samples"] = s.n_samples;
    j["dahl_sample"] = s.dahl_index;
    j["dahl_iteration"] = dahl_iteration;
    j["mdic"] = md.mdic;
    j["mean_deviance"] = md.mean_deviance;
    j["p_d"] = md.p_d;
    j["negative_p_d"] = md.negative_p_d;
    json w = json::object();
    const auto weights = m.fit.resolved_weights(m.sims.size());
    for (std::size_t i = 0; i < m.names.size(); ++i) w[m.names[i]] = weights[i];
    j["weights"] = w;
    j["occupancy"] = s.point_partition.occupancy;
    json singles = json::array();
    for (std::size_t i = 0; i < s.scores.singleton.size(); ++i)
        if (s.scores.singleton[i]) singles.push_back(m.coords.cell_ids[i]);
    j["singleton_cells"] = singles;
    return j;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Reorders `values` (keyed by `ids`) into the order of `target`.
template <class T>
std::vector<T> align(const std::vector<std::string>& ids, const std::vector<T>& values,
                     const std::vector<std::string>& target, const std::string& what) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (!index.emplace(ids[i], i).second) throw InputFormatError(what + ": duplicate cell id '" + ids[i] + "'");
    std::vector<T> out;
    out.reserve(target.size());
    for (const auto& id : target) {
        const auto it = index.find(id);
        if (it == index.end()) throw InputFormatError(what + ": missing cell id '" + id + "'");
        out.push_back(values[it->second]);
    }
    return out;
}

// Coordinates from `path`, reordered to `target` ids.
Coordinates aligned_coords(const std::string& path, const std::vector<std::string>& target) {
    const auto ct = io::read_coordinates_csv(path);
    std::vector<Eigen::Index> rows(ct.cell_ids.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<Eigen::Index>(i);
    const auto order = align(ct.cell_ids, rows, target, path);
    Coordinates c;
    c.positions = ct.coords.positions(order, Eigen::all);
    return c;
}

}  // namespace

int cmd_preprocess(const PreprocessOptions& opt, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    Manifest manifest("preprocess", argv);
    ensure_dir(opt.out_dir);

    std::map<std::string, int> components;
    for (const auto& c : opt.components) {
        const auto [name, value] = split_assignment(c, "--components");
        components[name] = static_cast<int>(parse_number(value, "--components " + name));
    }

    struct Source {
        std::string name;
        std::string path;
        std::optional<ModalityKind> kind;  // nullopt: precomputed embedding
    };
    std::vector<Source> sources;
    if (opt.rna) sources.push_back({"rna", *opt.rna, ModalityKind::rna});
    if (opt.atac) sources.push_back({"atac", *opt.atac, ModalityKind::atac});
    if (opt.adt) sources.push_back({"adt", *opt.adt, ModalityKind::adt});
    for (const auto& e : opt.embeddings) {
        const auto [name, path] = split_assignment(e, "--embedding");
        sources.push_back({name, path, std::nullopt});
    }
    if (sources.empty()) throw std::invalid_argument("no inputs: give --rna, --atac, --adt or --embedding");

    std::vector<std::string> ids;
    std::string ids_from;
    json modalities = json::array();
    for (std::size_t m = 0; m < sources.size(); ++m) {
        const auto& src = sources[m];
        auto table = io::read_numeric_csv(src.path, true);
        manifest.input(src.kind ? "counts:" + src.name : "embedding:" + src.name, src.path);
        if (ids.empty()) {
            ids = table.row_ids;
            ids_from = src.path;
        } else if (table.row_ids.size() != ids.size()) {
            throw InputFormatError("dimension mismatch: " + src.path + " has " + std::to_string(table.row_ids.size()) +
                                   " cells, " + ids_from + " has " + std::to_string(ids.size()));
        } else if (table.row_ids != ids) {
            throw InputFormatError("cell ids of " + src.path + " differ from " + ids_from);
        }

        Embedding emb;
        int n_comp = 0;
        if (src.kind) {
            CountMatrix counts{std::move(table.values), *src.kind};
            n_comp = components.count(src.name) ? components[src.name] : default_components(*src.kind);
            if (*src.kind == ModalityKind::rna) {
                RnaOptions ro;
                ro.library_size_target = opt.library_size;
                ro.log2 = opt.log2;
                emb = rna_frontend(counts, n_comp, ro);
            } else {
                emb = embed_counts(counts, n_comp);
            }
        } else {
            emb.values = std::move(table.values);
            n_comp = static_cast<int>(emb.dim());
        }
        const Embedding std_emb = standardize_cells(emb);
        const SimilarityMatrix sim = fisher_z(cosine_similarity(std_emb), static_cast<int>(m));

        std::vector<std::string> header;
        for (Eigen::Index j = 0; j < std_emb.dim(); ++j) header.push_back("pc" + std::to_string(j + 1));
        header.insert(header.begin(), "cell_id");
        const std::string emb_path = out_path(opt.out_dir, src.name + ".embedding.csv");
        const std::string sim_path = out_path(opt.out_dir, src.name + ".sim.bin");
        io::write_numeric_csv(emb_path, std_emb.values, ids, header);
        io::write_similarity_bin(sim_path, sim);
        manifest.output(emb_path);
        manifest.output(sim_path);

        int degenerate = 0;
        for (bool d : std_emb.degenerate_rows) degenerate += d ? 1 : 0;
        if (degenerate > 0)
            std::cerr << "warning: " << src.name << ": " << degenerate << " cells have zero-variance embeddings\n";
        modalities.push_back({{"name", src.name},
                              {"kind", src.kind ? to_string(*src.kind) : "embedding"},
                              {"components", n_comp},
                              {"degenerate_cells", degenerate},
                              {"dropped_features", emb.dropped_columns}});
    }
    manifest["modalities"] = modalities;

    if (opt.coords) {
        const auto coords = io::read_coordinates_csv(*opt.coords);
        manifest.input("coords", *opt.coords);
        if (coords.cell_ids != ids) throw InputFormatError("cell ids of " + *opt.coords + " differ from " + ids_from);
        if (opt.delta) {
            const auto graph = build_neighborhood(coords.coords, *opt.delta);
            const std::string g_path = out_path(opt.out_dir, "graph.tsv");
            io::write_edge_list(g_path, graph, ids);
            manifest.output(g_path);
            manifest["graph"] = {{"delta", *opt.delta}, {"edges", graph.edge_count()}, {"avg_degree", graph.avg_degree()}};
        }
    } else if (opt.delta) {
        throw std::invalid_argument("--delta needs --coords");
    }
    manifest.write(out_path(opt.out_dir, "manifest.json"));
    std::cerr << "preprocessed " << sources.size() << " modalities, " << ids.size() << " cells in "
              << seconds_since(t0) << " s\n";
    return 0;
}

int cmd_fit(const FitOptions& opt, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    Manifest manifest("fit", argv);
    LoadedModel m = load_model(opt.model, manifest);
    ensure_dir(opt.model.out_dir);

    const ModelInputs inputs = ModelInputs::make(m.sims, build_neighborhood(m.coords.coords, m.fit.delta), m.fit.k0,
                                                 m.fit.alpha, m.fit.beta);
    std::vector<ChainSample> samples;
    if (opt.trace) {
        std::ofstream trace(*opt.trace, std::ios::binary);
        if (!trace) throw InputFormatError("cannot open '" + *opt.trace + "' for writing");
        samples = run_chain(inputs, m.fit, &trace);
    } else {
        samples = run_chain(inputs, m.fit);
    }
    const double chain_s = seconds_since(t0);
    const PosteriorSummary s = summarize(samples);
    const MdicResult md = mdic(samples, s.dahl_index, inputs.n());
    if (md.negative_p_d) std::cerr << "warning: negative effective parameter count p_D = " << md.p_d << "\n";

    const std::string labels_path = out_path(opt.model.out_dir, "labels.tsv");
    const std::string summary_path = out_path(opt.model.out_dir, "summary.json");
    const std::string com_path = out_path(opt.model.out_dir, "comembership.bin");
    write_labels(labels_path, m.coords.cell_ids, s);
    write_json(summary_path, summary_json(m, s, md, m.fit.lambda, m.fit.delta, samples[s.dahl_index].iteration));
    io::write_matrix_bin(com_path, s.mean_comembership, io::kComembershipMagic);
    manifest.output(labels_path);
    manifest.output(summary_path);
    manifest.output(com_path);
    if (opt.trace) manifest.output(*opt.trace);

    manifest["config"] = config_json(m.fit);
    manifest["modalities"] = m.names;
    manifest["seed"] = m.fit.seed;
    manifest["selected"] = {{"lambda", m.fit.lambda}, {"delta", m.fit.delta}};
    manifest["k_hat"] = s.k_hat;
    if (opt.model.timings) manifest["timings"] = {{"chain_seconds", chain_s}, {"total_seconds", seconds_since(t0)}};
    manifest.write(out_path(opt.model.out_dir, "manifest.json"));
    std::cerr << "K_hat = " << s.k_hat << ", mDIC = " << md.mdic << "\n";
    return 0;
}

int cmd_select(const SelectOptions& opt, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    Manifest manifest("select", argv);
    LoadedModel m = load_model(opt.model, manifest);
    ensure_dir(opt.model.out_dir);

    std::vector<double> deltas = opt.delta_grid.empty() ? std::vector<double>{m.fit.delta} : opt.delta_grid;
    GridSpec grid;
    if (opt.lambda_grid.empty()) {
        std::map<double, NeighborhoodGraph> graphs;
        for (double d : deltas) {
            if (!(d > 0.0)) throw std::invalid_argument("delta grid values must be > 0");
            graphs.emplace(d, build_neighborhood(m.coords.coords, d));
        }
        grid = build_grid(opt.k_estimate > 0 ? opt.k_estimate : m.fit.init_k, graphs, opt.n_lambda);
    } else {
        bool inserted = false;
        grid = GridSpec::cartesian(opt.lambda_grid, deltas, &inserted);
        if (inserted) std::cerr << "warning: lambda grid lacks 0; inserted the non-spatial baseline lambda = 0\n";
    }

    GridOptions go;
    go.jobs = opt.jobs;
    go.common_random_numbers = !opt.independent_seeds;
    const GridSearchResult res = grid_search(m.sims, m.coords.coords, grid, m.fit, go);
    const GridResult& best = res.best();

    const std::string grid_path = out_path(opt.model.out_dir, "grid.csv");
    {
        std::ofstream out(grid_path, std::ios::binary);
        if (!out) throw InputFormatError("cannot open '" + grid_path + "' for writing");
        out << "lambda,delta,mdic,mean_deviance,p_d,negative_p_d,k_hat,ok,best";
        if (opt.model.timings) out << ",runtime_seconds";
        out << ",error\n";
        for (std::size_t i = 0; i < res.all.size(); ++i) {
            const auto& r = res.all[i];
            out << io::format_double(r.lambda) << ',' << io::format_double(r.delta) << ','
                << (r.ok ? io::format_double(r.mdic) : "") << ',' << (r.ok ? io::format_double(r.mean_deviance) : "")
                << ',' << (r.ok ? io::format_double(r.p_d) : "") << ',' << (r.negative_p_d ? 1 : 0) << ','
                << r.k_hat << ',' << (r.ok ? 1 : 0) << ',' << (i == res.best_index ? 1 : 0);
            if (opt.model.timings) out << ',' << io::format_double(r.runtime_seconds);
            std::string err = r.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            out << ',' << err << '\n';
        }
    }
    for (const auto& r : res.all)
        if (!r.ok) std::cerr << "warning: grid point lambda=" << r.lambda << " delta=" << r.delta << " failed: " << r.error << "\n";

    const std::string labels_path = out_path(opt.model.out_dir, "labels.tsv");
    const std::string summary_path = out_path(opt.model.out_dir, "summary.json");
    const std::string com_path = out_path(opt.model.out_dir, "comembership.bin");
    write_labels(labels_path, m.coords.cell_ids, best.summary);
    const MdicResult md{best.mdic, best.mean_deviance, best.p_d, best.negative_p_d};
    const int dahl_iteration = m.fit.n_burnin + static_cast<int>(best.summary.dahl_index + 1) * m.fit.thin;
    write_json(summary_path, summary_json(m, best.summary, md, best.lambda, best.delta, dahl_iteration));
    io::write_matrix_bin(com_path, best.summary.mean_comembership, io::kComembershipMagic);
    manifest.output(grid_path);
    manifest.output(labels_path);
    manifest.output(summary_path);
    manifest.output(com_path);

    FitConfig echo = m.fit;
    echo.lambda = best.lambda;
    echo.delta = best.delta;
    manifest["config"] = config_json(echo);
    manifest["grid"] = {{"points", grid.points.size()},
                        {"common_random_numbers", go.common_random_numbers},
                        {"n_lambda", opt.n_lambda},
                        {"k_estimate", opt.k_estimate > 0 ? opt.k_estimate : m.fit.init_k}};
    manifest["modalities"] = m.names;
    manifest["seed"] = m.fit.seed;
    manifest["selected"] = {{"lambda", best.lambda}, {"delta", best.delta}};
    manifest["k_hat"] = best.k_hat;
    if (opt.model.timings) manifest["timings"] = {{"total_seconds", seconds_since(t0)}};
    manifest.write(out_path(opt.model.out_dir, "manifest.json"));
    std::cerr << "selected lambda = " << best.lambda << ", delta = " << best.delta << ", K_hat = " << best.k_hat << "\n";
    return 0;
}

int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv) {
    static const std::vector<std::string> known{"ari", "ami", "nmi", "homogeneity", "morans_i", "spari"};
    const auto requested = split_list(opt.metrics);
    if (requested.empty()) throw std::invalid_argument("--metrics is empty");
    for (const auto& r : requested)
        if (std::find(known.begin(), known.end(), r) == known.end())
            throw std::invalid_argument("unknown metric '" + r + "'");
    const auto wants = [&](const char* k) { return std::find(requested.begin(), requested.end(), k) != requested.end(); };
    const bool spatial = wants("morans_i") || wants("spari");
    if (spatial && !opt.coords) throw std::invalid_argument("morans_i and spari need --coords");

    const auto truth = io::read_labels_tsv(opt.truth);
    const auto pred = io::read_labels_tsv(opt.pred);
    const auto truth_z = truth.domains;
    const auto pred_z = align(pred.cell_ids, pred.domains, truth.cell_ids, opt.pred);
    if (pred.cell_ids.size() != truth.cell_ids.size())
        throw InputFormatError(opt.pred + " has " + std::to_string(pred.cell_ids.size()) + " cells, " + opt.truth +
                               " has " + std::to_string(truth.cell_ids.size()));

    json metrics = json::object();
    if (wants("ari")) metrics["ari"] = ari(truth_z, pred_z);
    if (wants("ami") || wants("nmi") || wants("homogeneity")) {
        const auto info = nmi_ami_homogeneity(truth_z, pred_z);
        if (wants("ami")) metrics["ami"] = info.ami;
        if (wants("nmi")) metrics["nmi"] = info.nmi;
        if (wants("homogeneity")) metrics["homogeneity"] = info.homogeneity;
    }
    if (spatial) {
        const Coordinates coords = aligned_coords(*opt.coords, truth.cell_ids);
        if (wants("morans_i")) metrics["morans_i"] = morans_i(pred_z, build_neighborhood(coords, opt.delta));
        if (wants("spari")) {
            SpatialWeightFn w;
            if (opt.spari_weight == "linear")
                w.kind = SpatialWeightFn::Kind::linear_decay;
            else if (opt.spari_weight != "constant")
                throw std::invalid_argument("--spari-weight must be constant or linear");
            w.d_max = opt.spari_dmax;
            metrics["spari"] = spari(truth_z, pred_z, coords, w);
        }
    }
    json j;
    j["n_cells"] = truth.cell_ids.size();
    j["metrics"] = metrics;
    j["settings"] = {{"moran_delta", opt.delta}, {"spari_weight", opt.spari_weight}, {"spari_dmax", opt.spari_dmax}};
    j["argv"] = argv;
    if (opt.out)
        write_json(*opt.out, j);
    else
        std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv) {
    SyntheticSpec spec;
    spec.grid_side = opt.grid_side;
    spec.k_true = opt.k_true;
    spec.mu_within = opt.mu_within;
    spec.mu_between = opt.mu_between;
    spec.precision = opt.precision;
    spec.seed = opt.seed;
    spec.n_modalities = opt.modalities;
    const SyntheticData data = opt.null_coords ? generate_nonspatial_null(spec) : generate_spatial_sbm(spec);

    ensure_dir(opt.out_dir);
    Manifest manifest("simulate", argv);
    const auto ids = io::index_ids(data.truth.n());
    for (std::size_t m = 0; m < data.similarities.size(); ++m) {
        const std::string p = out_path(opt.out_dir, "m" + std::to_string(m + 1) + ".sim.bin");
        io::write_similarity_bin(p, data.similarities[m]);
        manifest.output(p);
    }
    const std::string coords_path = out_path(opt.out_dir, "coords.csv");
    io::write_coordinates_csv(coords_path, io::CoordinateTable{ids, data.coords});
    manifest.output(coords_path);
    io::LabelTable truth;
    truth.cell_ids = ids;
    for (int z : data.truth.labels) truth.domains.push_back(z + 1);
    const std::string truth_path = out_path(opt.out_dir, "truth.tsv");
    io::write_labels_tsv(truth_path, truth);
    manifest.output(truth_path);

    manifest["config"] = {{"grid_side", spec.grid_side}, {"k_true", spec.k_true},     {"mu_within", spec.mu_within},
                          {"mu_between", spec.mu_between}, {"precision", spec.precision}, {"modalities", spec.n_modalities},
                          {"null_coords", opt.null_coords}};
    manifest["seed"] = spec.seed;
    manifest.write(out_path(opt.out_dir, "manifest.json"));
    return 0;
}

int cmd_render(const RenderOptionsCli& opt, const std::vector<std::string>&) {
    const auto labels = io::read_labels_tsv(opt.labels);
    const Coordinates coords = aligned_coords(opt.coords, labels.cell_ids);
    RenderOptions ro;
    ro.panel_size = opt.panel_size;
    const std::string svg = render_domain_svg(coords, labels.domains, labels.uncertainty, ro);
    if (const auto parent = fs::path(opt.out).parent_path(); !parent.empty()) ensure_dir(parent.string());
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw InputFormatError("cannot open '" + opt.out + "' for writing");
    out << svg;
    return 0;
}

}  // namespace baysc::cli
