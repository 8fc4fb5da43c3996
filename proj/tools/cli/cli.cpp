#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "aefuse/data.hpp"
#include "aefuse/error.hpp"
#include "aefuse/gradcheck.hpp"
#include "aefuse/model_io.hpp"
#include "aefuse/pca.hpp"
#include "aefuse/train.hpp"
#include "render.hpp"

#ifndef AEFUSE_DEFAULT_DATA_DIR
#define AEFUSE_DEFAULT_DATA_DIR "data"
#endif

namespace aefuse::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::ostream* g_warnings = nullptr;

void forward_warning(const std::string& message) {
    if (g_warnings) *g_warnings << "warning: " << message << '\n';
}

struct DataOptions {
    std::string data;
    std::string images;
    std::string labels;
    std::string csv;
    std::string label_column;
    bool csv_no_header = false;
    std::string data_dir = AEFUSE_DEFAULT_DATA_DIR;
    std::string partition;
    std::size_t subsample = 0;
};

void add_data_options(CLI::App& cmd, DataOptions& d, const std::string& default_partition) {
    d.partition = default_partition;
    cmd.add_option("--data", d.data, "Bundled dataset")->check(CLI::IsMember({"mnist", "wdbc"}));
    cmd.add_option("--images", d.images, "IDX image file (.gz accepted)");
    cmd.add_option("--labels", d.labels, "IDX label file matching --images");
    cmd.add_option("--csv", d.csv, "Numeric CSV file");
    cmd.add_option("--label-column", d.label_column, "CSV label column (name or index)");
    cmd.add_flag("--csv-no-header", d.csv_no_header, "CSV has no header row");
    cmd.add_option("--data-dir", d.data_dir, "Directory holding the bundled datasets")
        ->capture_default_str();
    cmd.add_option("--partition", d.partition, "MNIST partition")
        ->check(CLI::IsMember({"train", "test"}))
        ->capture_default_str();
    cmd.add_option("--subsample", d.subsample, "Keep this many rows (0 keeps all)")
        ->capture_default_str();
}

Dataset load_dataset(const DataOptions& d, std::uint64_t seed) {
    const int sources = !d.data.empty() + !d.images.empty() + !d.csv.empty();
    if (sources == 0) throw ConfigError("no dataset given; pass --data, --images or --csv");
    if (sources > 1) throw ConfigError("--data, --images and --csv are mutually exclusive");
    if (!d.labels.empty() && d.images.empty()) throw ConfigError("--labels requires --images");

    Dataset ds;
    if (d.data == "mnist" || !d.images.empty()) {
        fs::path images = d.images, labels = d.labels;
        if (d.data == "mnist") {
            const fs::path dir(d.data_dir);
            images = dir / ("mnist-" + d.partition + "-images-idx3-ubyte.gz");
            labels = dir / ("mnist-" + d.partition + "-labels-idx1-ubyte.gz");
        }
        ds = normalize(load_idx(images, labels.empty() ? std::nullopt : std::optional(labels)),
                       NormalizeMode::GlobalRange);
    } else {
        fs::path path = d.csv;
        CsvOptions opts;
        opts.has_header = !d.csv_no_header;
        if (!d.label_column.empty()) opts.label_column = d.label_column;
        if (d.data == "wdbc") {
            path = fs::path(d.data_dir) / "wdbc.csv";
            opts.has_header = true;
            opts.label_column = "diagnosis";
        }
        ds = normalize(load_csv(path, opts), NormalizeMode::PerColumn);
    }
    if (d.subsample > 0) ds = subsample(ds, d.subsample, seed);
    return ds;
}

json data_json(const DataOptions& d) {
    return json{{"data", d.data},          {"images", d.images},
                {"labels", d.labels},      {"csv", d.csv},
                {"label_column", d.label_column}, {"csv_no_header", d.csv_no_header},
                {"data_dir", d.data_dir},  {"partition", d.partition},
                {"subsample", d.subsample}};
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("AEFUSE_SEED")) {
        std::uint64_t parsed = 0;
        const std::string text(env);
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
        if (ec != std::errc() || p != text.data() + text.size() || text.empty())
            throw ConfigError("AEFUSE_SEED must be an unsigned integer, got '" + text + "'");
        return parsed;
    }
    return 1;
}

fs::path prepare_out(const std::string& dir) {
    const fs::path out(dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!fs::is_directory(out)) throw DataError("cannot create output directory " + dir);
    return out;
}

// Training writes run.json; other commands write run-<command>.json so they
// can share an output directory with the model they read.
void write_manifest(const fs::path& dir, const json& manifest) {
    const std::string command = manifest.at("command").get<std::string>();
    const fs::path path = dir / (command == "train" ? "run.json" : "run-" + command + ".json");
    std::ofstream f(path);
    f << std::setw(2) << manifest << '\n';
    if (!f) throw DataError("cannot write " + path.string());
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path.string());
    return f;
}

// ---------------------------------------------------------------- train

struct TrainSpec {
    DataOptions data;
    std::size_t encoding_dim = 36;
    std::vector<std::size_t> hidden_dims;
    std::string activation = "tanh";
    std::string out_activation = "sigmoid";
    bool tied = false;
    bool weight_decay = false;
    double lambda = kDefaultDecayLambda;
    bool sparse = false;
    double rho = 0.15;
    double sparse_weight = 1.0;
    bool contractive = false;
    double contractive_weight = 0.1;
    bool denoising = false;
    std::string corruption = "masking";
    double corruption_level = 0.25;
    bool robust = false;
    double kernel_sigma = 0.2;
    std::string loss = "xent";
    std::string optimizer = "rmsprop";
    double lr = 0.0;
    std::size_t epochs = 60;
    std::size_t batch_size = 128;
    std::size_t pretrain_epochs = 0;
    std::uint64_t seed = 1;
    bool no_shuffle = false;
    std::string out = ".";

    struct Given {
        CLI::Option *lambda, *rho, *sparse_weight, *contractive_weight, *corruption,
            *corruption_level, *kernel_sigma, *loss, *lr, *seed;
    } given{};
};

void add_train_options(CLI::App& cmd, TrainSpec& s) {
    add_data_options(cmd, s.data, "train");
    cmd.add_option("--encoding-dim", s.encoding_dim, "Encoding width c")->capture_default_str();
    cmd.add_option("--hidden-dims", s.hidden_dims, "Encoder widths between input and encoding")
        ->delimiter(',');
    cmd.add_option("--activation", s.activation, "Hidden and encoding activation")
        ->capture_default_str();
    cmd.add_option("--out-activation", s.out_activation, "Output activation")
        ->capture_default_str();
    cmd.add_flag("--tied", s.tied, "Tie decoder weights to the encoder's transpose");
    cmd.add_flag("--weight-decay", s.weight_decay, "Penalize squared weights");
    s.given.lambda = cmd.add_option("--lambda", s.lambda, "Weight decay strength")
                         ->capture_default_str();
    cmd.add_flag("--sparse", s.sparse, "KL sparsity penalty on the encoding");
    s.given.rho = cmd.add_option("--rho", s.rho, "Target mean activation, rescaled to [0,1]")
                      ->capture_default_str();
    s.given.sparse_weight = cmd.add_option("--sparse-weight", s.sparse_weight, "Sparsity weight")
                                ->capture_default_str();
    cmd.add_flag("--contractive", s.contractive, "Jacobian norm penalty");
    s.given.contractive_weight =
        cmd.add_option("--contractive-weight", s.contractive_weight, "Contractive weight")
            ->capture_default_str();
    cmd.add_flag("--denoising", s.denoising, "Corrupt training inputs");
    s.given.corruption = cmd.add_option("--corruption", s.corruption, "Corruption kind")
                             ->check(CLI::IsMember({"masking", "gaussian", "saltpepper"}))
                             ->capture_default_str();
    s.given.corruption_level =
        cmd.add_option("--corruption-level", s.corruption_level,
                       "Masked fraction, or noise standard deviation for gaussian")
            ->capture_default_str();
    cmd.add_flag("--robust", s.robust, "Use the correntropy loss");
    s.given.kernel_sigma = cmd.add_option("--kernel-sigma", s.kernel_sigma, "Correntropy kernel width")
                               ->capture_default_str();
    s.given.loss = cmd.add_option("--loss", s.loss, "Reconstruction loss")
                       ->check(CLI::IsMember({"mse", "xent", "corr"}))
                       ->capture_default_str();
    cmd.add_option("--optimizer", s.optimizer, "Optimizer")
        ->check(CLI::IsMember({"sgd", "adagrad", "rmsprop", "adam"}))
        ->capture_default_str();
    s.given.lr = cmd.add_option("--lr", s.lr, "Learning rate (optimizer default if omitted)");
    cmd.add_option("--epochs", s.epochs, "Training epochs")->capture_default_str();
    cmd.add_option("--batch-size", s.batch_size, "Mini-batch size")->capture_default_str();
    cmd.add_option("--pretrain-epochs", s.pretrain_epochs,
                   "Greedy layer-wise pretraining epochs per stage (needs --hidden-dims)")
        ->capture_default_str();
    s.given.seed = cmd.add_option("--seed", s.seed, "Random seed (falls back to AEFUSE_SEED, then 1)");
    cmd.add_flag("--no-shuffle", s.no_shuffle, "Keep the data order in every epoch");
    cmd.add_option("--out", s.out, "Output directory")->capture_default_str();
}

struct ResolvedTrain {
    AeConfig ae;
    TrainConfig train;
};

void require_flag(bool active, const CLI::Option* opt, const char* needs) {
    if (!active && opt->count() > 0)
        throw ConfigError(opt->get_name() + " requires " + needs);
}

ResolvedTrain resolve_train(TrainSpec& s) {
    require_flag(s.weight_decay, s.given.lambda, "--weight-decay");
    require_flag(s.sparse, s.given.rho, "--sparse");
    require_flag(s.sparse, s.given.sparse_weight, "--sparse");
    require_flag(s.contractive, s.given.contractive_weight, "--contractive");
    require_flag(s.denoising, s.given.corruption, "--denoising");
    require_flag(s.denoising, s.given.corruption_level, "--denoising");
    if (s.given.kernel_sigma->count() > 0 && !s.robust && s.loss != "corr")
        throw ConfigError("--kernel-sigma requires --robust or --loss corr");
    if (s.pretrain_epochs > 0 && s.hidden_dims.empty())
        throw ConfigError("--pretrain-epochs requires --hidden-dims");
    if (s.robust && s.loss != "corr") {
        if (s.given.loss->count() > 0)
            warn("--robust overrides --loss " + s.loss + "; using the correntropy loss");
        s.loss = "corr";
    }
    s.seed = resolve_seed(s.given.seed, s.seed);

    ResolvedTrain r;
    AeConfig& ae = r.ae;
    ae.encoding_dim = s.encoding_dim;
    ae.hidden_dims = s.hidden_dims;
    ae.enc_activation = parse_activation(s.activation);
    ae.out_activation = parse_activation(s.out_activation);
    ae.tied = s.tied;
    ae.regularizers.decay_lambda = s.weight_decay ? s.lambda : 0.0;
    ae.regularizers.sparse = s.sparse;
    ae.regularizers.rho_target = s.rho;
    ae.regularizers.sparse_weight = s.sparse_weight;
    ae.regularizers.contractive = s.contractive;
    ae.regularizers.contractive_weight = s.contractive_weight;
    ae.corruption = s.denoising ? parse_corruption(s.corruption, s.corruption_level) : Corruption::none();
    ae.loss = parse_loss(s.loss, s.kernel_sigma);
    // Dimensions are checked again once the data width is known.
    ae.input_dim = 1;
    ae.validate();

    TrainConfig& tc = r.train;
    tc.optimizer = parse_optimizer(s.optimizer, s.given.lr->count() ? std::optional(s.lr) : std::nullopt);
    tc.epochs = s.epochs;
    tc.batch_size = s.batch_size;
    // Weights come from Rng(seed); shuffling and corruption from seed + 1.
    tc.seed = s.seed + 1;
    tc.shuffle = !s.no_shuffle;
    tc.validate();
    if (s.batch_size == 0) throw ConfigError("--batch-size must be at least 1");
    return r;
}

json train_json(const TrainSpec& s, const ResolvedTrain& r) {
    return json{{"encoding_dim", s.encoding_dim},
                {"hidden_dims", s.hidden_dims},
                {"activation", to_string(r.ae.enc_activation)},
                {"out_activation", to_string(r.ae.out_activation)},
                {"tied", s.tied},
                {"weight_decay", s.weight_decay},
                {"lambda", r.ae.regularizers.decay_lambda},
                {"sparse", s.sparse},
                {"rho", s.rho},
                {"sparse_weight", s.sparse_weight},
                {"contractive", s.contractive},
                {"contractive_weight", s.contractive_weight},
                {"denoising", s.denoising},
                {"corruption", s.denoising ? s.corruption : "none"},
                {"corruption_level", s.corruption_level},
                {"robust", s.robust},
                {"kernel_sigma", s.kernel_sigma},
                {"loss", to_string(r.ae.loss)},
                {"optimizer", to_string(r.train.optimizer)},
                {"lr", learning_rate(r.train.optimizer)},
                {"epochs", s.epochs},
                {"batch_size", s.batch_size},
                {"pretrain_epochs", s.pretrain_epochs},
                {"shuffle", !s.no_shuffle}};
}

int cmd_train(TrainSpec& s, std::ostream& out) {
    ResolvedTrain r = resolve_train(s);
    const fs::path dir = prepare_out(s.out);
    const Dataset ds = load_dataset(s.data, s.seed);
    r.ae.input_dim = ds.dim();
    r.ae.validate();

    Rng init(s.seed);
    Network net;
    if (s.pretrain_epochs > 0) {
        std::vector<std::size_t> dims{ds.dim()};
        dims.insert(dims.end(), s.hidden_dims.begin(), s.hidden_dims.end());
        dims.push_back(s.encoding_dim);
        TrainConfig pre = r.train;
        pre.epochs = s.pretrain_epochs;
        out << "pretraining " << dims.size() - 1 << " stages, " << s.pretrain_epochs
            << " epochs each\n";
        net = stack_pretrain(dims, ds.x, r.ae, pre, init);
    } else {
        net = build_autoencoder(r.ae, init);
    }

    TrainHooks hooks;
    hooks.on_epoch = [&](std::size_t epoch, double loss, double penalty) {
        out << "epoch " << epoch << '/' << s.epochs << "  loss " << loss << "  penalty " << penalty
            << '\n';
    };
    const TrainReport report = train(net, ds.x, r.train, r.ae, hooks);

    save_model(net, dir / "model.aef");
    {
        std::ofstream csv = open_output(dir / "loss.csv");
        csv << "epoch,loss,penalty\n" << std::setprecision(17);
        for (std::size_t e = 0; e < report.loss.size(); ++e)
            csv << e + 1 << ',' << report.loss[e] << ',' << report.penalty[e] << '\n';
    }
    json manifest{{"command", "train"},
                  {"seed", s.seed},
                  {"dataset", data_json(s.data)},
                  {"rows", ds.size()},
                  {"input_dim", ds.dim()},
                  {"config", train_json(s, r)},
                  {"outputs", {"model.aef", "loss.csv"}},
                  {"seconds", report.seconds}};
    if (!report.loss.empty()) manifest["final_loss"] = report.loss.back();
    write_manifest(dir, manifest);

    if (report.loss.empty())
        out << "no epochs run; model holds the initial weights\n";
    else
        out << "final loss " << std::setprecision(10) << report.loss.back() << '\n';
    return 0;
}

// ---------------------------------------------------------------- reconstruct

struct ViewSpec {
    DataOptions data;
    std::string model;
    std::size_t count = 10;
    std::uint64_t seed = 1;
    CLI::Option* seed_opt = nullptr;
    std::string out = ".";
};

void add_view_options(CLI::App& cmd, ViewSpec& s, const std::string& partition, bool with_count) {
    add_data_options(cmd, s.data, partition);
    cmd.add_option("--model", s.model, "AEFv1 model file")->required();
    if (with_count)
        cmd.add_option("--count", s.count, "Samples shown in the grid")->capture_default_str();
    s.seed_opt = cmd.add_option("--seed", s.seed, "Seed for --subsample");
    cmd.add_option("--out", s.out, "Output directory")->capture_default_str();
}

Image grid_for(const Network& net, const Matrix& x) {
    const Matrix codes = encode(net, x);
    return reconstruction_grid(x, codes, decode(net, codes), output_range(net.encoding_activation()));
}

void write_grid(const fs::path& path, const Image& img) {
    std::ofstream f = open_output(path);
    write_pgm(f, img);
}

Matrix head_rows(const Matrix& x, std::size_t count) {
    if (x.rows() == 0) throw DataError("dataset is empty");
    return x.slice_rows(0, std::min(count, x.rows()));
}

void check_model_width(const Network& net, const Dataset& ds) {
    if (net.input_dim() != ds.dim())
        throw ShapeError("model expects " + std::to_string(net.input_dim()) +
                         " features but the dataset has " + std::to_string(ds.dim()));
}

int cmd_reconstruct(ViewSpec& s, std::ostream& out) {
    if (s.count == 0) throw ConfigError("--count must be at least 1");
    s.seed = resolve_seed(s.seed_opt, s.seed);
    const fs::path dir = prepare_out(s.out);
    const Network net = load_model(s.model);
    const Dataset ds = load_dataset(s.data, s.seed);
    check_model_width(net, ds);
    const Matrix x = head_rows(ds.x, s.count);
    write_grid(dir / "reconstruct.pgm", grid_for(net, x));
    const double loss = mean_loss(net, x, Loss::mse());
    write_manifest(dir, json{{"command", "reconstruct"},
                             {"seed", s.seed},
                             {"model", s.model},
                             {"dataset", data_json(s.data)},
                             {"count", x.rows()},
                             {"mean_squared_error", loss},
                             {"outputs", {"reconstruct.pgm"}}});
    out << "wrote " << (dir / "reconstruct.pgm").string() << " (" << x.rows()
        << " samples, mean squared error " << loss << ")\n";
    return 0;
}

// ---------------------------------------------------------------- scatter

int cmd_scatter(ViewSpec& s, std::ostream& out) {
    s.seed = resolve_seed(s.seed_opt, s.seed);
    const fs::path dir = prepare_out(s.out);
    const Network net = load_model(s.model);
    if (net.encoding_dim() != 2)
        throw ConfigError("scatter needs a model with a 2-unit encoding, got c=" +
                          std::to_string(net.encoding_dim()) + "; retrain with --encoding-dim 2");
    const Dataset ds = load_dataset(s.data, s.seed);
    if (ds.size() == 0) throw DataError("dataset is empty");
    if (!ds.labels) throw ConfigError("scatter needs class labels (--labels or --label-column)");
    check_model_width(net, ds);
    {
        std::ofstream f = open_output(dir / "scatter.svg");
        write_scatter_svg(f, encode(net, ds.x), *ds.labels,
                          (ds.name.empty() ? std::string("codes") : ds.name) + " encoding");
    }
    write_manifest(dir, json{{"command", "scatter"},
                             {"seed", s.seed},
                             {"model", s.model},
                             {"dataset", data_json(s.data)},
                             {"points", ds.size()},
                             {"outputs", {"scatter.svg"}}});
    out << "wrote " << (dir / "scatter.svg").string() << " (" << ds.size() << " points)\n";
    return 0;
}

// ---------------------------------------------------------------- pca

struct PcaSpec {
    DataOptions data;
    std::size_t components = 36;
    std::size_t count = 10;
    std::uint64_t seed = 1;
    CLI::Option* seed_opt = nullptr;
    std::string out = ".";
};

// Linear tied network computing the PCA projection and reconstruction.
Network pca_network(const PcaModel& m) {
    const Matrix mean = Matrix::row_vector(m.mean);
    Layer enc{m.components, scale(matmul_nt(mean, m.components), -1.0), Activation::linear()};
    Layer dec{transpose(m.components), mean, Activation::linear()};
    return Network({std::move(enc), std::move(dec)}, 1, true);
}

int cmd_pca(PcaSpec& s, std::ostream& out) {
    if (s.count == 0) throw ConfigError("--count must be at least 1");
    s.seed = resolve_seed(s.seed_opt, s.seed);
    const fs::path dir = prepare_out(s.out);
    const Dataset ds = load_dataset(s.data, s.seed);
    const PcaModel m = fit_pca(ds.x, s.components);
    const Network net = pca_network(m);
    save_model(net, dir / "pca.aef");
    {
        std::ofstream csv = open_output(dir / "eigenvalues.csv");
        csv << "component,eigenvalue\n" << std::setprecision(17);
        for (std::size_t i = 0; i < m.all_eigenvalues.size(); ++i)
            csv << i + 1 << ',' << m.all_eigenvalues[i] << '\n';
    }
    const Matrix x = head_rows(ds.x, s.count);
    write_grid(dir / "reconstruct.pgm", grid_for(net, x));

    const double total = std::accumulate(m.all_eigenvalues.begin(), m.all_eigenvalues.end(), 0.0);
    const double kept = std::accumulate(m.eigenvalues.begin(), m.eigenvalues.end(), 0.0);
    const double explained = total > 0.0 ? kept / total : 1.0;
    write_manifest(dir, json{{"command", "pca"},
                             {"seed", s.seed},
                             {"dataset", data_json(s.data)},
                             {"components", s.components},
                             {"count", x.rows()},
                             {"explained_variance", explained},
                             {"outputs", {"pca.aef", "eigenvalues.csv", "reconstruct.pgm"}}});
    out << "kept " << s.components << " of " << ds.dim() << " components, explained variance "
        << explained << '\n';
    return 0;
}

// ---------------------------------------------------------------- gradcheck

struct GradCheckSpec {
    double eps = 1e-6;
    double tolerance = 1e-4;
    std::size_t seeds = 5;
    bool corrupt_analytic = false;
    std::string out = ".";
};

int cmd_gradcheck(const GradCheckSpec& s, std::ostream& out) {
    if (!(s.eps > 0.0)) throw ConfigError("--eps must be positive");
    if (s.seeds == 0) throw ConfigError("--seeds must be at least 1");
    const fs::path dir = prepare_out(s.out);
    GradCheckOptions opts;
    opts.eps = s.eps;
    if (s.corrupt_analytic)
        opts.tamper = [](std::vector<Matrix>& grads) { grads.front().data()[0] += 0.1; };

    std::size_t failures = 0;
    json rows = json::array();
    out << std::left << std::setw(6) << "loss" << std::setw(14) << "regularizers" << std::setw(12)
        << "activation" << std::setw(14) << "max_rel_err" << "status\n";
    for (const GradCheckCase& c : gradcheck_suite()) {
        const double err = run_gradcheck_case(c, s.seeds, opts);
        const bool ok = err <= s.tolerance;
        failures += !ok;
        out << std::setw(6) << to_string(c.loss) << std::setw(14) << c.regularizer_set
            << std::setw(12) << to_string(c.activation) << std::setw(14) << std::setprecision(3)
            << std::scientific << err << std::defaultfloat << (ok ? "ok" : "FAIL") << '\n';
        rows.push_back({{"loss", to_string(c.loss)},
                        {"regularizers", c.regularizer_set},
                        {"activation", to_string(c.activation)},
                        {"max_rel_error", err}});
    }
    const std::size_t total = rows.size();
    write_manifest(dir, json{{"command", "gradcheck"},
                             {"eps", s.eps},
                             {"tolerance", s.tolerance},
                             {"seeds", s.seeds},
                             {"corrupt_analytic", s.corrupt_analytic},
                             {"results", rows}});
    out << total - failures << '/' << total << " configurations within " << s.tolerance << '\n';
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Autoencoder feature fusion toolkit", "aefuse"};
    app.require_subcommand(1);

    TrainSpec train_spec;
    add_train_options(*app.add_subcommand("train", "Train an autoencoder"), train_spec);

    ViewSpec recon_spec;
    add_view_options(*app.add_subcommand("reconstruct", "Originals, encodings and reconstructions as PGM"),
                     recon_spec, "test", true);

    ViewSpec scatter_spec;
    add_view_options(*app.add_subcommand("scatter", "2-D encodings as an SVG scatter plot"),
                     scatter_spec, "test", false);

    PcaSpec pca_spec;
    {
        CLI::App* cmd = app.add_subcommand("pca", "PCA baseline: model, eigenvalues and PGM grid");
        add_data_options(*cmd, pca_spec.data, "train");
        cmd->add_option("--components", pca_spec.components, "Principal components kept")
            ->capture_default_str();
        cmd->add_option("--count", pca_spec.count, "Samples shown in the grid")->capture_default_str();
        pca_spec.seed_opt = cmd->add_option("--seed", pca_spec.seed, "Seed for --subsample");
        cmd->add_option("--out", pca_spec.out, "Output directory")->capture_default_str();
    }

    GradCheckSpec gc_spec;
    {
        CLI::App* cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check suite");
        cmd->add_option("--eps", gc_spec.eps, "Central difference step")->capture_default_str();
        cmd->add_option("--tolerance", gc_spec.tolerance, "Maximum relative error")
            ->capture_default_str();
        cmd->add_option("--seeds", gc_spec.seeds, "Random nets per configuration")
            ->capture_default_str();
        cmd->add_flag("--corrupt-analytic", gc_spec.corrupt_analytic)->group("");
        cmd->add_option("--out", gc_spec.out, "Output directory")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    g_warnings = &err;
    const WarningHandler previous = set_warning_handler(forward_warning);
    int code = 1;
    try {
        if (app.got_subcommand("train"))
            code = cmd_train(train_spec, out);
        else if (app.got_subcommand("reconstruct"))
            code = cmd_reconstruct(recon_spec, out);
        else if (app.got_subcommand("scatter"))
            code = cmd_scatter(scatter_spec, out);
        else if (app.got_subcommand("pca"))
            code = cmd_pca(pca_spec, out);
        else
            code = cmd_gradcheck(gc_spec, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = 1;
    }
    set_warning_handler(previous);
    g_warnings = nullptr;
    return code;
}

}  // namespace aefuse::cli
