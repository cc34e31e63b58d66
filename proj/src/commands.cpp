#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "surjective/surjective.hpp"

namespace surjective::cli {

using nlohmann::json;

std::string file_sha256(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::array<std::vector<std::uint64_t>, 3> parse_triple(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    std::vector<std::string> parts;
    if (s.find(';') != std::string::npos) {
        std::istringstream in(s);
        std::string part;
        while (std::getline(in, part, ';')) parts.push_back(part);
    } else {
        // Tuple syntax: ((..),(..),(..))
        if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw std::invalid_argument("malformed triple: " + std::string(text));
        const std::string inner = s.substr(1, s.size() - 2);
        std::size_t i = 0;
        while (i < inner.size()) {
            if (inner[i] == ',') {
                ++i;
                continue;
            }
            if (inner[i] != '(') throw std::invalid_argument("malformed triple: " + std::string(text));
            const std::size_t close = inner.find(')', i);
            if (close == std::string::npos) throw std::invalid_argument("malformed triple: " + std::string(text));
            parts.push_back(inner.substr(i + 1, close - i - 1));
            i = close + 1;
        }
    }
    if (parts.size() != 3) throw std::invalid_argument("a triple needs exactly three vectors: " + std::string(text));
    std::array<std::vector<std::uint64_t>, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        std::istringstream in(parts[k]);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            if (tok.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("not a nonnegative integer: '" + tok + "'");
            out[k].push_back(std::stoull(tok));
        }
        if (out[k].empty()) throw std::invalid_argument("empty vector in triple");
    }
    if (out[1].size() != out[0].size() || out[2].size() != out[0].size())
        throw std::invalid_argument("vectors of the triple have different lengths");
    return out;
}

namespace {

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct SystemFlags {
    std::string lambda = "five";
    std::uint64_t p = 2;
    std::string points_file;

    void add_to(CLI::App* app) {
        app->add_option("--case", lambda, "five, six, or custom (with --points)")
            ->check(CLI::IsMember({"five", "six", "custom"}));
        app->add_option("--p", p, "prime characteristic");
        app->add_option("--points", points_file, "point configuration for --case custom, one a:b:c per line");
    }

    EnumConfig config() const {
        if (!detail::is_prime(p)) throw UsageError("p must be prime");
        EnumConfig cfg;
        cfg.p = p;
        if (lambda == "custom") {
            if (points_file.empty()) throw UsageError("--case custom needs --points");
            std::ifstream is(points_file);
            if (!is) throw UsageError("cannot open " + points_file);
            std::stringstream ss;
            ss << is.rdbuf();
            cfg.custom = vanishing_cubics(PointConfig::parse(ss.str()), build_field(p));
        } else {
            cfg.lambda = lambda == "five" ? LambdaCase::five_point : LambdaCase::six_point;
        }
        return cfg;
    }

    json describe() const {
        json j{{"case", lambda}, {"p", p}};
        if (!points_file.empty()) j["points"] = points_file;
        return j;
    }
};

FilterMode parse_filter(const std::string& s) {
    if (s == "norm") return FilterMode::norm_only;
    if (s == "strict") return FilterMode::strict_orthonormal;
    return FilterMode::none;
}

std::string show_vector(const std::vector<Elem>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + ")";
}

std::array<std::vector<Elem>, 3> checked_triple(const std::string& text, const CubicSystem& sys) {
    const auto t = parse_triple(text);
    for (const auto& v : t) {
        if (v.size() != sys.dim())
            throw UsageError("triple vectors must have length " + std::to_string(sys.dim()) + " for this system");
        for (auto e : v)
            if (e >= sys.field->order()) throw UsageError("triple entry " + std::to_string(e) + " is not a field element");
    }
    return t;
}

void print_locus(std::ostream& out, const BaseLocus& bl) {
    if (bl.positive_dimensional) {
        out << "base locus: positive-dimensional\n";
        return;
    }
    out << "base locus: " << bl.geometric_count() << " geometric points\n";
    for (const auto& [d, pts] : bl.points_by_degree) {
        if (pts.empty()) continue;
        out << "  degree " << d << ":";
        for (const auto& pt : pts) out << ' ' << pt.to_string();
        out << '\n';
    }
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string manifest_path;
    std::string subcommand;
    json config = json::object();
    json inputs = json::array();
    json outputs = json::array();
    std::optional<std::string> dataset_hash;

    void write_manifest(double seconds, int code) const {
        if (manifest_path.empty() || manifest_path == "none") return;
        json j{{"subcommand", subcommand}, {"config", config},   {"version", tool_version},
               {"wall_time_s", seconds},  {"inputs", inputs},   {"outputs", outputs},
               {"exit_code", code}};
        j["dataset_sha256"] = dataset_hash ? json(*dataset_hash) : json(nullptr);
        std::ofstream os(manifest_path, std::ios::app);
        if (!os) {
            err << "warning: cannot append to manifest " << manifest_path << '\n';
            return;
        }
        os << j.dump() << '\n';
    }
};

int cmd_dataset(Context& ctx, const SystemFlags& sf, const std::string& filter, unsigned scan_bound,
                const std::string& out_path, unsigned jobs) {
    EnumConfig cfg = sf.config();
    cfg.filter = parse_filter(filter);
    cfg.scan_bound = scan_bound;
    cfg.jobs = resolve_jobs(jobs);
    ctx.config = sf.describe();
    ctx.config["filter"] = filter;
    ctx.config["scan_bound"] = scan_bound;
    ctx.config["jobs"] = cfg.jobs;
    const auto records = enumerate_triples(cfg);
    write_output(records, out_path);
    ctx.outputs.push_back(out_path);
    ctx.dataset_hash = file_sha256(out_path);
    const auto st = stats(records);
    ctx.out << "wrote " << st.count << " records to " << out_path << '\n';
    ctx.out << "positives: " << st.positives << " negatives: " << st.negatives << " positive_rate: " << st.positive_rate
            << '\n';
    if (st.count > 0 && st.positives == 0) ctx.out << "all labels are 0\n";
    return ok;
}

int cmd_check(Context& ctx, const SystemFlags& sf, const std::string& triple, unsigned scan_bound, bool all) {
    const EnumConfig cfg = sf.config();
    ctx.config = sf.describe();
    ctx.config["triple"] = triple;
    ctx.config["scan_bound"] = scan_bound;
    const CubicSystem sys = system_for(cfg);
    const auto t = checked_triple(triple, sys);
    const auto made = make_plane(sys, t[0], t[1], t[2]);
    if (const auto* rej = std::get_if<PlaneRejection>(&made)) {
        ctx.out << "plane rejected: " << to_string(*rej) << '\n';
        return check_failed;
    }
    const Plane& plane = std::get<Plane>(made);
    for (std::size_t i = 0; i < 3; ++i) ctx.out << "f" << i << " = " << plane.forms[i].to_string() << '\n';
    print_locus(ctx.out, base_locus(plane.forms, scan_bound));
    const SurjectivityLabel label = label_plane(plane, scan_bound, all);
    ctx.out << "label: " << label.value << '\n';
    for (const auto& pencil : label.unruly_pencils) {
        ctx.out << "unruly pencil a=" << show_vector(pencil.a) << " b=" << show_vector(pencil.b) << ": "
                << pencil.forms[0].to_string() << " ; " << pencil.forms[1].to_string() << '\n';
    }
    return ok;
}

int cmd_oracle(Context& ctx, const SystemFlags& sf, const std::string& triple, bool all, unsigned source_bound,
               unsigned scan_bound) {
    const EnumConfig base = sf.config();
    ctx.config = sf.describe();
    ctx.config["source_bound"] = source_bound;
    ctx.config["scan_bound"] = scan_bound;
    const CubicSystem sys = system_for(base);
    if (!all) {
        if (triple.empty()) throw UsageError("oracle needs --triple or --all");
        ctx.config["triple"] = triple;
        const auto t = checked_triple(triple, sys);
        const auto made = make_plane(sys, t[0], t[1], t[2]);
        if (const auto* rej = std::get_if<PlaneRejection>(&made)) {
            ctx.out << "plane rejected: " << to_string(*rej) << '\n';
            return check_failed;
        }
        const Plane& plane = std::get<Plane>(made);
        const auto uncovered = forward_oracle(plane, source_bound);
        const int label = label_plane(plane, scan_bound).value;
        ctx.out << "uncovered targets: " << uncovered.size() << '\n';
        for (const auto& pt : uncovered) ctx.out << "  " << pt.to_string() << '\n';
        ctx.out << "label: " << label << '\n';
        const bool agree = (label == 1) == uncovered.empty();
        ctx.out << (agree ? "criterion and oracle agree\n" : "criterion and oracle DISAGREE\n");
        return agree ? ok : check_failed;
    }
    ctx.config["all"] = true;
    EnumConfig cfg = base;
    cfg.filter = FilterMode::none;
    cfg.scan_bound = scan_bound;
    // Every admissible plane appears among the unfiltered triples; test each span once.
    const auto records = enumerate_triples(cfg);
    std::set<Matrix> seen;
    std::size_t planes = 0, disagreements = 0;
    for (const auto& r : records) {
        if (!seen.insert(rref(*sys.field, Matrix{r.vut[0], r.vut[1], r.vut[2]}).rows).second) continue;
        ++planes;
        const Plane plane = std::get<Plane>(make_plane(sys, r.vut[0], r.vut[1], r.vut[2]));
        const bool surjective = forward_oracle(plane, source_bound).empty();
        if (surjective != (r.label == 1)) {
            ++disagreements;
            ctx.out << "disagreement on " << format_record(r) << '\n';
        }
    }
    ctx.out << planes << " planes checked, " << disagreements << " disagreements\n";
    return disagreements == 0 ? ok : check_failed;
}

int cmd_train(Context& ctx, const std::string& data, TrainConfig tc, const std::string& model_out,
              const std::string& history_out, bool quiet) {
    ctx.config = {{"data", data},         {"epochs", tc.epochs},          {"batch_size", tc.batch_size},
                  {"seed", tc.seed},      {"test_fraction", tc.test_fraction}, {"learning_rate", tc.learning_rate}};
    ctx.inputs.push_back(data);
    ctx.dataset_hash = file_sha256(data);
    const auto records = read_output(data);
    const auto res = train(records, tc, [&](int epoch, double mse) {
        if (!quiet && (epoch % 10 == 0 || epoch == 1)) ctx.out << "epoch " << epoch << " train_mse " << mse << '\n';
    });
    save_checkpoint(res.model, model_out);
    ctx.outputs.push_back(model_out);
    if (!history_out.empty()) {
        std::ofstream os(history_out);
        write_history_csv(res.history, os);
        ctx.outputs.push_back(history_out);
    }
    ctx.out << "train records: " << res.data.train.size() << " test records: " << res.data.test.size() << '\n';
    ctx.out << "test_mse: " << evaluate(res.model, res.data.test) << '\n';
    ctx.out << "mean_prediction: " << mean_prediction(res.model, res.data.test) << '\n';
    ctx.out << "model written to " << model_out << '\n';
    return ok;
}

int cmd_predict(Context& ctx, const std::string& model_path, const std::string& triple) {
    ctx.config = {{"model", model_path}, {"triple", triple}};
    ctx.inputs.push_back(model_path);
    const Model m = load_checkpoint(model_path);
    std::array<std::vector<std::uint64_t>, 3> t;
    try {
        t = parse_triple(triple);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (static_cast<int>(t[0].size()) != m.params.weights.width())
        throw UsageError("the model expects vectors of length " + std::to_string(m.params.weights.width()));
    ctx.out << std::setprecision(17) << predict(m, t) << '\n';
    return ok;
}

int cmd_verify(Context& ctx, const std::string& which) {
    ctx.config = {{"case", which}};
    bool all_pass = true;
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        if (which != "all" && which != to_string(c)) continue;
        const Certificate cert = verify(c);
        ctx.out << cert.report();
        all_pass = all_pass && cert.passed();
    }
    ctx.out << (all_pass ? "all certificates pass\n" : "certificate FAILED\n");
    return all_pass ? ok : check_failed;
}

int cmd_numeric(Context& ctx, const std::string& which, int count, std::uint64_t seed, double radius, double tol) {
    ctx.config = {{"case", which}, {"count", count}, {"seed", seed}, {"radius", radius}, {"tol", tol}};
    bool all_pass = true;
    for (const auto c : {LambdaCase::five_point, LambdaCase::six_point}) {
        if (which != "all" && which != to_string(c)) continue;
        double worst = 0;
        int failures = 0;
        for (int i = 0; i < count; ++i) {
            Rng rng(task_seed(seed, static_cast<std::uint64_t>(i)));
            const auto [a, b] = random_target(rng, radius);
            try {
                worst = std::max(worst, numeric_preimage(c, a, b, tol).residual);
            } catch (const std::exception& e) {
                ++failures;
                ctx.out << "  " << to_string(c) << ": " << e.what() << '\n';
            }
        }
        ctx.out << to_string(c) << ": " << count - failures << "/" << count << " targets solved, worst residual " << worst
                << '\n';
        all_pass = all_pass && failures == 0;
    }
    return all_pass ? ok : check_failed;
}

int cmd_stats(Context& ctx, const std::string& data) {
    ctx.config = {{"data", data}};
    ctx.inputs.push_back(data);
    ctx.dataset_hash = file_sha256(data);
    const auto st = stats(read_output(data));
    ctx.out << "count: " << st.count << "\npositives: " << st.positives << "\nnegatives: " << st.negatives
            << "\npositive_rate: " << st.positive_rate << '\n';
    return ok;
}

int cmd_seven(Context& ctx, std::uint64_t p, const std::string& points_file, int trials, std::uint64_t seed,
              unsigned scan_bound) {
    if (!detail::is_prime(p)) throw UsageError("p must be prime");
    ctx.config = {{"p", p}, {"trials", trials}, {"seed", seed}, {"scan_bound", scan_bound}};
    const FieldDesc& f = build_field(p);
    std::vector<PointConfig> configs;
    if (!points_file.empty()) {
        ctx.config["points"] = points_file;
        std::ifstream is(points_file);
        if (!is) throw UsageError("cannot open " + points_file);
        std::stringstream ss;
        ss << is.rdbuf();
        configs.push_back(PointConfig::parse(ss.str()));
    } else {
        Rng rng(seed);
        for (int i = 0; i < trials; ++i) configs.push_back(random_seven_points(f, rng));
    }
    int found = 0;
    for (const auto& cfg : configs) {
        ctx.out << "points:";
        for (const auto& pt : cfg.points()) ctx.out << ' ' << pt[0] << ':' << pt[1] << ':' << pt[2];
        ctx.out << '\n';
        try {
            const auto pencil = find_unruly_seven_points(cfg, f, scan_bound);
            if (pencil) {
                ++found;
                ctx.out << "  unruly pencil a=" << show_vector(pencil->a) << " b=" << show_vector(pencil->b) << '\n';
            } else {
                ctx.out << "  no rational unruly pencil\n";
            }
        } catch (const std::invalid_argument& e) {
            ctx.out << "  skipped: " << e.what() << '\n';
        }
    }
    ctx.out << found << " of " << configs.size() << " configurations have a rational unruly pencil\n";
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Surjectivity of cubic rational maps of the plane over finite fields"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);
    std::string manifest = "surjective-runs.jsonl";
    app.add_option("--manifest", manifest, "JSON-lines run log to append to ('none' disables)");

    SystemFlags sf;
    std::string filter = "norm", out_path = "output.txt", triple, data, model_out = "model.ckpt",
                history_out = "history.csv", model_path, verify_case = "all", points_file;
    unsigned scan_bound = 9, source_bound = 9, jobs = 0;
    bool all = false, quiet = false;
    TrainConfig tc;
    int count = 100, trials = 5;
    std::uint64_t seed = 42, seven_p = 11;
    double radius = 10.0, tol = 1e-9;

    auto* dataset = app.add_subcommand("dataset", "enumerate triples and write the labeled dataset");
    sf.add_to(dataset);
    dataset->add_option("--filter", filter, "vector filter: norm, strict, none")
        ->check(CLI::IsMember({"norm", "strict", "none"}));
    dataset->add_option("--scan-bound", scan_bound, "largest extension degree scanned for base points");
    dataset->add_option("--out", out_path, "output file");
    dataset->add_option("--jobs", jobs, "worker threads (0: $SURJECTIVE_JOBS or all cores)");

    auto* check = app.add_subcommand("check", "label one plane and list its unruly pencils");
    sf.add_to(check);
    check->add_option("--triple", triple, "v;u;t as comma-separated coordinates")->required();
    check->add_option("--scan-bound", scan_bound, "largest extension degree scanned");
    check->add_flag("--all-pencils", all, "list every unruly pencil, not just the first");

    auto* oracle = app.add_subcommand("oracle", "compare labels with the forward-image oracle");
    sf.add_to(oracle);
    oracle->add_option("--triple", triple, "v;u;t");
    oracle->add_flag("--all", all, "sweep every admissible plane of the system");
    oracle->add_option("--source-bound", source_bound, "largest extension degree of pushed-forward sources");
    oracle->add_option("--scan-bound", scan_bound, "largest extension degree scanned by the criterion");

    auto* train_cmd = app.add_subcommand("train", "train the surjectivity regressor");
    train_cmd->add_option("--data", data, "dataset file")->required();
    train_cmd->add_option("--epochs", tc.epochs);
    train_cmd->add_option("--batch-size", tc.batch_size);
    train_cmd->add_option("--test-fraction", tc.test_fraction);
    train_cmd->add_option("--seed", tc.seed);
    train_cmd->add_option("--learning-rate", tc.learning_rate);
    train_cmd->add_option("--model-out", model_out);
    train_cmd->add_option("--history", history_out, "per-epoch CSV ('' disables)");
    train_cmd->add_flag("--quiet", quiet);

    auto* predict_cmd = app.add_subcommand("predict", "evaluate a trained model on one triple");
    predict_cmd->add_option("--model", model_path)->required();
    predict_cmd->add_option("--triple", triple)->required();

    auto* verify_cmd = app.add_subcommand("verify", "check the exact certificates of the two explicit maps");
    verify_cmd->add_option("--case", verify_case)->check(CLI::IsMember({"five", "six", "all"}));

    auto* numeric_cmd = app.add_subcommand("numeric", "numeric preimages of random complex targets");
    numeric_cmd->add_option("--case", verify_case)->check(CLI::IsMember({"five", "six", "all"}));
    numeric_cmd->add_option("--count", count);
    numeric_cmd->add_option("--seed", seed);
    numeric_cmd->add_option("--radius", radius);
    numeric_cmd->add_option("--tol", tol);

    auto* stats_cmd = app.add_subcommand("stats", "summarize a dataset file");
    stats_cmd->add_option("--data", data)->required();

    auto* seven = app.add_subcommand("seven", "search unruly pencils in nets of cubics through seven points");
    seven->add_option("--p", seven_p, "prime field");
    seven->add_option("--points", points_file, "fixed configuration instead of random ones");
    seven->add_option("--trials", trials);
    seven->add_option("--seed", seed);
    seven->add_option("--scan-bound", scan_bound);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }

    Context ctx{out, err, manifest, app.get_subcommands().front()->get_name(), json::object(), json::array(), json::array(), std::nullopt};
    const auto start = std::chrono::steady_clock::now();
    int code = ok;
    try {
        if (*dataset) code = cmd_dataset(ctx, sf, filter, scan_bound, out_path, jobs);
        else if (*check) code = cmd_check(ctx, sf, triple, scan_bound, all);
        else if (*oracle) code = cmd_oracle(ctx, sf, triple, all, source_bound, scan_bound);
        else if (*train_cmd) code = cmd_train(ctx, data, tc, model_out, history_out, quiet);
        else if (*predict_cmd) code = cmd_predict(ctx, model_path, triple);
        else if (*verify_cmd) code = cmd_verify(ctx, verify_case);
        else if (*numeric_cmd) code = cmd_numeric(ctx, verify_case, count, seed, radius, tol);
        else if (*stats_cmd) code = cmd_stats(ctx, data);
        else if (*seven) code = cmd_seven(ctx, seven_p, points_file, trials, seed, scan_bound);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        code = usage_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        code = usage_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        code = usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = check_failed;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ctx.write_manifest(seconds, code);
    return code;
}

}  // namespace surjective::cli
