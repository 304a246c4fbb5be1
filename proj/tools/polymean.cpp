// polymean command-line front end.
//
// Exit codes: 0 success, 1 invariant or oracle failure, 2 input error,
// 3 internal infeasibility.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polymean/experiments.hpp"
#include "polymean/faces.hpp"
#include "polymean/frechet.hpp"
#include "polymean/lp.hpp"
#include "polymean/uniqueness.hpp"

using namespace polymean;
using nlohmann::json;

namespace {

enum Exit { ok = 0, invariant = 1, input = 2, internal = 3 };

struct Globals
{
    bool json = false;
    bool approx = false;
    unsigned threads = 0;
};

Globals g;

class InputError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

std::string show(const Rational& x)
{
    if (!g.approx)
        return to_string(x);
    return to_string(x) + " (~" + to_decimal(x) + ")";
}

std::string show(std::span<const Rational> v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + show(v[i]);
    return s + ")";
}

json to_json(std::span<const Rational> v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

json face_json(const PolytopeNorm& N, const PolarFace& G)
{
    json vs = json::array();
    for (auto i : G.vertex_indices)
        vs.push_back(to_json(N.row(i)));
    return {{"rows", G.vertex_indices}, {"dim", G.dim}, {"vertices", vs}};
}

std::string face_text(const PolytopeNorm& N, const PolarFace& G)
{
    std::string s = "dim " + std::to_string(G.dim) + " rows {";
    for (std::size_t j = 0; j < G.vertex_indices.size(); ++j)
        s += (j ? "," : "") + std::to_string(G.vertex_indices[j]);
    s += "} conv{";
    for (std::size_t j = 0; j < G.vertex_indices.size(); ++j)
        s += (j ? ", " : "") + show(N.row(G.vertex_indices[j]));
    return s + "}";
}

unsigned thread_count()
{
    if (g.threads)
        return g.threads;
    if (const char* env = std::getenv("POLYMEAN_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        }
        catch (const std::exception&) {
        }
        throw InputError("POLYMEAN_THREADS must be a positive integer");
    }
    return 1;
}

// "0,2;1,3" -> faces with those row sets
std::vector<PolarFace> parse_faces(const PolytopeNorm& N, const std::string& text)
{
    std::vector<PolarFace> faces;
    std::istringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<std::size_t> idx;
        std::istringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            try {
                std::size_t pos = 0;
                const unsigned long v = std::stoul(item, &pos);
                if (pos != item.size())
                    throw InputError("");
                idx.push_back(v);
            }
            catch (const std::exception&) {
                throw InputError("malformed face index '" + item + "'");
            }
        }
        if (idx.empty())
            throw InputError("empty face in '" + text + "'");
        for (auto i : idx)
            if (i >= N.size())
                throw InputError("face index " + std::to_string(i) + " out of range");
        if (!is_polar_face(N, idx))
            throw InputError("rows {" + group + "} do not form a face of the polar polytope");
        faces.push_back(make_polar_face(N, idx));
    }
    if (faces.empty())
        throw InputError("no faces given");
    return faces;
}

std::vector<std::size_t> parse_k_list(const std::string& text)
{
    std::vector<std::size_t> ks;
    auto num = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const unsigned long v = std::stoul(s, &pos);
            if (pos != s.size() || v == 0)
                throw InputError("");
            return static_cast<std::size_t>(v);
        }
        catch (const std::exception&) {
            throw InputError("malformed dimension list '" + text + "'");
        }
    };
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const std::size_t a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
        if (b < a)
            throw InputError("empty dimension range '" + text + "'");
        for (std::size_t k = a; k <= b; ++k)
            ks.push_back(k);
        return ks;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        ks.push_back(num(item));
    return ks;
}

// "lo,hi" for every coordinate, or "lo,hi;lo,hi;..." per coordinate
GridBox parse_box(const std::string& text, std::size_t k)
{
    std::vector<std::pair<Rational, Rational>> ranges;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) {
        const auto comma = part.find(',');
        if (comma == std::string::npos)
            throw InputError("box ranges look like lo,hi");
        ranges.emplace_back(parse_rational(part.substr(0, comma)), parse_rational(part.substr(comma + 1)));
    }
    if (ranges.size() == 1)
        ranges.resize(k, ranges.front());
    if (ranges.size() != k)
        throw InputError("box needs one range or one range per coordinate");
    GridBox box{Vector(k), Vector(k)};
    for (std::size_t j = 0; j < k; ++j) {
        box.lo[j] = ranges[j].first;
        box.hi[j] = ranges[j].second;
    }
    return box;
}

Integer floor_of(const Rational& x)
{
    const Integer n = numerator(x), d = denominator(x);
    Integer q = n / d;
    if (q * d != n && n < 0)
        q -= 1;
    return q;
}

// Smallest integer box around the data, padded by one unit.
GridBox default_box(const Sample& S)
{
    const std::size_t k = S.dim();
    GridBox box{S.points.front(), S.points.front()};
    for (const auto& p : S.points)
        for (std::size_t j = 0; j < k; ++j) {
            box.lo[j] = std::min(box.lo[j], p[j]);
            box.hi[j] = std::max(box.hi[j], p[j]);
        }
    for (std::size_t j = 0; j < k; ++j) {
        box.lo[j] = Rational(floor_of(box.lo[j]) - 1);
        box.hi[j] = Rational(-floor_of(Rational(-box.hi[j])) + 1);
    }
    return box;
}

void check_data_dim(const PolytopeNorm& N, const Sample& S)
{
    if (S.dim() != N.dim())
        throw InputError("data dimension " + std::to_string(S.dim()) + " does not match norm dimension " +
                         std::to_string(N.dim()));
}

json fm_json(const PolytopeNorm& N, const FMSetResult& R)
{
    json rows = json::array();
    for (std::size_t i = 0; i < R.fm_hrep.size(); ++i)
        rows.push_back({{"normal", to_json(R.fm_hrep.normal(i))}, {"rhs", to_string(R.fm_hrep.rhs(i))}});
    json j = {
        {"distances", to_json(R.distances)},
        {"fm_hrep", rows},
        {"implicit_rows", R.implicit_rows},
        {"fm_dim", R.fm_dim},
        {"unique", R.unique},
        {"witness", to_json(R.witness)},
        {"solver",
         {{"frank_wolfe_iterations", R.solver.frank_wolfe_iterations},
          {"frank_wolfe_certified", R.solver.frank_wolfe_certified},
          {"fallback_used", R.solver.fallback_used}}},
    };
    if (R.face_type) {
        json ft = json::array();
        for (const auto& G : *R.face_type)
            ft.push_back(face_json(N, G));
        j["face_type"] = ft;
    }
    else
        j["face_type"] = nullptr;
    return j;
}

int cmd_fm(const std::string& norm, const std::string& data)
{
    const auto N = PolytopeNorm::resolve(norm);
    const auto S = Sample::load(data);
    check_data_dim(N, S);
    const auto R = fm_set(N, S);
    if (g.json) {
        std::cout << fm_json(N, R).dump(2) << "\n";
        return ok;
    }
    std::cout << "distances";
    for (const auto& d : R.distances)
        std::cout << " " << show(d);
    std::cout << "\nfm_dim " << R.fm_dim << "\nunique " << (R.unique ? "yes" : "no") << "\n";
    std::cout << "witness " << show(R.witness) << "\n";
    std::cout << "fm_hrep (rows a.theta <= b)\n";
    for (std::size_t i = 0; i < R.fm_hrep.size(); ++i) {
        const bool eq = std::find(R.implicit_rows.begin(), R.implicit_rows.end(), i) != R.implicit_rows.end();
        std::cout << "  " << show(R.fm_hrep.normal(i)) << " <= " << show(R.fm_hrep.rhs(i))
                  << (eq ? "   [equality]" : "") << "\n";
    }
    if (R.face_type) {
        std::cout << "face_type\n";
        for (std::size_t i = 0; i < R.face_type->size(); ++i)
            std::cout << "  G" << i + 1 << " " << face_text(N, (*R.face_type)[i]) << "\n";
    }
    else
        std::cout << "face_type undefined\n";
    if (R.solver.fallback_used)
        std::cout << "note: Frank-Wolfe did not certify; the minimum-norm fallback produced the certified point\n";
    return ok;
}

int cmd_face_type(const std::string& norm, const std::string& data)
{
    const auto N = PolytopeNorm::resolve(norm);
    const auto S = Sample::load(data);
    check_data_dim(N, S);
    const auto R = fm_set(N, S);
    const auto faces = face_type_of_sample(N, S, R);
    const auto report = condition_report(N, faces);
    if (g.json) {
        json ft = json::array();
        for (const auto& G : faces)
            ft.push_back(face_json(N, G));
        std::cout << json{{"face_type", ft}, {"witness", to_json(R.witness)}, {"fm_dim", R.fm_dim},
                          {"predicted_fm_dim", report.predicted_fm_dim}}
                         .dump(2)
                  << "\n";
        return ok;
    }
    std::cout << "witness " << show(R.witness) << "\n";
    for (std::size_t i = 0; i < faces.size(); ++i)
        std::cout << "G" << i + 1 << " " << face_text(N, faces[i]) << "\n";
    std::cout << "fm_dim " << R.fm_dim << "\npredicted_fm_dim " << report.predicted_fm_dim << "\n";
    return ok;
}

int cmd_check(const std::string& norm, const std::string& faces_text, const std::string& facet)
{
    const auto N = PolytopeNorm::resolve(norm);
    const auto faces = parse_faces(N, faces_text);
    const auto r = condition_report(N, faces);
    std::optional<bool> extension;
    if (!facet.empty()) {
        const auto ext = parse_faces(N, facet);
        if (ext.size() != 1)
            throw InputError("--extend takes a single polar vertex");
        extension = check_inductive_extension(N, faces, ext.front());
    }
    if (g.json) {
        json j = {{"possible", r.possible},
                  {"positive_probability", r.positive_probability},
                  {"unique", r.unique},
                  {"predicted_fm_dim", r.predicted_fm_dim},
                  {"passes", r.passes()}};
        if (extension)
            j["extension_holds"] = *extension;
        std::cout << j.dump(2) << "\n";
    }
    else {
        std::cout << "possible " << (r.possible ? "yes" : "no") << "\n"
                  << "positive_probability " << (r.positive_probability ? "yes" : "no") << "\n"
                  << "unique " << (r.unique ? "yes" : "no") << "\n"
                  << "predicted_fm_dim " << r.predicted_fm_dim << "\n";
        if (extension)
            std::cout << "extension_holds " << (*extension ? "yes" : "no") << "\n";
    }
    return extension && !*extension ? invariant : ok;
}

json certificate_json(const ThresholdCertificate& c, const PolytopeNorm& N)
{
    json w = json::array();
    for (const auto& G : c.witness_faces)
        w.push_back(face_json(N, G));
    json refs = json::array();
    for (const auto& r : c.refutations)
        refs.push_back({{"n", r.n},
                        {"total", r.total},
                        {"positive_probability", r.positive_probability},
                        {"dimension_bound", r.dimension_bound},
                        {"unique", r.unique},
                        {"possible", r.possible}});
    std::ostringstream hash;
    hash << std::hex << c.norm_hash;
    return {{"norm", c.norm_name}, {"hash", hash.str()},      {"proper_faces", c.face_count},
            {"N", c.N ? json(c.N) : json(nullptr)},           {"witness", w}, {"refutations", refs}};
}

int cmd_threshold(const std::string& norm, std::size_t n_max, bool force)
{
    const auto N = PolytopeNorm::resolve(norm);
    ThresholdOptions opt;
    opt.force = force;
    try {
        const auto cert = threshold_search(N, n_max, opt);
        if (g.json)
            std::cout << certificate_json(cert, N).dump(2) << "\n";
        else
            std::cout << to_text(cert, N);
        return ok;
    }
    catch (const ThresholdNotFound& e) {
        if (g.json)
            std::cout << certificate_json(e.partial(), N).dump(2) << "\n";
        else
            std::cout << to_text(e.partial(), N);
        std::cerr << "error: " << e.what() << "\n";
        return invariant;
    }
}

struct ExperimentArgs
{
    std::string norm = "linf";
    std::string ks = "2";
    std::size_t n_from = 2, n_to = 10, trials = 100;
    std::uint64_t seed = 1;
    unsigned bits = 53;
    std::string csv, svg, config;
    bool force = false, timing = false;
};

int cmd_experiment(const ExperimentArgs& a, const CLI::App& sub)
{
    ExperimentConfig cfg;
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in)
            throw InputError("cannot open config file '" + a.config + "'");
        cfg = parse_experiment_config(in);
    }
    // explicit flags override the config file
    if (a.config.empty() || sub.count("--norm"))
        cfg.norm = a.norm;
    if (a.config.empty() || sub.count("--k"))
        cfg.ks = parse_k_list(a.ks);
    if (a.config.empty() || sub.count("--n-from"))
        cfg.n_from = a.n_from;
    if (a.config.empty() || sub.count("--n-to"))
        cfg.n_to = a.n_to;
    if (a.config.empty() || sub.count("--trials"))
        cfg.trials = a.trials;
    if (a.config.empty() || sub.count("--seed"))
        cfg.seed = a.seed;
    if (a.config.empty() || sub.count("--bits"))
        cfg.denominator_bits = a.bits;
    cfg.force = cfg.force || a.force;
    cfg.timing = cfg.timing || a.timing;
    if (g.threads || std::getenv("POLYMEAN_THREADS") || a.config.empty())
        cfg.threads = thread_count();

    const auto result = run_uniqueness_experiment(cfg);
    if (!a.csv.empty()) {
        std::ofstream out(a.csv, std::ios::binary);
        if (!out)
            throw InputError("cannot write '" + a.csv + "'");
        emit_csv(result, out);
    }
    if (!a.svg.empty()) {
        std::ofstream out(a.svg, std::ios::binary);
        if (!out)
            throw InputError("cannot write '" + a.svg + "'");
        emit_plot(result, out);
    }
    if (g.json) {
        json cells = json::array();
        for (const auto& c : result.cells)
            cells.push_back({{"norm", c.norm},
                             {"k", c.k},
                             {"n", c.n},
                             {"trials", c.trials},
                             {"unique_count", c.unique_count},
                             {"dim_histogram", c.dim_histogram},
                             {"elapsed_ms", c.elapsed_ms}});
        std::cout << json{{"cells", cells}}.dump(2) << "\n";
    }
    else if (a.csv.empty())
        emit_csv(result, std::cout);
    else
        std::cout << "wrote " << result.cells.size() << " cells to " << a.csv << "\n";
    return ok;
}

int cmd_oracle_check(const std::string& norm, const std::string& data, const std::string& step_text,
                     const std::string& box_text)
{
    const auto N = PolytopeNorm::resolve(norm);
    const auto S = Sample::load(data);
    check_data_dim(N, S);
    const Rational step = parse_rational(step_text);
    if (step <= 0)
        throw InputError("--step must be positive");
    const GridBox box = box_text.empty() ? default_box(S) : parse_box(box_text, N.dim());
    const auto R = fm_set(N, S);
    const auto failed = oracle_check(N, S, R, box, step);
    if (g.json)
        std::cout << json{{"pass", failed.empty()}, {"failed", failed}}.dump(2) << "\n";
    else if (failed.empty())
        std::cout << "pass\n";
    else
        std::cout << "FAIL " << failed.front() << "\n";
    return failed.empty() ? ok : invariant;
}

int cmd_faces(const std::string& norm, int max_dim, bool force)
{
    const auto N = PolytopeNorm::resolve(norm);
    const auto faces = enumerate_polar_faces(
        N, max_dim >= 0 ? std::optional<std::size_t>(static_cast<std::size_t>(max_dim)) : std::nullopt, force);
    if (g.json) {
        json a = json::array();
        for (const auto& G : faces)
            a.push_back(face_json(N, G));
        std::cout << json{{"norm", N.name()}, {"faces", a}}.dump(2) << "\n";
        return ok;
    }
    for (std::size_t i = 0; i < faces.size(); ++i)
        std::cout << i << " " << face_text(N, faces[i]) << "\n";
    return ok;
}

}   // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact Fréchet mean sets under polytope norms"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_flag("--approx", g.approx, "append decimal approximations to exact rationals");
    app.add_option("--threads", g.threads, "worker threads (default: POLYMEAN_THREADS or 1)")->check(CLI::PositiveNumber);

    std::string norm, data, step = "1/4", box, faces, facet;
    std::size_t n_max = 6;
    int max_dim = -1;
    bool force = false;

    auto* fm = app.add_subcommand("fm", "Fréchet mean set of a sample");
    fm->add_option("--norm", norm, "linf:<k>, l1:<k> or a norm file")->required();
    fm->add_option("--data", data, "sample file")->required();
    fm->add_flag("--text", [](std::int64_t) { g.json = false; }, "plain-text output (default)");

    auto* ft = app.add_subcommand("face-type", "face type of a sample at its relative-interior witness");
    ft->add_option("--norm", norm)->required();
    ft->add_option("--data", data)->required();

    auto* check = app.add_subcommand("check", "evaluate the three conditions on a face tuple");
    check->add_option("--norm", norm)->required();
    check->add_option("--faces", faces, "row sets, e.g. \"0,2;1,3;4\"")->required();
    check->add_option("--extend", facet, "also test appending this polar vertex (a row contained in the first face)");

    auto* thr = app.add_subcommand("threshold", "smallest n admitting a unique-mean face type");
    thr->add_option("--norm", norm)->required();
    thr->add_option("--n-max", n_max, "largest n to search")->check(CLI::Range(2, 64));
    thr->add_flag("--force", force, "lift the face-enumeration scale guard");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Monte Carlo uniqueness proportions");
    exp->add_option("--norm", ea.norm, "linf, l1, or a norm file");
    exp->add_option("--k", ea.ks, "dimensions: 3, 2,3 or 2..4");
    exp->add_option("--n-from", ea.n_from);
    exp->add_option("--n-to", ea.n_to);
    exp->add_option("--trials", ea.trials)->check(CLI::PositiveNumber);
    exp->add_option("--seed", ea.seed);
    exp->add_option("--bits", ea.bits, "dyadic rounding: coordinates are multiples of 2^-bits")->check(CLI::Range(1, 1000));
    exp->add_option("--csv", ea.csv, "write CSV here");
    exp->add_option("--svg", ea.svg, "write SVG plot here");
    exp->add_option("--config", ea.config, "key=value config file; flags override it");
    exp->add_flag("--force", ea.force, "lift the k <= 6, n <= 12 guard");
    exp->add_flag("--timing", ea.timing, "record elapsed_ms (otherwise 0, keeping output byte-stable)");

    auto* oc = app.add_subcommand("oracle-check", "cross-check fm against a grid search");
    oc->add_option("--norm", norm)->required();
    oc->add_option("--data", data)->required();
    oc->add_option("--step", step, "grid spacing (rational)");
    oc->add_option("--box", box, "lo,hi for all coordinates or lo,hi;lo,hi;... (default: data hull padded by 1)");

    auto* fc = app.add_subcommand("faces", "list proper faces of the polar polytope");
    fc->add_option("--norm", norm)->required();
    fc->add_option("--max-dim", max_dim);
    fc->add_flag("--force", force, "lift the face-enumeration scale guard");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return input;
    }

    try {
        if (g.threads == 0)
            (void)thread_count();
        if (*fm)
            return cmd_fm(norm, data);
        if (*ft)
            return cmd_face_type(norm, data);
        if (*check)
            return cmd_check(norm, faces, facet);
        if (*thr)
            return cmd_threshold(norm, n_max, force);
        if (*exp)
            return cmd_experiment(ea, *exp);
        if (*oc)
            return cmd_oracle_check(norm, data, step, box);
        if (*fc)
            return cmd_faces(norm, max_dim, force);
    }
    catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input;
    }
    catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input;
    }
    catch (const FaceEnumerationTooLarge& e) {
        std::cerr << "input error: " << e.what() << " (use --force)\n";
        return input;
    }
    catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input;
    }
    catch (const SolverError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
    catch (const lp::EmptyPolyhedron& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
    catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
    return ok;
}
