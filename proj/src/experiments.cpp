#include "polymean/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <gmp.h>

namespace polymean {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k, std::uint64_t n, std::uint64_t trial)
{
    std::uint64_t h = seed;
    for (std::uint64_t v : {k, n, trial})
        h = mix64(h ^ (v + 0x9e3779b97f4a7c15ull));
    return h;
}

double counter_uniform(std::uint64_t key, std::uint64_t counter)
{
    const std::uint64_t bits = mix64(key ^ mix64(counter)) >> 11;
    return std::ldexp(static_cast<double>(bits + 1), -53);
}

namespace {

Rational dyadic(double z, unsigned bits)
{
    const double scaled = std::nearbyint(std::ldexp(z, static_cast<int>(bits)));
    Integer num;
    mpz_set_d(num.backend().data(), scaled);
    Integer den = 1;
    den <<= bits;
    return Rational(num) / Rational(den);
}

std::size_t parse_size(const std::string& text, const std::string& key)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("bad value for " + key + ": '" + text + "'");
    return v;
}

bool parse_bool(const std::string& text, const std::string& key)
{
    if (text == "1" || text == "true" || text == "yes")
        return true;
    if (text == "0" || text == "false" || text == "no")
        return false;
    throw ParseError("bad value for " + key + ": '" + text + "'");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

PolytopeNorm norm_for(const ExperimentConfig& cfg, std::size_t k)
{
    if (cfg.norm == "linf")
        return PolytopeNorm::linf(k);
    if (cfg.norm == "l1")
        return PolytopeNorm::l1(k);
    return PolytopeNorm::resolve(cfg.norm);
}

}   // namespace

Sample sample_gaussian_rational(std::size_t k, std::size_t n, std::uint64_t seed, unsigned denominator_bits)
{
    if (k == 0 || n == 0)
        throw std::invalid_argument("sample dimensions must be positive");
    Sample S;
    S.points.assign(n, Vector(k));
    const std::size_t total = k * n;
    for (std::size_t c = 0; c < total; c += 2) {
        const double u1 = counter_uniform(seed, c), u2 = counter_uniform(seed, c + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        S.points[c / k][c % k] = dyadic(r * std::cos(a), denominator_bits);
        if (c + 1 < total)
            S.points[(c + 1) / k][(c + 1) % k] = dyadic(r * std::sin(a), denominator_bits);
    }
    return S;
}

ExperimentConfig parse_experiment_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos)
            line.resize(h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "norm")
            cfg.norm = value;
        else if (key == "k") {
            cfg.ks.clear();
            for (const auto& part : split(value, ','))
                cfg.ks.push_back(parse_size(trim(part), key));
        }
        else if (key == "n_from")
            cfg.n_from = parse_size(value, key);
        else if (key == "n_to")
            cfg.n_to = parse_size(value, key);
        else if (key == "trials")
            cfg.trials = parse_size(value, key);
        else if (key == "seed")
            cfg.seed = parse_size(value, key);
        else if (key == "denominator_bits")
            cfg.denominator_bits = static_cast<unsigned>(parse_size(value, key));
        else if (key == "force")
            cfg.force = parse_bool(value, key);
        else if (key == "threads")
            cfg.threads = static_cast<unsigned>(parse_size(value, key));
        else if (key == "timing")
            cfg.timing = parse_bool(value, key);
        else
            throw ParseError("unknown config key '" + key + "'");
    }
    return cfg;
}

ExperimentResult run_uniqueness_experiment(const ExperimentConfig& cfg)
{
    if (cfg.trials == 0)
        throw std::invalid_argument("trials must be at least 1");
    if (cfg.n_from < 2 || cfg.n_to < cfg.n_from)
        throw std::invalid_argument("n range must satisfy 2 <= n_from <= n_to");
    if (cfg.ks.empty())
        throw std::invalid_argument("no dimension given");
    for (auto k : cfg.ks)
        if (!cfg.force && (k > 6 || cfg.n_to > 12))
            throw std::invalid_argument("experiment scale guard exceeded (k <= 6, n <= 12); use force");

    std::vector<std::size_t> ks = cfg.ks;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    ExperimentResult result;
    for (auto k : ks) {
        const PolytopeNorm N = norm_for(cfg, k);
        if (N.dim() != k)
            throw std::invalid_argument("norm dimension " + std::to_string(N.dim()) + " does not match k = " +
                                        std::to_string(k));
        const std::string label = N.name().empty() ? cfg.norm : N.name();
        for (std::size_t n = cfg.n_from; n <= cfg.n_to; ++n) {
            ExperimentCell cell{label, k, n, cfg.trials, 0, std::vector<std::size_t>(k + 1, 0), 0};
            const auto start = std::chrono::steady_clock::now();
            std::mutex lock;
            std::exception_ptr failure;
            auto work = [&](std::size_t first, std::size_t stride) {
                try {
                    for (std::size_t t = first; t < cfg.trials; t += stride) {
                        Sample S = sample_gaussian_rational(k, n, trial_seed(cfg.seed, k, n, t), cfg.denominator_bits);
                        const FMSetResult R = fm_set(N, S);
                        std::lock_guard<std::mutex> g(lock);
                        ++cell.dim_histogram[R.fm_dim];
                        cell.unique_count += R.unique;
                    }
                }
                catch (...) {
                    std::lock_guard<std::mutex> g(lock);
                    if (!failure)
                        failure = std::current_exception();
                }
            };
            const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials)));
            if (threads == 1)
                work(0, 1);
            else {
                std::vector<std::thread> pool;
                for (unsigned i = 0; i < threads; ++i)
                    pool.emplace_back(work, i, threads);
                for (auto& th : pool)
                    th.join();
            }
            if (failure)
                std::rethrow_exception(failure);
            if (cfg.timing)
                cell.elapsed_ms = static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                        .count());
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

void emit_csv(const ExperimentResult& result, std::ostream& out)
{
    std::size_t K = 0;
    for (const auto& c : result.cells)
        K = std::max(K, c.k);
    out << "norm,k,n,trials,unique_count";
    for (std::size_t d = 0; d <= K; ++d)
        out << ",dim" << d;
    out << ",elapsed_ms\n";
    for (const auto& c : result.cells) {
        out << c.norm << ',' << c.k << ',' << c.n << ',' << c.trials << ',' << c.unique_count;
        for (std::size_t d = 0; d <= K; ++d)
            out << ',' << (d < c.dim_histogram.size() ? c.dim_histogram[d] : 0);
        out << ',' << c.elapsed_ms << '\n';
    }
}

ExperimentResult parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("csv: missing header");
    const auto header = split(line, ',');
    if (header.size() < 7 || header[0] != "norm" || header.back() != "elapsed_ms")
        throw ParseError("csv: unexpected header");
    const std::size_t dims = header.size() - 6;
    for (std::size_t d = 0; d < dims; ++d)
        if (header[5 + d] != "dim" + std::to_string(d))
            throw ParseError("csv: unexpected header");
    ExperimentResult result;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != header.size())
            throw ParseError("csv: wrong field count");
        ExperimentCell c;
        c.norm = f[0];
        c.k = parse_size(f[1], "k");
        c.n = parse_size(f[2], "n");
        c.trials = parse_size(f[3], "trials");
        c.unique_count = parse_size(f[4], "unique_count");
        if (c.k + 1 > dims)
            throw ParseError("csv: k exceeds histogram width");
        for (std::size_t d = 0; d < dims; ++d) {
            const std::size_t v = parse_size(f[5 + d], "dim");
            if (d <= c.k)
                c.dim_histogram.push_back(v);
            else if (v != 0)
                throw ParseError("csv: dimension above k has nonzero count");
        }
        c.elapsed_ms = parse_size(f.back(), "elapsed_ms");
        result.cells.push_back(std::move(c));
    }
    return result;
}

void emit_plot(const ExperimentResult& result, std::ostream& out)
{
    if (result.cells.empty())
        throw std::invalid_argument("empty result");
    std::map<std::pair<std::size_t, std::string>, std::vector<const ExperimentCell*>> series;
    std::size_t n_lo = result.cells.front().n, n_hi = n_lo;
    for (const auto& c : result.cells) {
        series[{c.k, c.norm}].push_back(&c);
        n_lo = std::min(n_lo, c.n);
        n_hi = std::max(n_hi, c.n);
    }
    constexpr double W = 640, H = 420, left = 70, right = 150, top = 30, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    const double span = n_hi > n_lo ? static_cast<double>(n_hi - n_lo) : 1.0;
    auto X = [&](std::size_t n) { return left + pw * static_cast<double>(n - n_lo) / span; };
    auto Y = [&](double p) { return top + ph * (1.0 - p); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

    out << std::fixed << std::setprecision(2);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<g stroke=\"#000\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << left << "\" y1=\"" << Y(0) << "\" x2=\"" << left + pw << "\" y2=\"" << Y(0) << "\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << Y(0) << "\" x2=\"" << left << "\" y2=\"" << Y(1) << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
    for (std::size_t n = n_lo; n <= n_hi; ++n)
        out << "<text x=\"" << X(n) << "\" y=\"" << Y(0) + 18 << "\">" << n << "</text>\n";
    out << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double p = i / 4.0;
        out << "<text x=\"" << left - 8 << "\" y=\"" << Y(p) + 4 << "\">" << p << "</text>\n";
        out << "<line x1=\"" << left << "\" y1=\"" << Y(p) << "\" x2=\"" << left + pw << "\" y2=\"" << Y(p)
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    }
    out << "</g>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">sample size n</text>\n";
    out << "<text x=\"18\" y=\"" << top + ph / 2 << "\" font-family=\"sans-serif\" font-size=\"14\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 18 " << top + ph / 2
        << ")\">proportion with a unique mean</text>\n";

    std::size_t idx = 0;
    for (const auto& [key, cells] : series) {
        const char* colour = palette[idx % std::size(palette)];
        std::vector<const ExperimentCell*> sorted = cells;
        std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->n < b->n; });
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < sorted.size(); ++i)
            out << (i ? " " : "") << X(sorted[i]->n) << ',' << Y(sorted[i]->proportion());
        out << "\"/>\n";
        for (const auto* c : sorted)
            out << "<circle cx=\"" << X(c->n) << "\" cy=\"" << Y(c->proportion()) << "\" r=\"3\" fill=\"" << colour
                << "\"/>\n";
        const double ly = top + 20 * static_cast<double>(idx);
        out << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
            << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 45 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << key.second << " k=" << key.first << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

}   // namespace polymean
