#include "polymean/uniqueness.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "polymean/hpolyhedron.hpp"
#include "polymean/linalg.hpp"
#include "polymean/lp.hpp"

namespace polymean {

namespace {

std::vector<std::size_t> union_indices(const std::vector<PolarFace>& faces)
{
    std::vector<std::size_t> all;
    for (const auto& G : faces)
        all.insert(all.end(), G.vertex_indices.begin(), G.vertex_indices.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

void check_faces(const PolytopeNorm& N, const std::vector<PolarFace>& faces)
{
    if (faces.empty())
        throw std::invalid_argument("empty face tuple");
    for (const auto& G : faces)
        if (G.vertex_indices.empty() || G.vertex_indices.back() >= N.size())
            throw std::invalid_argument("face index out of range");
}

// 0 in relint conv(points): a strictly positive convex combination vanishes.
bool origin_in_relint(const PolytopeNorm& N, const std::vector<std::size_t>& idx)
{
    const std::size_t k = N.dim(), m = idx.size();
    // variables (x_1..x_m, t), maximize t
    HPolyhedron P(m + 1);
    for (std::size_t j = 0; j < m; ++j) {
        Vector row(m + 1);
        row[j] = -1;
        row[m] = 1;
        P.add(row, 0);
    }
    RationalMatrix E(0, m + 1);
    Vector f;
    for (std::size_t c = 0; c < k; ++c) {
        Vector row(m + 1);
        for (std::size_t j = 0; j < m; ++j)
            row[j] = N.row(idx[j])[c];
        E.append_row(row);
        f.push_back(0);
    }
    Vector sum(m + 1, Rational(1));
    sum[m] = 0;
    E.append_row(sum);
    f.push_back(1);
    Vector obj(m + 1);
    obj[m] = -1;
    auto o = lp::solve({obj, P, E, f});
    return o.status == lp::Status::optimal && (*o.point)[m] > 0;
}

std::size_t union_affine_dim(const PolytopeNorm& N, const std::vector<std::size_t>& idx)
{
    std::vector<Vector> pts;
    for (auto i : idx)
        pts.push_back(N.row_vector(i));
    return affine_dim(pts);
}

// Independent direction vectors spanning aff G - v0.
std::vector<Vector> face_directions(const PolytopeNorm& N, const PolarFace& G)
{
    EchelonBasis basis(N.dim());
    std::vector<Vector> out;
    const Vector v0 = N.row_vector(G.vertex_indices.front());
    for (std::size_t i = 1; i < G.vertex_indices.size() && out.size() < G.dim; ++i) {
        Vector d = N.row_vector(G.vertex_indices[i]) - v0;
        if (basis.insert(d))
            out.push_back(std::move(d));
    }
    return out;
}

using Mask = std::uint64_t;

class TupleSearch
{
    public:
        TupleSearch(const PolytopeNorm& N, bool force) : N_(N), k_(N.dim())
        {
            if (N.size() > 64)
                throw FaceEnumerationTooLarge();
            faces_ = enumerate_polar_faces(N, std::nullopt, force);
            for (const auto& G : faces_) {
                Mask m = 0;
                for (auto i : G.vertex_indices)
                    m |= Mask{1} << i;
                masks_.push_back(m);
                dirs_.push_back(face_directions(N, G));
            }
        }

        const std::vector<PolarFace>& faces() const { return faces_; }

        // Enumerates multisets of size n; stops at the first pass unless `exhaustive`.
        RefutationCounts run(std::size_t n, bool exhaustive, std::vector<std::size_t>* first_hit,
                             const std::function<void(const std::vector<PolarFace>&)>& on_pass)
        {
            counts_ = {};
            counts_.n = n;
            counts_.total = binomial(faces_.size() + n - 1, n);
            n_ = n;
            exhaustive_ = exhaustive;
            on_pass_ = on_pass;
            chosen_.assign(n, 0);
            hit_.clear();
            stop_ = false;
            dfs(0, 0, 0, 0, EchelonBasis(k_));
            if (first_hit)
                *first_hit = hit_;
            return counts_;
        }

    private:
        // tuples completing a prefix of length depth+1 whose last face is f
        std::uint64_t subtree(std::size_t f, std::size_t depth) const
        {
            const std::size_t rest = n_ - depth - 1;
            return binomial(faces_.size() - f + rest - 1, rest);
        }

        std::size_t affdim(Mask m)
        {
            auto it = affdim_.find(m);
            if (it != affdim_.end())
                return it->second;
            return affdim_[m] = union_affine_dim(N_, bits(m));
        }

        bool possible(Mask m)
        {
            auto it = possible_.find(m);
            if (it != possible_.end())
                return it->second;
            return possible_[m] = origin_in_relint(N_, bits(m));
        }

        static std::vector<std::size_t> bits(Mask m)
        {
            std::vector<std::size_t> out;
            for (std::size_t i = 0; m; ++i, m >>= 1)
                if (m & 1)
                    out.push_back(i);
            return out;
        }

        void dfs(std::size_t depth, std::size_t start, Mask mask, std::size_t sdim, const EchelonBasis& basis)
        {
            const std::size_t F = faces_.size();
            for (std::size_t f = start; f < F && !stop_; ++f) {
                const PolarFace& G = faces_[f];
                const std::size_t s = sdim + G.dim;
                if (s > k_) {
                    // faces are sorted by dimension, so every later choice overflows too
                    for (std::size_t g = f; g < F; ++g)
                        counts_.positive_probability += subtree(g, depth);
                    return;
                }
                EchelonBasis next = basis;
                bool independent = true;
                for (const auto& d : dirs_[f])
                    if (!next.insert(d)) {
                        independent = false;
                        break;
                    }
                if (!independent) {
                    counts_.positive_probability += subtree(f, depth);
                    continue;
                }
                const Mask m = mask | masks_[f];
                const std::size_t a = affdim(m);
                const std::size_t rest = n_ - depth - 1;
                // each further face raises the affine dimension by at most dim G + 1
                if (a + (k_ - s) + rest < k_) {
                    counts_.dimension_bound += subtree(f, depth);
                    continue;
                }
                chosen_[depth] = f;
                if (rest > 0) {
                    dfs(depth + 1, f, m, s, next);
                    continue;
                }
                if (a < k_) {
                    ++counts_.unique;
                    continue;
                }
                if (!possible(m)) {
                    ++counts_.possible;
                    continue;
                }
                ++counts_.passing;
                if (hit_.empty())
                    hit_ = chosen_;
                if (on_pass_) {
                    std::vector<PolarFace> tuple;
                    for (auto i : chosen_)
                        tuple.push_back(faces_[i]);
                    on_pass_(tuple);
                }
                if (!exhaustive_)
                    stop_ = true;
            }
        }

        const PolytopeNorm& N_;
        std::size_t k_;
        std::vector<PolarFace> faces_;
        std::vector<Mask> masks_;
        std::vector<std::vector<Vector>> dirs_;
        std::unordered_map<Mask, std::size_t> affdim_;
        std::unordered_map<Mask, bool> possible_;

        RefutationCounts counts_;
        std::size_t n_ = 0;
        bool exhaustive_ = false;
        bool stop_ = false;
        std::function<void(const std::vector<PolarFace>&)> on_pass_;
        std::vector<std::size_t> chosen_;
        std::vector<std::size_t> hit_;
};

}   // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t r)
{
    if (r > n)
        return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > ~std::uint64_t{0})
            throw std::overflow_error("binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

bool check_possible(const PolytopeNorm& N, const std::vector<PolarFace>& faces)
{
    check_faces(N, faces);
    return origin_in_relint(N, union_indices(faces));
}

bool check_positive_probability(const PolytopeNorm& N, const std::vector<PolarFace>& faces)
{
    check_faces(N, faces);
    std::size_t total = 0;
    for (const auto& G : faces)
        total += G.dim;
    return total == minkowski_dim_of_affine_sum(faces, N);
}

bool check_unique(const PolytopeNorm& N, const std::vector<PolarFace>& faces)
{
    check_faces(N, faces);
    return union_affine_dim(N, union_indices(faces)) == N.dim();
}

ConditionReport condition_report(const PolytopeNorm& N, const std::vector<PolarFace>& faces)
{
    ConditionReport r;
    r.possible = check_possible(N, faces);
    r.positive_probability = check_positive_probability(N, faces);
    const std::size_t a = union_affine_dim(N, union_indices(faces));
    r.unique = a == N.dim();
    r.predicted_fm_dim = N.dim() - a;
    return r;
}

bool check_inductive_extension(const PolytopeNorm& N, const std::vector<PolarFace>& faces, const PolarFace& new_facet)
{
    check_faces(N, faces);
    if (new_facet.vertex_indices.size() != 1 ||
        !std::binary_search(faces.front().vertex_indices.begin(), faces.front().vertex_indices.end(),
                            new_facet.vertex_indices.front()))
        throw std::invalid_argument("not a facet extension");
    if (!condition_report(N, faces).passes())
        return true;
    auto extended = faces;
    extended.push_back(new_facet);
    return condition_report(N, extended).passes();
}

RefutationCounts count_tuples(const PolytopeNorm& N, std::size_t n, const ThresholdOptions& options)
{
    if (n == 0)
        throw std::invalid_argument("tuple size must be positive");
    TupleSearch search(N, options.force);
    return search.run(n, true, nullptr, options.on_pass);
}

ThresholdCertificate threshold_search(const PolytopeNorm& N, std::size_t n_max, const ThresholdOptions& options)
{
    TupleSearch search(N, options.force);
    ThresholdCertificate cert;
    cert.norm_name = N.name();
    cert.norm_hash = N.hash();
    cert.face_count = search.faces().size();
    for (std::size_t n = 2; n <= n_max; ++n) {
        std::vector<std::size_t> hit;
        RefutationCounts counts = search.run(n, static_cast<bool>(options.on_pass), &hit, options.on_pass);
        if (!hit.empty()) {
            cert.N = n;
            for (auto i : hit)
                cert.witness_faces.push_back(search.faces()[i]);
            return cert;
        }
        if (counts.rejected() != counts.total)
            throw std::logic_error("tuple search lost count of rejected tuples");
        cert.refutations.push_back(counts);
    }
    throw ThresholdNotFound("no face tuple passes all conditions for n <= " + std::to_string(n_max), cert);
}

std::string to_text(const ThresholdCertificate& cert, const PolytopeNorm& N)
{
    std::ostringstream out;
    out << "norm " << (cert.norm_name.empty() ? "<unnamed>" : cert.norm_name) << "\n";
    out << "hash " << std::hex << std::setw(16) << std::setfill('0') << cert.norm_hash << std::dec << "\n";
    out << "dimension " << N.dim() << "\n";
    out << "proper_faces " << cert.face_count << "\n";
    if (cert.N)
        out << "N = " << cert.N << "\n";
    else
        out << "N = not found\n";
    for (std::size_t i = 0; i < cert.witness_faces.size(); ++i) {
        const auto& G = cert.witness_faces[i];
        out << "witness " << i + 1 << " dim " << G.dim << " rows {";
        for (std::size_t j = 0; j < G.vertex_indices.size(); ++j)
            out << (j ? "," : "") << G.vertex_indices[j];
        out << "} vertices";
        for (auto v : G.vertex_indices) {
            out << " (";
            for (std::size_t c = 0; c < N.dim(); ++c)
                out << (c ? "," : "") << to_string(N.row(v)[c]);
            out << ")";
        }
        out << "\n";
    }
    for (const auto& r : cert.refutations)
        out << "refuted n=" << r.n << " total=" << r.total << " positive_probability=" << r.positive_probability
            << " dimension_bound=" << r.dimension_bound << " unique=" << r.unique << " possible=" << r.possible
            << "\n";
    return out.str();
}

}   // namespace polymean
