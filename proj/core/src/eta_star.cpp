#include "signspan/eta_star.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "signspan/span_basis.hpp"

namespace signspan {

std::vector<long long> canonicalize_point(std::vector<long long> x) {
    long long g = 0;
    for (long long v : x) g = std::gcd(g, v < 0 ? -v : v);
    if (g == 0) throw std::invalid_argument("point config: zero vector is not a projective point");
    int first = -1;
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] /= g;
        if (first < 0 && x[j] != 0) first = static_cast<int>(j);
    }
    if (x[first] < 0)
        for (auto& v : x) v = -v;
    return x;
}

PointConfig PointConfig::create(int ambient, IntMatrix pts,
                                std::optional<std::vector<Rational>> weights) {
    if (ambient < 2) throw std::invalid_argument("point config: ambient dimension must be >= 2");
    if (pts.empty()) throw std::invalid_argument("point config: no points");
    PointConfig h;
    h.ambient = ambient;
    h.points.reserve(pts.size());
    std::set<std::vector<long long>> seen;
    for (auto& raw : pts) {
        if (static_cast<int>(raw.size()) != ambient)
            throw std::invalid_argument("point config: point length != ambient");
        auto canon = canonicalize_point(std::move(raw));
        if (!seen.insert(canon).second)
            throw std::invalid_argument("point config: repeated projective point");
        h.points.push_back(std::move(canon));
    }
    const int t = h.size();
    if (weights) {
        if (static_cast<int>(weights->size()) != t)
            throw std::invalid_argument("point config: weight count != point count");
        Rational sum(0);
        for (const auto& w : *weights) sum += w;
        if (sum != 1) throw std::invalid_argument("point config: weights must sum to 1");
        h.weights = std::move(*weights);
    } else {
        h.weights.assign(t, Rational(0));
        h.weights[0] = 1;
    }
    return h;
}

PointConfig PointConfig::with_weights(std::vector<Rational> w) const {
    PointConfig copy = *this;
    if (static_cast<int>(w.size()) != size())
        throw std::invalid_argument("point config: weight count != point count");
    Rational sum(0);
    for (const auto& x : w) sum += x;
    if (sum != 1) throw std::invalid_argument("point config: weights must sum to 1");
    copy.weights = std::move(w);
    return copy;
}

bool PointConfig::spans_ambient() const { return rank_int(points) == ambient; }

PointConfig PointConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("point config: bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("ambient") || !j.contains("points"))
        throw std::invalid_argument("point config: need {\"ambient\":..., \"points\":[...]}");
    const int ambient = j.at("ambient").get<int>();
    IntMatrix pts;
    for (const auto& row : j.at("points")) {
        std::vector<long long> x;
        for (const auto& v : row) x.push_back(v.get<long long>());
        pts.push_back(std::move(x));
    }
    std::optional<std::vector<Rational>> weights;
    if (j.contains("weights") && !j.at("weights").is_null()) {
        std::vector<Rational> w;
        for (const auto& v : j.at("weights")) {
            if (v.is_string())
                w.push_back(rational_from_string(v.get<std::string>()));
            else if (v.is_number_integer())
                w.push_back(Rational(v.get<long long>()));
            else
                throw std::invalid_argument("point config: weights must be \"num/den\" strings or integers");
        }
        weights = std::move(w);
    }
    return create(ambient, std::move(pts), std::move(weights));
}

std::string PointConfig::to_json() const {
    nlohmann::ordered_json j;
    j["ambient"] = ambient;
    j["points"] = points;
    std::vector<std::string> w;
    for (const auto& x : weights) w.push_back(to_fraction_string(x));
    j["weights"] = w;
    return j.dump();
}

namespace {

// Rank/membership helper that prefers the int64 reducer and falls back to
// big integers when coordinates are large.  The big reducer is only
// constructed on demand; it is expensive to initialize.
class PointSpan {
  public:
    void build(const IntMatrix& rows, int /*cols*/) {
        if (rows.empty()) {
            empty_ = true;
            return;
        }
        empty_ = false;
        use_big_ = !fast_.reduce_rows(rows);
        if (use_big_) {
            if (!big_) big_ = std::make_unique<SpanReducerBig>();
            big_->reduce_rows(rows);
        }
    }

    int rank() const { return empty_ ? 0 : (use_big_ ? big_->rank() : fast_.rank()); }

    bool contains(const std::vector<long long>& x) const {
        if (empty_) return false;
        return use_big_ ? big_->contains_int_vector(x) : fast_.contains_int_vector(x);
    }

  private:
    bool empty_ = true;
    bool use_big_ = false;
    SpanReducer64 fast_;
    std::unique_ptr<SpanReducerBig> big_;
};

void check_eta_guards(const PointConfig& h, bool force = false) {
    if (force) return;
    if (h.size() > kEtaMaxPoints || h.ambient > kEtaMaxAmbient)
        throw std::invalid_argument("eta-star: configuration exceeds guards (T <= 20, ambient <= 7)");
}

int subset_rank(const PointConfig& h, const std::vector<int>& subset) {
    IntMatrix rows;
    rows.reserve(subset.size());
    for (int i : subset) rows.push_back(h.points[i]);
    return rank_int(rows);
}

template <typename Fn>
void for_each_subset(int t, int k, Fn&& fn) {
    if (k == 0 || k > t) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == t - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Alternating-sign incidence matrix between consecutive slices (rows indexed
// by the faces, columns by the simplices).
IntMatrix boundary_matrix(const std::vector<std::vector<int>>& faces,
                          const std::vector<std::vector<int>>& simplices) {
    std::map<std::vector<int>, int> face_index;
    for (std::size_t i = 0; i < faces.size(); ++i) face_index[faces[i]] = static_cast<int>(i);
    IntMatrix b(faces.size(), std::vector<long long>(simplices.size(), 0));
    for (std::size_t c = 0; c < simplices.size(); ++c) {
        const auto& s = simplices[c];
        std::vector<int> face(s.size() - 1);
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            int k = 0;
            for (std::size_t j = 0; j < s.size(); ++j)
                if (j != drop) face[k++] = s[j];
            const auto it = face_index.find(face);
            if (it == face_index.end())
                throw std::logic_error("skeleton slices are not downward closed");
            b[it->second][c] = (drop % 2 == 0) ? 1 : -1;
        }
    }
    return b;
}

int matrix_rank_over(const IntMatrix& m, const HomologyField& field) {
    if (m.empty() || m[0].empty()) return 0;
    return field.rational ? rank_int(m) : rank_mod_p(m, field.prime);
}

}  // namespace

SkeletonSlice build_skeleton(const PointConfig& h) {
    check_eta_guards(h);
    if (!h.spans_ambient())
        throw std::invalid_argument("build_skeleton: points must span the ambient space");
    const int t = h.size();
    const int n = h.n();
    SkeletonSlice s;
    s.n = n;
    auto collect = [&](int size, std::vector<std::vector<int>>& out) {
        for_each_subset(t, size, [&](const std::vector<int>& idx) {
            if (subset_rank(h, idx) < h.ambient) out.push_back(idx);
        });
    };
    if (n >= 2) collect(n - 1, s.size_nm1);
    collect(n, s.size_n);
    collect(n + 1, s.size_np1);
    return s;
}

long long eta_star_homology(const PointConfig& h, const HomologyField& field) {
    if (!field.rational && (field.prime < 2 || field.prime >= (1ULL << 31)))
        throw std::invalid_argument("eta-star: field must be the rationals or GF(prime < 2^31)");
    if (!h.spans_ambient()) return 0;
    const SkeletonSlice s = build_skeleton(h);
    const int n = s.n;

    const long long cells = static_cast<long long>(s.size_n.size());
    if (cells == 0) return 0;

    // rank H~_{n-1} = dim ker(boundary out of dim n-1) - rank(boundary in
    // from dim n); for n == 1 the outgoing map is the augmentation.
    long long rank_out = 0;
    if (n == 1) {
        rank_out = 1;  // all-ones augmentation row over any field
    } else {
        rank_out = matrix_rank_over(boundary_matrix(s.size_nm1, s.size_n), field);
    }
    long long rank_in = 0;
    if (!s.size_np1.empty())
        rank_in = matrix_rank_over(boundary_matrix(s.size_n, s.size_np1), field);

    return cells - rank_out - rank_in;
}

FlagValue flag_of(const std::vector<int>& tuple, const PointConfig& h) {
    const int n = h.n();
    if (static_cast<int>(tuple.size()) != n)
        throw std::invalid_argument("flag_of: tuple length must equal n");
    std::set<int> distinct(tuple.begin(), tuple.end());
    if (static_cast<int>(distinct.size()) != n)
        throw std::invalid_argument("flag_of: repeated index");
    for (int i : tuple)
        if (i < 0 || i >= h.size()) throw std::invalid_argument("flag_of: index out of range");

    FlagValue f;
    f.q.resize(n);
    IntMatrix suffix;
    PointSpan span;
    std::vector<char> in_span(h.size(), 0);
    for (int l = 1; l <= n; ++l) {
        const int idx = tuple[n - l];  // l-th element from the end
        suffix.push_back(h.points[idx]);
        span.build(suffix, h.ambient);
        if (span.rank() != l) throw std::invalid_argument("flag_of: dependent tuple");
        long long q = 0;
        for (int i = 0; i < h.size(); ++i) {
            if (span.contains(h.points[i])) {
                in_span[i] = 1;
                ++q;
            }
        }
        f.q[n - l] = q;  // stored as (q_n, ..., q_1)
        f.product *= q;
    }
    f.top_weight = 1;
    for (int i = 0; i < h.size(); ++i)
        if (in_span[i]) f.top_weight -= h.weights[i];
    return f;
}

namespace {

struct FlagSumState {
    const PointConfig* h;
    bool mutate;
    Rational sum = 0;
};

// Depth-first over ordered independent tuples built from the last position
// toward the first; the suffix spans grow one point at a time and the flag
// product accumulates along the path.
void flagsum_descend(FlagSumState& st, IntMatrix& suffix, const BigInt& product_so_far) {
    const PointConfig& h = *st.h;
    const int n = h.n();
    const int l = static_cast<int>(suffix.size()) + 1;
    for (int idx = 0; idx < h.size(); ++idx) {
        suffix.push_back(h.points[idx]);
        PointSpan span;
        span.build(suffix, h.ambient);
        if (span.rank() != l) {
            suffix.pop_back();
            continue;  // dependent extension (or repeated point)
        }
        long long q = 0;
        Rational span_weight(0);
        for (int i = 0; i < h.size(); ++i) {
            if (span.contains(h.points[i])) {
                ++q;
                span_weight += h.weights[i];
            }
        }
        const BigInt product = product_so_far * q;
        if (l == n) {
            Rational top = Rational(1) - span_weight;
            if (st.mutate) top = -top;
            st.sum += top / Rational(product);
        } else {
            flagsum_descend(st, suffix, product);
        }
        suffix.pop_back();
    }
}

}  // namespace

Rational eta_star_flagsum(const PointConfig& h, const FlagSumOptions& opts) {
    if (!h.spans_ambient()) return 0;
    if (!opts.force && (h.size() > kFlagSumMaxPoints || h.n() > kFlagSumMaxTupleLen))
        throw std::invalid_argument("flag sum: configuration exceeds guards (T <= 16, n <= 4)");
    FlagSumState st{&h, opts.negate_top_weight_mutation};
    IntMatrix suffix;
    suffix.reserve(h.n());
    flagsum_descend(st, suffix, BigInt(1));
    return st.sum;
}

EtaCrossCheck cross_check_eta_star(const PointConfig& h,
                                   const std::vector<std::vector<Rational>>& weight_sets,
                                   const FlagSumOptions& opts) {
    EtaCrossCheck out;
    out.homology = eta_star_homology(h);
    out.pass = true;
    for (const auto& ws : weight_sets) {
        Rational s = eta_star_flagsum(h.with_weights(ws), opts);
        if (s != out.homology) out.pass = false;
        out.flag_sums.push_back(std::move(s));
    }
    if (weight_sets.empty()) {
        Rational s = eta_star_flagsum(h, opts);
        if (s != out.homology) out.pass = false;
        out.flag_sums.push_back(std::move(s));
    }
    return out;
}

}  // namespace signspan
