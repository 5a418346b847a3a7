#include "drslf/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>

#include "drslf/error.hpp"
#include "drslf/format.hpp"

namespace drslf {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    return out;
}

// Packs a (user, service) pair into one key; ids are bounded to 32 bits.
constexpr std::size_t kMaxId = (std::size_t{1} << 32) - 1;

std::uint64_t pair_key(std::size_t u, std::size_t s) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(s);
}

std::size_t floor_fraction(std::size_t n, double frac) {
    // The small offset keeps exact products such as 10 * 0.45 from rounding down.
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * frac + 1e-9));
}

}  // namespace

TripleSet::TripleSet(std::size_t num_users, std::size_t num_services, std::vector<Triple> triples)
    : num_users_(num_users), num_services_(num_services), triples_(std::move(triples)) {
    if (num_users_ > kMaxId + 1 || num_services_ > kMaxId + 1) {
        throw InvalidArgument("matrix dimensions exceed 2^32");
    }
    std::vector<std::uint64_t> keys;
    keys.reserve(triples_.size());
    for (const Triple& t : triples_) {
        if (t.user >= num_users_ || t.service >= num_services_) {
            throw InvalidArgument("triple (" + std::to_string(t.user) + ", " +
                                  std::to_string(t.service) + ") outside " +
                                  std::to_string(num_users_) + "x" + std::to_string(num_services_));
        }
        if (!std::isfinite(t.value)) {
            throw InvalidArgument("non-finite value at (" + std::to_string(t.user) + ", " +
                                  std::to_string(t.service) + ")");
        }
        keys.push_back(pair_key(t.user, t.service));
    }
    std::sort(keys.begin(), keys.end());
    if (const auto dup = std::adjacent_find(keys.begin(), keys.end()); dup != keys.end()) {
        throw InvalidArgument("duplicate observation (" + std::to_string(*dup >> 32) + ", " +
                              std::to_string(*dup & 0xffffffffu) + ")");
    }
}

const char* to_string(Role role) noexcept {
    switch (role) {
        case Role::train: return "train";
        case Role::validation: return "validation";
        case Role::test: return "test";
        case Role::unspecified: break;
    }
    return "unspecified";
}

IndexedDataset build_index(TripleSet t, Role role) {
    IndexedDataset d;
    d.role_ = role;
    const std::size_t nu = t.num_users();
    const std::size_t ns = t.num_services();
    d.user_offsets_.assign(nu + 1, 0);
    d.service_offsets_.assign(ns + 1, 0);
    for (const Triple& tr : t.triples()) {
        ++d.user_offsets_[tr.user + 1];
        ++d.service_offsets_[tr.service + 1];
    }
    std::partial_sum(d.user_offsets_.begin(), d.user_offsets_.end(), d.user_offsets_.begin());
    std::partial_sum(d.service_offsets_.begin(), d.service_offsets_.end(), d.service_offsets_.begin());

    d.user_index_.resize(t.size());
    d.service_index_.resize(t.size());
    std::vector<std::size_t> user_fill(d.user_offsets_.begin(), d.user_offsets_.end() - 1);
    std::vector<std::size_t> service_fill(d.service_offsets_.begin(), d.service_offsets_.end() - 1);
    const auto triples = t.triples();
    for (std::size_t k = 0; k < triples.size(); ++k) {
        d.user_index_[user_fill[triples[k].user]++] = k;
        d.service_index_[service_fill[triples[k].service]++] = k;
    }
    d.base_ = std::move(t);
    return d;
}

SplitDataset split(const TripleSet& t, double train_frac, double val_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0) || !(val_frac > 0.0 && val_frac < 1.0) ||
        train_frac + val_frac > 1.0) {
        throw InvalidArgument("split fractions must lie in (0,1) with train + validation <= 1");
    }
    const std::size_t n = t.size();
    const std::size_t n_train = floor_fraction(n, train_frac);
    const std::size_t n_val = floor_fraction(n, val_frac);
    if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
        throw InvalidArgument(std::to_string(n) +
                              " observations are too few to give every split part one element");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto take = [&](std::size_t first, std::size_t last, Role role) {
        std::vector<Triple> part;
        part.reserve(last - first);
        for (std::size_t i = first; i < last; ++i) part.push_back(t[order[i]]);
        return build_index(TripleSet(t.num_users(), t.num_services(), std::move(part)), role);
    };

    SplitDataset out;
    out.train = take(0, n_train, Role::train);
    out.validation = take(n_train, n_train + n_val, Role::validation);
    out.test = take(n_train + n_val, n, Role::test);
    out.seed = seed;
    return out;
}

TripleSet parse_dense_matrix(std::istream& in) {
    std::vector<Triple> triples;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_whitespace(line);
        if (tokens.empty()) continue;
        if (rows == 0) {
            cols = tokens.size();
        } else if (tokens.size() != cols) {
            throw DataError("ragged row: expected " + std::to_string(cols) + " columns, found " +
                                std::to_string(tokens.size()),
                            line_no);
        }
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            const auto value = parse_double(tokens[c]);
            if (!value) {
                throw DataError("non-numeric token '" + std::string(tokens[c]) + "'", line_no);
            }
            if (!std::isfinite(*value)) {
                throw DataError("non-finite value '" + std::string(tokens[c]) + "'", line_no);
            }
            if (*value < 0.0) continue;
            triples.push_back({rows, c, *value});
        }
        ++rows;
    }
    if (in.bad()) throw DataError("read failure");
    if (rows == 0) throw DataError("dense matrix has no rows");
    return TripleSet(rows, cols, std::move(triples));
}

TripleSet load_dense_matrix(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_dense_matrix(in);
}

void write_dense_matrix(const TripleSet& t, std::ostream& out) {
    std::vector<double> cells(t.num_users() * t.num_services(), -1.0);
    for (const Triple& tr : t.triples()) cells[tr.user * t.num_services() + tr.service] = tr.value;
    for (std::size_t u = 0; u < t.num_users(); ++u) {
        for (std::size_t s = 0; s < t.num_services(); ++s) {
            if (s > 0) out << ' ';
            out << format_double(cells[u * t.num_services() + s]);
        }
        out << '\n';
    }
}

TripleSet parse_triples(std::istream& in) {
    std::vector<Triple> triples;
    std::unordered_set<std::uint64_t> seen;
    std::size_t max_user = 0;
    std::size_t max_service = 0;
    std::size_t hint_users = 0;
    std::size_t hint_services = 0;
    bool has_hint = false;

    const auto parse_id = [](std::string_view token, std::size_t line_no, const char* what) {
        const auto id = parse_integer(token);
        if (!id) throw DataError(std::string("malformed ") + what + " id '" + std::string(token) + "'", line_no);
        if (*id < 0) throw DataError(std::string("negative ") + what + " id " + std::to_string(*id), line_no);
        if (static_cast<unsigned long long>(*id) > kMaxId) {
            throw DataError(std::string(what) + " id exceeds 2^32", line_no);
        }
        return static_cast<std::size_t>(*id);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_whitespace(line);
        if (tokens.empty()) continue;
        if (tokens.front().starts_with('#')) {
            // "# shape U S" (the '#' may be attached or separate)
            std::vector<std::string_view> rest(tokens.begin(), tokens.end());
            if (rest.front() == "#") {
                rest.erase(rest.begin());
            } else {
                rest.front().remove_prefix(1);
            }
            if (rest.size() == 3 && rest[0] == "shape") {
                hint_users = parse_id(rest[1], line_no, "shape user");
                hint_services = parse_id(rest[2], line_no, "shape service");
                has_hint = true;
            }
            continue;
        }
        if (tokens.size() != 3) {
            throw DataError("malformed record: expected 'user service value', found " +
                                std::to_string(tokens.size()) + " fields",
                            line_no);
        }
        const std::size_t u = parse_id(tokens[0], line_no, "user");
        const std::size_t s = parse_id(tokens[1], line_no, "service");
        const auto value = parse_double(tokens[2]);
        if (!value) throw DataError("malformed value '" + std::string(tokens[2]) + "'", line_no);
        if (!std::isfinite(*value)) throw DataError("non-finite value", line_no);
        if (!seen.insert(pair_key(u, s)).second) {
            throw DataError("duplicate observation (" + std::to_string(u) + ", " +
                                std::to_string(s) + ")",
                            line_no);
        }
        max_user = std::max(max_user, u);
        max_service = std::max(max_service, s);
        triples.push_back({u, s, *value});
    }
    if (in.bad()) throw DataError("read failure");
    if (triples.empty()) throw DataError("no observations");

    std::size_t users = max_user + 1;
    std::size_t services = max_service + 1;
    if (has_hint) {
        if (hint_users < users || hint_services < services) {
            throw DataError("ids exceed the declared shape " + std::to_string(hint_users) + "x" +
                            std::to_string(hint_services));
        }
        users = hint_users;
        services = hint_services;
    }
    return TripleSet(users, services, std::move(triples));
}

TripleSet load_triples(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_triples(in);
}

void write_triples(const TripleSet& t, std::ostream& out) {
    out << "# shape " << t.num_users() << ' ' << t.num_services() << '\n';
    for (const Triple& tr : t.triples()) {
        out << tr.user << ' ' << tr.service << ' ' << format_double(tr.value) << '\n';
    }
}

void save_triples(const TripleSet& t, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_triples(t, out);
    if (!out) throw DataError("write failure on '" + path.string() + "'");
}

SynthResult synth_lowrank(std::size_t num_users, std::size_t num_services, std::size_t rank,
                          double density, double noise_sigma, std::uint64_t seed,
                          SynthOptions options) {
    if (num_users == 0 || num_services == 0) throw InvalidArgument("synth: empty matrix");
    if (rank == 0) throw InvalidArgument("synth: rank must be >= 1");
    if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("synth: density must lie in (0,1]");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidArgument("synth: noise_sigma must be >= 0");
    }
    if (!(options.factor_lo < options.factor_hi)) {
        throw InvalidArgument("synth: factor range must satisfy lo < hi");
    }
    const std::size_t cells = num_users * num_services;
    const std::size_t count = floor_fraction(cells, density);
    if (count == 0) throw InvalidArgument("synth: density yields no observations");

    std::mt19937_64 rng(seed);
    FactorState truth(Shape{num_users, num_services, rank});
    std::uniform_real_distribution<double> factor(options.factor_lo, options.factor_hi);
    for (double& v : truth.params().values()) v = factor(rng);

    std::vector<std::size_t> all(cells);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);

    std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
    std::vector<Triple> triples;
    triples.reserve(count);
    for (const std::size_t cell : chosen) {
        const std::size_t u = cell / num_services;
        const std::size_t s = cell % num_services;
        const auto xu = truth.user(u);
        const auto xs = truth.service(s);
        double value = 0.0;
        for (std::size_t d = 0; d < rank; ++d) value += xu[d] * xs[d];
        if (noise_sigma > 0.0) value += noise(rng);
        triples.push_back({u, s, value});
    }
    return {TripleSet(num_users, num_services, std::move(triples)), std::move(truth)};
}

}  // namespace drslf
