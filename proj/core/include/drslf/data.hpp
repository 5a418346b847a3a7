#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "drslf/factor_state.hpp"

namespace drslf {

// One observed QoS value q_{u,s}.
struct Triple {
    std::size_t user = 0;
    std::size_t service = 0;
    double value = 0.0;

    friend bool operator==(const Triple&, const Triple&) = default;
};

// The known set K of an HDI matrix. Construction validates ids, finiteness
// and uniqueness of (user, service) pairs.
class TripleSet {
public:
    TripleSet() = default;
    TripleSet(std::size_t num_users, std::size_t num_services, std::vector<Triple> triples);

    std::size_t num_users() const noexcept { return num_users_; }
    std::size_t num_services() const noexcept { return num_services_; }
    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }

    std::span<const Triple> triples() const noexcept { return triples_; }
    const Triple& operator[](std::size_t i) const noexcept { return triples_[i]; }

    friend bool operator==(const TripleSet&, const TripleSet&) = default;

private:
    std::size_t num_users_ = 0;
    std::size_t num_services_ = 0;
    std::vector<Triple> triples_;
};

enum class Role { unspecified, train, validation, test };

const char* to_string(Role role) noexcept;

// TripleSet plus per-user (K_u) and per-service (K_s) observation index
// lists, stored CSR-style. Indices within each list keep triple order.
class IndexedDataset {
public:
    IndexedDataset() = default;

    const TripleSet& base() const noexcept { return base_; }
    std::span<const Triple> triples() const noexcept { return base_.triples(); }
    std::size_t size() const noexcept { return base_.size(); }
    bool empty() const noexcept { return base_.empty(); }
    std::size_t num_users() const noexcept { return base_.num_users(); }
    std::size_t num_services() const noexcept { return base_.num_services(); }
    Role role() const noexcept { return role_; }

    std::span<const std::size_t> by_user(std::size_t u) const noexcept {
        return {user_index_.data() + user_offsets_[u], user_offsets_[u + 1] - user_offsets_[u]};
    }
    std::span<const std::size_t> by_service(std::size_t s) const noexcept {
        return {service_index_.data() + service_offsets_[s],
                service_offsets_[s + 1] - service_offsets_[s]};
    }
    // |K_u| and |K_s| as reals, the instance-frequency weights.
    double user_count(std::size_t u) const noexcept {
        return static_cast<double>(user_offsets_[u + 1] - user_offsets_[u]);
    }
    double service_count(std::size_t s) const noexcept {
        return static_cast<double>(service_offsets_[s + 1] - service_offsets_[s]);
    }

    friend IndexedDataset build_index(TripleSet t, Role role);

private:
    TripleSet base_;
    Role role_ = Role::unspecified;
    std::vector<std::size_t> user_offsets_{0};
    std::vector<std::size_t> user_index_;
    std::vector<std::size_t> service_offsets_{0};
    std::vector<std::size_t> service_index_;
};

IndexedDataset build_index(TripleSet t, Role role = Role::unspecified);

struct SplitDataset {
    IndexedDataset train;
    IndexedDataset validation;
    IndexedDataset test;
    std::uint64_t seed = 0;
};

// Seeded shuffle, then floor(n*train_frac) train, floor(n*val_frac)
// validation and the remainder test.
SplitDataset split(const TripleSet& t, double train_frac, double val_frac, std::uint64_t seed);

// Dense matrix text: one row per line, whitespace-separated reals, any
// strictly negative cell is missing. Blank lines are skipped.
TripleSet load_dense_matrix(const std::filesystem::path& path);
TripleSet parse_dense_matrix(std::istream& in);
void write_dense_matrix(const TripleSet& t, std::ostream& out);

// Triple text: "user service value" per line, '#' starts a comment. A
// comment of the form "# shape <users> <services>" fixes the dimensions,
// otherwise they are 1 + the largest id seen.
TripleSet load_triples(const std::filesystem::path& path);
TripleSet parse_triples(std::istream& in);
void write_triples(const TripleSet& t, std::ostream& out);
void save_triples(const TripleSet& t, const std::filesystem::path& path);

struct SynthOptions {
    double factor_lo = 0.0;
    double factor_hi = 1.0;
};

struct SynthResult {
    TripleSet data;
    FactorState truth;
};

// Low-rank test data: ground-truth factors U(factor_lo, factor_hi), a
// seeded sample of floor(U*S*density) cells without replacement, and
// value = <x_u, x_s> + N(0, noise_sigma^2).
SynthResult synth_lowrank(std::size_t num_users, std::size_t num_services, std::size_t rank,
                          double density, double noise_sigma, std::uint64_t seed,
                          SynthOptions options = {});

}  // namespace drslf
