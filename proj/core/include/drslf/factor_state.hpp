#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>

#include "drslf/param_vector.hpp"

namespace drslf {

// Decision parameters X = (X_U, X_S).
class FactorState {
public:
    FactorState() = default;
    explicit FactorState(Shape shape) : params_(shape) {}
    explicit FactorState(ParamVector params) : params_(std::move(params)) {}

    std::size_t rank() const noexcept { return params_.shape().rank; }
    std::size_t num_users() const noexcept { return params_.shape().num_users; }
    std::size_t num_services() const noexcept { return params_.shape().num_services; }
    const Shape& shape() const noexcept { return params_.shape(); }

    std::span<double> user(std::size_t u) noexcept { return params_.user(u); }
    std::span<const double> user(std::size_t u) const noexcept { return params_.user(u); }
    std::span<double> service(std::size_t s) noexcept { return params_.service(s); }
    std::span<const double> service(std::size_t s) const noexcept { return params_.service(s); }

    ParamVector& params() noexcept { return params_; }
    const ParamVector& params() const noexcept { return params_; }

    FactorState& operator+=(const ParamVector& delta) {
        params_ += delta;
        return *this;
    }

    friend bool operator==(const FactorState&, const FactorState&) = default;

private:
    ParamVector params_;
};

// Text dump: a "drslf-factors 1" header, "f users services", then one row
// per line (users first) in shortest round-trip decimal form.
void write_factors(const FactorState& x, std::ostream& out);
FactorState read_factors(std::istream& in);
void save_factors(const FactorState& x, const std::filesystem::path& path);
FactorState load_factors(const std::filesystem::path& path);

}  // namespace drslf
