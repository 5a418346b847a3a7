#include "drslf/curvature.hpp"

#include <cmath>

#include "drslf/error.hpp"

namespace drslf {

CurvatureContext::CurvatureContext(const FactorState& x, const IndexedDataset& data,
                                   const Hyperparams& h)
    : x_(&x), data_(&data), h_(h), scratch_(data.size(), 0.0) {
    if (x.num_users() != data.num_users() || x.num_services() != data.num_services()) {
        throw ShapeError("curvature context: factor state and dataset dimensions differ");
    }
    if (!(h.epsilon > 0.0)) throw InvalidArgument("curvature context: epsilon must be > 0");

    const std::size_t f = x.rank();
    l1_coeff_.assign(x.params().size(), 0.0);
    diagonal_.assign(x.params().size(), h.gamma);
    const auto fill_rows = [&](std::size_t rows, std::size_t offset, auto row_of, auto count_of) {
        for (std::size_t i = 0; i < rows; ++i) {
            const auto row = row_of(i);
            const double count = count_of(i);
            for (std::size_t k = 0; k < f; ++k) {
                const double a = row[k] * row[k] + h.epsilon;
                const double c1 = h.lambda_r1 * count * h.epsilon / (a * std::sqrt(a));
                const std::size_t idx = offset + i * f + k;
                l1_coeff_[idx] = c1;
                diagonal_[idx] = c1 + h.lambda_r2 * count + h.gamma;
            }
        }
    };
    fill_rows(
        x.num_users(), 0, [&](std::size_t u) { return x.user(u); },
        [&](std::size_t u) { return data.user_count(u); });
    fill_rows(
        x.num_services(), x.shape().service_offset(), [&](std::size_t s) { return x.service(s); },
        [&](std::size_t s) { return data.service_count(s); });
}

void CurvatureContext::require_compatible(const ParamVector& v) const {
    if (v.shape() != x_->shape()) {
        throw ShapeError("curvature: direction layout differs from the linearization point");
    }
}

void CurvatureContext::jacobian_vector(const ParamVector& v, std::span<double> out) const {
    require_compatible(v);
    if (out.size() != data_->size()) throw ShapeError("jacobian_vector: output length != |K|");
    const std::size_t f = x_->rank();
    const auto triples = data_->triples();
    for (std::size_t k = 0; k < triples.size(); ++k) {
        const auto xu = x_->user(triples[k].user);
        const auto xs = x_->service(triples[k].service);
        const auto vu = v.user(triples[k].user);
        const auto vs = v.service(triples[k].service);
        double acc = 0.0;
        for (std::size_t d = 0; d < f; ++d) acc += vu[d] * xs[d] + xu[d] * vs[d];
        out[k] = acc;
    }
}

std::vector<double> CurvatureContext::jacobian_vector(const ParamVector& v) const {
    std::vector<double> out(data_->size());
    jacobian_vector(v, out);
    return out;
}

void CurvatureContext::accumulate_gn(std::span<const double> jv, ParamVector& out) const {
    const std::size_t f = x_->rank();
    const auto triples = data_->triples();
    for (std::size_t k = 0; k < triples.size(); ++k) {
        const auto xu = x_->user(triples[k].user);
        const auto xs = x_->service(triples[k].service);
        auto ou = out.user(triples[k].user);
        auto os = out.service(triples[k].service);
        const double j = jv[k];
        for (std::size_t d = 0; d < f; ++d) {
            ou[d] += xs[d] * j;
            os[d] += xu[d] * j;
        }
    }
}

ParamVector CurvatureContext::gn_hvp(const ParamVector& v) {
    jacobian_vector(v, scratch_);
    ParamVector out(x_->shape());
    accumulate_gn(scratch_, out);
    return out;
}

ParamVector CurvatureContext::reg_l1_hvp(const ParamVector& v) const {
    require_compatible(v);
    ParamVector out(x_->shape());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = l1_coeff_[i] * v[i];
    return out;
}

ParamVector CurvatureContext::reg_l2_hvp(const ParamVector& v) const {
    require_compatible(v);
    ParamVector out(x_->shape());
    const std::size_t f = x_->rank();
    for (std::size_t u = 0; u < x_->num_users(); ++u) {
        const double c = h_.lambda_r2 * data_->user_count(u);
        const auto vu = v.user(u);
        auto ou = out.user(u);
        for (std::size_t d = 0; d < f; ++d) ou[d] = c * vu[d];
    }
    for (std::size_t s = 0; s < x_->num_services(); ++s) {
        const double c = h_.lambda_r2 * data_->service_count(s);
        const auto vs = v.service(s);
        auto os = out.service(s);
        for (std::size_t d = 0; d < f; ++d) os[d] = c * vs[d];
    }
    return out;
}

void CurvatureContext::damped_hvp(const ParamVector& v, ParamVector& out) {
    jacobian_vector(v, scratch_);
    if (out.shape() != x_->shape()) out = ParamVector(x_->shape());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = diagonal_[i] * v[i];
    accumulate_gn(scratch_, out);
}

ParamVector CurvatureContext::damped_hvp(const ParamVector& v) {
    ParamVector out(x_->shape());
    damped_hvp(v, out);
    return out;
}

}  // namespace drslf
