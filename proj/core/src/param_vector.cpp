#include "drslf/param_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drslf/error.hpp"

namespace drslf {

ParamVector::ParamVector(Shape shape) : shape_(shape), values_(shape.size(), 0.0) {}

ParamVector::ParamVector(Shape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.size()) {
        throw ShapeError("parameter vector has " + std::to_string(values_.size()) +
                         " values, layout requires " + std::to_string(shape_.size()));
    }
}

void ParamVector::fill(double value) { std::fill(values_.begin(), values_.end(), value); }

ParamVector& ParamVector::operator+=(const ParamVector& other) {
    require_same_shape(*this, other, "addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ParamVector& ParamVector::operator-=(const ParamVector& other) {
    require_same_shape(*this, other, "subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ParamVector& ParamVector::operator*=(double alpha) {
    for (double& v : values_) v *= alpha;
    return *this;
}

void ParamVector::axpy(double alpha, const ParamVector& x) {
    require_same_shape(*this, x, "axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += alpha * x.values_[i];
}

ParamVector operator+(ParamVector a, const ParamVector& b) { return a += b; }
ParamVector operator-(ParamVector a, const ParamVector& b) { return a -= b; }
ParamVector operator*(double alpha, ParamVector v) { return v *= alpha; }

void require_same_shape(const ParamVector& a, const ParamVector& b, const char* what) {
    if (a.shape() != b.shape()) {
        const auto describe = [](const Shape& s) {
            return "(" + std::to_string(s.num_users) + "+" + std::to_string(s.num_services) +
                   ")x" + std::to_string(s.rank);
        };
        throw ShapeError(std::string(what) + ": layout mismatch " + describe(a.shape()) +
                         " vs " + describe(b.shape()));
    }
}

double dot(const ParamVector& a, const ParamVector& b) {
    require_same_shape(a, b, "dot");
    const auto x = a.values();
    const auto y = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double norm_inf(const ParamVector& v) {
    double m = 0.0;
    for (double x : v.values()) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const ParamVector& v) { return std::sqrt(dot(v, v)); }

bool all_finite(const ParamVector& v) {
    return std::all_of(v.values().begin(), v.values().end(),
                       [](double x) { return std::isfinite(x); });
}

}  // namespace drslf
