#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drslf {

// Layout of the parameter space: |U| user rows followed by |S| service rows,
// each row holding `rank` contiguous values.
struct Shape {
    std::size_t num_users = 0;
    std::size_t num_services = 0;
    std::size_t rank = 0;

    std::size_t size() const noexcept { return (num_users + num_services) * rank; }
    std::size_t service_offset() const noexcept { return num_users * rank; }

    friend bool operator==(const Shape&, const Shape&) = default;
};

// A point or direction in the factor parameter space (gradients, CG
// directions, HVP outputs and updates all share this type).
class ParamVector {
public:
    ParamVector() = default;
    explicit ParamVector(Shape shape);
    ParamVector(Shape shape, std::vector<double> values);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    std::span<double> user(std::size_t u) noexcept {
        return {values_.data() + u * shape_.rank, shape_.rank};
    }
    std::span<const double> user(std::size_t u) const noexcept {
        return {values_.data() + u * shape_.rank, shape_.rank};
    }
    std::span<double> service(std::size_t s) noexcept {
        return {values_.data() + shape_.service_offset() + s * shape_.rank, shape_.rank};
    }
    std::span<const double> service(std::size_t s) const noexcept {
        return {values_.data() + shape_.service_offset() + s * shape_.rank, shape_.rank};
    }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    void fill(double value);

    ParamVector& operator+=(const ParamVector& other);
    ParamVector& operator-=(const ParamVector& other);
    ParamVector& operator*=(double alpha);

    // this += alpha * x
    void axpy(double alpha, const ParamVector& x);

    friend bool operator==(const ParamVector&, const ParamVector&) = default;

private:
    Shape shape_;
    std::vector<double> values_;
};

ParamVector operator+(ParamVector a, const ParamVector& b);
ParamVector operator-(ParamVector a, const ParamVector& b);
ParamVector operator*(double alpha, ParamVector v);

// Throws ShapeError unless both operands share a layout.
void require_same_shape(const ParamVector& a, const ParamVector& b, const char* what);

double dot(const ParamVector& a, const ParamVector& b);
double norm_inf(const ParamVector& v);
double norm2(const ParamVector& v);
bool all_finite(const ParamVector& v);

}  // namespace drslf
