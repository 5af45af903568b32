#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace eife {

using Shape = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;
using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kMaxRank = 3;

/// Dense real array of rank 1..3, row-major with the last axis contiguous.
class TensorD {
public:
    TensorD() = default;
    explicit TensorD(Shape shape, double fill = 0.0);
    TensorD(Shape shape, std::vector<double> data);

    static TensorD zeros(Shape shape) { return TensorD(std::move(shape), 0.0); }
    static TensorD ones(Shape shape) { return TensorD(std::move(shape), 1.0); }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

    /// Distance in memory between neighbours along `axis`.
    std::size_t stride(std::size_t axis) const;

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    double& at(const MultiIndex& index);
    double at(const MultiIndex& index) const;
    std::size_t flat_index(const MultiIndex& index) const;
    MultiIndex multi_index(std::size_t flat) const;

    TensorD& operator+=(const TensorD& other);
    TensorD& operator-=(const TensorD& other);
    TensorD& operator*=(double alpha);

    bool operator==(const TensorD& other) const = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

TensorD operator+(TensorD a, const TensorD& b);
TensorD operator-(TensorD a, const TensorD& b);
TensorD operator*(double alpha, TensorD a);

/// (M ⊗_axis U): every line of U along `axis` is replaced by M times that line.
TensorD mode_multiply(const DenseMatrix& m, const TensorD& u, std::size_t axis);

TensorD hadamard(const TensorD& a, const TensorD& b);

TensorD exp_entrywise(const TensorD& a);

/// Calls `fn` once per line along `axis`. The line is copied into a
/// contiguous scratch buffer and written back after `fn` returns.
void for_each_line(TensorD& u, std::size_t axis,
                   const std::function<void(std::span<double>)>& fn);

/// Largest |a_i - b_i| divided by the largest |b_i| (absolute when b is zero).
double relative_max_difference(const TensorD& a, const TensorD& b);

double max_abs(const TensorD& a);

} // namespace eife
