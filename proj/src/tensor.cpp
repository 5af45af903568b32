#include "eife/tensor.hpp"

#include "eife/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace eife {

namespace {

std::size_t checked_product(const Shape& shape) {
    if (shape.empty() || shape.size() > kMaxRank) {
        throw ShapeError("tensor rank must be 1, 2 or 3, got " + std::to_string(shape.size()));
    }
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0) throw ShapeError("tensor extents must be positive");
        n *= e;
    }
    return n;
}

void require_same_shape(const TensorD& a, const TensorD& b, const char* op) {
    if (a.shape() != b.shape()) throw ShapeError(std::string(op) + ": shape mismatch");
}

} // namespace

TensorD::TensorD(Shape shape, double fill)
    : shape_(std::move(shape)), data_(checked_product(shape_), fill) {}

TensorD::TensorD(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (checked_product(shape_) != data_.size()) {
        throw ShapeError("tensor data length does not match its shape");
    }
}

std::size_t TensorD::stride(std::size_t axis) const {
    if (axis >= rank()) throw ShapeError("axis out of range");
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < rank(); ++a) s *= shape_[a];
    return s;
}

std::size_t TensorD::flat_index(const MultiIndex& index) const {
    if (index.size() != rank()) throw BoundsError("multi-index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < rank(); ++a) {
        if (index[a] >= shape_[a]) throw BoundsError("multi-index out of range");
        flat = flat * shape_[a] + index[a];
    }
    return flat;
}

MultiIndex TensorD::multi_index(std::size_t flat) const {
    if (flat >= size()) throw BoundsError("flat index out of range");
    MultiIndex index(rank());
    for (std::size_t a = rank(); a-- > 0;) {
        index[a] = flat % shape_[a];
        flat /= shape_[a];
    }
    return index;
}

double& TensorD::at(const MultiIndex& index) { return data_[flat_index(index)]; }
double TensorD::at(const MultiIndex& index) const { return data_[flat_index(index)]; }

TensorD& TensorD::operator+=(const TensorD& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

TensorD& TensorD::operator-=(const TensorD& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

TensorD& TensorD::operator*=(double alpha) {
    for (double& v : data_) v *= alpha;
    return *this;
}

TensorD operator+(TensorD a, const TensorD& b) { return a += b; }
TensorD operator-(TensorD a, const TensorD& b) { return a -= b; }
TensorD operator*(double alpha, TensorD a) { return a *= alpha; }

TensorD mode_multiply(const DenseMatrix& m, const TensorD& u, std::size_t axis) {
    if (axis >= u.rank()) throw ShapeError("mode_multiply: axis out of range");
    const std::size_t n = u.extent(axis);
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
        throw ShapeError("mode_multiply: matrix side " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " does not match extent " + std::to_string(n));
    }
    const std::size_t stride = u.stride(axis);
    const std::size_t outer = u.size() / (n * stride);
    TensorD out(u.shape());
    const auto in = u.data();
    auto res = out.data();
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * n * stride;
        for (std::size_t i = 0; i < n; ++i) {
            double* dst = res.data() + base + i * stride;
            for (std::size_t r = 0; r < n; ++r) {
                const double mir = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
                const double* src = in.data() + base + r * stride;
                for (std::size_t s = 0; s < stride; ++s) dst[s] += mir * src[s];
            }
        }
    }
    return out;
}

TensorD hadamard(const TensorD& a, const TensorD& b) {
    require_same_shape(a, b, "hadamard");
    TensorD out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

TensorD exp_entrywise(const TensorD& a) {
    TensorD out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::exp(a[i]);
    return out;
}

void for_each_line(TensorD& u, std::size_t axis,
                   const std::function<void(std::span<double>)>& fn) {
    const std::size_t n = u.extent(axis);
    const std::size_t stride = u.stride(axis);
    const std::size_t outer = u.size() / (n * stride);
    auto data = u.data();
    if (stride == 1) {
        for (std::size_t o = 0; o < outer; ++o) fn(data.subspan(o * n, n));
        return;
    }
    std::vector<double> line(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t s = 0; s < stride; ++s) {
            double* base = data.data() + o * n * stride + s;
            for (std::size_t i = 0; i < n; ++i) line[i] = base[i * stride];
            fn(line);
            for (std::size_t i = 0; i < n; ++i) base[i * stride] = line[i];
        }
    }
}

double max_abs(const TensorD& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double relative_max_difference(const TensorD& a, const TensorD& b) {
    require_same_shape(a, b, "relative_max_difference");
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    const double scale = max_abs(b);
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace eife
