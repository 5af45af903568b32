#include "eife/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace eife {

namespace {

template <unsigned N>
GaussRule mapped_rule() {
    using Rule = boost::math::quadrature::gauss<double, N>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    // Boost stores the non-negative half of the symmetric rule.
    std::vector<std::pair<double, double>> nodes;
    for (std::size_t i = 0; i < x.size(); ++i) {
        nodes.emplace_back(x[i], w[i]);
        if (x[i] != 0.0) nodes.emplace_back(-x[i], w[i]);
    }
    std::sort(nodes.begin(), nodes.end());
    GaussRule rule;
    for (const auto& [xi, wi] : nodes) {
        rule.points.push_back(0.5 * (xi + 1.0));
        rule.weights.push_back(0.5 * wi);
    }
    return rule;
}

} // namespace

GaussRule gauss_legendre(std::size_t n) {
    switch (n) {
    case 1: return mapped_rule<1>();
    case 2: return mapped_rule<2>();
    case 3: return mapped_rule<3>();
    case 4: return mapped_rule<4>();
    case 5: return mapped_rule<5>();
    case 6: return mapped_rule<6>();
    case 7: return mapped_rule<7>();
    case 8: return mapped_rule<8>();
    default: throw std::invalid_argument("gauss_legendre: 1..8 points per axis supported");
    }
}

ElementQuadrature::ElementQuadrature(const TensorMesh& mesh, std::size_t points_per_axis)
    : mesh_(&mesh), dim_(mesh.dim()), num_elements_(1) {
    for (std::size_t a = 0; a < dim_; ++a) num_elements_ *= mesh.axis(a).n;
    const GaussRule rule = gauss_legendre(points_per_axis);
    const std::size_t nq = rule.points.size();
    std::size_t total = 1;
    for (std::size_t a = 0; a < dim_; ++a) total *= nq;
    const std::size_t corners = num_corners();
    weights_.resize(total);
    offsets_.resize(total * dim_);
    basis_.resize(total * corners);
    grad_.resize(total * corners * dim_);

    double volume = 1.0;
    for (std::size_t a = 0; a < dim_; ++a) volume *= mesh.axis(a).h;

    for (std::size_t q = 0; q < total; ++q) {
        std::size_t rest = q;
        std::array<std::size_t, kMaxRank> qi{};
        for (std::size_t a = dim_; a-- > 0;) {
            qi[a] = rest % nq;
            rest /= nq;
        }
        double w = volume;
        for (std::size_t a = 0; a < dim_; ++a) {
            w *= rule.weights[qi[a]];
            offsets_[q * dim_ + a] = rule.points[qi[a]];
        }
        weights_[q] = w;
        for (std::size_t c = 0; c < corners; ++c) {
            // Bit (dim-1-a) of c selects the right node along axis a.
            double value = 1.0;
            std::array<double, kMaxRank> phi{};
            std::array<double, kMaxRank> dphi{};
            for (std::size_t a = 0; a < dim_; ++a) {
                const bool right = (c >> (dim_ - 1 - a)) & 1u;
                const double xi = rule.points[qi[a]];
                phi[a] = right ? xi : 1.0 - xi;
                dphi[a] = (right ? 1.0 : -1.0) / mesh.axis(a).h;
                value *= phi[a];
            }
            basis_[q * corners + c] = value;
            for (std::size_t a = 0; a < dim_; ++a) {
                double g = dphi[a];
                for (std::size_t b = 0; b < dim_; ++b) {
                    if (b != a) g *= phi[b];
                }
                grad_[(q * corners + c) * dim_ + a] = g;
            }
        }
    }
}

std::array<std::size_t, kMaxRank> ElementQuadrature::element_index(std::size_t e) const {
    std::array<std::size_t, kMaxRank> idx{};
    for (std::size_t a = dim_; a-- > 0;) {
        const std::size_t n = mesh_->axis(a).n;
        idx[a] = e % n;
        e /= n;
    }
    return idx;
}

std::array<double, kMaxRank> ElementQuadrature::point(const std::array<std::size_t, kMaxRank>& index,
                                                      std::size_t q) const {
    std::array<double, kMaxRank> x{};
    for (std::size_t a = 0; a < dim_; ++a) {
        const auto& p = mesh_->axis(a);
        x[a] = p.a + (static_cast<double>(index[a]) + offsets_[q * dim_ + a]) * p.h;
    }
    return x;
}

std::array<std::size_t, kMaxRank> ElementQuadrature::corner_node(const std::array<std::size_t, kMaxRank>& index,
                                                                 std::size_t corner) const {
    std::array<std::size_t, kMaxRank> node{};
    for (std::size_t a = 0; a < dim_; ++a) node[a] = index[a] + ((corner >> (dim_ - 1 - a)) & 1u);
    return node;
}

} // namespace eife
