#include "tailasym/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "tailasym/quadrature.hpp"

namespace tailasym {

namespace {

void check_interval(double a, double b, const char* what) {
    if (!(a > 0.0))
        throw std::invalid_argument(std::string(what) +
                                    ": lower bound must be > 0");
    if (!(b >= a))
        throw std::invalid_argument(std::string(what) +
                                    ": upper bound must be >= lower bound");
}

void check_counts(int n, int m) {
    if (n < 1 || m < 1)
        throw std::invalid_argument("WeightModel: n and m must be >= 1");
}

}  // namespace

WeightModel WeightModel::iid_uniform(double a1, double b1, double a2,
                                     double b2, int n, int m) {
    check_interval(a1, b1, "theta interval");
    check_interval(a2, b2, "Theta interval");
    check_counts(n, m);
    WeightModel wm;
    wm.variant_ = WeightVariant::IidUniform;
    wm.a1_ = a1; wm.b1_ = b1; wm.a2_ = a2; wm.b2_ = b2;
    wm.n_ = n; wm.m_ = m;
    return wm;
}

WeightModel WeightModel::comonotone(double a1, double b1, double a2, double b2,
                                    int n, int m) {
    check_interval(a1, b1, "theta interval");
    check_interval(a2, b2, "Theta interval");
    check_counts(n, m);
    WeightModel wm;
    wm.variant_ = WeightVariant::Comonotone;
    wm.a1_ = a1; wm.b1_ = b1; wm.a2_ = a2; wm.b2_ = b2;
    wm.n_ = n; wm.m_ = m;
    return wm;
}

WeightModel WeightModel::discount_product(double a, double b, int n, int m) {
    check_interval(a, b, "factor interval");
    check_counts(n, m);
    WeightModel wm;
    wm.variant_ = WeightVariant::DiscountProduct;
    wm.a1_ = a; wm.b1_ = b; wm.a2_ = a; wm.b2_ = b;
    wm.n_ = n; wm.m_ = m;
    return wm;
}

WeightBox WeightModel::box() const {
    WeightBox box;
    box.theta_lo.resize(n_);
    box.theta_hi.resize(n_);
    box.big_lo.resize(m_);
    box.big_hi.resize(m_);
    if (variant_ == WeightVariant::DiscountProduct) {
        // bounds of running products grow geometrically with the index
        double lo = 1.0, hi = 1.0;
        for (int i = 0; i < n_; ++i) {
            lo *= a1_;
            hi *= b1_;
            box.theta_lo[i] = lo;
            box.theta_hi[i] = hi;
        }
        lo = hi = 1.0;
        for (int j = 0; j < m_; ++j) {
            lo *= a2_;
            hi *= b2_;
            box.big_lo[j] = lo;
            box.big_hi[j] = hi;
        }
    } else {
        for (int i = 0; i < n_; ++i) {
            box.theta_lo[i] = a1_;
            box.theta_hi[i] = b1_;
        }
        for (int j = 0; j < m_; ++j) {
            box.big_lo[j] = a2_;
            box.big_hi[j] = b2_;
        }
    }
    return box;
}

int WeightModel::draws_per_sample() const {
    switch (variant_) {
        case WeightVariant::IidUniform: return n_ + m_;
        case WeightVariant::Comonotone: return 1;
        case WeightVariant::DiscountProduct: return n_ + m_;
    }
    return 0;
}

void WeightModel::sample_into(PhiloxStream& stream, WeightSample& out) const {
    out.theta.resize(n_);
    out.big_theta.resize(m_);
    switch (variant_) {
        case WeightVariant::IidUniform: {
            for (int i = 0; i < n_; ++i)
                out.theta[i] = a1_ + (b1_ - a1_) * stream.next();
            for (int j = 0; j < m_; ++j)
                out.big_theta[j] = a2_ + (b2_ - a2_) * stream.next();
            break;
        }
        case WeightVariant::Comonotone: {
            const double u = stream.next();
            for (int i = 0; i < n_; ++i) out.theta[i] = a1_ + (b1_ - a1_) * u;
            for (int j = 0; j < m_; ++j)
                out.big_theta[j] = a2_ + (b2_ - a2_) * u;
            break;
        }
        case WeightVariant::DiscountProduct: {
            double acc = 1.0;
            for (int i = 0; i < n_; ++i) {
                acc *= a1_ + (b1_ - a1_) * stream.next();
                out.theta[i] = acc;
            }
            acc = 1.0;
            for (int j = 0; j < m_; ++j) {
                acc *= a2_ + (b2_ - a2_) * stream.next();
                out.big_theta[j] = acc;
            }
            break;
        }
    }
}

WeightSample WeightModel::sample(PhiloxStream& stream) const {
    WeightSample out;
    sample_into(stream, out);
    return out;
}

MeanStderr weight_expectation(
    const WeightModel& wm, const std::function<double(const WeightSample&)>& fn,
    std::uint64_t n_mc, std::uint64_t seed, const ExecPolicy& exec) {
    if (n_mc < 10000)
        throw std::invalid_argument("weight_expectation: n_mc must be >= 1e4");
    constexpr std::uint64_t kChunk = 1u << 16;
    const std::size_t n_chunks = (n_mc + kChunk - 1) / kChunk;
    std::vector<double> sums(n_chunks, 0.0), sums2(n_chunks, 0.0);

    for_each_chunk(n_chunks, exec, [&](std::size_t c) {
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(n_mc, begin + kChunk);
        WeightSample ws;
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            PhiloxStream stream(seed, 0, i);
            wm.sample_into(stream, ws);
            const double v = fn(ws);
            s += v;
            s2 += v * v;
        }
        sums[c] = s;
        sums2[c] = s2;
    });

    // fixed-order reduction: independent of scheduling
    double s = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        s += sums[c];
        s2 += sums2[c];
    }
    const double n = static_cast<double>(n_mc);
    const double mean = s / n;
    double var = (s2 / n - mean * mean) * n / (n - 1.0);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / n)};
}

double weight_expectation_quadrature(
    const WeightModel& wm, std::span<const ActiveCoord> active,
    const std::function<double(const WeightSample&)>& fn, int points) {
    if (wm.variant() != WeightVariant::IidUniform)
        throw std::invalid_argument(
            "weight_expectation_quadrature: only IidUniform weights are "
            "supported");
    if (active.size() > 3)
        throw std::invalid_argument(
            "weight_expectation_quadrature: at most 3 active coordinates");
    for (const auto& coord : active) {
        const int limit =
            coord.kind == ActiveCoord::Kind::Theta ? wm.n() : wm.m();
        if (coord.index < 0 || coord.index >= limit)
            throw std::invalid_argument(
                "weight_expectation_quadrature: coordinate index out of "
                "range");
    }

    WeightSample ws;
    ws.theta.assign(wm.n(), 0.5 * (wm.a1() + wm.b1()));
    ws.big_theta.assign(wm.m(), 0.5 * (wm.a2() + wm.b2()));
    auto set_coord = [&](const ActiveCoord& coord, double v) {
        if (coord.kind == ActiveCoord::Kind::Theta)
            ws.theta[coord.index] = v;
        else
            ws.big_theta[coord.index] = v;
    };
    auto interval = [&](const ActiveCoord& coord) {
        return coord.kind == ActiveCoord::Kind::Theta
                   ? std::pair<double, double>{wm.a1(), wm.b1()}
                   : std::pair<double, double>{wm.a2(), wm.b2()};
    };

    const auto& rule = quad::gauss_legendre(points);
    const int d = static_cast<int>(active.size());
    if (d == 0) return fn(ws);

    // expectation over the uniform box = tensor GL sum / 2^d
    double total = 0.0;
    std::array<int, 3> idx{0, 0, 0};
    while (true) {
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            const auto [lo, hi] = interval(active[k]);
            const double node =
                0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[idx[k]];
            set_coord(active[k], node);
            w *= rule.weights[idx[k]];
        }
        total += w * fn(ws);
        int k = 0;
        for (; k < d; ++k) {
            if (++idx[k] < points) break;
            idx[k] = 0;
        }
        if (k == d) break;
    }
    return total / std::pow(2.0, d);
}

}  // namespace tailasym
