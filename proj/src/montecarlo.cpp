#include "tailasym/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "tailasym/philox.hpp"

namespace tailasym {

namespace {

void validate(const McSettings& s) {
    if (s.n_samples < 1000)
        throw std::invalid_argument("McSettings: n_samples must be >= 1e3");
    if (s.n_reps < 1)
        throw std::invalid_argument("McSettings: n_reps must be >= 1");
    if (s.chunk_size == 0)
        throw std::invalid_argument("McSettings: chunk_size must be > 0");
}

// Scratch for one sample of the model: weights plus the primary vectors.
struct Draw {
    WeightSample w;
    std::vector<double> xs, ys;
};

// Draws the weights and the primary pairs in a fixed stream order:
// weights, then the FGM pairs, then any unmatched single coordinates.
void draw_sample(const ModelSpec& ms, PhiloxStream& stream, Draw& d) {
    const int n = ms.n(), m = ms.m();
    const int nm = std::min(n, m);
    ms.weights.sample_into(stream, d.w);
    d.xs.resize(n);
    d.ys.resize(m);
    for (int i = 0; i < nm; ++i) {
        const double u = stream.next();
        const double w = stream.next();
        const auto [x, y] = ms.pair.sample(u, w);
        d.xs[i] = x;
        d.ys[i] = y;
    }
    for (int i = nm; i < n; ++i)
        d.xs[i] = ms.pair.margin_x().quantile(stream.next());
    for (int j = nm; j < m; ++j)
        d.ys[j] = ms.pair.margin_y().quantile(stream.next());
}

// Chunked driver: per-sample contributions are accumulated into per-chunk
// slots and reduced in chunk order, so results never depend on scheduling.
// PerSample: (PhiloxStream&, Draw&, double* acc) -> void.
template <class PerSample>
std::vector<std::vector<double>> run_reps(std::size_t n_outputs,
                                          const McSettings& s,
                                          const ExecPolicy& exec,
                                          PerSample&& per_sample) {
    validate(s);
    const std::uint64_t n = s.n_samples;
    const std::size_t n_chunks = (n + s.chunk_size - 1) / s.chunk_size;
    std::vector<std::vector<double>> rep_means(
        s.n_reps, std::vector<double>(n_outputs, 0.0));

    for (int rep = 0; rep < s.n_reps; ++rep) {
        std::vector<double> chunk_acc(n_chunks * n_outputs, 0.0);
        for_each_chunk(n_chunks, exec, [&](std::size_t c) {
            const std::uint64_t begin =
                static_cast<std::uint64_t>(c) * s.chunk_size;
            const std::uint64_t end = std::min<std::uint64_t>(n, begin + s.chunk_size);
            double* acc = &chunk_acc[c * n_outputs];
            Draw d;
            for (std::uint64_t i = begin; i < end; ++i) {
                PhiloxStream stream(s.seed, static_cast<std::uint32_t>(rep), i);
                per_sample(stream, d, acc);
            }
        });
        auto& mean = rep_means[rep];
        for (std::size_t c = 0; c < n_chunks; ++c)
            for (std::size_t k = 0; k < n_outputs; ++k)
                mean[k] += chunk_acc[c * n_outputs + k];
        for (std::size_t k = 0; k < n_outputs; ++k)
            mean[k] /= static_cast<double>(n);
    }
    return rep_means;
}

McEstimate from_per_rep(std::vector<double> per_rep) {
    McEstimate est;
    est.per_rep = std::move(per_rep);
    double s = 0.0;
    for (double v : est.per_rep) s += v;
    const double reps = static_cast<double>(est.per_rep.size());
    est.mean = s / reps;
    if (est.per_rep.size() > 1) {
        double ss = 0.0;
        for (double v : est.per_rep) ss += (v - est.mean) * (v - est.mean);
        est.stderr_ = std::sqrt(ss / (reps - 1.0) / reps);
    }
    return est;
}

McEstimate summarize(const std::vector<std::vector<double>>& rep_means,
                     std::size_t k) {
    std::vector<double> per_rep;
    per_rep.reserve(rep_means.size());
    for (const auto& rep : rep_means) per_rep.push_back(rep[k]);
    return from_per_rep(std::move(per_rep));
}

// second-order estimator = first-order per-rep values plus the extras
McEstimate add_per_rep(const McEstimate& base, const McEstimate& extra) {
    std::vector<double> per_rep(base.per_rep.size());
    for (std::size_t k = 0; k < per_rep.size(); ++k)
        per_rep[k] = base.per_rep[k] + extra.per_rep[k];
    return from_per_rep(std::move(per_rep));
}

}  // namespace

std::vector<McEstimate> simulate_joint_tail(
    const ModelSpec& ms, std::span<const std::pair<double, double>> points,
    const McSettings& settings, const ExecPolicy& exec) {
    const int n = ms.n(), m = ms.m();
    const auto rep_means = run_reps(
        points.size(), settings, exec,
        [&](PhiloxStream& stream, Draw& d, double* acc) {
            draw_sample(ms, stream, d);
            double S = 0.0, T = 0.0;
            for (int i = 0; i < n; ++i) S += d.w.theta[i] * d.xs[i];
            for (int j = 0; j < m; ++j) T += d.w.big_theta[j] * d.ys[j];
            for (std::size_t p = 0; p < points.size(); ++p)
                if (S > points[p].first && T > points[p].second) acc[p] += 1.0;
        });
    std::vector<McEstimate> out;
    out.reserve(points.size());
    for (std::size_t p = 0; p < points.size(); ++p)
        out.push_back(summarize(rep_means, p));
    return out;
}

McEstimate simulate_joint_tail(const ModelSpec& ms, double x, double y,
                               const McSettings& settings,
                               const ExecPolicy& exec) {
    const std::pair<double, double> pt{x, y};
    return simulate_joint_tail(ms, std::span(&pt, 1), settings, exec)[0];
}

std::vector<McEstimate> simulate_sum_tail(const ModelSpec& ms,
                                          std::span<const double> zs,
                                          const McSettings& settings,
                                          const ExecPolicy& exec) {
    const int n = ms.n(), m = ms.m();
    const auto rep_means = run_reps(
        zs.size(), settings, exec,
        [&](PhiloxStream& stream, Draw& d, double* acc) {
            draw_sample(ms, stream, d);
            double total = 0.0;
            for (int i = 0; i < n; ++i) total += d.w.theta[i] * d.xs[i];
            for (int j = 0; j < m; ++j) total += d.w.big_theta[j] * d.ys[j];
            for (std::size_t p = 0; p < zs.size(); ++p)
                if (total > zs[p]) acc[p] += 1.0;
        });
    std::vector<McEstimate> out;
    out.reserve(zs.size());
    for (std::size_t p = 0; p < zs.size(); ++p)
        out.push_back(summarize(rep_means, p));
    return out;
}

McEstimate simulate_sum_tail(const ModelSpec& ms, double z,
                             const McSettings& settings,
                             const ExecPolicy& exec) {
    return simulate_sum_tail(ms, std::span(&z, 1), settings, exec)[0];
}

namespace {

void require_indicator_shape(const ModelSpec& ms) {
    if (ms.n() != 2 || ms.m() != 2 ||
        ms.weights.variant() != WeightVariant::IidUniform)
        throw std::invalid_argument(
            "indicator-sum estimators require n = m = 2 with IidUniform "
            "weights");
}

}  // namespace

std::vector<IndicatorAsyEstimate> estimate_asy_indicator_joint(
    const ModelSpec& ms, std::span<const std::pair<double, double>> points,
    const McSettings& settings, const ExecPolicy& exec) {
    require_indicator_shape(ms);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    const double r = ms.pair.r();
    const double e_theta = 0.5 * (ms.weights.a1() + ms.weights.b1());
    const double e_big = 0.5 * (ms.weights.a2() + ms.weights.b2());
    const double muF = F.mean(), muF2 = F.mean_of_square_dist();
    const double muG = G.mean(), muG2 = G.mean_of_square_dist();
    const double coef_y = e_big * (r * (muG2 - muG) + muG);
    const double coef_x = e_theta * (r * (muF2 - muF) + muF);
    const double adj_y = r * e_big * (muG2 - 2.0 * muG);
    const double adj_x = r * e_theta * (muF2 - 2.0 * muF);
    const std::size_t P = points.size();

    // outputs: [0,P) first-order sums, [P,2P) second-order extras
    const auto rep_means = run_reps(
        2 * P, settings, exec,
        [&](PhiloxStream& stream, Draw& d, double* acc) {
            draw_sample(ms, stream, d);
            double wx[2], wy[2];
            for (int i = 0; i < 2; ++i) {
                wx[i] = d.w.theta[i] * d.xs[i];
                wy[i] = d.w.big_theta[i] * d.ys[i];
            }
            for (std::size_t p = 0; p < P; ++p) {
                const double x = points[p].first, y = points[p].second;
                int tail_x[2], tail_y[2], mass_x[2], mass_y[2];
                for (int i = 0; i < 2; ++i) {
                    tail_x[i] = wx[i] > x;
                    tail_y[i] = wy[i] > y;
                    mass_x[i] = wx[i] > x && wx[i] <= x + 1.0;
                    mass_y[i] = wy[i] > y && wy[i] <= y + 1.0;
                }
                int first = 0, ty_rect = 0, tx_rect = 0, diag_y = 0, diag_x = 0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        first += tail_x[i] & tail_y[j];
                        ty_rect += tail_x[i] & mass_y[j];
                        tx_rect += mass_x[i] & tail_y[j];
                    }
                for (int i = 0; i < 2; ++i) {
                    diag_y += tail_x[i] & mass_y[i];
                    diag_x += mass_x[i] & tail_y[i];
                }
                acc[p] += first;
                acc[P + p] += coef_y * ty_rect - adj_y * diag_y +
                              coef_x * tx_rect - adj_x * diag_x;
            }
        });

    std::vector<IndicatorAsyEstimate> out(P);
    for (std::size_t p = 0; p < P; ++p) {
        out[p].asy1 = summarize(rep_means, p);
        out[p].asy2 = add_per_rep(out[p].asy1, summarize(rep_means, P + p));
    }
    return out;
}

std::vector<IndicatorAsyEstimate> estimate_asy_indicator_sum(
    const ModelSpec& ms, std::span<const double> zs,
    const McSettings& settings, const ExecPolicy& exec) {
    require_indicator_shape(ms);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    const double r = ms.pair.r();
    const double e_theta = 0.5 * (ms.weights.a1() + ms.weights.b1());
    const double e_big = 0.5 * (ms.weights.a2() + ms.weights.b2());
    const double muF = F.mean(), muF2 = F.mean_of_square_dist();
    const double muG = G.mean(), muG2 = G.mean_of_square_dist();
    const double base = e_theta * muF + e_big * muG;
    const double adj_x = r * e_big * (muG2 - muG) - e_theta * muF;
    const double adj_y = r * e_theta * (muF2 - muF) - e_big * muG;
    const std::size_t P = zs.size();

    const auto rep_means = run_reps(
        2 * P, settings, exec,
        [&](PhiloxStream& stream, Draw& d, double* acc) {
            draw_sample(ms, stream, d);
            double wx[2], wy[2];
            for (int i = 0; i < 2; ++i) {
                wx[i] = d.w.theta[i] * d.xs[i];
                wy[i] = d.w.big_theta[i] * d.ys[i];
            }
            for (std::size_t p = 0; p < P; ++p) {
                const double z = zs[p];
                int first = 0, mx = 0, my = 0;
                for (int i = 0; i < 2; ++i) {
                    first += (wx[i] > z) + (wy[i] > z);
                    mx += wx[i] > z && wx[i] <= z + 1.0;
                    my += wy[i] > z && wy[i] <= z + 1.0;
                }
                acc[p] += first;
                // the displayed double sum repeats the single-index masses
                // over j = 1..2, hence the factor 2 on the base coefficient
                acc[P + p] +=
                    2.0 * base * (mx + my) + adj_x * mx + adj_y * my;
            }
        });

    std::vector<IndicatorAsyEstimate> out(P);
    for (std::size_t p = 0; p < P; ++p) {
        out[p].asy1 = summarize(rep_means, p);
        out[p].asy2 = add_per_rep(out[p].asy1, summarize(rep_means, P + p));
    }
    return out;
}

}  // namespace tailasym
