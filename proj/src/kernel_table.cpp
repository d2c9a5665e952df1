#include "ilt/kernel_table.hpp"

namespace ilt {

bool KernelPowerTable::Layer::contains(const Point& x, int d) const {
    for (int j = 0; j < d; ++j)
        if (x[j] < -radii[std::size_t(j)] || x[j] > radii[std::size_t(j)]) return false;
    return true;
}

std::size_t KernelPowerTable::Layer::index(const Point& x, int d) const {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j)
        idx += std::size_t(x[j] + radii[std::size_t(j)]) * strides[std::size_t(j)];
    return idx;
}

KernelPowerTable::KernelPowerTable(const StepLaw& law, int horizon, KernelMode mode,
                                   std::int64_t max_cells) {
    d_ = law.dim();
    horizon_ = horizon;
    mode_ = mode;
    if (horizon < 0) fail(errc::config_invalid, "horizon must be >= 0");

    std::vector<std::int32_t> step_max(std::size_t(d_), 0);
    for (const auto& [s, q] : law.support())
        for (int j = 0; j < d_; ++j)
            step_max[std::size_t(j)] = std::max(step_max[std::size_t(j)], std::abs(s[j]));

    std::int64_t total_cells = 0;
    layers_.resize(std::size_t(horizon) + 1);
    for (int i = 0; i <= horizon; ++i) {
        Layer& layer = layers_[std::size_t(i)];
        layer.radii.resize(std::size_t(d_));
        layer.strides.resize(std::size_t(d_));
        std::size_t cells = 1;
        for (int j = d_ - 1; j >= 0; --j) {
            layer.radii[std::size_t(j)] = i * step_max[std::size_t(j)];
            layer.strides[std::size_t(j)] = cells;
            cells *= std::size_t(2 * layer.radii[std::size_t(j)] + 1);
        }
        total_cells += std::int64_t(cells);
        if (total_cells > max_cells)
            fail(errc::box_too_large, "kernel table exceeds the configured memory cap");
        if (mode_ == KernelMode::exact) layer.rat.assign(cells, Rational(0));
        else layer.flt.assign(cells, 0.0L);
    }

    // P^0 = point mass at the origin
    if (mode_ == KernelMode::exact)
        layers_[0].rat[layers_[0].index(origin(), d_)] = 1;
    else
        layers_[0].flt[layers_[0].index(origin(), d_)] = 1.0L;

    // P^{i+1}(x) = sum_s q(s) P^i(x - s)
    for (int i = 1; i <= horizon; ++i) {
        const Layer& prev = layers_[std::size_t(i - 1)];
        Layer& cur = layers_[std::size_t(i)];
        for_each(i - 1, [&](const Point& x, std::size_t prev_idx) {
            if (mode_ == KernelMode::exact) {
                const Rational& v = prev.rat[prev_idx];
                if (v == 0) return;
                for (const auto& [s, q] : law.support())
                    cur.rat[cur.index(add(x, s), d_)] += q * v;
            } else {
                const long double v = prev.flt[prev_idx];
                if (v == 0.0L) return;
                for (const auto& [s, q] : law.support())
                    cur.flt[cur.index(add(x, s), d_)] += to_double(q) * v;
            }
        });
    }
}

Rational KernelPowerTable::rat(int i, const Point& x) const {
    if (mode_ != KernelMode::exact) fail(errc::config_invalid, "table built in floating mode");
    const Layer& layer = layers_[std::size_t(i)];
    if (!layer.contains(x, d_)) return Rational(0);
    return layer.rat[layer.index(x, d_)];
}

long double KernelPowerTable::dbl(int i, const Point& x) const {
    const Layer& layer = layers_[std::size_t(i)];
    if (!layer.contains(x, d_)) return 0.0L;
    if (mode_ == KernelMode::exact) return Rational(layer.rat[layer.index(x, d_)]).convert_to<long double>();
    return layer.flt[layer.index(x, d_)];
}

} // namespace ilt
