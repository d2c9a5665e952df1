#pragma once

#include <cstdint>
#include <vector>

#include "ilt/step_law.hpp"

namespace ilt {

enum class KernelMode { exact, floating };

// Transition-kernel powers P^i(x) for i = 0..N, stored densely on the exact
// reachable box (per-coordinate radius i * max-step), so there is no
// truncation error: the walk cannot leave the box.
class KernelPowerTable {
public:
    KernelPowerTable(const StepLaw& law, int horizon, KernelMode mode,
                     std::int64_t max_cells = 80'000'000);

    int horizon() const { return horizon_; }
    int dim() const { return d_; }
    KernelMode mode() const { return mode_; }

    // Zero outside the reachable box.
    Rational rat(int i, const Point& x) const;
    long double dbl(int i, const Point& x) const;

    // Visits every stored cell of layer i: f(Point, flat index).
    template <class F>
    void for_each(int i, F&& f) const {
        const Layer& layer = layers_[std::size_t(i)];
        Point x = origin();
        std::vector<std::int32_t> c(static_cast<std::size_t>(d_), 0);
        for (int j = 0; j < d_; ++j) c[std::size_t(j)] = -layer.radii[std::size_t(j)];
        std::size_t idx = 0;
        for (;;) {
            for (int j = 0; j < d_; ++j) x[j] = c[std::size_t(j)];
            f(x, idx);
            ++idx;
            int j = d_ - 1;
            while (j >= 0 && ++c[std::size_t(j)] > layer.radii[std::size_t(j)]) {
                c[std::size_t(j)] = -layer.radii[std::size_t(j)];
                --j;
            }
            if (j < 0) break;
        }
    }

    const Rational& rat_flat(int i, std::size_t idx) const {
        return layers_[std::size_t(i)].rat[idx];
    }
    long double dbl_flat(int i, std::size_t idx) const {
        return layers_[std::size_t(i)].flt[idx];
    }

private:
    struct Layer {
        std::vector<std::int32_t> radii;   // per-coordinate half-widths
        std::vector<std::size_t> strides;
        std::vector<Rational> rat;
        std::vector<long double> flt;

        bool contains(const Point& x, int d) const;
        std::size_t index(const Point& x, int d) const;
    };

    int d_ = 0;
    int horizon_ = 0;
    KernelMode mode_ = KernelMode::exact;
    std::vector<Layer> layers_;
};

} // namespace ilt
