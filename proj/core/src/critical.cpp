#include "spinent/critical.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace spinent {

namespace {

void check_pair(SitePair pair, int n_qubits) {
    if (!(1 <= pair.n && pair.n < pair.m && pair.m <= n_qubits)) {
        throw std::out_of_range("pair (" + std::to_string(pair.n) + ", " + std::to_string(pair.m) +
                                ") invalid for N=" + std::to_string(n_qubits));
    }
}

double parse_double(std::string_view text) {
    // std::from_chars for double is unavailable on older libstdc++.
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: \"" + s + "\"");
    }
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: \"" + s + "\"");
    return v;
}

// Ground-manifold signature: sorted (|s|, k) labels of the lowest block.
std::vector<std::pair<int, int>> ground_signature(const ModelSpec& spec) {
    const SpectrumResult sr = diagonalize(spec);
    const double e0 = sr.energy(0);
    const double tol = 1e-9 * std::max(1.0, sr.energy(sr.size() - 1) - e0);
    std::vector<std::pair<int, int>> sig;
    for (std::size_t j = 0; j < sr.size() && sr.energy(j) - e0 <= tol; ++j) {
        sig.emplace_back(std::abs(sr.label(j).s), sr.label(j).k.value_or(-1));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

}  // namespace

// ---------------------------------------------------------------------------

PairThermalCurve::PairThermalCurve(const SpectrumResult& spectrum, SitePair pair)
    : energies_(spectrum.energies()) {
    check_pair(pair, spectrum.n_qubits());
    const std::array<int, 2> keep{pair.n, pair.m};
    blocks_.reserve(spectrum.size());
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        blocks_.emplace_back(partial_trace(spectrum.state(j), keep).matrix());
    }
}

PairThermalCurve::PairThermalCurve(const ModelSpec& spec, SitePair pair) : PairThermalCurve(diagonalize(spec), pair) {}

DensityMatrix PairThermalCurve::reduced_state(double temperature) const {
    if (!(temperature > 0.0)) throw std::invalid_argument("thermal state: temperature must be > 0");
    const Eigen::VectorXd w = thermal_weights(energies_, 1.0 / temperature);
    Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
    for (std::size_t j = 0; j < blocks_.size(); ++j) acc += w(static_cast<Eigen::Index>(j)) * blocks_[j];
    return DensityMatrix::trusted(2, acc);
}

ConcurrenceResult PairThermalCurve::concurrence(double temperature) const {
    return concurrence_wootters(reduced_state(temperature));
}

double thermal_concurrence(const ModelSpec& spec, SitePair pair, double temperature) {
    return PairThermalCurve(spec, pair).concurrence(temperature).c;
}

CriticalTemperature critical_temperature(const PairThermalCurve& curve, const CriticalScan& scan) {
    if (!(scan.t_min > 0.0 && scan.t_max > scan.t_min && scan.factor > 1.0)) {
        throw std::invalid_argument("critical_temperature: invalid scan parameters");
    }
    auto entangled = [&](double t) { return curve.concurrence(t).c_tilde > scan.zero_threshold; };

    std::vector<double> grid;
    for (double t = scan.t_min; t <= scan.t_max * (1.0 + 1e-12); t *= scan.factor) grid.push_back(t);
    if (grid.back() < scan.t_max * (1.0 - 1e-12)) grid.push_back(scan.t_max);

    std::ptrdiff_t last = -1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (entangled(grid[i])) last = static_cast<std::ptrdiff_t>(i);
    }
    if (last < 0) return {0.0, true};
    if (static_cast<std::size_t>(last) + 1 == grid.size()) return {grid.back(), false};

    double lo = grid[static_cast<std::size_t>(last)];
    double hi = grid[static_cast<std::size_t>(last) + 1];
    while (hi - lo > scan.tolerance) {
        const double mid = 0.5 * (lo + hi);
        (entangled(mid) ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

CriticalTemperature critical_temperature(const ModelSpec& spec, SitePair pair, const CriticalScan& scan) {
    return critical_temperature(PairThermalCurve(spec, pair), scan);
}

// ---------------------------------------------------------------------------

std::vector<double> Range::values() const {
    if (!(step > 0.0)) throw std::invalid_argument("range: step must be > 0");
    if (hi < lo) throw std::invalid_argument("range: hi < lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

Range Range::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(':', start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    Range r;
    if (parts.size() == 1) {
        r.lo = r.hi = parse_double(parts[0]);
        r.step = 1.0;
    } else if (parts.size() == 3) {
        r.lo = parse_double(parts[0]);
        r.hi = parse_double(parts[1]);
        r.step = parse_double(parts[2]);
    } else {
        throw std::invalid_argument("range must be lo:hi:step or a single value, got \"" + std::string(text) + "\"");
    }
    r.values();
    return r;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<TcPoint> tc_curve(const ModelSpec& spec_template, SitePair pair, const std::vector<double>& deltas,
                              int jobs, const CriticalScan& scan) {
    std::vector<TcPoint> out(deltas.size());
    parallel_for(deltas.size(), jobs, [&](std::size_t i) {
        ModelSpec spec = spec_template;
        spec.delta = deltas[i];
        const CriticalTemperature tc = critical_temperature(spec, pair, scan);
        out[i] = {deltas[i], tc.tc, tc.identically_zero};
    });
    return out;
}

SweepResult sweep(const SweepGrid& grid, int jobs) {
    grid.spec_template.validate();
    check_pair(grid.pair, grid.spec_template.n_qubits);
    const std::vector<double> deltas = grid.delta.values();
    const std::vector<double> temps = grid.temperature.values();
    if (temps.front() <= 0.0) throw std::invalid_argument("sweep: temperatures must be > 0");

    std::vector<std::vector<double>> c(deltas.size());
    std::vector<TcPoint> tc(deltas.size());
    parallel_for(deltas.size(), jobs, [&](std::size_t i) {
        ModelSpec spec = grid.spec_template;
        spec.delta = deltas[i];
        const PairThermalCurve curve(spec, grid.pair);
        c[i].reserve(temps.size());
        for (double t : temps) c[i].push_back(curve.concurrence(t).c);
        const CriticalTemperature ct = critical_temperature(curve);
        tc[i] = {deltas[i], ct.tc, ct.identically_zero};
    });

    SweepResult out;
    out.tc = std::move(tc);
    out.rows.reserve(deltas.size() * temps.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        for (std::size_t k = 0; k < temps.size(); ++k) out.rows.push_back({deltas[i], temps[k], c[i][k]});
    }
    for (double level : grid.iso_levels) {
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            for (std::size_t k = 0; k + 1 < temps.size(); ++k) {
                const double a = c[i][k] - level;
                const double b = c[i][k + 1] - level;
                if (a == 0.0) {
                    out.iso.push_back({level, deltas[i], temps[k]});
                } else if (a * b < 0.0) {
                    const double t = temps[k] + (temps[k + 1] - temps[k]) * a / (a - b);
                    out.iso.push_back({level, deltas[i], t});
                }
            }
        }
    }
    return out;
}

std::vector<double> ground_state_crossings(const ModelSpec& spec_template, double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("ground_state_crossings: invalid interval");
    auto at = [&](double delta) {
        ModelSpec s = spec_template;
        s.delta = delta;
        return ground_signature(s);
    };
    std::vector<double> out;
    double a = lo;
    auto sig_a = at(a);
    while (a < hi) {
        const double b = std::min(hi, a + step);
        auto sig_b = at(b);
        if (sig_b != sig_a) {
            double l = a, r = b;
            while (r - l > 1e-10) {
                const double mid = 0.5 * (l + r);
                (at(mid) == sig_a ? l : r) = mid;
            }
            out.push_back(0.5 * (l + r));
        }
        a = b;
        sig_a = std::move(sig_b);
    }
    return out;
}

}  // namespace spinent
