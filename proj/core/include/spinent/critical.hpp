// Thermal pair concurrence, critical temperature of disentanglement, and
// (Delta, T) sweeps.

#pragma once

#include "spinent/measures.hpp"
#include "spinent/model.hpp"
#include "spinent/spectrum.hpp"

#include <array>
#include <functional>
#include <string_view>
#include <vector>

namespace spinent {

struct SitePair {
    int n = 1;
    int m = 2;
};

/// Reduced thermal state of one pair as a function of temperature. The pair
/// reduction of every eigenvector is cached, so each evaluation only mixes
/// 4x4 blocks.
class PairThermalCurve {
public:
    PairThermalCurve(const SpectrumResult& spectrum, SitePair pair);
    PairThermalCurve(const ModelSpec& spec, SitePair pair);

    DensityMatrix reduced_state(double temperature) const;
    ConcurrenceResult concurrence(double temperature) const;

private:
    Eigen::VectorXd energies_;
    std::vector<Eigen::Matrix4cd> blocks_;
};

/// Concurrence of the pair's reduced thermal state at T > 0.
double thermal_concurrence(const ModelSpec& spec, SitePair pair, double temperature);

/// Temperature used for the ground-state limit.
inline constexpr double kGroundStateTemperature = 1e-6;

struct CriticalScan {
    double t_min = 1e-3;
    double t_max = 50.0;
    double factor = 1.05;
    double tolerance = 1e-8;
    /// C is treated as zero when C_tilde <= this threshold.
    double zero_threshold = 1e-12;
};

struct CriticalTemperature {
    double tc = 0.0;
    bool identically_zero = true;  ///< no entanglement at any scanned T
};

/// Highest temperature at which the concurrence changes from positive to
/// zero, refined by bisection.
CriticalTemperature critical_temperature(const PairThermalCurve& curve, const CriticalScan& scan = {});
CriticalTemperature critical_temperature(const ModelSpec& spec, SitePair pair, const CriticalScan& scan = {});

/// Inclusive grid lo, lo + step, ... up to hi within half a step.
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
    /// Parses "lo:hi:step" or a single number.
    static Range parse(std::string_view text);
};

struct SweepGrid {
    Range delta;
    Range temperature;
    SitePair pair;
    ModelSpec spec_template;  ///< couplings and N; delta is replaced per point
    std::vector<double> iso_levels;
};

struct SweepRow {
    double delta;
    double temperature;
    double concurrence;
};

struct TcPoint {
    double delta;
    double tc;
    bool identically_zero;
};

struct IsoPoint {
    double level;
    double delta;
    double temperature;
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< delta-major, then temperature
    std::vector<TcPoint> tc;
    std::vector<IsoPoint> iso;
};

/// `jobs` worker threads; output is independent of the worker count.
SweepResult sweep(const SweepGrid& grid, int jobs = 1);

/// T_c(Delta) for every value in `deltas`.
std::vector<TcPoint> tc_curve(const ModelSpec& spec_template, SitePair pair, const std::vector<double>& deltas,
                              int jobs = 1, const CriticalScan& scan = {});

/// Runs body(i) for i in [0, count) on `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

/// Delta values in [lo, hi] where the ground-state manifold changes its set of
/// (|s|, k) labels, located by a scan with `step` and bisection to 1e-10.
std::vector<double> ground_state_crossings(const ModelSpec& spec_template, double lo, double hi, double step);

}  // namespace spinent
