#pragma once

#include "fcs/simulator.hpp"

namespace fcs {

/// Total demand distortion of the three phase currents over [t0, t0+T):
/// non-fundamental RMS content (DC excluded) over the rated RMS current
/// (1 pu peak), in percent, averaged over the phases. Evaluated on the
/// T_sim-resolution samples; T must span an integer number of fundamental
/// periods.
double tdd(const SimTrace& trace, double t0, double T);

/// Squared current tracking error sum_(t in window) ||i*(t) - i(t)||^2
/// scaled by 1/(sqrt(2) T), over control-step samples, reported x100.
double tracking_error(const SimTrace& trace, double t0, double T);

/// Mean of the controller-filter switching-frequency samples over the window.
double avg_fsw(const SimTrace& trace, double t0, double T);

/// Nearest-rank percentiles of per-step solve times and node counts over the
/// whole trace.
struct TimingStats {
    double solve_us_total = 0.0;
    double solve_us_max = 0.0;
    double solve_us_p70 = 0.0;
    double solve_us_p95 = 0.0;
    std::uint64_t nodes_total = 0;
    std::uint64_t nodes_max = 0;
    std::uint64_t nodes_p70 = 0;
    std::uint64_t nodes_p95 = 0;
};

TimingStats timing_stats(const SimTrace& trace);

/// All scalar results of one run, windowed on the scenario's window.
struct Metrics {
    double tdd_percent = 0.0;
    double tracking_error_percent = 0.0;
    double fsw_avg_hz = 0.0;
    TimingStats timing;
};

Metrics compute_metrics(const SimTrace& trace);
Metrics compute_metrics(const SimTrace& trace, double t0, double T);

}  // namespace fcs
