#include "fcs/metrics.hpp"

#include "fcs/plant.hpp"

#include <algorithm>

namespace fcs {

namespace {

template <typename T>
T nearest_rank(std::vector<T> v, double pct) {
    std::sort(v.begin(), v.end());
    const std::size_t rank = std::size_t(std::ceil(pct / 100.0 * double(v.size())));
    return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

double tdd(const SimTrace& trace, double t0, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("tdd: empty window");
    const double periods = T * trace.f1;
    if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods))
        throw std::invalid_argument("tdd: window must span an integer number of fundamental periods");

    // Substep sample m holds the state at (m+1)*T_sim.
    const std::size_t W = std::size_t(std::llround(T / trace.T_sim));
    const long first = std::lround(t0 / trace.T_sim) - 1;
    if (first < 0 || first + long(W) > long(trace.substeps.size()))
        throw std::invalid_argument("tdd: window outside trace");

    const double m1 = std::round(periods);  // fundamental bin index
    double tdd_sum = 0.0;
    for (int ph = 0; ph < 3; ++ph) {
        double sum = 0.0, sum2 = 0.0, cs = 0.0, sn = 0.0;
        for (std::size_t m = 0; m < W; ++m) {
            const Eigen::Vector3d iabc = inv_clarke(trace.substeps[first + long(m)]);
            const double x = iabc(ph);
            const double ang = 2.0 * std::numbers::pi * m1 * double(m) / double(W);
            sum += x;
            sum2 += x * x;
            cs += x * std::cos(ang);
            sn += x * std::sin(ang);
        }
        const double mean = sum / double(W);
        const double rms2_total = sum2 / double(W);
        const double fund_peak2 =
            (2.0 * cs / double(W)) * (2.0 * cs / double(W)) +
            (2.0 * sn / double(W)) * (2.0 * sn / double(W));
        const double harm_rms2 =
            std::max(0.0, rms2_total - mean * mean - 0.5 * fund_peak2);
        const double i_nom_rms = 1.0 / std::sqrt(2.0);  // 1 pu peak rated
        tdd_sum += std::sqrt(harm_rms2) / i_nom_rms * 100.0;
    }
    return tdd_sum / 3.0;
}

double tracking_error(const SimTrace& trace, double t0, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("tracking_error: empty window");
    const double eps = 0.5 * trace.T_s;
    double acc = 0.0;
    std::size_t n = 0;
    for (const TraceRow& r : trace.rows) {
        if (r.t < t0 - eps || r.t > t0 + T + eps) continue;
        const double ea = r.i_ref.alpha - r.i.alpha;
        const double eb = r.i_ref.beta - r.i.beta;
        acc += ea * ea + eb * eb;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("tracking_error: window outside trace");
    return acc / (std::sqrt(2.0) * T) * 100.0;
}

double avg_fsw(const SimTrace& trace, double t0, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("avg_fsw: empty window");
    const double eps = 0.5 * trace.T_s;
    double acc = 0.0;
    std::size_t n = 0;
    for (const TraceRow& r : trace.rows) {
        if (r.t < t0 - eps || r.t > t0 + T + eps) continue;
        acc += r.fsw;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("avg_fsw: window outside trace");
    return acc / double(n);
}

TimingStats timing_stats(const SimTrace& trace) {
    if (trace.rows.empty()) throw std::invalid_argument("timing_stats: empty trace");
    std::vector<double> times;
    std::vector<std::uint64_t> nodes;
    times.reserve(trace.rows.size());
    nodes.reserve(trace.rows.size());
    TimingStats st;
    for (const TraceRow& r : trace.rows) {
        times.push_back(r.solve_us);
        nodes.push_back(r.nodes);
        st.solve_us_total += r.solve_us;
        st.nodes_total += r.nodes;
        st.solve_us_max = std::max(st.solve_us_max, r.solve_us);
        st.nodes_max = std::max(st.nodes_max, r.nodes);
    }
    st.solve_us_p70 = nearest_rank(times, 70.0);
    st.solve_us_p95 = nearest_rank(times, 95.0);
    st.nodes_p70 = nearest_rank(nodes, 70.0);
    st.nodes_p95 = nearest_rank(nodes, 95.0);
    return st;
}

Metrics compute_metrics(const SimTrace& trace, double t0, double T) {
    Metrics m;
    m.tdd_percent = tdd(trace, t0, T);
    m.tracking_error_percent = tracking_error(trace, t0, T);
    m.fsw_avg_hz = avg_fsw(trace, t0, T);
    m.timing = timing_stats(trace);
    return m;
}

Metrics compute_metrics(const SimTrace& trace) {
    return compute_metrics(trace, trace.scenario.window_t0, trace.scenario.window_T);
}

}  // namespace fcs
