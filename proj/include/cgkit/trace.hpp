#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "cgkit/counters.hpp"
#include "cgkit/point.hpp"

namespace cgkit {

struct TraceRow {
    int t = 0;
    double f = 0.0;
    double subopt = 0.0;  // f - f_star; NaN until f_star is known
    std::uint64_t sfo = 0, szo = 0, lmo = 0;  // cumulative
    double gamma = 0.0;
    long batch = 0;
    int inner_iterations = 0;  // SCGS only
};

struct RunTrace {
    std::vector<TraceRow> rows;  // rows[0] is the t = 0 state
    Point final_x;
    OracleCounters counters;
};

// 17 significant digits: enough to round-trip an IEEE double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trace_csv(std::ostream& os, const RunTrace& trace) {
    os << "t,f,subopt,sfo,szo,lmo,gamma,b\n";
    for (const auto& r : trace.rows) {
        os << r.t << ',' << format_double(r.f) << ',' << format_double(r.subopt) << ','
           << r.sfo << ',' << r.szo << ',' << r.lmo << ',' << format_double(r.gamma)
           << ',' << r.batch << '\n';
    }
}

}  // namespace cgkit
