#include "modisperse/io.hpp"

#include <ostream>
#include <sstream>

namespace modisperse {

void write_trace_csv(std::ostream& os, const SolutionTrace& trace) {
    os << "t,l2,drift,remainder,iters\n";
    if (!trace.times.empty()) {
        os << fmt17(trace.times.front()) << ',' << fmt17(l2_norm(trace.states.front()))
           << ",0,0,0\n";
    }
    for (const auto& d : trace.diag) {
        os << fmt17(d.t) << ',' << fmt17(d.l2) << ',' << fmt17(d.drift) << ','
           << fmt17(d.remainder) << ',' << d.iters << '\n';
    }
}

void write_probe_csv(std::ostream& os, const std::vector<ProbeRow>& rows) {
    os << "K,alpha,beta,s,t,ratio_max,ratio_median\n";
    for (const auto& r : rows) {
        os << r.K << ',' << fmt17(r.alpha) << ',' << fmt17(r.beta) << ',' << fmt17(r.s) << ','
           << fmt17(r.t) << ',' << fmt17(r.ratio_max) << ',' << fmt17(r.ratio_median) << '\n';
    }
}

std::string irregularity_report_json(const IrregularityEstimate& est) {
    std::ostringstream os;
    os << "{\n"
       << "  \"gamma\": " << fmt17(est.gamma) << ",\n"
       << "  \"rho_hat\": " << fmt17(est.rho_hat) << ",\n"
       << "  \"seminorm\": " << fmt17(est.seminorm) << ",\n"
       << "  \"argmax_a\": " << fmt17(est.argmax_a) << ",\n"
       << "  \"argmax_s\": " << fmt17(est.argmax_s) << ",\n"
       << "  \"argmax_t\": " << fmt17(est.argmax_t) << "\n"
       << "}\n";
    return os.str();
}

std::string almost_conservation_json(const AlmostConservationReport& rep) {
    std::ostringstream os;
    os << "{\n"
       << "  \"alpha\": " << fmt17(rep.alpha) << ",\n"
       << "  \"N\": " << fmt17(rep.N) << ",\n"
       << "  \"lambda\": " << fmt17(rep.lambda) << ",\n"
       << "  \"epsilon0\": " << fmt17(rep.epsilon0) << ",\n"
       << "  \"windows\": [\n";
    for (std::size_t i = 0; i < rep.windows.size(); ++i) {
        const auto& w = rep.windows[i];
        os << "    {\"t0\": " << fmt17(w.t0) << ", \"t1\": " << fmt17(w.t1)
           << ", \"energy0\": " << fmt17(w.energy0) << ", \"energy1\": " << fmt17(w.energy1)
           << ", \"commutator_term\": " << fmt17(w.commutator_term)
           << ", \"remainder\": " << fmt17(w.remainder) << '}'
           << (i + 1 < rep.windows.size() ? "," : "") << '\n';
    }
    os << "  ],\n"
       << "  \"slope_fit\": {\"slope\": " << fmt17(rep.slope_fit.slope)
       << ", \"intercept\": " << fmt17(rep.slope_fit.intercept) << "},\n"
       << "  \"success\": " << (rep.success ? "true" : "false") << ",\n"
       << "  \"failure_window\": " << rep.failure_window << "\n"
       << "}\n";
    return os.str();
}

}  // namespace modisperse
