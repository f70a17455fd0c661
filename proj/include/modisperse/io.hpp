#pragma once

#include <iosfwd>
#include <string>

#include "modisperse/imethod.hpp"
#include "modisperse/irregularity.hpp"
#include "modisperse/operator.hpp"
#include "modisperse/young.hpp"

namespace modisperse {

/// Trace CSV: header `t,l2,drift,remainder,iters`, one row per step (the
/// initial time carries zero diagnostics), 17 significant digits.
void write_trace_csv(std::ostream& os, const SolutionTrace& trace);

/// Probe CSV: header `K,alpha,beta,s,t,ratio_max,ratio_median`.
void write_probe_csv(std::ostream& os, const std::vector<ProbeRow>& rows);

/// Irregularity report as JSON {gamma, rho_hat, seminorm, argmax_a, argmax_s,
/// argmax_t}.
std::string irregularity_report_json(const IrregularityEstimate& est);

/// Almost-conservation report as JSON {alpha, N, lambda, epsilon0, windows:
/// [{t0, t1, energy0, energy1, commutator_term, remainder}], slope_fit,
/// success, failure_window}.
std::string almost_conservation_json(const AlmostConservationReport& rep);

}  // namespace modisperse
