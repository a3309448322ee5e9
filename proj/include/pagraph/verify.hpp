#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "pagraph/experiment.hpp"
#include "pagraph/report.hpp"

namespace pagraph {

/// Default value of every named verify threshold; config.thresholds may
/// override any of them (unknown names are a RangeError).
const std::map<std::string, double>& default_thresholds();

/// Runs the acceptance checks selected by config.profile:
///   full   - every check at its stated scale,
///   quick  - the same checks at n = 1e4 with 20 replications,
///   theory - the numerical checks only, no simulation.
/// Each check draws from its own stream derived from config.model.seed.
/// Progress lines go to `log` when given.
ReportDocument verify(const ExperimentConfig& config, std::ostream* log = nullptr);

}  // namespace pagraph
