#pragma once

#include "qclab/almost_periodicity.hpp"
#include "qclab/diffraction.hpp"
#include "qclab/exponential_sum.hpp"
#include "qclab/poisson.hpp"
#include "qclab/probes.hpp"
#include "qclab/reconstruction.hpp"
#include "qclab/test_function.hpp"
#include "qclab/zero_finder.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qclab::io {

// Writers print every double with 17 significant digits, which re-reads to
// the identical bit pattern, so equal data always serializes to equal bytes.
// Non-finite doubles appear as inf/-inf/nan in CSV and as quoted strings in
// JSON, which has no literal for them.

// {"terms":[{"omega":<real>,"re":<real>,"im":<real>},...]}, one document per
// file, frequencies ascending.
std::string to_json(const ExponentialSum& series);
ExponentialSum series_from_json(const std::string& text, const ToleranceConfig& cfg);

// Header position,multiplicity; rows ascending by position.  Readers accept
// an explicit window; without one they pad the data hull by 0.5 per side.
std::string to_csv(const ZeroSet& zeros);
ZeroSet zero_set_from_csv(const std::string& text, std::optional<Window> window = {});

// Header position,mass_re,mass_im; rows ascending by position.
std::string to_csv(const AtomicMeasure& measure);
AtomicMeasure measure_from_csv(const std::string& text, const ToleranceConfig& cfg,
                               std::optional<Window> window = {});

// Header radius,total_variation,log_tv_over_r.
std::string to_csv(const GrowthProfile& profile);

// Header sigma,t0,omega0,lhs_re,lhs_im,rhs_re,rhs_im,residual, one row per
// verified test function.  The two lists must pair up one to one.
std::string poisson_report_csv(const std::vector<TestFunction>& family,
                               const std::vector<PoissonIdentity>& results);

// Header tau, one qualifying shift per row.
std::string periods_csv(const AlmostPeriods& periods);

// Header n,phi.
std::string displacement_csv(const ApDisplacement& displacement);

// {"matched_zero_pairs":[{"original":..,"reconstructed":..},...],
//  "max_displacement":..,"ratio_log_slope":{"re":..,"im":..},"residual":..}
// where pairs align the original and recovered zeros by signed index.
std::string to_json(const RoundTripReport& report);

// {"name":..,"per_radius":[{"radius":..,"value":..},...],"verdict_metric":..}
std::string to_json(const ProbeReport& report);

// Header radius,value.  The verdict is recoverable from the rows.
std::string to_csv(const ProbeReport& report);

// Whole-file helpers; failures surface as IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qclab::io
