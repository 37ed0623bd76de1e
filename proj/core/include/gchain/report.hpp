#pragma once

#include "gchain/coupling.hpp"
#include "gchain/criteria.hpp"
#include "gchain/diagnostics.hpp"
#include "gchain/models.hpp"
#include "gchain/oracle.hpp"
#include "gchain/sim.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gchain {

/// 17-significant-digit decimal form (round-trips any double).
std::string format_g17(double x);

nlohmann::json to_json(const SeriesClassification& s);
nlohmann::json to_json(const CurveStat& s);
nlohmann::json to_json(const WeakL2Curve& c);
nlohmann::json to_json(const PWeakL2Result& r);
nlohmann::json to_json(const CouplingTailCurve& c);
nlohmann::json to_json(const TvDecayCurve& c);
nlohmann::json to_json(const BetaMixingCurve& c);
nlohmann::json to_json(const CorrelationCurve& c);
nlohmann::json to_json(const DobrushinReport& r);
nlohmann::json to_json(const Ell2Report& r);
nlohmann::json to_json(const L2BoundSeries& s);
/// Window-law payload (wall time excluded; it belongs in report metadata).
nlohmann::json to_json(const WindowLaw& law);

// CSV exports (one curve per file; 17 significant digits).
std::string trajectory_csv(const std::vector<Trajectory>& replicas);
std::string window_law_csv(const WindowLaw& law, const Alphabet& alphabet);
std::string coupling_curve_csv(const CouplingTailCurve& curve);
std::string weak_l2_csv(const WeakL2Curve& curve);
std::string tv_decay_csv(const TvDecayCurve& curve);
std::string beta_mixing_csv(const BetaMixingCurve& curve);
std::string correlation_csv(const CorrelationCurve& curve);

} // namespace gchain
