#pragma once

#include "qmit/datasets.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qmit
{

struct Curve
{
	std::string name;
	std::vector<double> t;
	std::vector<double> value;

	friend bool operator==(const Curve&, const Curve&) = default;
};

/// E_{A,B} = 1/(2D) sum (A - B)^2 over the records of the chosen axes, D being
/// the number of compared scalars. Both datasets must cover the same keys.
double mse(const ObservationDataset& a, const ObservationDataset& b, const std::vector<Axis>& axes);

/// Per time point, the same half-MSE restricted to that time index.
Curve mse_curve(const ObservationDataset& a, const ObservationDataset& b, Axis axis = Axis::Z);

/// Per time point, the average of <P_j> over all spins j.
Curve mean_magnetization(const ObservationDataset& ds, std::string_view init, Axis axis = Axis::Z);

/// d(t) = mean_{j in up} m_j - mean_{j in down} m_j with m_j = 2 n_j - 1 = -<Z_j>;
/// "up" is the set of spins initially in |1>.
Curve half_difference(const ObservationDataset& ds, std::string_view init);

/// Half-difference for an arbitrary partition, used for the set-exchange
/// symmetry checks. up_mask[j] selects spin j into the "up" set.
Curve half_difference(const ObservationDataset& ds, std::string_view init, const std::vector<bool>& up_mask);

enum class CurveKind { MeanMagnetization, HalfDifference };

struct DeviationCurves
{
	Curve vs_trotter; // improved - ideal Trotter
	Curve vs_exact;   // improved - exact
};

DeviationCurves deviation_curves(const ObservationDataset& improved, const ObservationDataset& ideal_trotter,
                                 const ObservationDataset& exact, std::string_view init, CurveKind kind);
DeviationCurves deviation_curves(const Curve& improved, const Curve& ideal_trotter, const Curve& exact);

struct MetricReport
{
	std::string label_a;
	std::string label_b;
	std::map<char, double> per_axis;
	double overall = 0.0;
	std::vector<Curve> curves;
	nlohmann::json meta = nlohmann::json::object();
};

MetricReport compare(const ObservationDataset& a, const ObservationDataset& b, const std::vector<Axis>& axes);

nlohmann::json report_to_json(const MetricReport& r);
MetricReport report_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const Curve& c);
Curve curve_from_json(const nlohmann::json& j);
/// Two columns: t,value.
std::string curve_to_csv(const Curve& c);
/// Minimal line chart, time on x, one polyline per curve.
std::string curves_to_svg(const std::vector<Curve>& curves, std::string_view title);

} // namespace qmit
