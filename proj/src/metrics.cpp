#include "qmit/metrics.hpp"

#include "qmit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace qmit
{

double mse(const ObservationDataset& a, const ObservationDataset& b, const std::vector<Axis>& axes)
{
	const RecordIndex ia = index_records(a), ib = index_records(b);
	auto selected = [&](Axis x) { return std::ranges::find(axes, x) != axes.end(); };

	double sum = 0.0;
	std::size_t count = 0;
	std::size_t b_selected = 0;
	for(const auto& [key, pos] : ib)
	{
		if(selected(key.axis)) { ++b_selected; }
	}
	for(const auto& [key, pos] : ia)
	{
		if(!selected(key.axis)) { continue; }
		const auto it = ib.find(key);
		if(it == ib.end())
		{
			throw AlignmentError("key (" + key.init_state + ", " + std::to_string(key.time_index) + ", " + axis_char(key.axis) + ", " +
			                     std::to_string(key.qubit) + ") missing from " + std::string(role_name(b.meta.role)));
		}
		const double d = a.records[pos].value - b.records[it->second].value;
		sum += d * d;
		++count;
	}
	if(count != b_selected) { throw AlignmentError(std::string(role_name(b.meta.role)) + " has keys absent from " + std::string(role_name(a.meta.role))); }
	if(count == 0) { throw AlignmentError("no records on the selected axes"); }
	return sum / (2.0 * static_cast<double>(count));
}

Curve mse_curve(const ObservationDataset& a, const ObservationDataset& b, Axis axis)
{
	mse(a, b, {axis}); // alignment check
	const RecordIndex ib = index_records(b);
	std::map<int, std::pair<double, std::size_t>> acc;
	std::map<int, double> times;
	for(const auto& r : a.records)
	{
		if(r.axis != axis) { continue; }
		const double d = r.value - b.records[ib.at(key_of(r))].value;
		auto& [sum, n] = acc[r.time_index];
		sum += d * d;
		++n;
		times[r.time_index] = r.t;
	}
	Curve c;
	c.name = "mse_" + std::string(1, axis_char(axis));
	for(const auto& [i, sn] : acc)
	{
		c.t.push_back(times[i]);
		c.value.push_back(sn.first / (2.0 * static_cast<double>(sn.second)));
	}
	return c;
}

namespace
{

// values[time index - 1][qubit] for one initial state and axis
std::vector<std::vector<double>> gather(const ObservationDataset& ds, std::string_view init, Axis axis, std::vector<double>& times)
{
	const int n = ds.meta.model.num_spins;
	std::vector<std::vector<double>> v;
	std::vector<std::vector<bool>> have;
	for(const auto& r : ds.records)
	{
		if(r.init_state != init || r.axis != axis) { continue; }
		const auto i = static_cast<std::size_t>(r.time_index);
		if(v.size() < i)
		{
			v.resize(i, std::vector<double>(static_cast<std::size_t>(n), 0.0));
			have.resize(i, std::vector<bool>(static_cast<std::size_t>(n), false));
			times.resize(i, std::nan(""));
		}
		v[i - 1][static_cast<std::size_t>(r.qubit)] = r.value;
		have[i - 1][static_cast<std::size_t>(r.qubit)] = true;
		times[i - 1] = r.t;
	}
	if(v.empty()) { throw AlignmentError("no " + std::string(1, axis_char(axis)) + " records for initial state " + std::string(init)); }
	for(std::size_t i = 0; i < v.size(); ++i)
	{
		for(int q = 0; q < n; ++q)
		{
			if(!have[i][static_cast<std::size_t>(q)])
			{
				throw AlignmentError("missing record (" + std::string(init) + ", " + std::to_string(i + 1) + ", " + axis_char(axis) + ", " +
				                     std::to_string(q) + ")");
			}
		}
	}
	return v;
}

} // namespace

Curve mean_magnetization(const ObservationDataset& ds, std::string_view init, Axis axis)
{
	Curve c;
	c.name = std::string(role_name(ds.meta.role)) + "_mean_" + axis_char(axis);
	const auto v = gather(ds, init, axis, c.t);
	for(const auto& row : v)
	{
		double s = 0.0;
		for(const double x : row) { s += x; }
		c.value.push_back(s / static_cast<double>(row.size()));
	}
	return c;
}

Curve half_difference(const ObservationDataset& ds, std::string_view init, const std::vector<bool>& up_mask)
{
	const int n = ds.meta.model.num_spins;
	if(static_cast<int>(up_mask.size()) != n) { throw ArgumentError("partition size does not match chain length"); }
	const auto n_up = std::ranges::count(up_mask, true);
	const auto n_down = static_cast<std::ptrdiff_t>(n) - n_up;
	if(n_up == 0 || n_down == 0) { throw ArgumentError("half-difference is undefined for a fully polarized initial state"); }

	Curve c;
	c.name = std::string(role_name(ds.meta.role)) + "_half_difference";
	const auto v = gather(ds, init, Axis::Z, c.t);
	for(const auto& row : v)
	{
		double up = 0.0, down = 0.0;
		for(int q = 0; q < n; ++q)
		{
			const double m = -row[static_cast<std::size_t>(q)];
			(up_mask[static_cast<std::size_t>(q)] ? up : down) += m;
		}
		c.value.push_back(up / static_cast<double>(n_up) - down / static_cast<double>(n_down));
	}
	return c;
}

Curve half_difference(const ObservationDataset& ds, std::string_view init)
{
	std::vector<bool> mask;
	for(const char ch : init) { mask.push_back(ch == '1'); }
	return half_difference(ds, init, mask);
}

DeviationCurves deviation_curves(const Curve& improved, const Curve& ideal_trotter, const Curve& exact)
{
	const std::size_t k = improved.t.size();
	if(ideal_trotter.t.size() != k || exact.t.size() != k) { throw AlignmentError("curves have different grid lengths"); }
	for(std::size_t i = 0; i < k; ++i)
	{
		if(std::abs(improved.t[i] - ideal_trotter.t[i]) > 1e-12 || std::abs(improved.t[i] - exact.t[i]) > 1e-12)
		{
			throw AlignmentError("curves are sampled on different time grids");
		}
	}
	DeviationCurves d;
	d.vs_trotter.name = "delta_trotter";
	d.vs_exact.name = "delta_exact";
	d.vs_trotter.t = improved.t;
	d.vs_exact.t = improved.t;
	for(std::size_t i = 0; i < k; ++i)
	{
		d.vs_trotter.value.push_back(improved.value[i] - ideal_trotter.value[i]);
		d.vs_exact.value.push_back(improved.value[i] - exact.value[i]);
	}
	return d;
}

DeviationCurves deviation_curves(const ObservationDataset& improved, const ObservationDataset& ideal_trotter,
                                 const ObservationDataset& exact, std::string_view init, CurveKind kind)
{
	auto curve = [&](const ObservationDataset& ds) {
		return kind == CurveKind::MeanMagnetization ? mean_magnetization(ds, init, Axis::Z) : half_difference(ds, init);
	};
	return deviation_curves(curve(improved), curve(ideal_trotter), curve(exact));
}

MetricReport compare(const ObservationDataset& a, const ObservationDataset& b, const std::vector<Axis>& axes)
{
	MetricReport r;
	r.label_a = role_name(a.meta.role);
	r.label_b = role_name(b.meta.role);
	for(const auto axis : axes) { r.per_axis[axis_char(axis)] = mse(a, b, {axis}); }
	r.overall = mse(a, b, axes);
	return r;
}

nlohmann::json curve_to_json(const Curve& c) { return {{"name", c.name}, {"t", c.t}, {"value", c.value}}; }

Curve curve_from_json(const nlohmann::json& j)
{
	return {j.at("name").get<std::string>(), j.at("t").get<std::vector<double>>(), j.at("value").get<std::vector<double>>()};
}

nlohmann::json report_to_json(const MetricReport& r)
{
	nlohmann::json per_axis = nlohmann::json::object();
	for(const auto& [axis, v] : r.per_axis) { per_axis[std::string(1, axis)] = v; }
	nlohmann::json curves = nlohmann::json::array();
	for(const auto& c : r.curves) { curves.push_back(curve_to_json(c)); }
	return {{"format", "qmit-report"}, {"a", r.label_a}, {"b", r.label_b}, {"per_axis", per_axis},
	        {"overall", r.overall},    {"curves", curves},  {"meta", r.meta}};
}

MetricReport report_from_json(const nlohmann::json& j)
{
	if(j.value("format", std::string{}) != "qmit-report") { throw ArgumentError("not a qmit report"); }
	MetricReport r;
	r.label_a = j.at("a").get<std::string>();
	r.label_b = j.at("b").get<std::string>();
	for(const auto& [axis, v] : j.at("per_axis").items()) { r.per_axis[axis.at(0)] = v.get<double>(); }
	r.overall = j.at("overall").get<double>();
	for(const auto& c : j.at("curves")) { r.curves.push_back(curve_from_json(c)); }
	r.meta = j.value("meta", nlohmann::json::object());
	return r;
}

std::string curve_to_csv(const Curve& c)
{
	std::ostringstream out;
	out << std::setprecision(17) << "t,value\n";
	for(std::size_t i = 0; i < c.t.size(); ++i) { out << c.t[i] << ',' << c.value[i] << '\n'; }
	return out.str();
}

namespace
{

std::string xml_escape(std::string_view s)
{
	std::string out;
	for(const char c : s)
	{
		switch(c)
		{
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '&': out += "&amp;"; break;
		case '"': out += "&quot;"; break;
		default: out += c;
		}
	}
	return out;
}

} // namespace

std::string curves_to_svg(const std::vector<Curve>& curves, std::string_view title)
{
	constexpr double W = 640, H = 400, L = 60, R = 150, Top = 40, B = 50;
	static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

	double tmin = 0.0, tmax = 0.0, vmin = 0.0, vmax = 0.0;
	bool first = true;
	for(const auto& c : curves)
	{
		for(std::size_t i = 0; i < c.t.size(); ++i)
		{
			if(first) { tmin = tmax = c.t[i]; vmin = vmax = c.value[i]; first = false; }
			tmin = std::min(tmin, c.t[i]);
			tmax = std::max(tmax, c.t[i]);
			vmin = std::min(vmin, c.value[i]);
			vmax = std::max(vmax, c.value[i]);
		}
	}
	tmin = std::min(tmin, 0.0);
	if(tmax - tmin < 1e-12) { tmax = tmin + 1.0; }
	if(vmax - vmin < 1e-12) { vmin -= 0.5; vmax += 0.5; }
	const double pad = 0.05 * (vmax - vmin);
	vmin -= pad;
	vmax += pad;

	auto px = [&](double t) { return L + (t - tmin) / (tmax - tmin) * (W - L - R); };
	auto py = [&](double v) { return H - B - (v - vmin) / (vmax - vmin) * (H - Top - B); };

	std::ostringstream out;
	out << std::fixed << std::setprecision(2);
	out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
	out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
	out << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
	out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
	out << "<line x1=\"" << L << "\" y1=\"" << Top << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
	for(int k = 0; k <= 4; ++k)
	{
		const double t = tmin + (tmax - tmin) * k / 4.0;
		const double v = vmin + (vmax - vmin) * k / 4.0;
		out << "<text x=\"" << px(t) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << std::setprecision(3) << t << std::setprecision(2)
		    << "</text>\n";
		out << "<text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << std::setprecision(3) << v << std::setprecision(2)
		    << "</text>\n";
	}
	out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">t</text>\n";
	if(vmin < 0.0 && vmax > 0.0)
	{
		out << "<line x1=\"" << L << "\" y1=\"" << py(0.0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0.0) << "\" stroke=\"#cccccc\"/>\n";
	}
	for(std::size_t s = 0; s < curves.size(); ++s)
	{
		const auto& c = curves[s];
		const char* color = palette[s % palette.size()];
		out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
		for(std::size_t i = 0; i < c.t.size(); ++i) { out << (i ? " " : "") << px(c.t[i]) << ',' << py(c.value[i]); }
		out << "\"/>\n";
		const double ly = Top + 16.0 * static_cast<double>(s);
		out << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
		    << "\" stroke-width=\"2\"/>\n";
		out << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\">" << xml_escape(c.name) << "</text>\n";
	}
	out << "</svg>\n";
	return out.str();
}

} // namespace qmit
