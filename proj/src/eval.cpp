#include "fvcode/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fvcode/matcher.hpp"
#include "parallel.hpp"

namespace fvcode
{
namespace
{

void require_same_size(GrayImage const & image, Eigen::Index rows, Eigen::Index cols, std::string const & where)
{
	if (image.rows() != rows || image.cols() != cols)
		throw Error(
			ErrorKind::dataset,
			"dimension mismatch: " + where + " is " + std::to_string(image.cols()) + "x" +
				std::to_string(image.rows()) + ", expected " + std::to_string(cols) + "x" + std::to_string(rows));
}

double rate_percent(std::size_t wrong, std::size_t total)
{
	return total == 0 ? 100.0 : 100.0 * (1.0 - static_cast<double>(wrong) / static_cast<double>(total));
}

}  // namespace

std::vector<EncodedFinger> encode_samples(
	std::span<FingerSamples const> fingers, BlockSpec const & spec, ParallelOptions options)
{
	validate(spec);
	std::vector<EncodedFinger> out(fingers.size());
	if (fingers.empty())
		return out;
	if (fingers.front().images.empty())
		throw Error(ErrorKind::dataset, "finger '" + fingers.front().finger_id + "' has no images");
	auto const rows = fingers.front().images.front().rows();
	auto const cols = fingers.front().images.front().cols();

	detail::parallel_for(fingers.size(), options.threads, [&](std::size_t f) {
		auto const & finger = fingers[f];
		out[f].finger_id = finger.finger_id;
		out[f].codes.reserve(finger.images.size());
		for (std::size_t i = 0; i < finger.images.size(); ++i)
		{
			require_same_size(finger.images[i], rows, cols, finger.finger_id + " image " + std::to_string(i));
			out[f].codes.push_back(encode_image(finger.images[i], spec));
		}
	});
	return out;
}

std::vector<EncodedFinger> encode_dataset(DatasetIndex const & dataset, BlockSpec const & spec, ParallelOptions options)
{
	validate(spec);
	if (dataset.fingers.empty() || dataset.fingers.front().image_paths.empty())
		throw Error(ErrorKind::dataset, "empty dataset");
	auto const first = load_gray_image(dataset.fingers.front().image_paths.front());

	std::vector<EncodedFinger> out(dataset.fingers.size());
	detail::parallel_for(dataset.fingers.size(), options.threads, [&](std::size_t f) {
		auto const & finger = dataset.fingers[f];
		out[f].finger_id = finger.finger_id;
		out[f].codes.reserve(finger.image_paths.size());
		for (auto const & path : finger.image_paths)
		{
			auto const image = load_gray_image(path);
			require_same_size(image, first.rows(), first.cols(), path.string());
			out[f].codes.push_back(encode_image(image, spec));
		}
	});
	return out;
}

ScoreSets build_score_sets(std::span<EncodedFinger const> fingers, std::size_t n_templates, ParallelOptions options)
{
	if (fingers.empty())
		throw Error(ErrorKind::dataset, "empty dataset");
	if (n_templates < 1)
		throw Error(ErrorKind::invalid_argument, "template count must be at least 1");
	std::size_t const images = fingers.front().codes.size();
	for (auto const & finger : fingers)
	{
		if (finger.codes.size() <= n_templates)
			throw Error(
				ErrorKind::dataset,
				"finger '" + finger.finger_id + "' has " + std::to_string(finger.codes.size()) +
					" images, needs more than " + std::to_string(n_templates));
		if (finger.codes.size() != images)
			throw Error(
				ErrorKind::dataset,
				"finger '" + finger.finger_id + "' has " + std::to_string(finger.codes.size()) +
					" images, expected " + std::to_string(images) + " like the others");
	}

	std::size_t const fingers_count = fingers.size();
	std::size_t const probes = images - n_templates;

	ScoreSets scores;
	scores.fingers = fingers_count;
	scores.images_per_finger = images;
	scores.templates = n_templates;
	scores.genuine.resize(fingers_count * probes);
	scores.impostor.resize(fingers_count * probes * (fingers_count - 1));

	auto templates_of = [&](std::size_t f) {
		return std::span<VeinCode const>(fingers[f].codes).first(n_templates);
	};

	detail::parallel_for(fingers_count, options.threads, [&](std::size_t f) {
		for (std::size_t k = 0; k < probes; ++k)
		{
			auto const & probe = fingers[f].codes[n_templates + k];
			std::size_t const row = f * probes + k;
			scores.genuine[row] = matching_score(probe, templates_of(f)).value;
			std::size_t slot = row * (fingers_count - 1);
			for (std::size_t other = 0; other < fingers_count; ++other)
				if (other != f)
					scores.impostor[slot++] = matching_score(probe, templates_of(other)).value;
		}
	});
	return scores;
}

ScoreSets build_score_sets(
	DatasetIndex const & dataset, BlockSpec const & spec, std::size_t n_templates, ParallelOptions options)
{
	auto const encoded = encode_dataset(dataset, spec, options);
	return build_score_sets(encoded, n_templates, options);
}

RateRow rates_at(ScoreSets const & scores, double dt)
{
	RateRow row;
	row.dt = dt;
	row.genuine_total = scores.genuine.size();
	row.genuine_false = static_cast<std::size_t>(std::ranges::count_if(scores.genuine, [dt](double s) { return s > dt; }));
	row.genuine_rate = rate_percent(row.genuine_false, row.genuine_total);
	row.impostor_total = scores.impostor.size();
	row.impostor_false =
		static_cast<std::size_t>(std::ranges::count_if(scores.impostor, [dt](double s) { return s <= dt; }));
	row.impostor_rate = rate_percent(row.impostor_false, row.impostor_total);
	return row;
}

std::vector<RateRow> dt_sweep(ScoreSets const & scores, std::span<double const> dts)
{
	std::vector<RateRow> rows;
	rows.reserve(dts.size());
	for (double dt : dts)
		rows.push_back(rates_at(scores, dt));
	return rows;
}

EerResult compute_eer(std::span<double const> genuine, std::span<double const> impostor)
{
	if (genuine.empty() || impostor.empty())
		throw Error(ErrorKind::invalid_argument, "EER needs non-empty genuine and impostor score sets");

	std::vector<double> gen(genuine.begin(), genuine.end());
	std::vector<double> imp(impostor.begin(), impostor.end());
	std::ranges::sort(gen);
	std::ranges::sort(imp);
	std::vector<double> thresholds;
	thresholds.reserve(gen.size() + imp.size());
	std::ranges::merge(gen, imp, std::back_inserter(thresholds));
	thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

	auto const n_gen = static_cast<double>(gen.size());
	auto const n_imp = static_cast<double>(imp.size());

	// Rates as exact counts so the FAR == FRR test does not depend on rounding.
	struct Point
	{
		double threshold;
		std::size_t false_accepts;
		std::size_t false_rejects;
	};
	auto far = [&](Point const & p) { return static_cast<double>(p.false_accepts) / n_imp; };
	auto frr = [&](Point const & p) { return static_cast<double>(p.false_rejects) / n_gen; };
	// sign of FAR - FRR
	auto balance = [&](Point const & p) {
		auto const lhs = static_cast<long double>(p.false_accepts) * gen.size();
		auto const rhs = static_cast<long double>(p.false_rejects) * imp.size();
		return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
	};

	Point previous{thresholds.front(), 0, gen.size()};
	std::size_t gi = 0;
	std::size_t ii = 0;
	for (double t : thresholds)
	{
		while (gi < gen.size() && gen[gi] <= t)
			++gi;
		while (ii < imp.size() && imp[ii] <= t)
			++ii;
		Point const current{t, ii, gen.size() - gi};
		int const sign = balance(current);
		if (sign == 0)
			return {100.0 * far(current), t};
		if (sign > 0)
		{
			double const d_prev = far(previous) - frr(previous);
			double const d_cur = far(current) - frr(current);
			double const alpha = -d_prev / (d_cur - d_prev);
			double const rate = far(previous) + alpha * (far(current) - far(previous));
			double const threshold = previous.threshold + alpha * (current.threshold - previous.threshold);
			return {100.0 * rate, threshold};
		}
		previous = current;
	}
	// FAR reaches 1 and FRR 0 at the largest score, so the loop always returns.
	return {100.0 * far(previous), previous.threshold};
}

std::vector<TemplateSweepRow> template_sweep(
	std::span<EncodedFinger const> fingers, std::span<std::size_t const> template_counts, ParallelOptions options)
{
	std::vector<TemplateSweepRow> rows;
	rows.reserve(template_counts.size());
	for (std::size_t n : template_counts)
		rows.push_back({n, compute_eer(build_score_sets(fingers, n, options))});
	return rows;
}

std::vector<TemplateSweepRow> template_sweep(
	DatasetIndex const & dataset,
	BlockSpec const & spec,
	std::span<std::size_t const> template_counts,
	ParallelOptions options)
{
	auto const encoded = encode_dataset(dataset, spec, options);
	return template_sweep(encoded, template_counts, options);
}

EvalReport evaluate(
	std::span<EncodedFinger const> fingers,
	BlockSpec const & spec,
	std::size_t n_templates,
	std::span<double const> dts,
	std::span<std::size_t const> sweep_counts,
	ParallelOptions options)
{
	for (double dt : dts)
		if (!(dt >= 0.0 && dt <= 1.0))
			throw Error(ErrorKind::invalid_argument, "decision threshold must lie in [0, 1]");

	auto const scores = build_score_sets(fingers, n_templates, options);
	EvalReport report;
	report.spec = spec;
	report.fingers = scores.fingers;
	report.images_per_finger = scores.images_per_finger;
	report.templates = scores.templates;
	report.eer = compute_eer(scores);
	report.rate_table = dt_sweep(scores, dts);
	if (!sweep_counts.empty())
		report.template_sweep = template_sweep(fingers, sweep_counts, options);
	return report;
}

std::string format_fixed(double value, int decimals)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
	return buffer;
}

std::string to_csv(EvalReport const & report)
{
	std::ostringstream out;
	out << "# summary\n"
		<< "block_rows,block_cols,fingers,images_per_finger,templates,eer_percent,eer_threshold\n"
		<< report.spec.rows << ',' << report.spec.cols << ',' << report.fingers << ',' << report.images_per_finger
		<< ',' << report.templates << ',' << format_fixed(report.eer.eer_percent, 2) << ','
		<< format_fixed(report.eer.threshold, 4) << '\n';
	out << "# rates\n"
		<< "dt,genuine_total,genuine_false,genuine_rate,impostor_total,impostor_false,impostor_rate\n";
	for (auto const & row : report.rate_table)
		out << format_fixed(row.dt, 2) << ',' << row.genuine_total << ',' << row.genuine_false << ','
			<< format_fixed(row.genuine_rate, 1) << ',' << row.impostor_total << ',' << row.impostor_false << ','
			<< format_fixed(row.impostor_rate, 1) << '\n';
	if (!report.template_sweep.empty())
	{
		out << "# template_sweep\n"
			<< "templates,eer_percent,eer_threshold\n";
		for (auto const & row : report.template_sweep)
			out << row.templates << ',' << format_fixed(row.eer.eer_percent, 2) << ','
				<< format_fixed(row.eer.threshold, 4) << '\n';
	}
	return out.str();
}

}  // namespace fvcode
