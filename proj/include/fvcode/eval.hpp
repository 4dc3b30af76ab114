#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fvcode/block_features.hpp"
#include "fvcode/codec.hpp"
#include "fvcode/image_io.hpp"

namespace fvcode
{

/// Default decision thresholds for the rate table.
inline constexpr std::array<double, 4> default_thresholds{0.18, 0.19, 0.20, 0.21};

/// Default template counts for the EER sweep.
inline constexpr std::array<std::size_t, 4> default_template_counts{2, 4, 6, 8};

/// In-memory images of one finger, in capture order.
struct FingerSamples
{
	std::string finger_id;
	std::vector<GrayImage> images;
};

/// Codes of one finger, in image order.
struct EncodedFinger
{
	std::string finger_id;
	std::vector<VeinCode> codes;
};

struct ScoreSets
{
	/// One score per probe against its own finger's templates.
	std::vector<double> genuine;
	/// One score per (probe, other finger) pair.
	std::vector<double> impostor;
	std::size_t fingers = 0;
	std::size_t images_per_finger = 0;
	std::size_t templates = 0;
};

struct RateRow
{
	double dt = 0.0;
	std::size_t genuine_total = 0;
	std::size_t genuine_false = 0; ///< genuine scores above dt
	double genuine_rate = 100.0;
	std::size_t impostor_total = 0;
	std::size_t impostor_false = 0; ///< impostor scores at or below dt
	double impostor_rate = 100.0;
};

struct EerResult
{
	double eer_percent = 0.0;
	double threshold = 0.0;
};

struct TemplateSweepRow
{
	std::size_t templates = 0;
	EerResult eer;
};

struct EvalReport
{
	BlockSpec spec;
	std::size_t fingers = 0;
	std::size_t images_per_finger = 0;
	std::size_t templates = 0;
	EerResult eer;
	std::vector<RateRow> rate_table;
	std::vector<TemplateSweepRow> template_sweep;
};

/// `threads` == 0 uses the hardware concurrency. Results never depend on it.
struct ParallelOptions
{
	unsigned threads = 0;
};

/// Encode every image. All images must share one size (Error{dataset}).
[[nodiscard]] std::vector<EncodedFinger> encode_samples(
	std::span<FingerSamples const> fingers, BlockSpec const & spec, ParallelOptions options = {});

/// Load and encode a dataset on disk.
[[nodiscard]] std::vector<EncodedFinger> encode_dataset(
	DatasetIndex const & dataset, BlockSpec const & spec, ParallelOptions options = {});

/**
 * Split each finger's codes into the first `n_templates` templates and the
 * remaining probes, then score every probe against its own templates (genuine)
 * and against every other finger's templates (impostor, one score per finger).
 *
 * Every finger must have the same image count K > n_templates. Output order is
 * finger-major, probe-minor, and for impostors other-finger innermost.
 */
[[nodiscard]] ScoreSets build_score_sets(
	std::span<EncodedFinger const> fingers, std::size_t n_templates, ParallelOptions options = {});

[[nodiscard]] ScoreSets build_score_sets(
	DatasetIndex const & dataset, BlockSpec const & spec, std::size_t n_templates, ParallelOptions options = {});

[[nodiscard]] RateRow rates_at(ScoreSets const & scores, double dt);

[[nodiscard]] std::vector<RateRow> dt_sweep(ScoreSets const & scores, std::span<double const> dts = default_thresholds);

/**
 * Equal error rate over the observed thresholds.
 *
 * FAR(t) is the fraction of impostor scores <= t and FRR(t) the fraction of
 * genuine scores > t. Thresholds are the sorted distinct scores. At the first
 * threshold where FAR >= FRR the rates are either equal (EER = FAR there) or
 * are interpolated linearly against the previous threshold to the crossing.
 * Below the smallest score FAR = 0 and FRR = 1; a crossing before the first
 * threshold reports that threshold.
 */
[[nodiscard]] EerResult compute_eer(std::span<double const> genuine, std::span<double const> impostor);

[[nodiscard]] inline EerResult compute_eer(ScoreSets const & scores)
{
	return compute_eer(scores.genuine, scores.impostor);
}

[[nodiscard]] std::vector<TemplateSweepRow> template_sweep(
	std::span<EncodedFinger const> fingers,
	std::span<std::size_t const> template_counts = default_template_counts,
	ParallelOptions options = {});

[[nodiscard]] std::vector<TemplateSweepRow> template_sweep(
	DatasetIndex const & dataset,
	BlockSpec const & spec,
	std::span<std::size_t const> template_counts = default_template_counts,
	ParallelOptions options = {});

/// Score sets, EER and threshold table for one template count; the sweep is optional.
[[nodiscard]] EvalReport evaluate(
	std::span<EncodedFinger const> fingers,
	BlockSpec const & spec,
	std::size_t n_templates,
	std::span<double const> dts = default_thresholds,
	std::span<std::size_t const> sweep_counts = {},
	ParallelOptions options = {});

/// Fixed-point text with `decimals` places.
[[nodiscard]] std::string format_fixed(double value, int decimals);

/// Full-precision JSON.
[[nodiscard]] std::string to_json(EvalReport const & report);

/// Display rounding: EER to 2 places, rates to 1 place.
[[nodiscard]] std::string to_csv(EvalReport const & report);

}  // namespace fvcode
