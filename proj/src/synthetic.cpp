#include "fvcode/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "parallel.hpp"

namespace fvcode
{
namespace
{

using Canvas = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Canvas base_pattern(int rows, int cols, std::mt19937_64 & rng)
{
	using std::numbers::pi;
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

	Canvas canvas(rows, cols);

	// Brighter along the finger axis, plus faint low-frequency tissue texture;
	// the veins carry most of the identity.
	struct Wave
	{
		double amplitude, ky, kx, phase;
	};
	std::vector<Wave> waves(3);
	for (auto & w : waves)
		w = {uniform(2.0, 6.0), uniform(-0.12, 0.12), uniform(0.02, 0.10), uniform(0.0, 2 * pi)};
	for (int r = 0; r < rows; ++r)
		for (int c = 0; c < cols; ++c)
		{
			double v = 110.0 + 40.0 * std::sin(pi * (r + 0.5) / rows);
			for (auto const & w : waves)
				v += w.amplitude * std::sin(w.ky * r + w.kx * c + w.phase);
			canvas(r, c) = v;
		}

	int const veins = 3 + static_cast<int>(unit(rng) * 4.0);
	for (int v = 0; v < veins; ++v)
	{
		double const y0 = uniform(0.15, 0.85) * rows;
		double const amplitude = uniform(3.0, 0.15 * rows);
		double const wavelength = uniform(40.0, 160.0);
		double const phase = uniform(0.0, 2 * pi);
		double const slope = uniform(-0.15, 0.15);
		double const width = uniform(1.5, 3.5);
		double const depth = uniform(35.0, 70.0);
		for (int c = 0; c < cols; ++c)
		{
			double const centre =
				y0 + amplitude * std::sin(2 * pi * c / wavelength + phase) + slope * (c - cols / 2.0);
			int const lo = std::max(0, static_cast<int>(std::floor(centre - 3 * width)));
			int const hi = std::min(rows - 1, static_cast<int>(std::ceil(centre + 3 * width)));
			for (int r = lo; r <= hi; ++r)
			{
				double const d = (r - centre) / width;
				canvas(r, c) -= depth * std::exp(-d * d);
			}
		}
	}
	return canvas;
}

}  // namespace

std::vector<FingerSamples> generate_synthetic(SyntheticConfig const & config)
{
	if (config.fingers < 1 || config.images_per_finger < 1 || config.rows < 1 || config.cols < 1 ||
		config.max_shift < 0 || !(config.noise_sigma >= 0.0))
		throw Error(ErrorKind::invalid_argument, "invalid synthetic dataset configuration");

	int const margin = config.max_shift;
	std::vector<FingerSamples> fingers(config.fingers);
	detail::parallel_for(config.fingers, 0, [&](std::size_t f) {
		std::seed_seq seq{config.seed, static_cast<std::uint64_t>(f)};
		std::mt19937_64 rng(seq);
		Canvas const base = base_pattern(config.rows + 2 * margin, config.cols + 2 * margin, rng);

		char id[32];
		std::snprintf(id, sizeof id, "f%04zu", f + 1);
		fingers[f].finger_id = id;

		std::uniform_int_distribution<int> shift(-margin, margin);
		std::normal_distribution<double> noise(0.0, config.noise_sigma);
		for (std::size_t k = 0; k < config.images_per_finger; ++k)
		{
			int const dy = shift(rng);
			int const dx = shift(rng);
			GrayImage image(config.rows, config.cols);
			for (int r = 0; r < config.rows; ++r)
				for (int c = 0; c < config.cols; ++c)
				{
					double const value = base(r + margin + dy, c + margin + dx) +
						(config.noise_sigma > 0.0 ? noise(rng) : 0.0);
					image(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
				}
			fingers[f].images.push_back(std::move(image));
		}
	});
	return fingers;
}

void write_dataset(std::filesystem::path const & root, std::span<FingerSamples const> fingers)
{
	std::error_code ec;
	for (auto const & finger : fingers)
	{
		auto const dir = root / finger.finger_id;
		std::filesystem::create_directories(dir, ec);
		if (ec)
			throw Error(ErrorKind::io, "cannot create '" + dir.string() + "'");
		for (std::size_t k = 0; k < finger.images.size(); ++k)
		{
			char name[32];
			std::snprintf(name, sizeof name, "%03zu.pgm", k + 1);
			write_pgm(dir / name, finger.images[k]);
		}
	}
}

}  // namespace fvcode
