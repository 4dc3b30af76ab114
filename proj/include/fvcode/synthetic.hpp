#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fvcode/eval.hpp"

namespace fvcode
{

/**
 * Parameters of the built-in synthetic finger-vein set.
 *
 * Each finger gets a random base pattern: a smooth background texture crossed
 * by dark vein curves running along the finger. Every capture is the base
 * pattern translated by up to `max_shift` pixels per axis plus Gaussian noise.
 */
struct SyntheticConfig
{
	std::size_t fingers = 50;
	std::size_t images_per_finger = 12;
	int rows = 64;
	int cols = 128;
	double noise_sigma = 8.0;
	int max_shift = 2;
	std::uint64_t seed = 1;
};

/// Deterministic for a given config. Finger ids are "f0001", "f0002", ...
[[nodiscard]] std::vector<FingerSamples> generate_synthetic(SyntheticConfig const & config);

/// Write `<root>/<finger_id>/NNN.pgm`, creating directories as needed.
void write_dataset(std::filesystem::path const & root, std::span<FingerSamples const> fingers);

}  // namespace fvcode
