#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvcode/codec.hpp"

namespace fvcode
{

/// One enrolled finger: identity plus its template codes.
struct GalleryEntry
{
	std::string finger_id;
	std::vector<VeinCode> templates;

	bool operator==(GalleryEntry const &) const = default;
};

struct MatchScore
{
	/// Minimum Hamming distance over the templates divided by the code length.
	double value = 1.0;
	/// Lowest template index attaining the minimum.
	std::size_t best_template_index = 0;
	std::uint32_t distance = 0;
};

enum class Decision
{
	accept,
	reject,
};

struct Verification
{
	Decision decision;
	MatchScore score;
};

struct Candidate
{
	std::string finger_id;
	MatchScore score;
};

/// Popcount of a XOR b over packed words of equal length.
[[nodiscard]] inline std::uint32_t xor_popcount(std::span<std::uint64_t const> a, std::span<std::uint64_t const> b) noexcept
{
	std::uint32_t total = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		total += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
	return total;
}

/// Throws Error{incompatible} unless both codes share params.
void require_compatible(VeinCode const & a, VeinCode const & b);

[[nodiscard]] std::uint32_t hamming(VeinCode const & a, VeinCode const & b);

/// Normalized minimum Hamming distance of `probe` to `enrolled`.
[[nodiscard]] MatchScore matching_score(VeinCode const & probe, std::span<VeinCode const> enrolled);

/// Accept iff score <= dt.
[[nodiscard]] Verification verify(VeinCode const & probe, GalleryEntry const & entry, double dt);

/**
 * Score `probe` against every entry and return them ascending by score, ties
 * broken by finger id. With `dt` set, entries scoring above it are dropped.
 */
[[nodiscard]] std::vector<Candidate> identify(
	VeinCode const & probe, std::span<GalleryEntry const> gallery, std::optional<double> dt = std::nullopt);

}  // namespace fvcode
