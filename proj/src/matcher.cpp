#include "fvcode/matcher.hpp"

#include <algorithm>

namespace fvcode
{

void require_compatible(VeinCode const & a, VeinCode const & b)
{
	if (a.params() != b.params() || a.bit_length() != b.bit_length())
		throw Error(
			ErrorKind::incompatible,
			"incompatible codes: lengths " + std::to_string(a.bit_length()) + " and " +
				std::to_string(b.bit_length()) + " or encoder parameters differ");
}

std::uint32_t hamming(VeinCode const & a, VeinCode const & b)
{
	require_compatible(a, b);
	return xor_popcount(a.words(), b.words());
}

MatchScore matching_score(VeinCode const & probe, std::span<VeinCode const> enrolled)
{
	if (enrolled.empty())
		throw Error(ErrorKind::invalid_argument, "matching score needs at least one enrolled code");
	MatchScore best;
	best.distance = probe.bit_length() + 1;
	for (std::size_t j = 0; j < enrolled.size(); ++j)
	{
		auto const d = hamming(probe, enrolled[j]);
		if (d < best.distance)
		{
			best.distance = d;
			best.best_template_index = j;
		}
	}
	best.value = static_cast<double>(best.distance) / static_cast<double>(probe.bit_length());
	return best;
}

namespace
{

void check_threshold(double dt)
{
	if (!(dt >= 0.0 && dt <= 1.0))
		throw Error(ErrorKind::invalid_argument, "decision threshold must lie in [0, 1]");
}

}  // namespace

Verification verify(VeinCode const & probe, GalleryEntry const & entry, double dt)
{
	check_threshold(dt);
	auto const score = matching_score(probe, entry.templates);
	return {score.value <= dt ? Decision::accept : Decision::reject, score};
}

std::vector<Candidate> identify(VeinCode const & probe, std::span<GalleryEntry const> gallery, std::optional<double> dt)
{
	if (gallery.empty())
		throw Error(ErrorKind::invalid_argument, "cannot identify against an empty gallery");
	if (dt)
		check_threshold(*dt);

	std::vector<Candidate> ranked;
	ranked.reserve(gallery.size());
	for (auto const & entry : gallery)
	{
		auto score = matching_score(probe, entry.templates);
		if (!dt || score.value <= *dt)
			ranked.push_back({entry.finger_id, score});
	}
	std::ranges::sort(ranked, [](Candidate const & a, Candidate const & b) {
		if (a.score.distance != b.score.distance)
			return a.score.distance < b.score.distance;
		return a.finger_id < b.finger_id;
	});
	return ranked;
}

}  // namespace fvcode
