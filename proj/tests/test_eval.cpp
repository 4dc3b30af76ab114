#include <doctest.h>

#include <random>

#include <json.hpp>

#include "fvcode/eval.hpp"
#include "fvcode/matcher.hpp"
#include "fvcode/synthetic.hpp"
#include "support/reference.hpp"
#include "support/temp_dir.hpp"

using namespace fvcode;

namespace
{

constexpr CodeParams params{3, 8, 9, 9};

VeinCode random_code(std::mt19937_64 & rng)
{
	VeinCode code(params);
	std::bernoulli_distribution coin(0.5);
	for (std::size_t i = 0; i < code.bit_length(); ++i)
		code.set_bit(i, coin(rng));
	return code;
}

std::vector<EncodedFinger> random_fingers(std::mt19937_64 & rng, std::size_t fingers, std::size_t images)
{
	std::vector<EncodedFinger> out(fingers);
	for (std::size_t f = 0; f < fingers; ++f)
	{
		out[f].finger_id = "f" + std::to_string(f);
		for (std::size_t k = 0; k < images; ++k)
			out[f].codes.push_back(random_code(rng));
	}
	return out;
}

std::vector<double> uniform_scores(std::mt19937_64 & rng, std::size_t n, double lo, double hi, int levels = 0)
{
	std::uniform_real_distribution<double> u(lo, hi);
	std::vector<double> out(n);
	for (auto & s : out)
	{
		s = u(rng);
		if (levels > 0)
			s = std::round(s * levels) / levels;
	}
	return out;
}

double far_at(std::vector<double> const & impostor, double t)
{
	return static_cast<double>(std::ranges::count_if(impostor, [t](double s) { return s <= t; })) / impostor.size();
}

double frr_at(std::vector<double> const & genuine, double t)
{
	return static_cast<double>(std::ranges::count_if(genuine, [t](double s) { return s > t; })) / genuine.size();
}

}  // namespace

TEST_CASE("score-set counting laws")
{
	std::mt19937_64 rng(1);

	SUBCASE("D=2, K=3, N=1")
	{
		auto const s = build_score_sets(random_fingers(rng, 2, 3), 1);
		CHECK(s.genuine.size() == 4);
		CHECK(s.impostor.size() == 4);
		CHECK(s.fingers == 2);
		CHECK(s.images_per_finger == 3);
		CHECK(s.templates == 1);
	}
	SUBCASE("large dataset shapes")
	{
		auto const hkpu = build_score_sets(random_fingers(rng, 210, 12), 6);
		CHECK(hkpu.genuine.size() == 1260);
		CHECK(hkpu.impostor.size() == 263340);
		auto const usm = build_score_sets(random_fingers(rng, 492, 12), 6);
		CHECK(usm.genuine.size() == 2952);
		CHECK(usm.impostor.size() == 1449432);
	}
}

TEST_CASE("score-set layout and semantics")
{
	std::mt19937_64 rng(2);
	auto const fingers = random_fingers(rng, 4, 5);
	std::size_t const n = 2;
	auto const s = build_score_sets(fingers, n);
	std::size_t g = 0, i = 0;
	for (std::size_t f = 0; f < fingers.size(); ++f)
		for (std::size_t k = n; k < 5; ++k)
		{
			auto const & probe = fingers[f].codes[k];
			auto own = std::span(fingers[f].codes).first(n);
			REQUIRE(s.genuine[g++] == matching_score(probe, own).value);
			for (std::size_t o = 0; o < fingers.size(); ++o)
				if (o != f)
					REQUIRE(s.impostor[i++] == matching_score(probe, std::span(fingers[o].codes).first(n)).value);
		}
	for (double v : s.genuine)
		CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("score-set construction is independent of thread count")
{
	std::mt19937_64 rng(3);
	auto const fingers = random_fingers(rng, 37, 8);
	auto const one = build_score_sets(fingers, 3, {1});
	auto const many = build_score_sets(fingers, 3, {8});
	CHECK(one.genuine == many.genuine);
	CHECK(one.impostor == many.impostor);
}

TEST_CASE("score-set preconditions")
{
	std::mt19937_64 rng(4);
	CHECK_THROWS_AS((void)build_score_sets(random_fingers(rng, 3, 6), 6), Error);
	CHECK_THROWS_AS((void)build_score_sets(random_fingers(rng, 3, 6), 0), Error);
	CHECK_THROWS_AS((void)build_score_sets(std::span<EncodedFinger const>{}, 1), Error);

	auto ragged = random_fingers(rng, 3, 6);
	ragged[1].codes.pop_back();
	try
	{
		(void)build_score_sets(ragged, 2);
		FAIL("expected an error");
	}
	catch (Error const & e)
	{
		CHECK(e.kind() == ErrorKind::dataset);
	}

	std::vector<FingerSamples> samples{
		{"a", {GrayImage::Zero(9, 9), GrayImage::Zero(9, 9)}}, {"b", {GrayImage::Zero(9, 9), GrayImage::Zero(9, 10)}}};
	CHECK_THROWS_WITH((void)encode_samples(samples, {3, 3}), doctest::Contains("dimension mismatch"));
}

TEST_CASE("rates_at")
{
	SUBCASE("all genuine scores zero")
	{
		ScoreSets s;
		s.genuine = {0.0, 0.0, 0.0};
		s.impostor = {0.5};
		for (double dt : {0.0, 0.1, 0.5, 1.0})
			CHECK(rates_at(s, dt).genuine_rate == 100.0);
	}
	SUBCASE("direct count")
	{
		ScoreSets s;
		s.genuine = {0.1, 0.3};
		s.impostor = {0.15, 0.25, 0.4, 0.9};
		auto const row = rates_at(s, 0.2);
		CHECK(row.genuine_total == 2);
		CHECK(row.genuine_false == 1);
		CHECK(row.genuine_rate == 50.0);
		CHECK(row.impostor_total == 4);
		CHECK(row.impostor_false == 1);
		CHECK(row.impostor_rate == 75.0);
	}
	SUBCASE("boundary: genuine at dt is accepted, impostor at dt is a false accept")
	{
		ScoreSets s;
		s.genuine = {0.25};
		s.impostor = {0.25};
		auto const row = rates_at(s, 0.25);
		CHECK(row.genuine_false == 0);
		CHECK(row.impostor_false == 1);
	}
	SUBCASE("rate rounding for known false counts")
	{
		ScoreSets s;
		s.genuine.assign(1260, 0.0);
		std::fill_n(s.genuine.begin(), 55, 0.5);
		s.impostor = {1.0};
		auto const row = rates_at(s, 0.18);
		CHECK(row.genuine_false == 55);
		CHECK(format_fixed(row.genuine_rate, 1) == "95.6");
	}
}

TEST_CASE("dt_sweep")
{
	std::mt19937_64 rng(5);
	ScoreSets s;
	s.genuine = uniform_scores(rng, 500, 0.05, 0.35, 36);
	s.impostor = uniform_scores(rng, 5000, 0.15, 0.6, 36);

	auto const rows = dt_sweep(s);
	REQUIRE(rows.size() == 4);
	CHECK(rows[0].dt == 0.18);
	CHECK(rows[3].dt == 0.21);

	std::vector<double> grid;
	for (int i = 0; i <= 100; ++i)
		grid.push_back(i / 100.0);
	auto const fine = dt_sweep(s, grid);
	for (std::size_t i = 1; i < fine.size(); ++i)
	{
		CHECK(fine[i].genuine_rate >= fine[i - 1].genuine_rate);
		CHECK(fine[i].impostor_rate <= fine[i - 1].impostor_rate);
	}
	// raising dt trades false rejections for false accepts
	CHECK(rows[3].genuine_false < rows[0].genuine_false);
	CHECK(rows[3].impostor_false > rows[0].impostor_false);

	double const below = 0.01;
	auto const low = rates_at(s, below);
	CHECK(low.impostor_rate == 100.0);
	CHECK(low.genuine_false == s.genuine.size());
}

TEST_CASE("compute_eer examples")
{
	SUBCASE("perfect separation")
	{
		std::vector<double> const genuine(10, 0.0), impostor(10, 1.0);
		CHECK(compute_eer(genuine, impostor).eer_percent == 0.0);
	}
	SUBCASE("hand-checkable crossing")
	{
		std::vector<double> const genuine{0.1, 0.2, 0.3, 0.4};
		std::vector<double> const impostor{0.25, 0.35, 0.45, 0.55};
		auto const oracle = reference::brute_force_eer(genuine, impostor);
		CHECK(oracle.percent == 25.0);
		auto const eer = compute_eer(genuine, impostor);
		CHECK(eer.eer_percent == 25.0);
		CHECK(eer.threshold == 0.3);
	}
	SUBCASE("interpolated crossing")
	{
		// t=0.1: FAR 0, FRR 1/2; t=0.3: FAR 1, FRR 0 -> crossing a third of the way
		std::vector<double> const genuine{0.1, 0.3};
		std::vector<double> const impostor{0.3};
		auto const eer = compute_eer(genuine, impostor);
		CHECK(eer.eer_percent == doctest::Approx(100.0 / 3.0));
		CHECK(eer.threshold == doctest::Approx(0.1 + (0.2 / 3.0)));
	}
	SUBCASE("identical distributions give about 50%")
	{
		std::mt19937_64 rng(6);
		auto const genuine = uniform_scores(rng, 10000, 0.0, 1.0);
		auto const impostor = uniform_scores(rng, 10000, 0.0, 1.0);
		CHECK(std::abs(compute_eer(genuine, impostor).eer_percent - 50.0) <= 5.0);
	}
	SUBCASE("empty input")
	{
		std::vector<double> const some{0.5};
		CHECK_THROWS_AS((void)compute_eer({}, some), Error);
		CHECK_THROWS_AS((void)compute_eer(some, {}), Error);
	}
}

TEST_CASE("compute_eer agrees with the exhaustive sweep")
{
	std::mt19937_64 rng(7);
	std::uniform_int_distribution<int> size(1, 60);
	for (int trial = 0; trial < 300; ++trial)
	{
		int const levels = trial % 3 == 0 ? 0 : 20;  // discrete grids force ties
		auto const genuine = uniform_scores(rng, size(rng), 0.0, 0.6, levels);
		auto const impostor = uniform_scores(rng, size(rng), 0.2, 1.0, levels);
		auto const oracle = reference::brute_force_eer(genuine, impostor);
		auto const eer = compute_eer(genuine, impostor);
		REQUIRE(eer.eer_percent == oracle.percent);
		REQUIRE(eer.threshold == oracle.threshold);
		REQUIRE(eer.eer_percent >= 0.0);
		REQUIRE(eer.eer_percent <= 100.0);
	}
}

TEST_CASE("FAR and FRR meet at the EER threshold within one grid step")
{
	std::mt19937_64 rng(8);
	for (int trial = 0; trial < 100; ++trial)
	{
		auto const genuine = uniform_scores(rng, 200, 0.0, 0.5, 36);
		auto const impostor = uniform_scores(rng, 400, 0.2, 0.8, 36);
		auto const eer = compute_eer(genuine, impostor);

		std::vector<double> grid = genuine;
		grid.insert(grid.end(), impostor.begin(), impostor.end());
		std::ranges::sort(grid);
		grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
		double const e = eer.eer_percent / 100.0;
		auto const hi = std::ranges::lower_bound(grid, eer.threshold);
		REQUIRE(hi != grid.end());
		if (*hi == eer.threshold)
		{
			// exact crossing on a grid point, or a crossing before the first score
			if (far_at(impostor, *hi) == frr_at(genuine, *hi))
				CHECK(e == far_at(impostor, *hi));
			else
				CHECK(hi == grid.begin());
		}
		else
		{
			REQUIRE(hi != grid.begin());
			double const lo = *std::prev(hi);
			CHECK(e >= far_at(impostor, lo) - 1e-12);
			CHECK(e <= far_at(impostor, *hi) + 1e-12);
			CHECK(e >= frr_at(genuine, *hi) - 1e-12);
			CHECK(e <= frr_at(genuine, lo) + 1e-12);
		}

		double prev_far = -1.0, prev_frr = 2.0;
		for (double t : grid)
		{
			REQUIRE(far_at(impostor, t) >= prev_far);
			REQUIRE(frr_at(genuine, t) <= prev_frr);
			prev_far = far_at(impostor, t);
			prev_frr = frr_at(genuine, t);
		}
	}
}

TEST_CASE("probes identical to templates give EER 0")
{
	std::mt19937_64 rng(9);
	std::vector<EncodedFinger> fingers(20);
	for (std::size_t f = 0; f < fingers.size(); ++f)
	{
		fingers[f].finger_id = "f" + std::to_string(f);
		fingers[f].codes.assign(8, random_code(rng));
	}
	auto const s = build_score_sets(fingers, 4);
	CHECK(compute_eer(s).eer_percent == 0.0);
	for (double dt : {0.0, 0.18, 0.5, 1.0})
		CHECK(rates_at(s, dt).genuine_rate == 100.0);
}

TEST_CASE("template sweep")
{
	std::mt19937_64 rng(10);
	auto const tiny = random_fingers(rng, 2, 2);
	std::array<std::size_t, 1> const ns{1};
	auto const rows = template_sweep(tiny, ns);
	REQUIRE(rows.size() == 1);
	CHECK(rows[0].templates == 1);

	auto const fingers = random_fingers(rng, 5, 9);
	auto const sweep = template_sweep(fingers);
	REQUIRE(sweep.size() == 4);
	CHECK(sweep[0].templates == 2);
	CHECK(sweep[3].templates == 8);
}

TEST_CASE("dataset on disk encodes like the same images in memory")
{
	testing::TempDir dir;
	auto const samples = generate_synthetic({.fingers = 4, .images_per_finger = 3, .rows = 20, .cols = 33, .seed = 5});
	write_dataset(dir.path(), samples);
	BlockSpec const spec{3, 8};
	auto const from_disk = encode_dataset(scan_dataset(dir.path()), spec);
	auto const in_memory = encode_samples(samples, spec);
	REQUIRE(from_disk.size() == in_memory.size());
	for (std::size_t f = 0; f < from_disk.size(); ++f)
	{
		CHECK(from_disk[f].finger_id == in_memory[f].finger_id);
		CHECK(from_disk[f].codes == in_memory[f].codes);
	}
	auto const s = build_score_sets(scan_dataset(dir.path()), spec, 1);
	CHECK(s.genuine.size() == 8);
	CHECK(s.impostor.size() == 24);
}

TEST_CASE("report formats")
{
	std::mt19937_64 rng(11);
	auto const fingers = random_fingers(rng, 6, 10);
	std::array<std::size_t, 2> const ns{2, 4};
	auto const report = evaluate(fingers, {3, 8}, 6, default_thresholds, ns);
	CHECK(report.fingers == 6);
	CHECK(report.rate_table.size() == 4);
	CHECK(report.template_sweep.size() == 2);

	auto const doc = nlohmann::json::parse(to_json(report));
	CHECK(doc["params"]["templates"] == 6);
	CHECK(doc["params"]["block_cols"] == 8);
	CHECK(doc["rate_table"].size() == 4);
	CHECK(doc["rate_table"][0]["genuine_total"] == 24);
	CHECK(doc["rate_table"][0]["impostor_total"] == 120);
	CHECK(doc["eer_percent"].get<double>() == report.eer.eer_percent);
	CHECK(doc["template_sweep"][1]["templates"] == 4);

	auto const csv = to_csv(report);
	CHECK(csv.find("dt,genuine_total,genuine_false,genuine_rate,impostor_total,impostor_false,impostor_rate") !=
		  std::string::npos);
	CHECK(csv.find("\n0.18,24,") != std::string::npos);
	CHECK(csv.find("# template_sweep") != std::string::npos);

	std::array<double, 1> const bad{1.5};
	CHECK_THROWS_AS((void)evaluate(fingers, {3, 8}, 6, bad), Error);
}

TEST_CASE("format_fixed")
{
	CHECK(format_fixed(100.0 * (1.0 - 55.0 / 1260.0), 1) == "95.6");
	CHECK(format_fixed(2.894, 2) == "2.89");
	CHECK(format_fixed(0.0, 1) == "0.0");
}
