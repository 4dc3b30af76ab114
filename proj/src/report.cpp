#include <json.hpp>

#include "fvcode/eval.hpp"

namespace fvcode
{

std::string to_json(EvalReport const & report)
{
	using nlohmann::json;

	json rates = json::array();
	for (auto const & row : report.rate_table)
		rates.push_back({
			{"dt", row.dt},
			{"genuine_total", row.genuine_total},
			{"genuine_false", row.genuine_false},
			{"genuine_rate", row.genuine_rate},
			{"impostor_total", row.impostor_total},
			{"impostor_false", row.impostor_false},
			{"impostor_rate", row.impostor_rate},
		});

	json sweep = json::array();
	for (auto const & row : report.template_sweep)
		sweep.push_back({
			{"templates", row.templates},
			{"eer_percent", row.eer.eer_percent},
			{"eer_threshold", row.eer.threshold},
		});

	json const doc = {
		{"params",
		 {
			 {"block_rows", report.spec.rows},
			 {"block_cols", report.spec.cols},
			 {"fingers", report.fingers},
			 {"images_per_finger", report.images_per_finger},
			 {"templates", report.templates},
		 }},
		{"eer_percent", report.eer.eer_percent},
		{"eer_threshold", report.eer.threshold},
		{"rate_table", rates},
		{"template_sweep", sweep},
	};
	return doc.dump(2) + "\n";
}

}  // namespace fvcode
