#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvcode/codec.hpp"
#include "fvcode/eval.hpp"
#include "fvcode/gallery.hpp"
#include "fvcode/image_io.hpp"
#include "fvcode/matcher.hpp"
#include "fvcode/synthetic.hpp"

namespace fvcode::cli
{
namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorKind kind)
{
	switch (kind)
	{
	case ErrorKind::io:
		return exit_io;
	case ErrorKind::format:
		return exit_format;
	case ErrorKind::incompatible:
		return exit_incompatible;
	case ErrorKind::invalid_argument:
		return exit_usage;
	case ErrorKind::gallery:
		return exit_gallery;
	case ErrorKind::dataset:
		return exit_dataset;
	}
	return exit_internal;
}

json params_json(CodeParams const & p)
{
	return {
		{"block_rows", p.block_rows},
		{"block_cols", p.block_cols},
		{"feature_rows", p.feature_rows},
		{"feature_cols", p.feature_cols},
		{"bit_length", code_length(p)},
	};
}

json score_json(MatchScore const & s)
{
	return {{"score", s.value}, {"distance", s.distance}, {"best_template_index", s.best_template_index}};
}

BlockSpec spec_of(CodeParams const & p)
{
	return {p.block_rows, p.block_cols};
}

Gallery load_nonempty_gallery(fs::path const & path)
{
	auto gallery = load_gallery(path);
	if (gallery.empty())
		throw Error(ErrorKind::gallery, "gallery '" + path.string() + "' has no enrolled fingers");
	return gallery;
}

/// Encode a probe with the gallery's block size and check it lines up with the templates.
VeinCode encode_probe(fs::path const & image_path, Gallery const & gallery)
{
	auto const & params = *gallery.params();
	auto code = encode_image(load_gray_image(image_path), spec_of(params));
	if (code.params() != params)
		throw Error(
			ErrorKind::incompatible,
			"probe '" + image_path.string() + "' yields a " + std::to_string(code.params().feature_rows) + "x" +
				std::to_string(code.params().feature_cols) + " feature matrix, gallery expects " +
				std::to_string(params.feature_rows) + "x" + std::to_string(params.feature_cols));
	return code;
}

void check_dt(double dt)
{
	if (!(dt >= 0.0 && dt <= 1.0))
		throw Error(ErrorKind::invalid_argument, "--dt must lie in [0, 1]");
}

void write_text(fs::path const & path, std::string const & text)
{
	std::ofstream file(path, std::ios::binary | std::ios::trunc);
	if (!file)
		throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
	file << text;
	if (!file)
		throw Error(ErrorKind::io, "write error on '" + path.string() + "'");
}

}  // namespace

int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err)
{
	CLI::App app{"Finger-vein code encoder, matcher and evaluation harness", "fvcode"};
	app.require_subcommand(1);

	BlockSpec spec;
	auto add_block_flags = [&spec](CLI::App * cmd) {
		return std::pair{
			cmd->add_option("--block-rows", spec.rows, "Block height in pixels")->capture_default_str(),
			cmd->add_option("--block-cols", spec.cols, "Block width in pixels")->capture_default_str()};
	};
	// encode
	auto * encode_cmd = app.add_subcommand("encode", "Encode one image into a VNC1 code file");
	std::string encode_input;
	std::string encode_output;
	encode_cmd->add_option("image", encode_input, "Input image (PGM/PPM/BMP)")->required();
	encode_cmd->add_option("-o,--output", encode_output, "Output code file")->required();
	add_block_flags(encode_cmd);

	// info
	auto * info_cmd = app.add_subcommand("info", "Describe a VNC1 code or VGL1 gallery file");
	std::string info_input;
	info_cmd->add_option("file", info_input, "Code or gallery file")->required();
	std::string info_format;
	info_cmd->add_option("--format", info_format, "text or json")
		->default_val("text")
		->check(CLI::IsMember({"text", "json"}));

	// enroll
	auto * enroll_cmd = app.add_subcommand("enroll", "Enroll a finger's template images into a gallery");
	std::string gallery_path;
	std::string finger_id;
	std::vector<std::string> enroll_images;
	bool overwrite = false;
	enroll_cmd->add_option("--gallery", gallery_path, "Gallery file, created if missing")->required();
	enroll_cmd->add_option("--finger", finger_id, "Finger id")->required();
	enroll_cmd->add_option("images", enroll_images, "Template images")->required();
	enroll_cmd->add_flag("--overwrite", overwrite, "Replace an already enrolled finger");
	auto const [enroll_rows, enroll_cols] = add_block_flags(enroll_cmd);

	// verify
	auto * verify_cmd = app.add_subcommand("verify", "1:1 verification; exit 0 accept, 1 reject");
	std::string probe_path;
	double dt = 0.20;
	verify_cmd->add_option("--gallery", gallery_path, "Gallery file")->required();
	verify_cmd->add_option("--finger", finger_id, "Claimed finger id")->required();
	verify_cmd->add_option("probe", probe_path, "Probe image")->required();
	verify_cmd->add_option("--dt", dt, "Decision threshold on the matching score")->capture_default_str();
	std::string verify_format;
	verify_cmd->add_option("--format", verify_format, "text or json")
		->default_val("text")
		->check(CLI::IsMember({"text", "json"}));

	// identify
	auto * identify_cmd = app.add_subcommand("identify", "1:N identification; exit 1 when nothing passes --dt");
	std::optional<double> identify_dt;
	identify_cmd->add_option("--gallery", gallery_path, "Gallery file")->required();
	identify_cmd->add_option("probe", probe_path, "Probe image")->required();
	identify_cmd->add_option("--dt", identify_dt, "Open-set threshold; omit for closed-set ranking");
	std::string identify_format;
	identify_cmd->add_option("--format", identify_format, "text or json")
		->default_val("text")
		->check(CLI::IsMember({"text", "json"}));

	// eval
	auto * eval_cmd = app.add_subcommand("eval", "Evaluate a dataset: score sets, EER and threshold table");
	std::string dataset_root;
	std::string eval_output;
	std::size_t n_templates = 6;
	std::vector<double> dt_grid(default_thresholds.begin(), default_thresholds.end());
	std::vector<std::size_t> sweep;
	unsigned threads = 0;
	eval_cmd->add_option("root", dataset_root, "Dataset root: <root>/<finger_id>/<image>")->required();
	add_block_flags(eval_cmd);
	eval_cmd->add_option("--templates", n_templates, "Templates per finger")->capture_default_str();
	eval_cmd->add_option("--dt-grid", dt_grid, "Decision thresholds for the rate table")
		->delimiter(',')
		->capture_default_str();
	eval_cmd->add_option("--sweep", sweep, "Template counts for an EER sweep, e.g. 2,4,6,8")->delimiter(',');
	std::string eval_format;
	eval_cmd->add_option("--format", eval_format, "json or csv")
		->default_val("json")
		->check(CLI::IsMember({"json", "csv"}));
	eval_cmd->add_option("-o,--output", eval_output, "Write the report here instead of stdout");
	eval_cmd->add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();

	// synth
	auto * synth_cmd = app.add_subcommand("synth", "Write a synthetic finger-vein dataset as PGM files");
	std::string synth_root;
	SyntheticConfig synth;
	synth_cmd->add_option("root", synth_root, "Output directory")->required();
	synth_cmd->add_option("--fingers", synth.fingers)->capture_default_str();
	synth_cmd->add_option("--images", synth.images_per_finger)->capture_default_str();
	synth_cmd->add_option("--rows", synth.rows)->capture_default_str();
	synth_cmd->add_option("--cols", synth.cols)->capture_default_str();
	synth_cmd->add_option("--sigma", synth.noise_sigma, "Gaussian noise std-dev in gray levels")->capture_default_str();
	synth_cmd->add_option("--shift", synth.max_shift, "Max translation per axis in pixels")->capture_default_str();
	synth_cmd->add_option("--seed", synth.seed)->capture_default_str();

	try
	{
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	}
	catch (CLI::ParseError const & e)
	{
		int const code = app.exit(e, out, err);
		return code == 0 ? exit_ok : exit_usage;
	}

	try
	{
		if (*encode_cmd)
		{
			auto const code = encode_image(load_gray_image(encode_input), spec);
			save_code(encode_output, code);
			out << "bit_length " << code.bit_length() << '\n';
			return exit_ok;
		}

		if (*info_cmd)
		{
			auto const bytes = [&] {
				std::ifstream file(info_input, std::ios::binary);
				if (!file || !fs::is_regular_file(info_input))
					throw Error(ErrorKind::io, "cannot read '" + info_input + "': no such file");
				std::string head(4, '\0');
				file.read(head.data(), 4);
				return head;
			}();
			json doc;
			if (bytes == "VGL1")
			{
				auto const gallery = load_gallery(info_input);
				doc["kind"] = "gallery";
				doc["params"] = gallery.params() ? params_json(*gallery.params()) : json(nullptr);
				json entries = json::array();
				for (auto const & entry : gallery.entries())
					entries.push_back({{"finger_id", entry.finger_id}, {"templates", entry.templates.size()}});
				doc["entries"] = entries;
			}
			else
			{
				auto const code = load_code(info_input);
				doc["kind"] = "code";
				doc["params"] = params_json(code.params());
				doc["bits"] = code.to_string();
			}

			if (info_format == "json")
			{
				out << doc.dump(2) << '\n';
				return exit_ok;
			}
			out << "kind " << doc["kind"].get<std::string>() << '\n';
			if (!doc["params"].is_null())
				for (auto const & [key, value] : doc["params"].items())
					out << key << ' ' << value.dump() << '\n';
			if (doc.contains("bits"))
				out << "bits " << doc["bits"].get<std::string>() << '\n';
			if (doc.contains("entries"))
				for (auto const & entry : doc["entries"])
					out << "entry " << entry["finger_id"].get<std::string>() << ' ' << entry["templates"].dump() << '\n';
			return exit_ok;
		}

		if (*enroll_cmd)
		{
			Gallery gallery = fs::exists(gallery_path) ? load_gallery(gallery_path) : Gallery{};
			if (gallery.params())
			{
				// An existing gallery fixes the block size unless flags override it.
				auto const fixed = spec_of(*gallery.params());
				if (enroll_rows->count() == 0)
					spec.rows = fixed.rows;
				if (enroll_cols->count() == 0)
					spec.cols = fixed.cols;
			}
			std::vector<VeinCode> codes;
			codes.reserve(enroll_images.size());
			for (auto const & path : enroll_images)
				codes.push_back(encode_image(load_gray_image(path), spec));
			gallery = std::move(gallery).enroll(finger_id, std::move(codes), overwrite);
			save_gallery(gallery_path, gallery);
			out << "enrolled " << finger_id << " templates " << enroll_images.size() << " gallery_size "
				<< gallery.size() << '\n';
			return exit_ok;
		}

		if (*verify_cmd)
		{
			check_dt(dt);
			auto const gallery = load_nonempty_gallery(gallery_path);
			auto const & entry = gallery.at(finger_id);
			auto const probe = encode_probe(probe_path, gallery);
			auto const result = verify(probe, entry, dt);
			bool const accepted = result.decision == Decision::accept;
			if (verify_format == "json")
			{
				json doc = score_json(result.score);
				doc["decision"] = accepted ? "accept" : "reject";
				doc["finger_id"] = finger_id;
				doc["dt"] = dt;
				out << doc.dump(2) << '\n';
			}
			else
			{
				out << (accepted ? "accept" : "reject") << " score " << format_fixed(result.score.value, 6)
					<< " template " << result.score.best_template_index << '\n';
			}
			return accepted ? exit_ok : exit_rejected;
		}

		if (*identify_cmd)
		{
			if (identify_dt)
				check_dt(*identify_dt);
			auto const gallery = load_nonempty_gallery(gallery_path);
			auto const probe = encode_probe(probe_path, gallery);
			auto const ranked = identify(probe, gallery.entries(), identify_dt);
			if (identify_format == "json")
			{
				json list = json::array();
				for (auto const & c : ranked)
				{
					json item = score_json(c.score);
					item["finger_id"] = c.finger_id;
					list.push_back(item);
				}
				out << list.dump(2) << '\n';
			}
			else
			{
				for (std::size_t i = 0; i < ranked.size(); ++i)
					out << i + 1 << ' ' << ranked[i].finger_id << ' ' << format_fixed(ranked[i].score.value, 6) << '\n';
				if (ranked.empty())
					out << "no match\n";
			}
			return ranked.empty() ? exit_rejected : exit_ok;
		}

		if (*eval_cmd)
		{
			ParallelOptions const options{threads};
			auto const encoded = encode_dataset(scan_dataset(dataset_root), spec, options);
			auto const report = evaluate(encoded, spec, n_templates, dt_grid, sweep, options);
			std::string const text = eval_format == "csv" ? to_csv(report) : to_json(report);
			if (eval_output.empty())
				out << text;
			else
				write_text(eval_output, text);
			return exit_ok;
		}

		if (*synth_cmd)
		{
			auto const fingers = generate_synthetic(synth);
			write_dataset(synth_root, fingers);
			out << "wrote " << fingers.size() << " fingers x " << synth.images_per_finger << " images to "
				<< synth_root << '\n';
			return exit_ok;
		}
	}
	catch (Error const & e)
	{
		err << "error: " << e.what() << '\n';
		return exit_code_for(e.kind());
	}
	catch (fs::filesystem_error const & e)
	{
		err << "error: " << e.what() << '\n';
		return exit_io;
	}
	catch (std::exception const & e)
	{
		err << "internal error: " << e.what() << '\n';
		return exit_internal;
	}
	return exit_usage;
}

}  // namespace fvcode::cli
