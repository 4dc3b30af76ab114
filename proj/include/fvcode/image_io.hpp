#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fvcode
{

/// 8-bit single-channel raster, rows x cols, row-major.
using GrayImage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FingerImages
{
	std::string finger_id;
	std::vector<std::filesystem::path> image_paths;

	bool operator==(FingerImages const &) const = default;
};

/// Fingers sorted by directory name, images within a finger sorted by file name.
struct DatasetIndex
{
	std::vector<FingerImages> fingers;

	bool operator==(DatasetIndex const &) const = default;
};

/// Integer BT.601 luma, round half up: (299 R + 587 G + 114 B + 500) / 1000.
[[nodiscard]] constexpr std::uint8_t luma_bt601(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept
{
	unsigned const weighted = 299u * r + 587u * g + 114u * b;
	return static_cast<std::uint8_t>((weighted + 500u) / 1000u);
}

/**
 * Load an 8-bit image as grayscale.
 *
 * Supported: binary PGM (P5), binary PPM (P6) and uncompressed BMP with 8-bit
 * palette or 24/32-bit pixels. Single-channel data is passed through exactly;
 * colour data is reduced with luma_bt601. A palettized BMP whose palette is
 * pure gray uses the palette values directly. Depths above 8 bits per channel
 * are rejected.
 *
 * Throws Error{io} when the file cannot be read and Error{format} otherwise.
 */
[[nodiscard]] GrayImage load_gray_image(std::filesystem::path const & path);

/// Decode an in-memory PGM/PPM/BMP buffer. `origin` is only used in messages.
[[nodiscard]] GrayImage decode_gray_image(std::vector<std::uint8_t> const & bytes, std::string const & origin = "<memory>");

/// Write a binary P5 PGM with maxval 255.
void write_pgm(std::filesystem::path const & path, GrayImage const & image);

[[nodiscard]] std::vector<std::uint8_t> encode_pgm(GrayImage const & image);

/**
 * Index `<root>/<finger_id>/<image_file>`. Entries starting with '.' are
 * ignored, as are regular files directly under root. Ordering is plain
 * byte-wise string order, so "10" sorts before "2".
 */
[[nodiscard]] DatasetIndex scan_dataset(std::filesystem::path const & root);

}  // namespace fvcode
