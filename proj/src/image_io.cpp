#include "fvcode/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <string_view>

#include "byte_io.hpp"
#include "fvcode/error.hpp"

namespace fvcode
{
namespace
{

[[noreturn]] void malformed(std::string const & origin, std::string const & why)
{
	throw Error(ErrorKind::format, origin + ": " + why);
}

// Netpbm header tokenizer: whitespace separated integers with '#' comments.
class PnmHeader
{
public:
	PnmHeader(std::vector<std::uint8_t> const & bytes, std::string const & origin)
		: bytes_(bytes), origin_(origin)
	{
	}

	long next_int()
	{
		skip_space_and_comments();
		if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
			malformed(origin_, "bad PNM header");
		long value = 0;
		while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_]))
		{
			value = value * 10 + (bytes_[pos_++] - '0');
			if (value > 1'000'000'000)
				malformed(origin_, "PNM header value out of range");
		}
		return value;
	}

	/// Exactly one whitespace byte separates maxval from the raster.
	std::size_t raster_offset()
	{
		if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
			malformed(origin_, "bad PNM header");
		return pos_ + 1;
	}

	void skip(std::size_t n) { pos_ += n; }

private:
	void skip_space_and_comments()
	{
		while (pos_ < bytes_.size())
		{
			if (bytes_[pos_] == '#')
				while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r')
					++pos_;
			else if (std::isspace(bytes_[pos_]))
				++pos_;
			else
				break;
		}
	}

	std::vector<std::uint8_t> const & bytes_;
	std::string const & origin_;
	std::size_t pos_ = 0;
};

GrayImage decode_pnm(std::vector<std::uint8_t> const & bytes, std::string const & origin)
{
	int const channels = bytes[1] == '5' ? 1 : 3;
	if (bytes.size() < 3 || !std::isspace(bytes[2]))
		malformed(origin, "bad PNM header");
	PnmHeader header(bytes, origin);
	header.skip(2);
	long const width = header.next_int();
	long const height = header.next_int();
	long const maxval = header.next_int();
	if (width < 1 || height < 1)
		malformed(origin, "image dimensions must be positive");
	if (maxval < 1 || maxval > 65535)
		malformed(origin, "PNM maxval out of range");
	if (maxval > 255)
		malformed(origin, "16-bit depth is not supported");
	std::size_t const offset = header.raster_offset();

	auto const count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
	if (bytes.size() - offset < count * channels)
		malformed(origin, "truncated raster");

	GrayImage image(height, width);
	std::uint8_t const * src = bytes.data() + offset;
	for (std::size_t i = 0; i < count; ++i)
	{
		std::uint8_t value;
		if (channels == 1)
		{
			value = src[i];
			if (value > maxval)
				malformed(origin, "sample exceeds maxval");
		}
		else
		{
			std::uint8_t const * px = src + 3 * i;
			if (px[0] > maxval || px[1] > maxval || px[2] > maxval)
				malformed(origin, "sample exceeds maxval");
			value = luma_bt601(px[0], px[1], px[2]);
		}
		image.data()[i] = value;
	}
	return image;
}

GrayImage decode_bmp(std::vector<std::uint8_t> const & bytes, std::string const & origin)
{
	detail::ByteReader file(bytes, origin);
	file.take(10);
	std::uint32_t const pixel_offset = file.u32();
	std::uint32_t const dib_size = file.u32();
	if (dib_size < 40)
		malformed(origin, "unsupported BMP header");
	auto const width = static_cast<std::int32_t>(file.u32());
	auto const raw_height = static_cast<std::int32_t>(file.u32());
	file.u16();  // planes
	std::uint16_t const bit_count = file.u16();
	std::uint32_t const compression = file.u32();
	file.take(12);  // image size, resolution
	std::uint32_t colors_used = file.u32();

	if (bit_count == 16 || bit_count == 48 || bit_count == 64)
		malformed(origin, "16-bit depth is not supported");
	if (bit_count != 8 && bit_count != 24 && bit_count != 32)
		malformed(origin, "unsupported BMP bit depth " + std::to_string(bit_count));
	if (compression != 0 && !(compression == 3 && bit_count == 32))
		malformed(origin, "compressed BMP is not supported");
	if (width < 1 || raw_height == 0 || raw_height == INT32_MIN)
		malformed(origin, "image dimensions must be positive");
	bool const top_down = raw_height < 0;
	long const height = top_down ? -static_cast<long>(raw_height) : raw_height;

	std::vector<std::uint8_t> palette_gray;
	if (bit_count == 8)
	{
		if (colors_used == 0)
			colors_used = 256;
		if (colors_used > 256)
			malformed(origin, "BMP palette too large");
		std::size_t const palette_at = 14 + dib_size;
		if (palette_at + 4 * std::size_t{colors_used} > bytes.size())
			malformed(origin, "truncated palette");
		palette_gray.resize(256, 0);
		for (std::size_t i = 0; i < colors_used; ++i)
		{
			std::uint8_t const * entry = bytes.data() + palette_at + 4 * i;
			// entries are stored B, G, R, reserved
			palette_gray[i] = luma_bt601(entry[2], entry[1], entry[0]);
		}
	}

	std::size_t const stride = ((std::size_t{bit_count} * width + 31) / 32) * 4;
	if (pixel_offset > bytes.size() || bytes.size() - pixel_offset < stride * height)
		malformed(origin, "truncated raster");

	GrayImage image(height, width);
	std::size_t const step = bit_count / 8;
	for (long r = 0; r < height; ++r)
	{
		long const src_row = top_down ? r : height - 1 - r;
		std::uint8_t const * row = bytes.data() + pixel_offset + stride * src_row;
		for (long c = 0; c < width; ++c)
		{
			std::uint8_t const * px = row + step * c;
			image(r, c) = bit_count == 8 ? palette_gray[px[0]] : luma_bt601(px[2], px[1], px[0]);
		}
	}
	return image;
}

}  // namespace

GrayImage decode_gray_image(std::vector<std::uint8_t> const & bytes, std::string const & origin)
{
	if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
		return decode_pnm(bytes, origin);
	if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M')
		return decode_bmp(bytes, origin);
	malformed(origin, "unsupported image format");
}

GrayImage load_gray_image(std::filesystem::path const & path)
{
	return decode_gray_image(detail::read_file(path), path.string());
}

std::vector<std::uint8_t> encode_pgm(GrayImage const & image)
{
	std::string const header =
		"P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
	std::vector<std::uint8_t> out(header.begin(), header.end());
	out.insert(out.end(), image.data(), image.data() + image.size());
	return out;
}

void write_pgm(std::filesystem::path const & path, GrayImage const & image)
{
	detail::write_file_atomic(path, encode_pgm(image));
}

DatasetIndex scan_dataset(std::filesystem::path const & root)
{
	namespace fs = std::filesystem;
	std::error_code ec;
	if (!fs::is_directory(root, ec))
		throw Error(ErrorKind::io, "dataset root '" + root.string() + "' is not a directory");

	auto hidden = [](fs::path const & p) { return p.filename().string().starts_with('.'); };

	DatasetIndex index;
	for (auto const & entry : fs::directory_iterator(root))
	{
		if (!entry.is_directory() || hidden(entry.path()))
			continue;
		FingerImages finger{entry.path().filename().string(), {}};
		for (auto const & file : fs::directory_iterator(entry.path()))
			if (file.is_regular_file() && !hidden(file.path()))
				finger.image_paths.push_back(file.path());
		if (finger.image_paths.empty())
			throw Error(ErrorKind::dataset, "finger directory '" + finger.finger_id + "' has no images");
		std::ranges::sort(finger.image_paths, {}, [](fs::path const & p) { return p.filename().string(); });
		index.fingers.push_back(std::move(finger));
	}
	if (index.fingers.empty())
		throw Error(ErrorKind::dataset, "empty dataset: no finger directories under '" + root.string() + "'");
	std::ranges::sort(index.fingers, {}, &FingerImages::finger_id);
	return index;
}

}  // namespace fvcode
