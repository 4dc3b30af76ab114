#include "fvcode/gallery.hpp"

#include <algorithm>
#include <limits>

#include "byte_io.hpp"

namespace fvcode
{

GalleryEntry const * Gallery::find(std::string const & finger_id) const
{
	auto const it = std::ranges::find(entries_, finger_id, &GalleryEntry::finger_id);
	return it == entries_.end() ? nullptr : &*it;
}

GalleryEntry const & Gallery::at(std::string const & finger_id) const
{
	if (auto const * entry = find(finger_id))
		return *entry;
	throw Error(ErrorKind::gallery, "finger '" + finger_id + "' is not enrolled");
}

Gallery Gallery::enroll(std::string finger_id, std::vector<VeinCode> codes, bool overwrite) const &
{
	return Gallery(*this).enroll(std::move(finger_id), std::move(codes), overwrite);
}

Gallery Gallery::enroll(std::string finger_id, std::vector<VeinCode> codes, bool overwrite) &&
{
	if (finger_id.empty() || finger_id.size() > std::numeric_limits<std::uint16_t>::max())
		throw Error(ErrorKind::invalid_argument, "finger id must be 1 to 65535 bytes");
	if (codes.empty())
		throw Error(ErrorKind::invalid_argument, "enrollment needs at least one template");
	if (codes.size() > std::numeric_limits<std::uint16_t>::max())
		throw Error(ErrorKind::invalid_argument, "too many templates for one finger");

	CodeParams const params = params_.value_or(codes.front().params());
	for (auto const & code : codes)
		if (code.params() != params)
			throw Error(ErrorKind::incompatible, "template parameters differ from the gallery's");

	auto const it = std::ranges::find(entries_, finger_id, &GalleryEntry::finger_id);
	if (it != entries_.end() && !overwrite)
		throw Error(ErrorKind::gallery, "finger '" + finger_id + "' is already enrolled");

	params_ = params;
	if (it != entries_.end())
		it->templates = std::move(codes);
	else
		entries_.push_back({std::move(finger_id), std::move(codes)});
	Gallery next = std::move(*this);
	return next;
}

namespace
{

constexpr char gallery_magic[] = {'V', 'G', 'L', '1'};
constexpr std::uint8_t gallery_version = 1;

[[noreturn]] void malformed(std::string const & why)
{
	throw Error(ErrorKind::format, "malformed gallery: " + why);
}

}  // namespace

std::vector<std::uint8_t> serialize(Gallery const & gallery)
{
	detail::ByteWriter out;
	for (char c : gallery_magic)
		out.u8(static_cast<std::uint8_t>(c));
	out.u8(gallery_version);
	CodeParams const params = gallery.params().value_or(CodeParams{});
	out.u16(params.block_rows);
	out.u16(params.block_cols);
	out.u32(params.feature_rows);
	out.u32(params.feature_cols);
	out.u32(gallery.params() ? code_length(params) : 0u);
	out.u32(static_cast<std::uint32_t>(gallery.size()));
	for (auto const & entry : gallery.entries())
	{
		out.u16(static_cast<std::uint16_t>(entry.finger_id.size()));
		out.raw(entry.finger_id);
		out.u16(static_cast<std::uint16_t>(entry.templates.size()));
		for (auto const & code : entry.templates)
			out.raw(pack_bits(code));
	}
	return std::move(out).take();
}

Gallery deserialize_gallery(std::span<std::uint8_t const> bytes)
{
	detail::ByteReader in(bytes, "malformed gallery");
	auto const magic = in.take(4);
	if (!std::equal(magic.begin(), magic.end(), std::begin(gallery_magic), std::end(gallery_magic),
					[](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); }))
		malformed("bad magic");
	if (auto const version = in.u8(); version != gallery_version)
		throw Error(ErrorKind::format, "unsupported gallery version " + std::to_string(version));

	CodeParams params;
	params.block_rows = in.u16();
	params.block_cols = in.u16();
	params.feature_rows = in.u32();
	params.feature_cols = in.u32();
	std::uint32_t const bit_length = in.u32();
	std::uint32_t const count = in.u32();

	Gallery gallery;
	if (count == 0)
	{
		if (params != CodeParams{} || bit_length != 0)
			malformed("empty gallery with parameters set");
		if (in.remaining() != 0)
			malformed("trailing bytes");
		return gallery;
	}
	if (params.block_rows < 1 || params.block_cols < 1 || params.feature_rows < 1 || params.feature_cols < 1)
		malformed("zero dimension in header");
	if (bit_length != code_length(params))
		malformed("bit_length inconsistent with feature dimensions");
	std::size_t const payload_size = (std::size_t{bit_length} + 7) / 8;

	for (std::uint32_t e = 0; e < count; ++e)
	{
		auto const id_bytes = in.take(in.u16());
		std::string finger_id(id_bytes.begin(), id_bytes.end());
		std::uint16_t const templates = in.u16();
		if (templates == 0)
			malformed("entry '" + finger_id + "' has no templates");
		std::vector<VeinCode> codes;
		codes.reserve(templates);
		for (std::uint16_t t = 0; t < templates; ++t)
			codes.push_back(unpack_bits(params, in.take(payload_size)));
		try
		{
			gallery = std::move(gallery).enroll(std::move(finger_id), std::move(codes));
		}
		catch (Error const & err)
		{
			malformed(err.what());
		}
	}
	if (in.remaining() != 0)
		malformed("trailing bytes");
	return gallery;
}

void save_gallery(std::filesystem::path const & path, Gallery const & gallery)
{
	detail::write_file_atomic(path, serialize(gallery));
}

Gallery load_gallery(std::filesystem::path const & path)
{
	return deserialize_gallery(detail::read_file(path));
}

}  // namespace fvcode
