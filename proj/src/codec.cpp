#include "fvcode/codec.hpp"

#include <algorithm>
#include <limits>

#include "byte_io.hpp"

namespace fvcode
{

std::uint32_t code_length(std::uint64_t feature_rows, std::uint64_t feature_cols)
{
	if (feature_rows < 1 || feature_cols < 1)
		throw Error(ErrorKind::invalid_argument, "feature dimensions must be at least 1x1");
	std::uint64_t const windows = ((feature_rows + 2) / 3) * ((feature_cols + 2) / 3);
	if (windows > std::numeric_limits<std::uint32_t>::max() / 4)
		throw Error(ErrorKind::invalid_argument, "code length overflows 32 bits");
	return static_cast<std::uint32_t>(4 * windows);
}

VeinCode::VeinCode(CodeParams const & params)
	: params_(params), bit_length_(code_length(params)),
	  words_((std::size_t{bit_length_} + word_bits - 1) / word_bits, Word{0})
{
	if (params.block_rows < 1 || params.block_cols < 1)
		throw Error(ErrorKind::invalid_argument, "block size must be at least 1x1");
}

VeinCode VeinCode::from_string(CodeParams const & params, std::string_view bits)
{
	VeinCode code(params);
	if (bits.size() != code.bit_length())
		throw Error(
			ErrorKind::invalid_argument,
			"expected " + std::to_string(code.bit_length()) + " bits, got " + std::to_string(bits.size()));
	for (std::size_t i = 0; i < bits.size(); ++i)
	{
		if (bits[i] != '0' && bits[i] != '1')
			throw Error(ErrorKind::invalid_argument, "bit string may only contain '0' and '1'");
		code.set_bit(i, bits[i] == '1');
	}
	return code;
}

std::string VeinCode::to_string() const
{
	std::string out(bit_length_, '0');
	for (std::size_t i = 0; i < bit_length_; ++i)
		if (bit(i))
			out[i] = '1';
	return out;
}

std::vector<std::uint8_t> pack_bits(VeinCode const & code)
{
	std::vector<std::uint8_t> out((std::size_t{code.bit_length()} + 7) / 8);
	auto const words = code.words();
	for (std::size_t i = 0; i < out.size(); ++i)
		out[i] = static_cast<std::uint8_t>(words[i / 8] >> (56 - 8 * (i % 8)));
	return out;
}

VeinCode unpack_bits(CodeParams const & params, std::span<std::uint8_t const> payload)
{
	VeinCode code(params);
	std::size_t const expected = (std::size_t{code.bit_length()} + 7) / 8;
	if (payload.size() != expected)
		throw Error(ErrorKind::format, "payload size does not match bit_length");
	if (unsigned const tail = code.bit_length() % 8; tail != 0)
	{
		if (payload.back() & (0xFFu >> tail))
			throw Error(ErrorKind::format, "nonzero padding bits in final payload byte");
	}
	for (std::size_t i = 0; i < code.bit_length(); ++i)
		code.set_bit(i, (payload[i / 8] >> (7 - i % 8)) & 1u);
	return code;
}

namespace
{

constexpr char code_magic[] = {'V', 'N', 'C', '1'};
constexpr std::uint8_t code_version = 1;

}  // namespace

std::vector<std::uint8_t> serialize(VeinCode const & code)
{
	detail::ByteWriter out;
	for (char c : code_magic)
		out.u8(static_cast<std::uint8_t>(c));
	out.u8(code_version);
	auto const & p = code.params();
	out.u16(p.block_rows);
	out.u16(p.block_cols);
	out.u32(p.feature_rows);
	out.u32(p.feature_cols);
	out.u32(code.bit_length());
	out.raw(pack_bits(code));
	return std::move(out).take();
}

VeinCode deserialize(std::span<std::uint8_t const> bytes)
{
	detail::ByteReader in(bytes, "vein code");
	auto const magic = in.take(4);
	if (!std::equal(magic.begin(), magic.end(), std::begin(code_magic), std::end(code_magic),
					[](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); }))
		throw Error(ErrorKind::format, "vein code: bad magic");
	if (auto const version = in.u8(); version != code_version)
		throw Error(ErrorKind::format, "vein code: unsupported version " + std::to_string(version));

	CodeParams params;
	params.block_rows = in.u16();
	params.block_cols = in.u16();
	params.feature_rows = in.u32();
	params.feature_cols = in.u32();
	std::uint32_t const bit_length = in.u32();
	if (params.block_rows < 1 || params.block_cols < 1 || params.feature_rows < 1 || params.feature_cols < 1)
		throw Error(ErrorKind::format, "vein code: zero dimension in header");
	if (bit_length != code_length(params))
		throw Error(ErrorKind::format, "vein code: bit_length inconsistent with feature dimensions");

	auto const payload = in.take((std::size_t{bit_length} + 7) / 8);
	if (in.remaining() != 0)
		throw Error(ErrorKind::format, "vein code: trailing bytes after payload");
	return unpack_bits(params, payload);
}

void save_code(std::filesystem::path const & path, VeinCode const & code)
{
	detail::write_file_atomic(path, serialize(code));
}

VeinCode load_code(std::filesystem::path const & path)
{
	return deserialize(detail::read_file(path));
}

}  // namespace fvcode
