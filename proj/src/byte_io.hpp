#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fvcode/error.hpp"

namespace fvcode::detail
{

class ByteWriter
{
public:
	void u8(std::uint8_t v) { bytes_.push_back(v); }

	void u16(std::uint16_t v)
	{
		for (int i = 0; i < 2; ++i)
			bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
	}

	void u32(std::uint32_t v)
	{
		for (int i = 0; i < 4; ++i)
			bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
	}

	void raw(std::span<std::uint8_t const> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

	void raw(std::string const & s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

	[[nodiscard]] std::vector<std::uint8_t> take() && { return std::move(bytes_); }

private:
	std::vector<std::uint8_t> bytes_;
};

/// Bounds-checked little-endian reader; running past the end throws Error{format}.
class ByteReader
{
public:
	ByteReader(std::span<std::uint8_t const> bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

	std::uint8_t u8() { return take(1)[0]; }

	std::uint16_t u16()
	{
		auto const b = take(2);
		return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
	}

	std::uint32_t u32()
	{
		auto const b = take(4);
		return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
			(std::uint32_t{b[3]} << 24);
	}

	std::span<std::uint8_t const> take(std::size_t n)
	{
		if (n > remaining())
			throw Error(ErrorKind::format, what_ + ": truncated payload");
		auto const out = bytes_.subspan(pos_, n);
		pos_ += n;
		return out;
	}

	[[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
	std::span<std::uint8_t const> bytes_;
	std::size_t pos_ = 0;
	std::string what_;
};

std::vector<std::uint8_t> read_file(std::filesystem::path const & path);

/// Write to a sibling temporary file and rename it over `path`.
void write_file_atomic(std::filesystem::path const & path, std::span<std::uint8_t const> bytes);

}  // namespace fvcode::detail
