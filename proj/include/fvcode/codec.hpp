#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fvcode/block_features.hpp"

namespace fvcode
{

/// Encoder provenance carried by every code. Codes only compare if these match.
struct CodeParams
{
	std::uint16_t block_rows = 0;
	std::uint16_t block_cols = 0;
	std::uint32_t feature_rows = 0;
	std::uint32_t feature_cols = 0;

	bool operator==(CodeParams const &) const = default;
};

/// Codeword length for a p x q feature matrix: 4 * ceil(p/3) * ceil(q/3).
[[nodiscard]] std::uint32_t code_length(std::uint64_t feature_rows, std::uint64_t feature_cols);

[[nodiscard]] inline std::uint32_t code_length(CodeParams const & params)
{
	return code_length(params.feature_rows, params.feature_cols);
}

/// Four comparison bits of one 3x3 window. J(1) is the most significant of the nibble.
struct WindowBits
{
	std::uint8_t nibble = 0;

	/// j in 1..4
	[[nodiscard]] constexpr bool operator[](int j) const noexcept { return (nibble >> (4 - j)) & 1u; }

	[[nodiscard]] std::string to_string() const
	{
		return {char('0' + (*this)[1]), char('0' + (*this)[2]), char('0' + (*this)[3]), char('0' + (*this)[4])};
	}

	bool operator==(WindowBits const &) const = default;
};

/**
 * Center-symmetric comparison of a 3x3 window.
 *
 * Neighbors run clockwise from the top-left corner:
 *
 *     n1 n2 n3
 *     n8 .. n4
 *     n7 n6 n5
 *
 * so n_j and n_{j+4} sit opposite each other through the center. Bit j is set
 * iff n_j >= n_{j+4}; the center value is not used.
 */
template <typename Derived>
[[nodiscard]] WindowBits encode_window(Eigen::MatrixBase<Derived> const & window)
{
	eigen_assert(window.rows() == 3 && window.cols() == 3);
	std::uint8_t nibble = 0;
	nibble |= static_cast<std::uint8_t>(window(0, 0) >= window(2, 2)) << 3;
	nibble |= static_cast<std::uint8_t>(window(0, 1) >= window(2, 1)) << 2;
	nibble |= static_cast<std::uint8_t>(window(0, 2) >= window(2, 0)) << 1;
	nibble |= static_cast<std::uint8_t>(window(1, 2) >= window(1, 0));
	return {nibble};
}

/// Packed binary codeword. Bit k lives in word k/64 at position 63 - k%64.
class VeinCode
{
public:
	using Word = std::uint64_t;
	static constexpr std::size_t word_bits = 64;

	VeinCode() = default;

	/// All-zero code of length code_length(params).
	explicit VeinCode(CodeParams const & params);

	/// Build from a '0'/'1' string whose length must equal code_length(params).
	[[nodiscard]] static VeinCode from_string(CodeParams const & params, std::string_view bits);

	[[nodiscard]] CodeParams const & params() const noexcept { return params_; }
	[[nodiscard]] std::uint32_t bit_length() const noexcept { return bit_length_; }
	[[nodiscard]] std::span<Word const> words() const noexcept { return words_; }

	[[nodiscard]] bool bit(std::size_t index) const noexcept
	{
		return (words_[index / word_bits] >> (word_bits - 1 - index % word_bits)) & 1u;
	}

	void set_bit(std::size_t index, bool value) noexcept
	{
		Word const mask = Word{1} << (word_bits - 1 - index % word_bits);
		if (value)
			words_[index / word_bits] |= mask;
		else
			words_[index / word_bits] &= ~mask;
	}

	/// Write four window bits starting at `index`.
	void set_window(std::size_t index, WindowBits bits) noexcept
	{
		for (int j = 1; j <= 4; ++j)
			set_bit(index + static_cast<std::size_t>(j - 1), bits[j]);
	}

	[[nodiscard]] std::string to_string() const;

	bool operator==(VeinCode const &) const = default;

private:
	CodeParams params_{};
	std::uint32_t bit_length_ = 0;
	std::vector<Word> words_;
};

/**
 * Encode a feature matrix.
 *
 * The matrix is tiled by non-overlapping 3x3 windows in row-major order, with
 * zeros filling the right and bottom edges when a dimension is not a multiple
 * of three. Window bits are concatenated in tile order.
 */
template <typename Scalar>
[[nodiscard]] VeinCode encode(BasicFeatureMatrix<Scalar> const & feature)
{
	validate(feature.spec);
	auto const p = feature.rows();
	auto const q = feature.cols();
	if (p < 1 || q < 1)
		throw Error(ErrorKind::invalid_argument, "feature matrix must be at least 1x1");

	CodeParams const params{
		static_cast<std::uint16_t>(feature.spec.rows),
		static_cast<std::uint16_t>(feature.spec.cols),
		static_cast<std::uint32_t>(p),
		static_cast<std::uint32_t>(q)};
	VeinCode code(params);

	Eigen::Index const tiles_down = ceil_div(p, 3);
	Eigen::Index const tiles_across = ceil_div(q, 3);
	FeatureValues<Scalar> padded = FeatureValues<Scalar>::Zero(3 * tiles_down, 3 * tiles_across);
	padded.topLeftCorner(p, q) = feature.values;

	std::size_t index = 0;
	for (Eigen::Index tr = 0; tr < tiles_down; ++tr)
		for (Eigen::Index tc = 0; tc < tiles_across; ++tc, index += 4)
			code.set_window(index, encode_window(padded.template block<3, 3>(3 * tr, 3 * tc)));
	return code;
}

/// Image to code in one step.
[[nodiscard]] inline VeinCode encode_image(GrayImage const & image, BlockSpec const & spec)
{
	return encode(compute_feature_matrix<double>(image, spec));
}

/// Payload bytes only: bits MSB-first, final byte zero-padded.
[[nodiscard]] std::vector<std::uint8_t> pack_bits(VeinCode const & code);

/// Inverse of pack_bits. Throws Error{format} on wrong size or nonzero padding.
[[nodiscard]] VeinCode unpack_bits(CodeParams const & params, std::span<std::uint8_t const> payload);

/**
 * VNC1 container, little-endian:
 *
 *     "VNC1" | version u8 = 1 | block_rows u16 | block_cols u16 |
 *     feature_rows u32 | feature_cols u32 | bit_length u32 | payload
 */
[[nodiscard]] std::vector<std::uint8_t> serialize(VeinCode const & code);

[[nodiscard]] VeinCode deserialize(std::span<std::uint8_t const> bytes);

void save_code(std::filesystem::path const & path, VeinCode const & code);

[[nodiscard]] VeinCode load_code(std::filesystem::path const & path);

}  // namespace fvcode
