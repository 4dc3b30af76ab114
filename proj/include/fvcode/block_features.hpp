#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "fvcode/error.hpp"
#include "fvcode/image_io.hpp"

namespace fvcode
{

/// Block height and width in pixels.
struct BlockSpec
{
	int rows = 3;
	int cols = 8;

	bool operator==(BlockSpec const &) const = default;
};

inline void validate(BlockSpec const & spec)
{
	if (spec.rows < 1 || spec.cols < 1 || spec.rows > 0xFFFF || spec.cols > 0xFFFF)
		throw Error(
			ErrorKind::invalid_argument,
			"block size must be in [1, 65535], got " + std::to_string(spec.rows) + "x" +
				std::to_string(spec.cols));
}

[[nodiscard]] constexpr Eigen::Index ceil_div(Eigen::Index a, Eigen::Index b) noexcept
{
	return (a + b - 1) / b;
}

template <typename Scalar>
using FeatureValues = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Grid of block means plus the block size that produced it.
template <typename Scalar>
struct BasicFeatureMatrix
{
	FeatureValues<Scalar> values;
	BlockSpec spec;

	[[nodiscard]] Eigen::Index rows() const noexcept { return values.rows(); }
	[[nodiscard]] Eigen::Index cols() const noexcept { return values.cols(); }
};

using FeatureMatrix = BasicFeatureMatrix<double>;

/**
 * Partition `image` into spec.rows x spec.cols blocks and take each block's mean.
 *
 * Blocks overhanging the bottom or right edge are zero-filled to full size and
 * the divisor is always rows*cols, so boundary blocks are darkened by the
 * padding. Result is ceil(H/rows) x ceil(W/cols).
 */
template <typename Scalar = double>
[[nodiscard]] BasicFeatureMatrix<Scalar> compute_feature_matrix(GrayImage const & image, BlockSpec const & spec)
{
	validate(spec);
	if (image.rows() < 1 || image.cols() < 1)
		throw Error(ErrorKind::invalid_argument, "image must be at least 1x1");

	Eigen::Index const p = ceil_div(image.rows(), spec.rows);
	Eigen::Index const q = ceil_div(image.cols(), spec.cols);

	// Integer sums are exact; the only rounding is the final division.
	Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sums =
		Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(p, q);
	for (Eigen::Index r = 0; r < image.rows(); ++r)
	{
		auto const bi = r / spec.rows;
		for (Eigen::Index c = 0; c < image.cols(); ++c)
			sums(bi, c / spec.cols) += image(r, c);
	}

	Scalar const area = static_cast<Scalar>(spec.rows) * static_cast<Scalar>(spec.cols);
	return {sums.template cast<Scalar>() / area, spec};
}

}  // namespace fvcode
