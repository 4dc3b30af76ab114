#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvcode/matcher.hpp"

namespace fvcode
{

/// Enrolled fingers sharing one set of encoder parameters.
class Gallery
{
public:
	Gallery() = default;

	/// Unset until the first enrollment.
	[[nodiscard]] std::optional<CodeParams> const & params() const noexcept { return params_; }
	[[nodiscard]] std::span<GalleryEntry const> entries() const noexcept { return entries_; }
	[[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
	[[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

	[[nodiscard]] GalleryEntry const * find(std::string const & finger_id) const;

	/// find() that throws Error{gallery} for an unknown id.
	[[nodiscard]] GalleryEntry const & at(std::string const & finger_id) const;

	/**
	 * Return a copy with `finger_id` enrolled. An existing id is replaced in place
	 * only when `overwrite` is set; otherwise Error{gallery}. Codes must be
	 * non-empty and share the gallery's params (the first enrollment fixes them).
	 */
	[[nodiscard]] Gallery enroll(std::string finger_id, std::vector<VeinCode> codes, bool overwrite = false) const &;
	[[nodiscard]] Gallery enroll(std::string finger_id, std::vector<VeinCode> codes, bool overwrite = false) &&;

	bool operator==(Gallery const &) const = default;

private:
	std::optional<CodeParams> params_;
	std::vector<GalleryEntry> entries_;
};

/**
 * VGL1 container, little-endian:
 *
 *     "VGL1" | version u8 = 1 | block_rows u16 | block_cols u16 |
 *     feature_rows u32 | feature_cols u32 | bit_length u32 | entry_count u32 |
 *     entry_count x (id_len u16 | id bytes | template_count u16 |
 *                    template_count x payload)
 *
 * Payloads are VNC1 payloads of ceil(bit_length/8) bytes. An empty gallery is
 * stored with all-zero params.
 */
[[nodiscard]] std::vector<std::uint8_t> serialize(Gallery const & gallery);

[[nodiscard]] Gallery deserialize_gallery(std::span<std::uint8_t const> bytes);

/// Atomic replace via a temporary sibling file.
void save_gallery(std::filesystem::path const & path, Gallery const & gallery);

[[nodiscard]] Gallery load_gallery(std::filesystem::path const & path);

}  // namespace fvcode
