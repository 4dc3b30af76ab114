#pragma once

#include <stdexcept>
#include <string>

namespace fvcode
{

/// Broad failure category. The CLI maps each one to a distinct exit code.
enum class ErrorKind
{
	io,               ///< file missing, unreadable or unwritable
	format,           ///< malformed or unsupported file contents
	incompatible,     ///< codes produced with different encoder parameters
	invalid_argument, ///< precondition violated by the caller
	gallery,          ///< duplicate or unknown finger id
	dataset,          ///< dataset layout or shape problem
};

class Error : public std::runtime_error
{
public:
	Error(ErrorKind kind, std::string const & what) : std::runtime_error(what), kind_(kind) {}

	[[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
	ErrorKind kind_;
};

}  // namespace fvcode
