#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fvcode::cli
{

/// Process exit codes.
enum ExitCode : int
{
	exit_ok = 0,         ///< success, or verify/identify accepted
	exit_rejected = 1,   ///< verify rejected, or identify found no candidate
	exit_io = 2,
	exit_format = 3,
	exit_incompatible = 4,
	exit_usage = 5,
	exit_gallery = 6,
	exit_dataset = 7,
	exit_internal = 8,
};

/// `args` excludes the program name.
int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err);

}  // namespace fvcode::cli
