#include "byte_io.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

namespace fvcode::detail
{

std::vector<std::uint8_t> read_file(std::filesystem::path const & path)
{
	std::error_code ec;
	if (!std::filesystem::is_regular_file(path, ec))
		throw Error(ErrorKind::io, "cannot read '" + path.string() + "': no such file");
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
	std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
	if (in.bad())
		throw Error(ErrorKind::io, "read error on '" + path.string() + "'");
	return bytes;
}

void write_file_atomic(std::filesystem::path const & path, std::span<std::uint8_t const> bytes)
{
	auto tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
			throw Error(ErrorKind::io, "cannot write '" + tmp.string() + "'");
		out.write(reinterpret_cast<char const *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
		out.flush();
		if (!out)
			throw Error(ErrorKind::io, "write error on '" + tmp.string() + "'");
	}
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec)
	{
		std::filesystem::remove(tmp, ec);
		throw Error(ErrorKind::io, "cannot replace '" + path.string() + "'");
	}
}

}  // namespace fvcode::detail
