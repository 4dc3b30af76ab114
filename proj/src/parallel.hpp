#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fvcode::detail
{

/// Run body(i) for i in [0, n). Each index runs exactly once; the first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body && body)
{
	if (threads == 0)
		threads = std::max(1u, std::thread::hardware_concurrency());
	threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
	if (threads <= 1)
	{
		for (std::size_t i = 0; i < n; ++i)
			body(i);
		return;
	}

	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	{
		std::vector<std::jthread> pool;
		pool.reserve(threads);
		for (unsigned t = 0; t < threads; ++t)
			pool.emplace_back([&] {
				for (std::size_t i; (i = next.fetch_add(1)) < n;)
				{
					try
					{
						body(i);
					}
					catch (...)
					{
						std::lock_guard lock(failure_mutex);
						if (!failure)
							failure = std::current_exception();
						next = n;
					}
				}
			});
	}
	if (failure)
		std::rethrow_exception(failure);
}

}  // namespace fvcode::detail
