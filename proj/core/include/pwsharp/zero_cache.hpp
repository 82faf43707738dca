#ifndef PWSHARP_ZERO_CACHE_HPP
#define PWSHARP_ZERO_CACHE_HPP

#include <cstddef>
#include <filesystem>

namespace pwsharp {

inline constexpr int zero_cache_format_version = 1;

struct ZeroCacheStatus {
    bool found = false;
    bool corrupt = false;  // unreadable content was ignored and will be overwritten
    std::size_t entries = 0;
};

/// Seeds the process-wide zero registry from {format_version, entries: [{nu, n, zero}]}.
/// Anything unreadable is discarded silently; the cache is advisory.
ZeroCacheStatus load_zero_cache(const std::filesystem::path& path);

/// Writes every memoized zero through a temporary file and an atomic rename.
void save_zero_cache(const std::filesystem::path& path);

/// PWSHARP_ZERO_CACHE, else $XDG_CACHE_HOME/pwsharp/zeros.json, else ~/.cache/pwsharp/zeros.json.
std::filesystem::path default_zero_cache_path();

}  // namespace pwsharp

#endif
