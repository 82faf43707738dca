#include "pwsharp/zero_cache.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "pwsharp/errors.hpp"
#include "pwsharp/specialfn.hpp"

namespace pwsharp {

ZeroCacheStatus load_zero_cache(const std::filesystem::path& path) {
    ZeroCacheStatus status;
    std::ifstream in(path);
    if (!in) {
        return status;
    }
    status.found = true;
    std::map<double, std::map<int, double>> by_nu;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        if (doc.at("format_version").get<int>() != zero_cache_format_version) {
            status.corrupt = true;
            return status;
        }
        for (const auto& e : doc.at("entries")) {
            double nu = e.at("nu").get<double>();
            int n = e.at("n").get<int>();
            double z = e.at("zero").get<double>();
            if (!(nu > -1.0) || n < 1 || !std::isfinite(z) || !(z > 0.0)) {
                status.corrupt = true;
                return status;
            }
            by_nu[nu][n] = z;
        }
    } catch (const nlohmann::json::exception&) {
        status.corrupt = true;
        return status;
    }

    // Only the contiguous prefix n = 1, 2, ... of strictly increasing zeros is trusted.
    std::vector<std::pair<double, std::vector<double>>> seeds;
    for (const auto& [nu, zeros] : by_nu) {
        std::vector<double> prefix;
        for (const auto& [n, z] : zeros) {
            if (n != static_cast<int>(prefix.size()) + 1) {
                break;
            }
            if (!prefix.empty() && !(z > prefix.back())) {
                status.corrupt = true;
                return status;
            }
            prefix.push_back(z);
        }
        seeds.emplace_back(nu, std::move(prefix));
    }
    for (auto& [nu, prefix] : seeds) {
        status.entries += prefix.size();
        ZeroRegistry::instance().table(nu)->seed(prefix);
    }
    return status;
}

void save_zero_cache(const std::filesystem::path& path) {
    nlohmann::json entries = nlohmann::json::array();
    auto tables = ZeroRegistry::instance().tables();
    std::sort(tables.begin(), tables.end(),
              [](const auto& a, const auto& b) { return a->nu() < b->nu(); });
    for (const auto& t : tables) {
        std::vector<double> zeros = t->snapshot();
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            entries.push_back({{"nu", t->nu()}, {"n", i + 1}, {"zero", zeros[i]}});
        }
    }
    nlohmann::json doc = {{"format_version", zero_cache_format_version}, {"entries", entries}};

    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::DomainError, "cannot write zero cache at " + tmp.string());
        }
        out << doc.dump() << '\n';
        if (!out) {
            throw Error(ErrorKind::DomainError, "cannot write zero cache at " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path default_zero_cache_path() {
    if (const char* env = std::getenv("PWSHARP_ZERO_CACHE"); env && *env) {
        return env;
    }
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return std::filesystem::path(xdg) / "pwsharp" / "zeros.json";
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return std::filesystem::path(home) / ".cache" / "pwsharp" / "zeros.json";
    }
    return std::filesystem::temp_directory_path() / "pwsharp-zeros.json";
}

}  // namespace pwsharp
