#ifndef PWSHARP_CLI_OUTPUT_HPP
#define PWSHARP_CLI_OUTPUT_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pwsharp::cli {

/// 17 significant digits, locale independent; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

std::string json_escape(std::string_view s);

/// JSON number, or null for non-finite values.
std::string json_number(double v);

/// Object with keys kept in insertion order, so output is byte-for-byte reproducible.
class JsonObject {
public:
    JsonObject& add(const std::string& key, double v);
    JsonObject& add(const std::string& key, int v);
    JsonObject& add(const std::string& key, long v);
    JsonObject& add(const std::string& key, bool v);
    JsonObject& add(const std::string& key, const char* v);
    JsonObject& add(const std::string& key, const std::string& v);
    JsonObject& add(const std::string& key, const std::vector<double>& v);
    JsonObject& add(const std::string& key, const JsonObject& v);
    JsonObject& add_null(const std::string& key);
    JsonObject& add_raw(const std::string& key, std::string json);

    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> _fields;
};

std::string json_array(const std::vector<std::string>& items);

/// Comma-separated line; fields containing commas, quotes or newlines are quoted.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace pwsharp::cli

#endif
