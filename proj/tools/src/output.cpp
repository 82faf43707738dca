#include "pwsharp_cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pwsharp::cli {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
    return out;
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

JsonObject& JsonObject::add(const std::string& key, double v) {
    return add_raw(key, json_number(v));
}
JsonObject& JsonObject::add(const std::string& key, int v) {
    return add_raw(key, std::to_string(v));
}
JsonObject& JsonObject::add(const std::string& key, long v) {
    return add_raw(key, std::to_string(v));
}
JsonObject& JsonObject::add(const std::string& key, bool v) {
    return add_raw(key, v ? "true" : "false");
}
JsonObject& JsonObject::add(const std::string& key, const char* v) {
    return add_raw(key, json_escape(v));
}
JsonObject& JsonObject::add(const std::string& key, const std::string& v) {
    return add_raw(key, json_escape(v));
}
JsonObject& JsonObject::add(const std::string& key, const std::vector<double>& v) {
    std::vector<std::string> items;
    items.reserve(v.size());
    for (double x : v) {
        items.push_back(json_number(x));
    }
    return add_raw(key, json_array(items));
}
JsonObject& JsonObject::add(const std::string& key, const JsonObject& v) {
    return add_raw(key, v.str());
}
JsonObject& JsonObject::add_null(const std::string& key) { return add_raw(key, "null"); }

JsonObject& JsonObject::add_raw(const std::string& key, std::string json) {
    _fields.emplace_back(key, std::move(json));
    return *this;
}

std::string JsonObject::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < _fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += json_escape(_fields[i].first);
        out += ':';
        out += _fields[i].second;
    }
    out += '}';
    return out;
}

std::string json_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += items[i];
    }
    out += ']';
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char c : f) {
                if (c == '"') {
                    out += '"';
                }
                out += c;
            }
            out += '"';
        } else {
            out += f;
        }
    }
    return out;
}

}  // namespace pwsharp::cli
