#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace speclab {

using json = nlohmann::ordered_json;

namespace detail {

inline void dump17_rec(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += json(it.key()).dump();
                out += ": ";
                dump17_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump17_rec(el, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            // fixed 17-significant-digit rendering so reports are byte-stable
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace detail

// Serializer used for every report this library writes: insertion-ordered keys
// and %.17g floats, so identical inputs give identical bytes.
inline std::string dump17(const json& j, int indent = 2) {
    std::string out;
    detail::dump17_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

} // namespace speclab
