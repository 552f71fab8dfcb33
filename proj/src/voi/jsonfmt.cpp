#include "voi/jsonfmt.hpp"

#include <cmath>
#include <cstdio>

namespace voi {

std::string format_double(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    if (x == static_cast<long long>(x) && std::abs(x) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(x));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void dump(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
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
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars = true;
            for (const auto& v : j)
                if (v.is_structured()) scalars = false;
            if (scalars) {
                out += "[";
                bool first = true;
                for (const auto& v : j) {
                    if (!first) out += ", ";
                    first = false;
                    dump(v, out, indent, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    dump(j, out, indent, 0);
    out += "\n";
    return out;
}

std::string csv_field(const std::string& raw) {
    bool needs_quote = false;
    for (char c : raw)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs_quote = true;
    if (!needs_quote) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace voi
