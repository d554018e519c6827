#include "json_out.hpp"

#include <fmt/format.h>

#include <cmath>

namespace wcorr::cli {

namespace {

void write(const Json& v, std::string& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close(2 * static_cast<std::size_t>(depth), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                write(it.value(), out, depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) out += ",\n";
                out += pad;
                write(v[i], out, depth + 1);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = v.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    return fmt::format("{}", x);
}

std::string dump_json(const Json& value) {
    std::string out;
    write(value, out, 0);
    out += '\n';
    return out;
}

}  // namespace wcorr::cli
