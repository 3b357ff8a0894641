#include "becbell/csv_writer.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "becbell/errors.hpp"

namespace becbell {

std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string sweep_to_csv(const SweepResult& result, const RunConfig& config) {
    const std::size_t axis_count = result.spec.axes.size();
    if (axis_count == 0 || axis_count > 2) {
        throw StructuralError("csv: sweep must have one or two axes");
    }

    std::ostringstream out;
    char hash_text[17];
    std::snprintf(hash_text, sizeof(hash_text), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    out << "# becbell sweep\n";
    out << "# config_hash: " << hash_text << "\n";
    out << "# config: " << config.canonical << "\n";

    for (std::size_t i = 0; i < axis_count; ++i) {
        if (i) out << ',';
        out << axis_name(result.spec.axes[i].axis);
    }
    for (const auto& output : config.outputs) out << ',' << output;
    out << ",stable,error_code\n";

    for (const SweepPoint& point : result.points) {
        for (std::size_t i = 0; i < axis_count; ++i) {
            if (i) out << ',';
            out << format_double(point.coords[i]);
        }
        for (const auto& output : config.outputs) {
            out << ',';
            if (point.error_code == 0) {
                out << format_double(output == "discord" ? point.measures.discord
                                                         : point.measures.log_negativity);
            }
        }
        out << ',' << (point.stable ? '1' : '0') << ',' << point.error_code << "\n";
    }
    return out.str();
}

}  // namespace becbell
