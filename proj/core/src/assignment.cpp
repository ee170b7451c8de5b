#include "splatseg/assignment.hpp"

#include "splatseg/errors.hpp"
#include "splatseg/image_io.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>

namespace splatseg {
namespace {

void check_gamma(double gamma) {
    if (!(gamma >= -1.0 && gamma <= 1.0)) {
        throw InputError(fmt::format("gamma {} is outside [-1, 1]", gamma));
    }
}

// L1-normalize (background, object), bias the background, strict argmax.
bool object_wins(double background, double object, double gamma) {
    const double total = background + object;
    if (!(total >= kUnobservedThreshold)) return false;
    return object / total > background / total + gamma;
}

} // namespace

std::string to_string(AssignmentMode mode) { return mode == AssignmentMode::kBinary ? "binary" : "scene"; }

AssignmentMode parse_assignment_mode(const std::string& text) {
    if (text == "binary") return AssignmentMode::kBinary;
    if (text == "scene") return AssignmentMode::kScene;
    throw InputError(fmt::format("unknown assignment mode '{}' (expected binary or scene)", text));
}

bool Assignment::is_member(std::uint32_t object, std::uint32_t i) const {
    if (mode == AssignmentMode::kBinary) {
        return (membership[i] != 0) == (object == 1);
    }
    return membership[static_cast<std::size_t>(object) * num_gaussians + i] != 0;
}

std::vector<std::uint8_t> Assignment::members_of(std::uint32_t object) const {
    if (object >= num_objects) {
        throw InputError(fmt::format("object id {} is not in the assignment (E = {})", object, num_objects));
    }
    std::vector<std::uint8_t> out(num_gaussians);
    for (std::uint32_t i = 0; i < num_gaussians; ++i) out[i] = is_member(object, i) ? 1 : 0;
    return out;
}

std::vector<std::size_t> Assignment::member_counts() const {
    std::vector<std::size_t> counts(num_objects, 0);
    for (std::uint32_t e = 0; e < num_objects; ++e) {
        for (std::uint32_t i = 0; i < num_gaussians; ++i) counts[e] += is_member(e, i) ? 1 : 0;
    }
    return counts;
}

Assignment assign_binary(const ContributionMatrix& a, double gamma) {
    if (a.num_objects() != 2) {
        throw ContractError(fmt::format("binary assignment needs E = 2, got E = {}", a.num_objects()));
    }
    check_gamma(gamma);
    Assignment out;
    out.mode = AssignmentMode::kBinary;
    out.gamma = gamma;
    out.num_objects = 2;
    out.num_gaussians = a.num_gaussians();
    out.membership.resize(a.num_gaussians());
    const auto background = a.row(0);
    const auto object = a.row(1);
    for (std::uint32_t i = 0; i < a.num_gaussians(); ++i) {
        out.membership[i] = object_wins(background[i], object[i], gamma) ? 1 : 0;
    }
    return out;
}

Assignment assign_scene(const ContributionMatrix& a, double gamma) {
    if (a.num_objects() < 2) {
        throw ContractError(fmt::format("scene assignment needs E >= 2, got E = {}", a.num_objects()));
    }
    check_gamma(gamma);
    const std::uint32_t e_count = a.num_objects();
    const std::uint32_t n = a.num_gaussians();

    Assignment out;
    out.mode = AssignmentMode::kScene;
    out.gamma = gamma;
    out.num_objects = e_count;
    out.num_gaussians = n;
    out.membership.assign(static_cast<std::size_t>(e_count) * n, 0);

    std::vector<double> column_sum(n, 0.0);
    for (std::uint32_t e = 0; e < e_count; ++e) {
        const auto row = a.row(e);
        for (std::uint32_t i = 0; i < n; ++i) column_sum[i] += row[i];
    }

    std::uint8_t* background_row = out.membership.data();
    std::fill(background_row, background_row + n, 1);
    for (std::uint32_t t = 1; t < e_count; ++t) {
        const auto row = a.row(t);
        std::uint8_t* labels = out.membership.data() + static_cast<std::size_t>(t) * n;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (column_sum[i] < kUnobservedThreshold) continue;
            const double object = row[i];
            if (object_wins(column_sum[i] - object, object, gamma)) {
                labels[i] = 1;
                background_row[i] = 0;
            }
        }
    }
    return out;
}

std::string serialize_assignment(const Assignment& assignment) {
    const nlohmann::json header = {{"mode", to_string(assignment.mode)},
                                   {"gamma", assignment.gamma},
                                   {"E", assignment.num_objects},
                                   {"N", assignment.num_gaussians}};
    std::string bytes = header.dump();
    bytes.push_back('\n');
    bytes.append(reinterpret_cast<const char*>(assignment.membership.data()), assignment.membership.size());
    return bytes;
}

Assignment parse_assignment(const std::string& bytes, const std::string& origin) {
    const std::size_t newline = bytes.find('\n');
    if (newline == std::string::npos) throw FormatError(fmt::format("{}: assignment header missing", origin));
    nlohmann::json header;
    Assignment out;
    try {
        header = nlohmann::json::parse(bytes.substr(0, newline));
        out.mode = parse_assignment_mode(header.at("mode").get<std::string>());
        out.gamma = header.at("gamma").get<double>();
        out.num_objects = header.at("E").get<std::uint32_t>();
        out.num_gaussians = header.at("N").get<std::uint32_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(fmt::format("{}: bad assignment header: {}", origin, e.what()));
    } catch (const InputError& e) {
        throw FormatError(fmt::format("{}: {}", origin, e.what()));
    }
    if (out.mode == AssignmentMode::kBinary && out.num_objects != 2) {
        throw FormatError(fmt::format("{}: binary assignment must have E = 2", origin));
    }
    const std::size_t expected =
        out.mode == AssignmentMode::kBinary ? out.num_gaussians : static_cast<std::size_t>(out.num_objects) * out.num_gaussians;
    if (bytes.size() - newline - 1 != expected) {
        throw FormatError(fmt::format("{}: payload has {} bytes, expected {}", origin, bytes.size() - newline - 1, expected));
    }
    out.membership.assign(bytes.begin() + static_cast<std::ptrdiff_t>(newline) + 1, bytes.end());
    for (const std::uint8_t v : out.membership) {
        if (v > 1) throw DataError(fmt::format("{}: membership bytes must be 0 or 1", origin));
    }
    return out;
}

void save_assignment(const Assignment& assignment, const std::filesystem::path& path) {
    write_file(path, serialize_assignment(assignment));
}

Assignment load_assignment(const std::filesystem::path& path) { return parse_assignment(read_file(path), path.string()); }

} // namespace splatseg
