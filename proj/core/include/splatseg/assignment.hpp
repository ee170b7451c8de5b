#pragma once

#include "splatseg/contribution.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace splatseg {

enum class AssignmentMode { kBinary, kScene };

std::string to_string(AssignmentMode mode);
AssignmentMode parse_assignment_mode(const std::string& text);

/// Columns whose total contribution is below this are treated as unobserved.
inline constexpr double kUnobservedThreshold = 1e-12;

/// Object membership of every Gaussian.
///
/// Binary mode stores one 0/1 label per Gaussian (object 1 = foreground).
/// Scene mode stores an E x N 0/1 grid; row 0 is the complement of the union
/// of the object rows. Object rows may overlap only when gamma < 0.
struct Assignment {
    AssignmentMode mode = AssignmentMode::kBinary;
    double gamma = 0.0;
    std::uint32_t num_objects = 2;
    std::uint32_t num_gaussians = 0;
    std::vector<std::uint8_t> membership; // binary: N labels; scene: E * N

    bool is_member(std::uint32_t object, std::uint32_t i) const;
    /// N-long 0/1 mask of Gaussians belonging to `object`.
    std::vector<std::uint8_t> members_of(std::uint32_t object) const;
    /// Member count for every object id 0..E-1.
    std::vector<std::size_t> member_counts() const;
};

/// Background-biased majority vote for E = 2:
/// P_i = 1 iff A1/(A0+A1) > A0/(A0+A1) + gamma. Ties and unobserved
/// Gaussians go to background. One pass over A, independent per column.
///
/// Throws ContractError if E != 2, InputError if gamma is outside [-1, 1].
Assignment assign_binary(const ContributionMatrix& a, double gamma);

/// Every object t >= 1 against the pooled rest (all other rows, background
/// included), with the same normalization, bias and tie rule as assign_binary.
///
/// Throws ContractError if E < 2, InputError if gamma is outside [-1, 1].
Assignment assign_scene(const ContributionMatrix& a, double gamma);

/// One-line JSON header {"mode", "gamma", "E", "N"} terminated by '\n', then
/// the membership bytes (N for binary, E * N for scene).
void save_assignment(const Assignment& assignment, const std::filesystem::path& path);
Assignment load_assignment(const std::filesystem::path& path);
std::string serialize_assignment(const Assignment& assignment);
Assignment parse_assignment(const std::string& bytes, const std::string& origin = "<memory>");

} // namespace splatseg
