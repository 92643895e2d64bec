#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "bfgen/fitness.hpp"

namespace bfgen {

inline constexpr int kTaskFileVersion = 1;

/// Malformed task document. field() names the offending key path, e.g. "cases[2].expected".
class TaskFileError : public std::runtime_error {
public:
    TaskFileError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

FitnessSpec parse_task(const std::string& json_text);
FitnessSpec load_task_file(const std::filesystem::path& path);
/// Serializes a spec built from data (custom evaluators cannot be written).
std::string dump_task(const FitnessSpec& spec);

}  // namespace bfgen
