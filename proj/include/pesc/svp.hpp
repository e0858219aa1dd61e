#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pesc {

// Curated checklist of enumeration commands grouped by vulnerability class,
// embedded verbatim in the command prompt when the svp treatment is on.
// File format: UTF-8, line oriented; "## <class name>" starts a class, every
// following non-blank line is one command.
struct SvpDocument {
    struct ClassEntry {
        std::string name;
        std::vector<std::string> commands;
    };

    std::vector<ClassEntry> classes;
    std::string raw;  // file content (trailing whitespace stripped); rendered as-is

    int command_count() const;
    int class_count() const { return static_cast<int>(classes.size()); }
};

// Throws MalformedSvpFile on structural problems (no classes, command before
// the first header, duplicate command within a class).
SvpDocument parse_svp_document(std::string_view content);
SvpDocument load_svp_document(const std::filesystem::path& path);

} // namespace pesc
