#include "pesc/svp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pesc/error.hpp"

namespace pesc {

namespace {

std::string strip(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

} // namespace

int SvpDocument::command_count() const {
    int n = 0;
    for (const auto& c : classes) n += static_cast<int>(c.commands.size());
    return n;
}

SvpDocument parse_svp_document(std::string_view content) {
    SvpDocument doc;
    doc.raw = strip(std::string(content));

    std::istringstream in(doc.raw);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = strip(line);
        if (t.empty()) continue;
        if (t.rfind("##", 0) == 0) {
            std::string name = strip(t.substr(2));
            if (name.empty()) throw MalformedSvpFile("class header with empty name");
            doc.classes.push_back({name, {}});
            continue;
        }
        if (doc.classes.empty()) {
            throw MalformedSvpFile("command line before the first '## <class>' header: " + t);
        }
        auto& cmds = doc.classes.back().commands;
        if (std::find(cmds.begin(), cmds.end(), t) != cmds.end()) {
            throw MalformedSvpFile("duplicate command in class '" + doc.classes.back().name +
                                   "': " + t);
        }
        cmds.push_back(t);
    }
    if (doc.classes.empty()) {
        throw MalformedSvpFile("document contains no vulnerability classes");
    }
    return doc;
}

SvpDocument load_svp_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedSvpFile("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_svp_document(buf.str());
}

} // namespace pesc
