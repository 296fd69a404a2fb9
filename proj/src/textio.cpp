#include "selfsim/textio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace selfsim {

std::string trim_copy(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

KvFile KvFile::parse_text(const std::string& text) {
    KvFile out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim_copy(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim_copy(t.substr(0, eq));
        std::string value = t.substr(eq + 1);
        std::vector<std::string> toks;
        std::string item;
        std::istringstream vs(value);
        while (std::getline(vs, item, ',')) {
            std::string tok = trim_copy(item);
            if (!tok.empty()) toks.push_back(tok);
        }
        out.entries_[key] = std::move(toks);
    }
    return out;
}

KvFile KvFile::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_text(ss.str());
}

const std::vector<std::string>& KvFile::tokens(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::out_of_range("missing key: " + key);
    return it->second;
}

std::optional<std::string> KvFile::single(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || it->second.size() != 1) return std::nullopt;
    return it->second[0];
}

}  // namespace selfsim
