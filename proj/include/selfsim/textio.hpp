#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selfsim {

// Line-oriented key-value format used by family and plan files:
//
//   # comment
//   interval = 0, 10
//   maps[0].ratio = 1/3
//   maps[0].translation = 0, 1
//
// Values are comma-separated tokens; keys may repeat (last one wins).
class KvFile {
public:
    static KvFile parse_text(const std::string& text);
    static KvFile load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    // Raw token list; throws std::out_of_range when the key is absent.
    const std::vector<std::string>& tokens(const std::string& key) const;
    std::optional<std::string> single(const std::string& key) const;

    const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }

private:
    std::map<std::string, std::vector<std::string>> entries_;
};

std::string trim_copy(const std::string& s);

}  // namespace selfsim
