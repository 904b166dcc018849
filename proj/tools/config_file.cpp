#include "config_file.hpp"

#include <fstream>

#include "qcc/errors.hpp"

namespace qcc::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open config file");

    ConfigFile cfg;
    std::map<std::string, std::string>* current = &cfg.globals;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(path + ":" + std::to_string(lineno) + ": unterminated section");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name == "global") {
                current = &cfg.globals;
            } else if (name == "iteration") {
                cfg.iterations.emplace_back();
                current = &cfg.iterations.back();
            } else {
                if (cfg.sections.count(name))
                    throw ParseError(path + ":" + std::to_string(lineno) +
                                     ": duplicate section [" + name + "]");
                current = &cfg.sections[name];
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
        (*current)[key] = value;
    }
    return cfg;
}

}  // namespace qcc::cli
