#include "csolv/config.hpp"

#include <fstream>
#include <sstream>

namespace csolv {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(size_t line, const std::string& msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

uint64_t parse_uint(size_t line, const std::string& v, uint64_t lo, uint64_t hi) {
    try {
        size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
        if (x < lo || x > hi) fail(line, "value " + v + " out of range");
        return x;
    } catch (const config_error&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.pairs.clear();
    std::istringstream in(text);
    std::string raw, section;
    size_t lineno = 0;
    bool family_seen = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "group" && section != "frobenius" && section != "pairs" && section != "run" &&
                section != "output")
                fail(lineno, "unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty()) fail(lineno, "entry before any [section]");
        if (val.empty()) fail(lineno, "empty value for key '" + key + "'");
        if (section == "group") {
            if (key == "family") {
                try {
                    cfg.group.family = family_from_name(val);
                } catch (const family_error& e) {
                    fail(lineno, e.what());
                }
                family_seen = true;
            } else if (key == "p") {
                cfg.group.p = (uint32_t)parse_uint(lineno, val, 2, 97);
                if (!FieldTower::is_prime(cfg.group.p)) fail(lineno, "p must be prime");
            } else if (key == "k") cfg.group.k = (uint32_t)parse_uint(lineno, val, 1, 12);
            else if (key == "rank") cfg.group.rank = (uint32_t)parse_uint(lineno, val, 1, 5);
            else fail(lineno, "unknown key '" + key + "' in [group]");
        } else if (section == "frobenius") {
            if (key == "twist") {
                if (val != "none") fail(lineno, "only twist = none is supported");
                cfg.twist = val;
            } else fail(lineno, "unknown key '" + key + "' in [frobenius]");
        } else if (section == "pairs") {
            if (key == "pair") cfg.pairs.push_back(val);
            else if (key == "pairs") {
                if (val != "standard") fail(lineno, "pairs = standard is the only list shorthand");
                cfg.pairs.push_back("standard");
            } else fail(lineno, "unknown key '" + key + "' in [pairs]");
        } else if (section == "run") {
            if (key == "m") cfg.m = (uint32_t)parse_uint(lineno, val, 1, 12);
            else if (key == "m_max") cfg.m_max = (uint32_t)parse_uint(lineno, val, 1, 12);
            else if (key == "cap") cfg.cap = parse_uint(lineno, val, 1, 100000000);
            else if (key == "seed") cfg.seed = parse_uint(lineno, val, 0, UINT64_MAX / 2);
            else if (key == "threads") cfg.threads = (uint32_t)parse_uint(lineno, val, 1, 64);
            else fail(lineno, "unknown key '" + key + "' in [run]");
        } else if (section == "output") {
            if (key == "path") cfg.out_path = val;
            else fail(lineno, "unknown key '" + key + "' in [output]");
        }
    }
    if (!family_seen) throw config_error("config: [group] family is required");
    if (cfg.pairs.empty()) cfg.pairs.push_back("standard");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace csolv
