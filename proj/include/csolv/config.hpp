#pragma once

#include "csolv/groupkit.hpp"

#include <string>
#include <vector>

namespace csolv {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
  Line-oriented configuration: [section] headers with key = value entries,
  lists by key repetition, '#' comments. Unknown sections or keys are
  rejected with the offending line number.
*/
struct RunConfig {
    GroupSpec group;
    std::string twist = "none";
    std::vector<std::string> pairs = {"standard"}; // "standard" expands to the family list
    uint32_t m = 1;
    uint32_t m_max = 0; // 0: family default when shintani runs
    uint64_t cap = 2000000;
    uint64_t seed = 0;
    uint32_t threads = 1;
    std::string out_path = "-";

    uint64_t q() const {
        uint64_t r = 1;
        for (uint32_t i = 0; i < group.k; ++i) r *= group.p;
        return r;
    }
    uint32_t default_m_max() const { return group.family == Family::BorelSL3 ? 3 : 6; }
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

} // namespace csolv
