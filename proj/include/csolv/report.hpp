#pragma once

#include <string>
#include <vector>

namespace csolv {

/*
  Report accumulator. Human-readable lines come first; the machine section is
  line-oriented and bit-exact: `VALUE <dotted.path> = <serialization>` and
  `CHECK <name> PASS|FAIL`.
*/
class Report {
  public:
    void note(const std::string& line) { human_.push_back(line); }
    void value(const std::string& path, const std::string& serialized) {
        machine_.push_back("VALUE " + path + " = " + serialized);
    }
    void check(const std::string& name, bool ok) {
        machine_.push_back(std::string("CHECK ") + name + (ok ? " PASS" : " FAIL"));
        if (!ok) failed_ = true;
    }
    bool all_pass() const { return !failed_; }
    std::string render() const {
        std::string out;
        for (const auto& l : human_) out += l + "\n";
        out += "--- machine ---\n";
        for (const auto& l : machine_) out += l + "\n";
        return out;
    }
    std::string machine_section() const {
        std::string out;
        for (const auto& l : machine_) out += l + "\n";
        return out;
    }

  private:
    std::vector<std::string> human_, machine_;
    bool failed_ = false;
};

} // namespace csolv
