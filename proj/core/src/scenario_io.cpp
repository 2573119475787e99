#include "edca/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

namespace edca {

namespace {

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const Section& sec, const std::string& key) {
  const auto& e = sec.at(key);
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("bad numeric value for key '" + key + "': " + e.value, e.line);
  }
}

int to_int(const Section& sec, const std::string& key) {
  const double v = to_double(sec, key);
  const int i = static_cast<int>(v);
  if (v != i) throw ConfigError("key '" + key + "' must be an integer", sec.at(key).line);
  return i;
}

class SectionReader {
 public:
  SectionReader(Section& sec, std::string name, int line)
      : sec_(sec), name_(std::move(name)), line_(line) {}

  bool has(const std::string& key) {
    auto it = sec_.find(key);
    if (it == sec_.end()) return false;
    it->second.used = true;
    return true;
  }
  double num(const std::string& key, double fallback) {
    return has(key) ? to_double(sec_, key) : fallback;
  }
  double num_required(const std::string& key) {
    if (!has(key)) throw ConfigError("section [" + name_ + "] is missing key '" + key + "'", line_);
    return to_double(sec_, key);
  }
  int integer(const std::string& key, int fallback) {
    return has(key) ? to_int(sec_, key) : fallback;
  }
  int integer_required(const std::string& key) {
    if (!has(key)) throw ConfigError("section [" + name_ + "] is missing key '" + key + "'", line_);
    return to_int(sec_, key);
  }
  std::string str(const std::string& key, const std::string& fallback) {
    return has(key) ? sec_.at(key).value : fallback;
  }
  void reject_unknown() const {
    for (const auto& [key, e] : sec_)
      if (!e.used) throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]", e.line);
  }

 private:
  Section& sec_;
  std::string name_;
  int line_;
};

} // namespace

Scenario parse_scenario(std::istream& in) {
  Section top, phy;
  std::vector<Section> acs;
  std::vector<int> ac_lines;
  int phy_line = 0;

  Section* current = &top;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "phy") {
        current = &phy;
        phy_line = line_no;
      } else if (name == "ac") {
        acs.emplace_back();
        ac_lines.push_back(line_no);
        current = &acs.back();
      } else {
        throw ConfigError("unknown section [" + name + "]", line_no);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("expected 'key = value'", line_no);
    if (current->count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    (*current)[key] = {value, line_no, false};
  }

  Scenario s;

  SectionReader t(top, "top", 0);
  const std::string mode = t.str("access_mode", "basic");
  if (mode == "basic")
    s.access_mode = AccessMode::basic;
  else if (mode == "rts_cts")
    s.access_mode = AccessMode::rts_cts;
  else
    throw ConfigError("access_mode must be 'basic' or 'rts_cts', got '" + mode + "'",
                      top.count("access_mode") ? top["access_mode"].line : 0);
  const std::string smode = t.str("station_mode", "heterogeneous");
  if (smode == "heterogeneous")
    s.station_mode = StationMode::heterogeneous;
  else if (smode == "multi_ac")
    s.station_mode = StationMode::multi_ac;
  else
    throw ConfigError("station_mode must be 'heterogeneous' or 'multi_ac', got '" + smode + "'",
                      top.count("station_mode") ? top["station_mode"].line : 0);
  t.reject_unknown();

  SectionReader p(phy, "phy", phy_line);
  s.phy.t_slot = p.num("t_slot_us", 9) * 1e-6;
  s.phy.sifs = p.num("sifs_us", 10) * 1e-6;
  s.phy.prop_delay = p.num("prop_delay_us", 1) * 1e-6;
  s.phy.data_rate = p.num("data_rate_mbps", 54) * 1e6;
  s.phy.basic_rate = p.num("basic_rate_mbps", 6) * 1e6;
  s.phy.phy_overhead = p.num("phy_overhead_us", 26) * 1e-6;
  s.phy.mac_header_bits = static_cast<int>(p.num("mac_header_bytes", 30) * 8);
  s.phy.t_ack = p.num("ack_us", 50) * 1e-6;
  s.phy.t_rts = p.num("rts_us", 58) * 1e-6;
  s.phy.t_cts = p.num("cts_us", 50) * 1e-6;
  p.reject_unknown();

  if (acs.empty()) throw ConfigError("no [ac] sections found", line_no);
  for (size_t i = 0; i < acs.size(); ++i) {
    SectionReader a(acs[i], "ac", ac_lines[i]);
    AcConfig ac;
    ac.name = a.str("name", "AC" + std::to_string(i));
    ac.aifsn = a.integer_required("aifsn");
    ac.cw_min = a.integer_required("cw_min");
    ac.m = a.integer_required("cw_stages");
    ac.retry_limit = a.integer_required("retry_limit");
    ac.queue_size = a.integer_required("queue_size");
    ac.payload_bits = a.integer_required("payload_bytes") * 8;
    ac.flows = a.integer_required("flows");
    if (a.has("txop_limit_ms") && a.has("txop_limit_us"))
      throw ConfigError("give txop_limit_ms or txop_limit_us, not both", ac_lines[i]);
    ac.txop_limit = a.num("txop_limit_ms", 0) * 1e-3 + a.num("txop_limit_us", 0) * 1e-6;
    if (a.has("offered_load_mbps") && a.has("lambda_pps"))
      throw ConfigError("give offered_load_mbps or lambda_pps, not both", ac_lines[i]);
    if (a.has("offered_load_mbps"))
      ac.set_offered_load(to_double(acs[i], "offered_load_mbps") * 1e6);
    else
      ac.lambda = a.num("lambda_pps", 0);
    a.reject_unknown();
    if (ac.flows >= 1) s.acs.push_back(ac);
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_scenario(in);
}

} // namespace edca
