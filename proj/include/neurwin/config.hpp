#ifndef NEURWIN_CONFIG_HPP
#define NEURWIN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace neurwin {

// Flat `key = value` configuration file with `#` comments. Keys must
// come from the documented set; anything else is rejected with its line
// number.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig load(const std::string& path);
  static KeyValueConfig parse(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::optional<int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<uint64_t> get_u64(const std::string& key) const;

  static const std::vector<std::string>& documented_keys();

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

}  // namespace neurwin

#endif  // NEURWIN_CONFIG_HPP
