#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

namespace etpa::cli {

// Deterministic float formatting: same bits in, same text out, locale-free.
std::string fmt(double v);    // %.9g, plenty for reported quantities
std::string fmt17(double v);  // %.17g, round-trip exact

/// Key = value report with the schema prologue. All command output funnels
/// through this so reruns stay byte-identical.
class Report {
 public:
  explicit Report(std::string_view command) {
    out_ << "# schema=1\ncommand = " << command << "\n";
  }
  void kv(std::string_view key, double v) { out_ << key << " = " << fmt(v) << "\n"; }
  void kv(std::string_view key, std::int64_t v) { out_ << key << " = " << v << "\n"; }
  void kv(std::string_view key, std::string_view v) { out_ << key << " = " << v << "\n"; }
  // without this overload a string literal would convert to bool, not string_view
  void kv(std::string_view key, const char* v) { kv(key, std::string_view(v)); }
  void kv(std::string_view key, bool v) { out_ << key << " = " << (v ? "true" : "false") << "\n"; }
  void blank() { out_ << "\n"; }
  void comment(std::string_view text) { out_ << "# " << text << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace etpa::cli
