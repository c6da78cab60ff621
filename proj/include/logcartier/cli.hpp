#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace logcartier {

enum class ReportFormat { Human, Structured };

// Ordered key/value records plus named pass/fail checks.
class Report {
 public:
  void set(const std::string& key, const std::string& value);
  void check(const std::string& name, bool passed);
  void skip(const std::string& name, const std::string& reason);

  std::size_t checks() const noexcept { return checks_.size(); }
  std::size_t failed() const;
  const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }

  void write(std::ostream& os, ReportFormat format) const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
  std::vector<std::pair<std::string, bool>> checks_;
};

inline constexpr const char* kReportSchema = "logcartier-report/1";

// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logcartier
