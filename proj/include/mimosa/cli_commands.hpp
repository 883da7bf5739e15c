#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mimosa {

inline constexpr const char* kMimosaVersion = "1.0.0";

struct CliOptions {
  std::string profile_path;
  std::optional<std::uint64_t> seed;  // overrides the profile seed
  std::string out_dir = ".";
  std::string inputs_path;   // optimize
  std::string results_path;  // metrics
};

// Exit codes: 0 ok, 1 verification failure, 2 configuration error.
int cmd_pretrain(const CliOptions& opt);
int cmd_optimize(const CliOptions& opt);
int cmd_verify(const CliOptions& opt);
int cmd_metrics(const CliOptions& opt);

}  // namespace mimosa
