#ifndef LFCNORM_IO_HPP
#define LFCNORM_IO_HPP

#include <string>

#include "lfcnorm/normlab.hpp"
#include "lfcnorm/params.hpp"
#include "lfcnorm/vectors.hpp"

namespace lfcnorm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One CLI invocation: which command, which files, which config. The
/// timestamp is diagnostic only and never reaches an output stream, so
/// repeated runs stay byte-identical.
struct RunManifest {
  std::string command;
  Config config;
  std::vector<std::string> input_paths;
  std::string output_path;
  long long timestamp = 0;  // seconds since the epoch

  static RunManifest make(std::string command, Config config,
                          std::vector<std::string> input_paths,
                          std::string output_path);
  /// Throws ParseError if a referenced input is missing or unreadable;
  /// the config is validated on construction.
  void check_inputs() const;
};

/// Config JSON: {"p","q","epsilon","smoothness_order","k_max",
/// "bisect_tol","seed"}; absent keys fall back to defaults, q defaults to
/// p/2. Throws ParseError on malformed input or invalid values.
Config parse_config_json(const std::string& text);
std::string config_to_json(const Config& cfg);

/// Vector JSON: {"entries": [["label", value], ...]}; values must be
/// finite and nonzero, labels unique.
SparseVector parse_vector_json(const std::string& text);
std::string vector_to_json(const SparseVector& x);

/// {"delta": [...], "theta": [...], "epsilon": e} truncated at the
/// horizon.
std::string schedule_to_json(const ParamSchedule& s);

std::string report_to_json(const NormReport& rep);

/// CSV rows t,p_norm,nu,final_norm at 17 significant digits.
std::string ray_csv(const NormEvaluator& ev, const SparseVector& x,
                    const SparseVector& d, long steps, double t_max);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lfcnorm

#endif  // LFCNORM_IO_HPP
