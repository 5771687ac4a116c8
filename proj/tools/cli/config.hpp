#pragma once

#include "fracstep/model.hpp"
#include "fracstep/stepper.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace fracstep::cli {

/// Bad config text or flag value; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Reads `key = value` lines. `#` starts a comment; blank lines are skipped.
/// Keys under `run.` (manifest bookkeeping) are dropped.
KeyValues parse_key_values(const std::string& text);
KeyValues read_config_file(const std::string& path);

/// Decimal number with a decimal point. Commas are rejected.
double parse_number(const std::string& key, const std::string& text);
int parse_int(const std::string& key, const std::string& text);

/// A resolved run: the problem plus the stepping options carried in config.
struct RunConfig {
    ProblemSpec spec = reference_problem(2.0, 1.0);
    int corrector_iterations = 1;
    double eps_reg = 1e-12;
    int snapshot_stride = 0;
};

/// Applies every recognised key on top of `base`; unknown keys throw.
RunConfig apply_key_values(const KeyValues& kv, RunConfig base = {});

/// `gaussian:amp=A,center=C,sigma=S`, `constant:value=V`, `sine:amp=A,mode=m`, `zero`.
/// Writes the matching `<prefix>.*` keys into kv.
void apply_profile_flag(KeyValues& kv, const std::string& prefix, const std::string& flag);

/// Key-value text that apply_key_values() turns back into the same RunConfig.
std::string to_config_text(const RunConfig& config);

OperatorMode parse_operator_mode(const std::string& text);
std::string to_string(OperatorMode mode);

} // namespace fracstep::cli
