#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "netab/experiment.hpp"

namespace netab {

// Study configuration files are flat "key = value" text; '#' starts a
// comment. Recognised keys:
//
//   graph           path to an edge-list file (omit to use a generated graph)
//   er_nodes        nodes of the generated Erdos-Renyi graph
//   er_mean_degree  its expected degree
//   er_seed         its seed
//   model           linear | probit | logistic | tau-exposure | tau-exposure-binary
//   beta            semicolon-separated triples, e.g. "0,1,0; 0,1,1"
//   sigma, tau, replications, treatment_prob, seed, alpha, threads
//   estimators      comma-separated subset of sutva, tau-dim, linear, tau-ols, probit, logit
//   rerandomize     true | false
//
// Unknown keys and malformed values raise ValidationError naming the line.

/// Applies one setting; relative graph paths resolve against `base_dir`.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::string& base_dir = {});

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir = {});
ExperimentConfig load_config(const std::string& path);

/// Parses "b0,b1,b2".
Vec3 parse_beta(std::string_view text);

}  // namespace netab
