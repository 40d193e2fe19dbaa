#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "evoforge/gateway/gateway.hpp"
#include "evoforge/record.hpp"

namespace evoforge {

inline constexpr const char* kResponderBackendId = "responder";
inline constexpr const char* kScorerBackendId = "scorer";

struct PerturbationConfig {
    int n_perturbations = 5;    // N_U
    double drop_fraction = 0.2; // share of words removed per perturbation
    std::uint64_t rng_seed = 0;

    void validate() const;  // n >= 1, fraction in (0,1)
};

// Fills record.response from the responder backend; does nothing when a
// response is already present. Backend failure settles status backend_failed.
void generate_response(InstructionRecord& record, Gateway& gateway,
                       const std::string& backend_id = kResponderBackendId);

// Random word omission: removes round(drop_fraction * word_count) words
// (at least 1, always leaving at least 1) at positions drawn without
// replacement. Deterministic in (seed, instruction, draw). Returns nullopt
// for instructions of fewer than 2 words: the skip-perturbation signal.
std::optional<std::string> perturb(std::string_view instruction, const PerturbationConfig& config,
                                   int draw);

// q = exp(mean per-token log-probability of response given instruction),
// the geometric-mean token probability, in (0, 1].
double response_probability(const std::string& instruction, const std::string& response,
                            Gateway& gateway, const std::string& backend_id = kScorerBackendId);

// Uncertainty u = (1/N_U) * sum_j |q - q_j| over the perturbed variants.
// On success the value is stored on the record and returned. An oracle
// failure leaves the record's previous uncertainty in place and returns
// nullopt. Single-word instructions score u = 0 (flagged in the log).
std::optional<double> score_uncertainty(InstructionRecord& record,
                                        const PerturbationConfig& config, Gateway& gateway,
                                        const std::string& backend_id = kScorerBackendId);

}  // namespace evoforge
