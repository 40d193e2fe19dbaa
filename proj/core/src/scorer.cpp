#include "evoforge/scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "evoforge/errors.hpp"
#include "evoforge/rng.hpp"

namespace evoforge {
namespace {

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

}  // namespace

void PerturbationConfig::validate() const {
    if (n_perturbations < 1) throw ValidationError("n_perturbations must be >= 1");
    if (!(drop_fraction > 0.0 && drop_fraction < 1.0)) {
        throw ValidationError("drop_fraction must lie in (0,1)");
    }
}

void generate_response(InstructionRecord& record, Gateway& gateway,
                       const std::string& backend_id) {
    if (record.response) return;
    try {
        ChatRequest request;
        request.backend_id = backend_id;
        request.prompt = record.text;
        record.response = gateway.chat(request);
    } catch (const BackendError&) {
        record.status = RecordStatus::BackendFailed;
    }
}

std::optional<std::string> perturb(std::string_view instruction, const PerturbationConfig& config,
                                   int draw) {
    config.validate();
    auto words = split_words(instruction);
    if (words.size() < 2) return std::nullopt;

    auto n = static_cast<long>(words.size());
    long drops = std::lround(config.drop_fraction * static_cast<double>(n));
    drops = std::clamp(drops, 1L, n - 1);

    Rng rng = make_rng(config.rng_seed,
                       {rng_stream::kPerturbation, fnv1a(instruction),
                        static_cast<std::uint64_t>(draw)});

    // Partial Fisher-Yates: the first `drops` slots are the removed positions.
    std::vector<std::size_t> index(words.size());
    std::iota(index.begin(), index.end(), 0);
    for (long i = 0; i < drops; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                        index.size() - 1);
        std::swap(index[static_cast<std::size_t>(i)], index[pick(rng)]);
    }
    std::vector<bool> dropped(words.size(), false);
    for (long i = 0; i < drops; ++i) dropped[index[static_cast<std::size_t>(i)]] = true;

    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (dropped[i]) continue;
        if (!out.empty()) out.push_back(' ');
        out.append(words[i]);
    }
    return out;
}

double response_probability(const std::string& instruction, const std::string& response,
                            Gateway& gateway, const std::string& backend_id) {
    if (instruction.empty() || response.empty()) {
        throw ValidationError("response_probability needs non-empty instruction and response");
    }
    LogprobRequest request;
    request.backend_id = backend_id;
    request.instruction = instruction;
    request.response = response;
    LogprobResult result = gateway.score_logprobs(request);

    double sum = 0.0;
    for (double lp : result.token_logprobs) sum += lp;
    return std::exp(sum / static_cast<double>(result.token_logprobs.size()));
}

std::optional<double> score_uncertainty(InstructionRecord& record,
                                        const PerturbationConfig& config, Gateway& gateway,
                                        const std::string& backend_id) {
    config.validate();
    if (!record.response) throw ValidationError("record " + record.id + " has no response to score");

    if (split_words(record.text).size() < 2) {
        std::fprintf(stderr, "[scorer] %s: single-word instruction, skipping perturbation (u=0)\n",
                     record.id.c_str());
        record.uncertainty = 0.0;
        return 0.0;
    }

    try {
        double base = response_probability(record.text, *record.response, gateway, backend_id);
        double total_deviation = 0.0;
        for (int draw = 1; draw <= config.n_perturbations; ++draw) {
            auto variant = perturb(record.text, config, draw);
            double q = response_probability(*variant, *record.response, gateway, backend_id);
            total_deviation += std::fabs(base - q);
        }
        double u = total_deviation / static_cast<double>(config.n_perturbations);
        record.uncertainty = u;
        return u;
    } catch (const BackendError& e) {
        std::fprintf(stderr, "[scorer] %s: oracle failure, keeping previous uncertainty (%s)\n",
                     record.id.c_str(), e.what());
        return std::nullopt;
    } catch (const CapabilityError& e) {
        std::fprintf(stderr, "[scorer] %s: oracle failure, keeping previous uncertainty (%s)\n",
                     record.id.c_str(), e.what());
        return std::nullopt;
    }
}

}  // namespace evoforge
