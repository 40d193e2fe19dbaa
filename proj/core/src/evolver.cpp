#include "evoforge/evolver.hpp"

#include <fstream>

#include <json.hpp>

#include "evoforge/errors.hpp"
#include "evoforge/parallel.hpp"
#include "evoforge/sections.hpp"
#include "evoforge/templates.hpp"

namespace evoforge {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> section_items(const std::vector<ReplySection>& sections,
                                       std::initializer_list<std::string_view> names) {
    const ReplySection* section = find_section(sections, names);
    if (!section || is_na_body(section->body)) return {};
    return split_numbered_items(section->body);
}

std::optional<EvolvedOutput> parse_depth_reply(std::string_view reply) {
    // Models may echo the whole exchange; only the last Rewritten block counts.
    std::string lowered = to_lower(reply);
    std::size_t pos = lowered.rfind("### rewritten");
    std::string_view block = pos == std::string_view::npos ? reply : reply.substr(pos);

    auto sections = split_bold_sections(block);
    const ReplySection* prompt = find_section(sections, {"prompt"});
    if (!prompt || trim(prompt->body).empty()) return std::nullopt;

    EvolvedOutput out;
    out.prompt = prompt->body;
    out.elements.background = section_items(sections, {"background settings"});
    out.elements.objectives = section_items(sections, {"objectives", "objective"});
    out.elements.constraints = section_items(sections, {"constraints", "constrains"});
    if (out.elements.objectives.empty()) return std::nullopt;
    return out;
}

std::optional<EvolvedOutput> parse_fusion_reply(std::string_view reply) {
    auto sections = split_bold_sections(reply);
    const ReplySection* prompt = find_section(sections, {"fused prompt"});
    if (!prompt || trim(prompt->body).empty()) return std::nullopt;

    EvolvedOutput out;
    out.prompt = prompt->body;
    out.elements.background = section_items(sections, {"fused background settings"});
    out.elements.objectives = section_items(sections, {"fused objectives", "fused objective"});
    out.elements.constraints = section_items(sections, {"fused constraints", "fused constrains"});
    if (out.elements.objectives.empty()) return std::nullopt;
    return out;
}

// One evolution attempt, fully materialized off-pool; ids are assigned after
// the parallel phase so output order never depends on scheduling.
struct AttemptTask {
    EvolutionKind kind;
    std::optional<FusionKind> fusion_kind;
    std::vector<std::string> parents;
    RootDomain root_domain;
    std::string prompt;
};

struct AttemptOutcome {
    RecordStatus status = RecordStatus::BackendFailed;
    std::optional<EvolvedOutput> evolved;
    std::optional<std::string> response;
    std::optional<double> uncertainty;
};

AttemptOutcome run_attempt(const AttemptTask& task, Gateway& gateway,
                           const PerturbationConfig& scoring) {
    AttemptOutcome outcome;

    std::string reply;
    try {
        ChatRequest request;
        request.backend_id = kEvolverBackendId;
        request.prompt = task.prompt;
        reply = gateway.chat(request);
    } catch (const BackendError&) {
        outcome.status = RecordStatus::BackendFailed;
        return outcome;
    }

    outcome.evolved = parse_evolved(reply, task.kind);
    if (!outcome.evolved) {
        outcome.status = RecordStatus::ParseFailed;
        return outcome;
    }

    InstructionRecord child;
    child.id = "attempt";  // placeholder; real id assigned at merge time
    child.text = outcome.evolved->prompt;
    generate_response(child, gateway, kResponderBackendId);
    if (child.status == RecordStatus::BackendFailed || !child.response) {
        outcome.status = RecordStatus::BackendFailed;
        return outcome;
    }
    outcome.response = child.response;

    auto u = score_uncertainty(child, scoring, gateway, kScorerBackendId);
    if (!u) {
        // A child that cannot be scored cannot enter the sampling population.
        outcome.status = RecordStatus::BackendFailed;
        return outcome;
    }
    outcome.uncertainty = *u;
    outcome.status = RecordStatus::Viable;
    return outcome;
}

}  // namespace

std::string build_depth_prompt(const InstructionRecord& record) {
    if (!record.elements) {
        throw ValidationError("record " + record.id + " is not decomposed");
    }
    return render_template(depth_template(), {{"prompt", record.text},
                                              {"extracted", render_extracted(*record.elements)}});
}

std::string build_fusion_prompt(const InstructionRecord& a, const InstructionRecord& b) {
    if (!a.elements || !b.elements) {
        throw ValidationError("fusion parents must both be decomposed");
    }
    return render_template(fusion_template(),
                           {{"prompt1", a.text},
                            {"extracted1", render_extracted(*a.elements)},
                            {"prompt2", b.text},
                            {"extracted2", render_extracted(*b.elements)}});
}

std::optional<EvolvedOutput> parse_evolved(std::string_view reply, EvolutionKind kind) {
    return kind == EvolutionKind::Depth ? parse_depth_reply(reply) : parse_fusion_reply(reply);
}

RoundReport run_round(SeedPool& pool, const RoundPlan& plan, Gateway& gateway,
                      const PerturbationConfig& scoring, IdGenerator& ids, Rng& rng,
                      int workers) {
    plan.validate();
    const int next_round = pool.round() + 1;

    auto depth_ids = sample_depth_candidates(pool, plan, rng);
    auto pairs = sample_fusion_pairs(pool, plan, rng);

    // n_c counts attempts, so increments land before any evolver call.
    for (const auto& pair : pairs) record_fusion_use(pool, pair);

    std::vector<AttemptTask> tasks;
    tasks.reserve(depth_ids.size() + pairs.size());
    for (const auto& id : depth_ids) {
        const auto& rec = pool.at(id);
        tasks.push_back({EvolutionKind::Depth, std::nullopt, {id}, rec.root_domain,
                         build_depth_prompt(rec)});
    }
    for (const auto& pair : pairs) {
        const auto& a = pool.at(pair.a);
        const auto& b = pool.at(pair.b);
        tasks.push_back({EvolutionKind::Fusion, pair.kind, {pair.a, pair.b}, a.root_domain,
                         build_fusion_prompt(a, b)});
    }

    auto outcomes = parallel_map(tasks.size(), workers, [&](std::size_t i) {
        return run_attempt(tasks[i], gateway, scoring);
    });

    RoundReport report;
    report.round = next_round;
    report.attempted = static_cast<int>(tasks.size());

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const AttemptTask& task = tasks[i];
        const AttemptOutcome& outcome = outcomes[i];

        bool is_depth = task.kind == EvolutionKind::Depth;
        bool is_cross = task.fusion_kind == FusionKind::CrossDomain;
        (is_depth ? report.depth_attempted
                  : is_cross ? report.fusion_cross_attempted : report.fusion_in_attempted) += 1;

        InstructionRecord child;
        child.id = ids.next();
        child.source = is_depth ? Source::DepthEvolved : Source::Fused;
        child.parents = task.parents;
        child.root_domain = task.root_domain;  // fused child inherits a's domain
        child.round_created = next_round;
        child.status = outcome.status;
        if (outcome.evolved) {
            child.text = outcome.evolved->prompt;
            child.objective_count = static_cast<int>(outcome.evolved->elements.objectives.size());
            child.elements = outcome.evolved->elements;
        }
        child.response = outcome.response;
        child.uncertainty = outcome.uncertainty;

        switch (outcome.status) {
            case RecordStatus::Viable:
                report.viable += 1;
                (is_depth ? report.depth_viable
                          : is_cross ? report.fusion_cross_viable : report.fusion_in_viable) += 1;
                break;
            case RecordStatus::ParseFailed: report.parse_failed += 1; break;
            default: report.backend_failed += 1; break;
        }
        pool.insert(std::move(child));
    }

    pool.set_round(next_round);
    return report;
}

void append_round_report(const RoundReport& report, const std::filesystem::path& run_log) {
    if (run_log.has_parent_path()) std::filesystem::create_directories(run_log.parent_path());
    std::ofstream out(run_log, std::ios::binary | std::ios::app);
    if (!out) throw StoreError("cannot append run log " + run_log.string());
    ordered_json j;
    j["round"] = report.round;
    j["attempted"] = report.attempted;
    j["viable"] = report.viable;
    j["parse_failed"] = report.parse_failed;
    j["backend_failed"] = report.backend_failed;
    j["depth_attempted"] = report.depth_attempted;
    j["depth_viable"] = report.depth_viable;
    j["fusion_in_attempted"] = report.fusion_in_attempted;
    j["fusion_in_viable"] = report.fusion_in_viable;
    j["fusion_cross_attempted"] = report.fusion_cross_attempted;
    j["fusion_cross_viable"] = report.fusion_cross_viable;
    out << j.dump() << '\n';
}

std::vector<RoundReport> load_round_reports(const std::filesystem::path& run_log) {
    std::ifstream in(run_log, std::ios::binary);
    if (!in) throw StoreError("cannot open run log " + run_log.string());
    std::vector<RoundReport> reports;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            ordered_json j = ordered_json::parse(line);
            RoundReport r;
            r.round = j.at("round").get<int>();
            r.attempted = j.at("attempted").get<int>();
            r.viable = j.at("viable").get<int>();
            r.parse_failed = j.at("parse_failed").get<int>();
            r.backend_failed = j.at("backend_failed").get<int>();
            r.depth_attempted = j.value("depth_attempted", 0);
            r.depth_viable = j.value("depth_viable", 0);
            r.fusion_in_attempted = j.value("fusion_in_attempted", 0);
            r.fusion_in_viable = j.value("fusion_in_viable", 0);
            r.fusion_cross_attempted = j.value("fusion_cross_attempted", 0);
            r.fusion_cross_viable = j.value("fusion_cross_viable", 0);
            reports.push_back(r);
        } catch (const std::exception& e) {
            throw StoreError(std::string("bad round report: ") + e.what(), line_no);
        }
    }
    return reports;
}

}  // namespace evoforge
