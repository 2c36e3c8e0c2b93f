#include "persim/orchestrator.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "persim/catalog.hpp"
#include "persim/digest.hpp"
#include "persim/error.hpp"
#include "persim/generation.hpp"
#include "persim/joint_table.hpp"
#include "persim/jsonl.hpp"
#include "persim/manifest.hpp"
#include "persim/metrics.hpp"
#include "persim/prompts.hpp"
#include "persim/sentiment.hpp"
#include "persim/survey.hpp"

namespace persim {

namespace {

// ----- small shared helpers ---------------------------------------------

std::string sanitize_component(const std::string &name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out.empty() ? "_" : out;
}

// Shortest round-trip decimal form, so regenerated CSVs are byte-stable.
std::string csv_number(double value) { return Json(value).dump(); }

void require_csv_safe(const std::string &field, const char *what) {
    if (field.find(',') != std::string::npos || field.find('\n') != std::string::npos) {
        throw DataError(std::string{what} + " '" + field +
                        "' contains a comma or newline and cannot be written to CSV");
    }
}

std::string run_relative(const std::filesystem::path &run_dir,
                         const std::filesystem::path &path) {
    return std::filesystem::relative(path, run_dir).generic_string();
}

// ----- artifact layout ----------------------------------------------------

std::filesystem::path metas_file(const std::filesystem::path &run_dir) {
    return run_dir / "metas" / "metas.jsonl";
}

std::filesystem::path personas_file(const std::filesystem::path &run_dir,
                                    const std::string &generator, PersonaTier tier) {
    return run_dir / "personas" / sanitize_component(generator) /
           (tier_file_stem(tier) + ".jsonl");
}

std::filesystem::path records_file(const std::filesystem::path &run_dir,
                                   const std::string &generator, PersonaTier tier,
                                   const std::string &simulator) {
    return run_dir / "records" / sanitize_component(generator) / tier_file_stem(tier) /
           (sanitize_component(simulator) + ".jsonl");
}

std::filesystem::path audit_path_for(const std::filesystem::path &artifact) {
    std::filesystem::path path = artifact;
    path.replace_extension(".audit.jsonl");
    return path;
}

// One persona population: the sampled metas, or one generator x tier output.
struct PersonaCell {
    std::string generator; // kCensusLabel for the sampled population
    PersonaTier tier = PersonaTier::Meta;
    const BackendSpec *generator_spec = nullptr; // null for the census cell
};

std::vector<PersonaCell> persona_cells(const RunConfig &config) {
    std::vector<PersonaCell> cells;
    cells.push_back(PersonaCell{kCensusLabel, PersonaTier::Meta, nullptr});
    for (const auto &generator : config.generators) {
        for (PersonaTier tier : config.tiers) {
            cells.push_back(PersonaCell{generator.name, tier, &generator});
        }
    }
    return cells;
}

std::vector<Persona> load_cell_personas(const std::filesystem::path &run_dir,
                                        const PersonaCell &cell) {
    if (cell.tier == PersonaTier::Meta) {
        std::vector<Persona> personas;
        for (auto &meta : read_meta_jsonl(metas_file(run_dir))) {
            personas.push_back(std::move(meta));
        }
        return personas;
    }
    return read_persona_jsonl(personas_file(run_dir, cell.generator, cell.tier));
}

// ----- lenient audit reading ----------------------------------------------

// Append-only audit logs may end in a torn line if a run was interrupted
// mid-write.  Drop such a trailing fragment (rewriting the file without it)
// and fail on malformed lines anywhere else.
std::vector<Json> load_audit(const std::filesystem::path &path) {
    std::vector<Json> rows;
    if (!std::filesystem::exists(path)) {
        return rows;
    }
    const std::string text = read_text_file(path);
    std::size_t pos = 0;
    std::size_t good_end = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        ++line_no;
        auto end = text.find('\n', pos);
        const bool has_newline = end != std::string::npos;
        if (!has_newline) {
            end = text.size();
        }
        const std::string line = text.substr(pos, end - pos);
        if (!line.empty()) {
            Json row = Json::parse(line, nullptr, false);
            if (row.is_discarded()) {
                if (has_newline && end + 1 < text.size()) {
                    throw DataError(path.string() + ":" + std::to_string(line_no) +
                                    ": malformed audit line");
                }
                break; // torn trailing write; discard the fragment
            }
            rows.push_back(std::move(row));
        }
        pos = has_newline ? end + 1 : text.size();
        good_end = pos;
    }
    if (good_end != text.size()) {
        atomic_write_file(path, text.substr(0, good_end));
    }
    return rows;
}

// ----- question plumbing --------------------------------------------------

struct QuestionSet {
    std::vector<SurveyQuestion> all;      // concatenation across files
    std::vector<std::size_t> file_index;  // parallel to `all`
};

QuestionSet load_all_questions(const RunConfig &config) {
    if (config.questions.empty()) {
        throw ConfigError("config lists no question files");
    }
    QuestionSet set;
    std::set<std::string> ids;
    for (std::size_t f = 0; f < config.questions.size(); ++f) {
        for (auto &question : load_questions_jsonl(config.questions[f].path)) {
            if (!ids.insert(question.id).second) {
                throw DataError("question id '" + question.id +
                                "' appears in more than one question file");
            }
            set.all.push_back(std::move(question));
            set.file_index.push_back(f);
        }
    }
    return set;
}

// Cohort-level reference distributions: question_id,cohort,choice_index,probability.
using GroundTruthMap = std::map<std::pair<std::string, std::string>, std::vector<double>>;

GroundTruthMap load_ground_truth_csv(const std::filesystem::path &path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "question_id,cohort,choice_index,probability") {
        throw DataError(path.string() +
                        ": first line must be 'question_id,cohort,choice_index,probability'");
    }
    GroundTruthMap truth;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string question_id, cohort, index_text, prob_text;
        if (!std::getline(fields, question_id, ',') || !std::getline(fields, cohort, ',') ||
            !std::getline(fields, index_text, ',') || !std::getline(fields, prob_text)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 4 comma-separated fields");
        }
        std::size_t index = 0;
        double probability = 0.0;
        try {
            index = std::stoul(index_text);
            probability = std::stod(prob_text);
        } catch (const std::exception &) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": choice_index/probability must be numeric");
        }
        auto &probabilities = truth[{question_id, cohort}];
        if (probabilities.size() <= index) {
            probabilities.resize(index + 1, 0.0);
        }
        probabilities[index] = probability;
    }
    return truth;
}

// ----- generation stage ---------------------------------------------------

Json generation_audit_row(std::size_t meta_index, const GenerationOutcome &outcome) {
    Json row;
    row["meta_index"] = meta_index;
    Json attempts = Json::array();
    for (const auto &attempt : outcome.attempts) {
        Json node;
        node["attempt"] = attempt.attempt;
        node["raw_response"] = attempt.raw_response;
        node["accepted"] = attempt.accepted;
        node["error"] = attempt.error;
        if (!attempt.violations.empty()) {
            Json violations = Json::array();
            for (const auto &violation : attempt.violations) {
                violations.push_back(Json{{"field", violation.field},
                                          {"value", violation.value},
                                          {"reason", violation.reason}});
            }
            node["violations"] = std::move(violations);
        }
        attempts.push_back(std::move(node));
    }
    row["attempts"] = std::move(attempts);
    if (outcome.persona) {
        Json record = persona_to_record(*outcome.persona);
        record["meta_index"] = meta_index;
        row["persona"] = std::move(record);
    } else {
        row["persona"] = nullptr;
    }
    return row;
}

// ----- simulation stage ---------------------------------------------------

Json survey_audit_row(const SurveyAuditEntry &entry, const ResponseRecord *record) {
    Json row;
    row["persona_index"] = entry.persona_index;
    row["question_id"] = entry.question_id;
    row["success"] = entry.success;
    Json attempts = Json::array();
    for (const auto &attempt : entry.attempts) {
        attempts.push_back(Json{{"attempt", attempt.attempt},
                                {"raw_response", attempt.raw_response},
                                {"failure", attempt.failure}});
    }
    row["attempts"] = std::move(attempts);
    row["record"] = record ? record_to_json(*record) : Json(nullptr);
    return row;
}

class AuditAppender {
  public:
    explicit AuditAppender(const std::filesystem::path &path) : path_(path) {
        std::filesystem::create_directories(path.parent_path());
        out_.open(path, std::ios::app | std::ios::binary);
        if (!out_) {
            throw DataError("cannot open audit log for append: " + path.string());
        }
    }

    void append(const Json &row) {
        out_ << row.dump() << '\n';
        out_.flush();
        if (!out_) {
            throw DataError("failed writing audit log: " + path_.string());
        }
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

// ----- evaluation artifacts ------------------------------------------------

struct AlignmentRow {
    std::string question_id;
    std::string cohort;
    std::string generator; // kCensusLabel for the sampled population
    std::string tier;
    std::string simulator;
    std::string metric;
    double alignment = 0.0;
    std::size_t support = 0;
};

constexpr const char *kAlignmentHeader =
    "question_id,cohort,generator,tier,simulator,metric,alignment,support";

std::filesystem::path alignment_file(const std::filesystem::path &run_dir) {
    return run_dir / "reports" / "alignment.csv";
}

std::filesystem::path aggregates_file(const std::filesystem::path &run_dir,
                                      const std::string &generator, PersonaTier tier,
                                      const std::string &simulator) {
    return run_dir / "reports" / "aggregates" /
           (sanitize_component(generator) + "_" + tier_file_stem(tier) + "_" +
            sanitize_component(simulator) + ".csv");
}

std::vector<AlignmentRow> read_alignment_csv(const std::filesystem::path &path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kAlignmentHeader) {
        throw DataError(path.string() + ": unexpected alignment CSV header");
    }
    std::vector<AlignmentRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        AlignmentRow row;
        std::string alignment_text, support_text;
        if (!std::getline(fields, row.question_id, ',') ||
            !std::getline(fields, row.cohort, ',') ||
            !std::getline(fields, row.generator, ',') || !std::getline(fields, row.tier, ',') ||
            !std::getline(fields, row.simulator, ',') || !std::getline(fields, row.metric, ',') ||
            !std::getline(fields, alignment_text, ',') || !std::getline(fields, support_text)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 8 comma-separated fields");
        }
        try {
            row.alignment = std::stod(alignment_text);
            row.support = std::stoul(support_text);
        } catch (const std::exception &) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": alignment/support must be numeric");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct AggregateRow {
    std::string question_id;
    std::string cohort;
    std::size_t choice_index = 0;
    double probability = 0.0;
    std::size_t count = 0;
};

std::vector<AggregateRow> read_aggregates_csv(const std::filesystem::path &path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "question_id,cohort,choice_index,probability,count") {
        throw DataError(path.string() + ": unexpected aggregates CSV header");
    }
    std::vector<AggregateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        AggregateRow row;
        std::string index_text, prob_text, count_text;
        if (!std::getline(fields, row.question_id, ',') || !std::getline(fields, row.cohort, ',') ||
            !std::getline(fields, index_text, ',') || !std::getline(fields, prob_text, ',') ||
            !std::getline(fields, count_text)) {
            throw DataError(path.string() + ": malformed aggregates row: " + line);
        }
        row.choice_index = std::stoul(index_text);
        row.probability = std::stod(prob_text);
        row.count = std::stoul(count_text);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

// ----- context -------------------------------------------------------------

RunContext load_run_context(const std::filesystem::path &config_path) {
    RunContext ctx;
    ctx.config = load_run_config(config_path);
    ctx.config_path = config_path;
    return ctx;
}

// ----- sample ----------------------------------------------------------------

void cmd_sample(const RunContext &ctx) {
    const RunConfig &config = ctx.config;
    const auto &run_dir = config.output_dir;
    std::filesystem::create_directories(run_dir / "metas");

    const JointDistribution table = load_joint_table(config.joint_table);
    const auto metas = sample_meta_personas(table, config.per_state, config.seed);
    write_meta_jsonl(metas_file(run_dir), metas);

    // Snapshot the config so a run directory is self-describing.
    const std::string config_text = read_text_file(ctx.config_path);
    atomic_write_file(run_dir / "config.snapshot.json", config_text);

    RunManifest manifest = RunManifest::open(run_dir);
    StageRecord record;
    record.inputs[ctx.config_path.string()] = sha256_hex(config_text);
    record.inputs[config.joint_table.string()] = file_digest(config.joint_table);
    record.outputs[run_relative(run_dir, metas_file(run_dir))] = file_digest(metas_file(run_dir));
    record.outputs["config.snapshot.json"] = sha256_hex(config_text);
    manifest.record_stage("sample", record);
    std::cerr << "sample: wrote " << metas.size() << " meta personas\n";
}

// ----- generate ----------------------------------------------------------------

void cmd_generate(const RunContext &ctx) {
    const RunConfig &config = ctx.config;
    if (config.tiers.empty()) {
        throw ConfigError("config lists no generated tiers; nothing to generate");
    }
    if (config.generators.empty()) {
        throw ConfigError("config lists no generator backends");
    }
    const auto &run_dir = config.output_dir;
    RunManifest manifest = RunManifest::open(run_dir);
    manifest.require_fresh("sample");

    const auto metas = read_meta_jsonl(metas_file(run_dir));
    const ValueCatalog &catalog = ValueCatalog::builtin();

    StageRecord record;
    record.inputs[ctx.config_path.string()] = file_digest(ctx.config_path);
    record.inputs[run_relative(run_dir, metas_file(run_dir))] =
        file_digest(metas_file(run_dir));

    std::size_t total_failures = 0;
    for (const auto &generator : config.generators) {
        for (PersonaTier tier : config.tiers) {
            const auto out_path = personas_file(run_dir, generator.name, tier);
            const auto audit_path = audit_path_for(out_path);
            std::filesystem::create_directories(out_path.parent_path());

            // Jobs already covered by the audit log are done, success or not.
            std::map<std::size_t, Json> done;
            for (auto &row : load_audit(audit_path)) {
                done[row.at("meta_index").get<std::size_t>()] = std::move(row);
            }

            std::vector<MetaPersona> pending;
            std::vector<std::size_t> pending_index;
            for (std::size_t i = 0; i < metas.size(); ++i) {
                if (done.count(i) == 0) {
                    pending.push_back(metas[i]);
                    pending_index.push_back(i);
                }
            }

            if (!pending.empty()) {
                auto backend = make_backend(generator, config.base_dir, tier_file_stem(tier),
                                            generator.name);
                GenerationOptions options;
                options.retry_limit = config.generation_retry_limit;
                options.decoding = config.generation_decoding;
                options.concurrency = config.concurrency;
                AuditAppender appender(audit_path);
                const auto observer = [&](const GenerationOutcome &outcome) {
                    const std::size_t index = pending_index[outcome.meta_index];
                    Json row = generation_audit_row(index, outcome);
                    appender.append(row);
                    done[index] = std::move(row);
                };
                generate_personas(pending, tier, *backend, catalog, options, observer);
            }

            // Rebuild the persona roster from the audit, in meta order.
            std::string lines;
            std::size_t successes = 0;
            std::size_t failures = 0;
            for (const auto &[index, row] : done) {
                const Json &persona = row.at("persona");
                if (persona.is_null()) {
                    ++failures;
                    continue;
                }
                lines += persona.dump();
                lines += '\n';
                ++successes;
            }
            atomic_write_file(out_path, lines);
            total_failures += failures;
            std::cerr << "generate: " << generator.name << "/" << tier_file_stem(tier) << ": "
                      << successes << " personas, " << failures << " failures\n";

            record.outputs[run_relative(run_dir, out_path)] = file_digest(out_path);
            record.outputs[run_relative(run_dir, audit_path)] = file_digest(audit_path);
        }
    }
    manifest.record_stage("generate", record);
    if (total_failures > 0) {
        std::cerr << "generate: warning: " << total_failures
                  << " personas failed after retries; see the audit logs\n";
    }
}

// ----- simulate ----------------------------------------------------------------

void cmd_simulate(const RunContext &ctx) {
    const RunConfig &config = ctx.config;
    if (config.simulators.empty()) {
        throw ConfigError("config lists no simulator backends");
    }
    const auto &run_dir = config.output_dir;
    RunManifest manifest = RunManifest::open(run_dir);
    manifest.require_fresh("sample");
    if (!config.tiers.empty()) {
        manifest.require_fresh("generate");
    }

    const QuestionSet questions = load_all_questions(config);

    StageRecord record;
    record.inputs[ctx.config_path.string()] = file_digest(ctx.config_path);
    for (const auto &spec : config.questions) {
        record.inputs[spec.path.string()] = file_digest(spec.path);
    }

    for (const PersonaCell &cell : persona_cells(config)) {
        const auto personas = load_cell_personas(run_dir, cell);
        const auto cell_source = cell.tier == PersonaTier::Meta
                                     ? metas_file(run_dir)
                                     : personas_file(run_dir, cell.generator, cell.tier);
        record.inputs[run_relative(run_dir, cell_source)] = file_digest(cell_source);

        for (const auto &simulator : config.simulators) {
            const auto out_path = records_file(run_dir, cell.generator, cell.tier, simulator.name);
            const auto audit_path = audit_path_for(out_path);
            std::filesystem::create_directories(out_path.parent_path());

            std::map<std::pair<std::size_t, std::string>, Json> done;
            for (auto &row : load_audit(audit_path)) {
                const std::size_t index = row.at("persona_index").get<std::size_t>();
                std::string question_id = row.at("question_id").get<std::string>();
                done[{index, std::move(question_id)}] = std::move(row);
            }

            const bool complete = done.size() == personas.size() * questions.all.size();
            if (!complete && !personas.empty()) {
                auto backend = make_backend(simulator, config.base_dir, tier_file_stem(cell.tier),
                                            cell.generator);
                SurveyOptions options;
                options.retry_limit = config.simulation_retry_limit;
                options.decoding = config.simulation_decoding;
                options.concurrency = config.concurrency;
                options.tier = cell.tier;
                options.generator = cell.tier == PersonaTier::Meta ? "" : cell.generator;
                AuditAppender appender(audit_path);
                const auto observer = [&](const SurveyAuditEntry &entry,
                                          const ResponseRecord *response) {
                    Json row = survey_audit_row(entry, response);
                    appender.append(row);
                    done[{entry.persona_index, entry.question_id}] = std::move(row);
                };

                if (done.empty()) {
                    run_survey(personas, questions.all, *backend, options, observer);
                } else {
                    // Partial audit: drive only the missing pairs, one
                    // persona at a time so recorded indices stay correct.
                    for (std::size_t p = 0; p < personas.size(); ++p) {
                        std::vector<SurveyQuestion> missing;
                        for (const auto &question : questions.all) {
                            if (done.count({p, question.id}) == 0) {
                                missing.push_back(question);
                            }
                        }
                        if (missing.empty()) {
                            continue;
                        }
                        options.persona_index_base = p;
                        run_survey(std::span<const Persona>(&personas[p], 1), missing, *backend,
                                   options, observer);
                    }
                }
            }

            // Rebuild the record file from the audit: persona-major, then
            // question input order.
            std::map<std::string, std::size_t> question_order;
            for (std::size_t q = 0; q < questions.all.size(); ++q) {
                question_order[questions.all[q].id] = q;
            }
            std::map<std::pair<std::size_t, std::size_t>, const Json *> ordered;
            std::size_t failures = 0;
            for (const auto &[key, row] : done) {
                const auto order = question_order.find(key.second);
                if (order == question_order.end()) {
                    throw DataError(audit_path.string() + ": audit references question '" +
                                    key.second + "' not in the configured question files");
                }
                if (row.at("record").is_null()) {
                    ++failures;
                    continue;
                }
                ordered[{key.first, order->second}] = &row.at("record");
            }
            std::string lines;
            for (const auto &[key, row] : ordered) {
                lines += row->dump();
                lines += '\n';
            }
            atomic_write_file(out_path, lines);
            std::cerr << "simulate: " << cell.generator << "/" << tier_file_stem(cell.tier) << "/"
                      << simulator.name << ": " << ordered.size() << " records, " << failures
                      << " failures\n";

            record.outputs[run_relative(run_dir, out_path)] = file_digest(out_path);
            record.outputs[run_relative(run_dir, audit_path)] = file_digest(audit_path);
        }
    }
    manifest.record_stage("simulate", record);
}

// ----- evaluate ----------------------------------------------------------------

void cmd_evaluate(const RunContext &ctx) {
    const RunConfig &config = ctx.config;
    const auto &run_dir = config.output_dir;
    RunManifest manifest = RunManifest::open(run_dir);
    manifest.require_fresh("simulate");

    const QuestionSet questions = load_all_questions(config);

    // Reference distributions, per question file.
    std::vector<GroundTruthMap> truths(config.questions.size());
    for (std::size_t f = 0; f < config.questions.size(); ++f) {
        if (!config.questions[f].ground_truth_csv.empty()) {
            truths[f] = load_ground_truth_csv(config.questions[f].ground_truth_csv);
        }
    }
    // Every question file must contribute some reference data, otherwise the
    // evaluation would be silently empty.
    for (std::size_t f = 0; f < config.questions.size(); ++f) {
        if (!truths[f].empty()) {
            continue;
        }
        bool any_inline = false;
        for (std::size_t q = 0; q < questions.all.size(); ++q) {
            if (questions.file_index[q] == f && questions.all[q].ground_truth) {
                any_inline = true;
                break;
            }
        }
        if (!any_inline) {
            throw DataError("question file has no ground truth (neither inline nor CSV): " +
                            config.questions[f].path.string());
        }
    }

    std::map<std::string, std::size_t> question_index;
    for (std::size_t q = 0; q < questions.all.size(); ++q) {
        question_index[questions.all[q].id] = q;
    }

    StageRecord record;
    record.inputs[ctx.config_path.string()] = file_digest(ctx.config_path);

    std::string alignment_csv = std::string{kAlignmentHeader} + "\n";
    for (const PersonaCell &cell : persona_cells(config)) {
        const auto personas = load_cell_personas(run_dir, cell);
        std::vector<std::string> states;
        states.reserve(personas.size());
        for (const auto &persona : personas) {
            states.push_back(persona_meta(persona).state);
        }

        for (const auto &simulator : config.simulators) {
            const auto rec_path = records_file(run_dir, cell.generator, cell.tier, simulator.name);
            record.inputs[run_relative(run_dir, rec_path)] = file_digest(rec_path);
            std::vector<ResponseRecord> records;
            for_each_jsonl(rec_path, [&](const Json &row, std::size_t) {
                records.push_back(record_from_json(row));
            });

            const auto cohort_key = [&](const ResponseRecord &r) -> std::string {
                const auto it = question_index.find(r.question_id);
                if (it == question_index.end()) {
                    throw DataError("record references unknown question '" + r.question_id + "'");
                }
                const auto &spec = config.questions[questions.file_index[it->second]];
                if (spec.cohort == "state") {
                    if (r.persona.index >= states.size()) {
                        throw DataError("record persona index " +
                                        std::to_string(r.persona.index) +
                                        " is outside the persona roster");
                    }
                    return states[r.persona.index];
                }
                return "ALL";
            };
            const auto distributions = aggregate(records, questions.all, cohort_key);

            // Per-cell aggregate export in the documented 5-column schema.
            std::string agg_csv = "question_id,cohort,choice_index,probability,count\n";
            for (const auto &dist : distributions) {
                require_csv_safe(dist.question_id, "question id");
                require_csv_safe(dist.cohort, "cohort");
                for (std::size_t c = 0; c < dist.probabilities.size(); ++c) {
                    agg_csv += dist.question_id + "," + dist.cohort + "," + std::to_string(c) +
                               "," + csv_number(dist.probabilities[c]) + "," +
                               std::to_string(dist.counts[c]) + "\n";
                }
            }
            const auto agg_path =
                aggregates_file(run_dir, cell.generator, cell.tier, simulator.name);
            std::filesystem::create_directories(agg_path.parent_path());
            atomic_write_file(agg_path, agg_csv);
            record.outputs[run_relative(run_dir, agg_path)] = file_digest(agg_path);

            // Alignment rows for every (question, cohort) with a reference.
            for (const auto &dist : distributions) {
                const std::size_t q = question_index.at(dist.question_id);
                const SurveyQuestion &question = questions.all[q];
                const std::size_t f = questions.file_index[q];
                const std::vector<double> *truth = nullptr;
                const auto csv_truth = truths[f].find({dist.question_id, dist.cohort});
                if (csv_truth != truths[f].end()) {
                    truth = &csv_truth->second;
                } else if (dist.cohort == "ALL" && question.ground_truth) {
                    truth = &*question.ground_truth;
                }
                if (truth == nullptr) {
                    continue; // no reference for this cohort
                }
                if (truth->size() != question.choices.size()) {
                    throw DataError("ground truth for question '" + dist.question_id +
                                    "', cohort '" + dist.cohort + "' has " +
                                    std::to_string(truth->size()) + " entries for " +
                                    std::to_string(question.choices.size()) + " choices");
                }
                validate_distribution(*truth, "ground truth for '" + dist.question_id + "'/" +
                                                  dist.cohort);
                const double score =
                    alignment_score_for(dist.probabilities, *truth, question.ordinal);
                require_csv_safe(simulator.name, "simulator name");
                require_csv_safe(cell.generator, "generator name");
                alignment_csv += dist.question_id + "," + dist.cohort + "," + cell.generator +
                                 "," + tier_name(cell.tier) + "," + simulator.name + "," +
                                 metric_name(question.ordinal) + "," + csv_number(score) + "," +
                                 std::to_string(dist.support) + "\n";
            }
        }
    }

    const auto align_path = alignment_file(run_dir);
    std::filesystem::create_directories(align_path.parent_path());
    atomic_write_file(align_path, alignment_csv);
    record.outputs[run_relative(run_dir, align_path)] = file_digest(align_path);
    manifest.record_stage("evaluate", record);
    std::cerr << "evaluate: wrote " << run_relative(run_dir, align_path) << "\n";
}

// ----- report ----------------------------------------------------------------

void cmd_report(const RunContext &ctx) {
    const RunConfig &config = ctx.config;
    const auto &run_dir = config.output_dir;
    RunManifest manifest = RunManifest::open(run_dir);
    manifest.require_fresh("evaluate");

    const QuestionSet questions = load_all_questions(config);
    const auto alignment = read_alignment_csv(alignment_file(run_dir));
    const auto reports_dir = run_dir / "reports";
    std::filesystem::create_directories(reports_dir);

    StageRecord record;
    record.inputs[ctx.config_path.string()] = file_digest(ctx.config_path);
    record.inputs[run_relative(run_dir, alignment_file(run_dir))] =
        file_digest(alignment_file(run_dir));

    const auto emit = [&](const std::filesystem::path &path, const std::string &text) {
        atomic_write_file(path, text);
        record.outputs[run_relative(run_dir, path)] = file_digest(path);
    };

    // --- cross-simulation matrix ----------------------------------------
    if (!config.generators.empty() && !config.simulators.empty()) {
        std::vector<std::string> generators;
        for (const auto &g : config.generators) {
            generators.push_back(g.name);
        }
        std::vector<std::string> simulators;
        for (const auto &s : config.simulators) {
            simulators.push_back(s.name);
        }
        std::vector<PersonaTier> tiers{PersonaTier::Meta};
        tiers.insert(tiers.end(), config.tiers.begin(), config.tiers.end());

        std::vector<CrossSimObservation> observations;
        observations.reserve(alignment.size());
        for (const auto &row : alignment) {
            const auto tier = tier_from_name(row.tier);
            if (!tier) {
                throw DataError("alignment CSV names unknown tier '" + row.tier + "'");
            }
            observations.push_back(CrossSimObservation{
                row.generator == kCensusLabel ? "" : row.generator, *tier, row.simulator,
                row.question_id, row.cohort, row.alignment});
        }
        const CrossSimMatrix matrix =
            cross_simulation(observations, generators, simulators, tiers);

        Json doc;
        doc["state_aggregation"] = "unweighted_mean"; // flat mean over (question, cohort) pairs
        doc["generators"] = generators;
        doc["simulators"] = simulators;
        Json tier_names = Json::array();
        for (PersonaTier tier : tiers) {
            tier_names.push_back(tier_name(tier));
        }
        doc["tiers"] = std::move(tier_names);
        Json cells = Json::array();
        for (const auto &cell : matrix.cells) {
            cells.push_back(Json{{"generator", cell.generator},
                                 {"tier", tier_name(cell.tier)},
                                 {"simulator", cell.simulator},
                                 {"mean_alignment", cell.mean_alignment},
                                 {"sample_count", cell.sample_count}});
        }
        doc["cells"] = std::move(cells);
        emit(reports_dir / "crosssim.json", doc.dump(2) + "\n");
    }

    // --- topic variance ranking -------------------------------------------
    {
        struct TierAccum {
            std::array<double, kTierCount> totals{};
            std::array<std::size_t, kTierCount> counts{};
        };
        std::map<std::string, TierAccum> by_question;
        for (const auto &row : alignment) {
            const auto tier = tier_from_name(row.tier);
            if (!tier) {
                continue;
            }
            auto &accum = by_question[row.question_id];
            accum.totals[static_cast<std::size_t>(*tier)] += row.alignment;
            accum.counts[static_cast<std::size_t>(*tier)] += 1;
        }
        std::vector<QuestionTierScores> scores;
        for (const auto &question : questions.all) {
            const auto it = by_question.find(question.id);
            if (it == by_question.end()) {
                continue;
            }
            bool complete = true;
            QuestionTierScores entry;
            entry.question_id = question.id;
            entry.topic = question.topic;
            for (std::size_t t = 0; t < kTierCount; ++t) {
                if (it->second.counts[t] == 0) {
                    complete = false;
                    break;
                }
                entry.by_tier[t] =
                    it->second.totals[t] / static_cast<double>(it->second.counts[t]);
            }
            if (complete && !entry.topic.empty()) {
                scores.push_back(std::move(entry));
            }
        }
        if (!scores.empty()) {
            const auto ranking = topic_variance_ranking(scores);
            std::string csv = "rank,topic,variance,question_count,mean_meta,mean_objective_"
                              "tabular,mean_subjective_tabular,mean_descriptive\n";
            for (std::size_t r = 0; r < ranking.size(); ++r) {
                const auto &entry = ranking[r];
                require_csv_safe(entry.topic, "topic");
                csv += std::to_string(r + 1) + "," + entry.topic + "," +
                       csv_number(entry.variance) + "," + std::to_string(entry.question_count);
                for (double mean : entry.tier_means) {
                    csv += "," + csv_number(mean);
                }
                csv += "\n";
            }
            emit(reports_dir / "topics.csv", csv);
        }
    }

    // --- sentiment and word frequencies ------------------------------------
    {
        const SentimentLexicon &lexicon = SentimentLexicon::builtin();
        std::string sentiment_csv = "generator,tier,count,mean_polarity,mean_subjectivity\n";
        std::string words_csv = "cohort,token,count\n";
        for (const PersonaCell &cell : persona_cells(config)) {
            const auto personas = load_cell_personas(run_dir, cell);
            if (personas.empty()) {
                continue;
            }
            const auto tiers = sentiment_by_tier(personas, lexicon);
            for (const auto &tier : tiers) {
                sentiment_csv += cell.generator + "," + tier_name(tier.tier) + "," +
                                 std::to_string(tier.count) + "," +
                                 csv_number(tier.mean_polarity) + "," +
                                 csv_number(tier.mean_subjectivity) + "\n";
            }
            std::vector<std::string> texts;
            texts.reserve(personas.size());
            for (const auto &persona : personas) {
                texts.push_back(persona_text(persona));
            }
            const std::string cohort =
                cell.generator + ":" + tier_file_stem(cell.tier);
            for (const auto &word : word_frequencies(texts, builtin_stopwords(), 100)) {
                words_csv += cohort + "," + word.token + "," + std::to_string(word.count) + "\n";
            }
        }
        emit(reports_dir / "sentiment.csv", sentiment_csv);
        emit(reports_dir / "word_frequencies.csv", words_csv);
    }

    // --- election maps -------------------------------------------------------
    // Any two-choice question aggregated by state exports a per-state share
    // table; by convention choice 0 is the Democratic column and choice 1
    // the Republican one.
    {
        std::map<std::tuple<std::string, std::string, std::string, std::string, std::string>,
                 double>
            score_index; // (qid, cohort, generator, tier, simulator) -> alignment
        for (const auto &row : alignment) {
            score_index[{row.question_id, row.cohort, row.generator, row.tier, row.simulator}] =
                row.alignment;
        }

        for (std::size_t q = 0; q < questions.all.size(); ++q) {
            const SurveyQuestion &question = questions.all[q];
            const auto &spec = config.questions[questions.file_index[q]];
            if (spec.cohort != "state" || question.choices.size() != 2) {
                continue;
            }
            for (const PersonaCell &cell : persona_cells(config)) {
                for (const auto &simulator : config.simulators) {
                    const auto agg_path =
                        aggregates_file(run_dir, cell.generator, cell.tier, simulator.name);
                    std::map<std::string, std::array<double, 2>> shares; // state -> (dem, rep)
                    for (const auto &row : read_aggregates_csv(agg_path)) {
                        if (row.question_id != question.id || row.choice_index > 1) {
                            continue;
                        }
                        shares[row.cohort][row.choice_index] = row.probability;
                    }
                    if (shares.empty()) {
                        continue;
                    }
                    std::string csv = "state,dem_share,rep_share,alignment\n";
                    for (const auto &[state, share] : shares) {
                        const auto score = score_index.find(
                            {question.id, state, cell.generator, std::string{tier_name(cell.tier)},
                             simulator.name});
                        csv += state + "," + csv_number(share[0]) + "," + csv_number(share[1]) +
                               "," +
                               (score == score_index.end() ? std::string{""}
                                                           : csv_number(score->second)) +
                               "\n";
                    }
                    const auto path = reports_dir / "election" /
                                      (sanitize_component(question.id) + "__" +
                                       sanitize_component(cell.generator) + "__" +
                                       tier_file_stem(cell.tier) + "__" +
                                       sanitize_component(simulator.name) + ".csv");
                    std::filesystem::create_directories(path.parent_path());
                    emit(path, csv);
                }
            }
        }
    }

    manifest.record_stage("report", record);
    std::cerr << "report: wrote " << record.outputs.size() << " report files\n";
}

// ----- run (all stages) ---------------------------------------------------

void cmd_run(const RunContext &ctx) {
    cmd_sample(ctx);
    if (!ctx.config.tiers.empty()) {
        cmd_generate(ctx);
    }
    cmd_simulate(ctx);
    cmd_evaluate(ctx);
    cmd_report(ctx);
}

// ----- validate (external persona file) ------------------------------------

std::size_t cmd_validate(const std::filesystem::path &personas_path, std::ostream &out) {
    const ValueCatalog &catalog = ValueCatalog::builtin();
    struct TierTally {
        std::size_t valid = 0;
        std::size_t invalid = 0;
    };
    std::array<TierTally, kTierCount> tally{};
    std::size_t shown = 0;
    constexpr std::size_t kMaxShown = 25;

    for_each_jsonl(personas_path, [&](const Json &row, std::size_t line) {
        const Persona persona = record_to_persona(row);
        const PersonaTier tier = persona_tier(persona);
        auto &bucket = tally[static_cast<std::size_t>(tier)];
        if (const auto *tabular = std::get_if<TabularPersona>(&persona)) {
            const auto report = validate_tabular(*tabular, catalog);
            if (report.valid) {
                ++bucket.valid;
                return;
            }
            ++bucket.invalid;
            for (const auto &violation : report.violations) {
                if (shown < kMaxShown) {
                    out << personas_path.filename().string() << ":" << line << ": "
                        << violation.field << " = '" << violation.value
                        << "': " << violation.reason << "\n";
                    ++shown;
                }
            }
            return;
        }
        if (const auto *descriptive = std::get_if<DescriptivePersona>(&persona)) {
            if (descriptive->narrative.empty()) {
                ++bucket.invalid;
                if (shown < kMaxShown) {
                    out << personas_path.filename().string() << ":" << line
                        << ": empty narrative\n";
                    ++shown;
                }
            } else {
                ++bucket.valid;
            }
            return;
        }
        ++bucket.valid; // meta rows carry only the four sampled fields
    });

    std::size_t total_invalid = 0;
    for (std::size_t t = 0; t < kTierCount; ++t) {
        if (tally[t].valid + tally[t].invalid == 0) {
            continue;
        }
        out << tier_name(static_cast<PersonaTier>(t)) << ": " << tally[t].valid << " valid, "
            << tally[t].invalid << " invalid\n";
        total_invalid += tally[t].invalid;
    }
    return total_invalid;
}

} // namespace persim
