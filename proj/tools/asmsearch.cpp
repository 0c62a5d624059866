// asmsearch: corpus construction and evaluation toolkit for natural-language
// to assembly-code search. Subcommands stream JSON-lines corpora with
// deterministic, seed-driven behavior; see README.md.

#include "asmsearch/aemb.hpp"
#include "asmsearch/embedder.hpp"
#include "asmsearch/emulator.hpp"
#include "asmsearch/infonce.hpp"
#include "asmsearch/jsonl.hpp"
#include "asmsearch/parallel.hpp"
#include "asmsearch/parser.hpp"
#include "asmsearch/pipeline.hpp"
#include "asmsearch/retrieval.hpp"
#include "asmsearch/seq_metrics.hpp"
#include "asmsearch/tokenizer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

using namespace asmsearch;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMalformed = 2;

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputStream {
    std::istream* in = nullptr;
    std::unique_ptr<std::ifstream> owned;

    explicit InputStream(const std::string& path) {
        if (path == "-") {
            in = &std::cin;
        } else {
            owned = std::make_unique<std::ifstream>(path);
            if (!*owned)
                throw CLI::ValidationError("cannot open input: " + path);
            in = owned.get();
        }
    }
};

struct OutputStream {
    std::ostream* out = nullptr;
    std::unique_ptr<std::ofstream> owned;
    bool is_stdout = false;

    explicit OutputStream(const std::string& path) {
        if (path.empty() || path == "-") {
            out = &std::cout;
            is_stdout = true;
        } else {
            owned = std::make_unique<std::ofstream>(path);
            if (!*owned)
                throw CLI::ValidationError("cannot open output: " + path);
            out = owned.get();
        }
    }
};

struct NumberedLine {
    std::size_t line_no;
    std::string text;
};

// Fixed-size batches of input lines; batch boundaries never depend on the
// worker count, so parallel output is byte-identical for any --workers.
class LineBatcher {
  public:
    explicit LineBatcher(std::istream& in) : in_(in) {}

    std::vector<NumberedLine> next_batch() {
        std::vector<NumberedLine> batch;
        batch.reserve(kStreamBatchLines);
        std::string line;
        while (batch.size() < kStreamBatchLines && std::getline(in_, line)) {
            ++line_no_;
            if (line.empty())
                continue;
            batch.push_back({line_no_, line});
        }
        return batch;
    }

  private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

PairRecord parse_record_line(const NumberedLine& line) {
    try {
        return pair_record_from_line(line.text);
    } catch (const std::exception& e) {
        throw MalformedInput("line " + std::to_string(line.line_no) + ": " +
                             e.what());
    }
}

std::uint64_t parse_seed_arg(const std::string& text) {
    try {
        return std::stoull(text, nullptr, 0);
    } catch (const std::exception&) {
        throw CLI::ValidationError("bad seed: " + text);
    }
}

// ---------------------------------------------------------------- subcommands

struct CommonOpts {
    std::string in_path = "-";
    std::string out_path;
    unsigned workers = 1;
    std::string seed_text = "0";
};

int cmd_parse_check(const CommonOpts& opts) {
    InputStream input(opts.in_path);
    LineBatcher batcher(*input.in);
    std::size_t malformed = 0, total = 0;
    while (true) {
        auto batch = batcher.next_batch();
        if (batch.empty())
            break;
        auto errors = map_batch<NumberedLine, std::string>(
            batch, opts.workers, [](const NumberedLine& line) -> std::string {
                try {
                    PairRecord record = pair_record_from_line(line.text);
                    parse_assembly(record.assembly_text);
                    return {};
                } catch (const std::exception& e) {
                    return "line " + std::to_string(line.line_no) + ": " +
                           e.what();
                }
            });
        total += batch.size();
        for (const std::string& error : errors)
            if (!error.empty()) {
                ++malformed;
                std::cerr << error << '\n';
            }
    }
    std::cout << malformed << " malformed" << std::endl;
    std::cerr << "checked " << total << " records" << std::endl;
    return malformed == 0 ? kExitOk : kExitMalformed;
}

struct BuildDatasetOpts : CommonOpts {
    std::size_t min_body_lines = kDefaultMinBodyLines;
    bool strip_comments = false;
    bool assign_profiles = false;
    bool infer_inline = false;
    bool mix = false;
};

int cmd_build_dataset(const BuildDatasetOpts& opts) {
    std::uint64_t seed = parse_seed_arg(opts.seed_text);
    InputStream input(opts.in_path);
    OutputStream output(opts.out_path);
    LineBatcher batcher(*input.in);

    FilterReport report;
    std::vector<PairRecord> mix_buffer; // only used with --mix
    while (true) {
        auto batch = batcher.next_batch();
        if (batch.empty())
            break;
        auto processed = map_batch<NumberedLine, std::optional<PairRecord>>(
            batch, opts.workers,
            [&opts, seed](const NumberedLine& line) -> std::optional<PairRecord> {
                PairRecord record = parse_record_line(line);
                if (opts.strip_comments)
                    record.source = strip_source_comments(record.source);
                if (opts.infer_inline && !record.inline_flag) {
                    AssemblyFunction f = parse_assembly(record.assembly_text);
                    record.inline_flag = infer_inline_heuristic(f);
                }
                if (opts.assign_profiles)
                    record.profile = assign_profile(seed, record.id);
                return record;
            });
        // the filter report is sequential state; apply in input order
        for (auto& record : processed) {
            if (!keep_record(*record, opts.min_body_lines, report))
                continue;
            if (opts.mix)
                mix_buffer.push_back(std::move(*record));
            else
                *output.out << pair_record_to_line(*record) << '\n';
        }
    }
    if (opts.mix) {
        for (const PairRecord& record : sample_mix(mix_buffer, seed))
            *output.out << pair_record_to_line(record) << '\n';
    }
    output.out->flush();

    std::string report_line = filter_report_to_json(report).dump();
    if (output.is_stdout)
        std::cerr << report_line << std::endl;
    else
        std::cout << report_line << std::endl;
    return kExitOk;
}

struct CleanDocstringsOpts : CommonOpts {
    std::size_t min_words = kDefaultMinDocstringWords;
};

int cmd_clean_docstrings(const CleanDocstringsOpts& opts) {
    InputStream input(opts.in_path);
    OutputStream output(opts.out_path);
    LineBatcher batcher(*input.in);
    std::size_t processed = 0;
    while (true) {
        auto batch = batcher.next_batch();
        if (batch.empty())
            break;
        auto lines = map_batch<NumberedLine, std::string>(
            batch, opts.workers, [&opts](const NumberedLine& line) {
                PairRecord record = parse_record_line(line);
                if (record.source.docstring)
                    record.source.docstring =
                        clean_docstring(*record.source.docstring, opts.min_words);
                return pair_record_to_line(record);
            });
        for (const std::string& line : lines)
            *output.out << line << '\n';
        processed += batch.size();
    }
    output.out->flush();
    std::cerr << "processed " << processed << " records" << std::endl;
    return kExitOk;
}

struct PairedFilesOpts : CommonOpts {
    std::string candidates_path;
    std::string references_path;
};

// Reads the two corpora in lockstep; ids must align line by line.
std::vector<std::pair<PairRecord, PairRecord>> next_aligned_batch(
    LineBatcher& cand, LineBatcher& ref, unsigned workers) {
    auto cand_batch = cand.next_batch();
    auto ref_batch = ref.next_batch();
    if (cand_batch.size() != ref_batch.size())
        throw MalformedInput(
            "candidate and reference files have different lengths");
    std::vector<std::pair<PairRecord, PairRecord>> out(cand_batch.size());
    struct Indexed {
        const NumberedLine* c;
        const NumberedLine* r;
    };
    std::vector<Indexed> zipped(cand_batch.size());
    for (std::size_t i = 0; i < cand_batch.size(); ++i)
        zipped[i] = {&cand_batch[i], &ref_batch[i]};
    out = map_batch<Indexed, std::pair<PairRecord, PairRecord>>(
        zipped, workers, [](const Indexed& z) {
            PairRecord c = parse_record_line(*z.c);
            PairRecord r = parse_record_line(*z.r);
            if (c.id != r.id)
                throw MalformedInput("line " + std::to_string(z.c->line_no) +
                                     ": id mismatch: " + c.id + " vs " + r.id);
            return std::make_pair(std::move(c), std::move(r));
        });
    return out;
}

struct EvalSeqOpts : PairedFilesOpts {
    int max_n = 4;
    std::string per_pair_path;
};

int cmd_eval_seq(const EvalSeqOpts& opts) {
    InputStream cand_in(opts.candidates_path);
    InputStream ref_in(opts.references_path);
    OutputStream output(opts.out_path);
    std::unique_ptr<OutputStream> per_pair;
    if (!opts.per_pair_path.empty()) {
        per_pair = std::make_unique<OutputStream>(opts.per_pair_path);
        *per_pair->out << "id,bleu,rouge_l,meteor\n";
    }

    LineBatcher cand(*cand_in.in), ref(*ref_in.in);
    double bleu_sum = 0, rouge_sum = 0, meteor_sum = 0;
    std::size_t n_pairs = 0;
    struct Row {
        std::string id;
        double bleu, rouge, meteor;
    };
    while (true) {
        auto pairs = next_aligned_batch(cand, ref, opts.workers);
        if (pairs.empty())
            break;
        auto rows = map_batch<std::pair<PairRecord, PairRecord>, Row>(
            pairs, opts.workers,
            [&opts](const std::pair<PairRecord, PairRecord>& pair) {
                auto cand_tokens =
                    tokenize(parse_assembly(pair.first.assembly_text));
                auto ref_tokens =
                    tokenize(parse_assembly(pair.second.assembly_text));
                Row row;
                row.id = pair.first.id;
                row.bleu = bleu(cand_tokens, ref_tokens, opts.max_n).value;
                row.rouge = rouge_l(cand_tokens, ref_tokens).value;
                row.meteor = meteor(cand_tokens, ref_tokens).value;
                return row;
            });
        for (const Row& row : rows) { // reduce in input order
            bleu_sum += row.bleu;
            rouge_sum += row.rouge;
            meteor_sum += row.meteor;
            ++n_pairs;
            if (per_pair)
                *per_pair->out << row.id << ',' << json(row.bleu).dump() << ','
                               << json(row.rouge).dump() << ','
                               << json(row.meteor).dump() << '\n';
        }
    }
    if (n_pairs == 0)
        throw MalformedInput("no pairs to score");

    ordered_json summary;
    summary["bleu"] = bleu_sum / static_cast<double>(n_pairs);
    summary["rouge_l"] = rouge_sum / static_cast<double>(n_pairs);
    summary["meteor"] = meteor_sum / static_cast<double>(n_pairs);
    summary["n_pairs"] = n_pairs;
    *output.out << summary.dump() << '\n';
    output.out->flush();
    return kExitOk;
}

struct EvalRuntimeOpts : PairedFilesOpts {
    std::uint64_t max_instructions = kDefaultInstructionLimit;
};

int cmd_eval_runtime(const EvalRuntimeOpts& opts) {
    std::uint64_t seed = parse_seed_arg(opts.seed_text);
    InputStream cand_in(opts.candidates_path);
    InputStream ref_in(opts.references_path);
    OutputStream output(opts.out_path);

    LineBatcher cand(*cand_in.in), ref(*ref_in.in);
    double value_sum = 0;
    std::size_t n_pairs = 0;
    struct Row {
        std::string line;
        double value;
    };
    while (true) {
        auto pairs = next_aligned_batch(cand, ref, opts.workers);
        if (pairs.empty())
            break;
        auto rows = map_batch<std::pair<PairRecord, PairRecord>, Row>(
            pairs, opts.workers,
            [&opts, seed](const std::pair<PairRecord, PairRecord>& pair) {
                ExecutionTrace ta = execute(
                    parse_assembly(pair.first.assembly_text), seed,
                    opts.max_instructions);
                ExecutionTrace tb = execute(
                    parse_assembly(pair.second.assembly_text), seed,
                    opts.max_instructions);
                RuntimeScore score = compare_traces(ta, tb);
                ordered_json row;
                row["id"] = pair.first.id;
                row["rax_equal"] = score.rax_equal;
                row["stack_equal"] = score.stack_equal;
                row["trace_equal"] = score.trace_equal;
                row["value"] = score.value;
                row["halt_a"] = std::string(to_string(ta.halt_reason));
                row["halt_b"] = std::string(to_string(tb.halt_reason));
                return Row{row.dump(), score.value};
            });
        for (const Row& row : rows) {
            *output.out << row.line << '\n';
            value_sum += row.value;
            ++n_pairs;
        }
    }
    if (n_pairs == 0)
        throw MalformedInput("no pairs to execute");
    ordered_json mean;
    mean["pairs"] = n_pairs;
    mean["mean"] = value_sum / static_cast<double>(n_pairs);
    *output.out << mean.dump() << '\n';
    output.out->flush();
    return kExitOk;
}

struct InfonceOpts {
    std::string texts_path;
    std::string asms_path;
    double temperature = 0.07;
    bool normalize = false;
    std::string grad_texts_path;
    std::string grad_asms_path;
    std::string out_path;
    unsigned workers = 1; // kernel reductions are order-fixed; accepted for
                          // interface symmetry, results never depend on it
};

int cmd_infonce(const InfonceOpts& opts) {
    EmbeddingMatrix texts = read_aemb_file(opts.texts_path);
    EmbeddingMatrix asms = read_aemb_file(opts.asms_path);
    LossReport report = infonce_loss(texts, asms, opts.temperature,
                                     opts.normalize);
    ordered_json j;
    j["l1"] = report.l1;
    j["l2"] = report.l2;
    j["total"] = report.total;
    j["temperature"] = report.temperature;
    OutputStream output(opts.out_path);
    *output.out << j.dump() << '\n';
    output.out->flush();

    if (!opts.grad_texts_path.empty() || !opts.grad_asms_path.empty()) {
        InfonceGradients grads = infonce_grad(texts, asms, opts.temperature);
        if (!opts.grad_texts_path.empty()) {
            EmbeddingMatrix g{texts.ids, std::move(grads.grad_texts), texts.n,
                              texts.d};
            write_aemb_file(opts.grad_texts_path, g);
        }
        if (!opts.grad_asms_path.empty()) {
            EmbeddingMatrix g{asms.ids, std::move(grads.grad_asms), asms.n,
                              asms.d};
            write_aemb_file(opts.grad_asms_path, g);
        }
    }
    return kExitOk;
}

struct EvalRetrievalOpts : CommonOpts {
    std::string queries_path;
    std::string query_emb_path;
    std::string pool_emb_path;
    std::size_t pool_size = 10000;
    std::vector<std::size_t> ks = {1, 5, 10, 20};
    bool cosine = false;
};

int cmd_eval_retrieval(const EvalRetrievalOpts& opts) {
    std::uint64_t seed = parse_seed_arg(opts.seed_text);

    std::vector<QueryRecord> judgments;
    {
        InputStream queries_in(opts.queries_path);
        LineBatcher batcher(*queries_in.in);
        while (true) {
            auto batch = batcher.next_batch();
            if (batch.empty())
                break;
            for (const NumberedLine& line : batch) {
                try {
                    judgments.push_back(
                        query_record_from_json(json::parse(line.text)));
                } catch (const std::exception& e) {
                    throw MalformedInput("line " +
                                         std::to_string(line.line_no) + ": " +
                                         e.what());
                }
            }
        }
    }
    if (judgments.empty())
        throw MalformedInput("no queries");

    EmbeddingMatrix query_emb = read_aemb_file(opts.query_emb_path);
    EmbeddingMatrix corpus_emb = read_aemb_file(opts.pool_emb_path);

    std::vector<std::string> pool_ids =
        build_pool(corpus_emb.ids, judgments, opts.pool_size, seed);

    std::unordered_map<std::string, std::size_t> corpus_row, query_row;
    for (std::size_t i = 0; i < corpus_emb.n; ++i)
        corpus_row.emplace(corpus_emb.ids[i], i);
    for (std::size_t i = 0; i < query_emb.n; ++i)
        query_row.emplace(query_emb.ids[i], i);

    EmbeddingMatrix pool;
    pool.n = pool_ids.size();
    pool.d = corpus_emb.d;
    pool.ids = pool_ids;
    pool.values.resize(pool.n * pool.d);
    for (std::size_t i = 0; i < pool.n; ++i) {
        auto row = corpus_emb.row(corpus_row.at(pool_ids[i]));
        std::copy(row.begin(), row.end(), pool.values.begin() + i * pool.d);
    }

    auto results = map_batch<QueryRecord, RetrievalResult>(
        judgments, opts.workers, [&](const QueryRecord& query) {
            auto it = query_row.find(query.id);
            if (it == query_row.end())
                throw MalformedInput("no embedding for query " + query.id);
            RetrievalResult result = search_topk(query_emb.row(it->second),
                                                 pool, pool.n, opts.cosine);
            result.query_id = query.id;
            return result;
        });

    EvalReport report;
    report.n_queries = judgments.size();
    report.pool_size = pool.n;
    report.map = mean_ap(results, judgments);
    for (std::size_t k : opts.ks)
        report.recall_at[static_cast<int>(std::min(k, pool.n))] =
            recall_at_k(results, judgments, std::min(k, pool.n));

    ordered_json j;
    ordered_json recall;
    for (const auto& [k, value] : report.recall_at)
        recall[std::to_string(k)] = value;
    j["recall_at"] = recall;
    j["map"] = report.map;
    j["n_queries"] = report.n_queries;
    j["pool_size"] = report.pool_size;
    OutputStream output(opts.out_path);
    *output.out << j.dump() << '\n';
    output.out->flush();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"assembly code search corpus and evaluation toolkit"};
    app.require_subcommand(1);

    BuildDatasetOpts build_opts;
    CLI::App* build = app.add_subcommand(
        "build-dataset", "filter a pair corpus and report drop counts");
    build->add_option("--in", build_opts.in_path, "input corpus (JSONL, - for stdin)");
    build->add_option("--out", build_opts.out_path, "output corpus (default stdout)");
    build->add_option("--min-body-lines", build_opts.min_body_lines,
                      "drop records with fewer source body lines")
        ->capture_default_str();
    build->add_flag("--strip-comments", build_opts.strip_comments,
                    "remove comments from source bodies");
    build->add_flag("--assign-profiles", build_opts.assign_profiles,
                    "assign seeded virtual-compilation profiles");
    build->add_flag("--infer-inline", build_opts.infer_inline,
                    "flag records whose assembly holds >1 named symbol");
    build->add_flag("--mix", build_opts.mix,
                    "emit a 3:1 short/long token-length mix");
    build->add_option("--seed", build_opts.seed_text, "rng seed")
        ->capture_default_str();
    build->add_option("--workers", build_opts.workers, "worker threads")
        ->capture_default_str();

    CleanDocstringsOpts clean_opts;
    CLI::App* clean = app.add_subcommand("clean-docstrings",
                                         "clean docstrings in a pair corpus");
    clean->add_option("--in", clean_opts.in_path, "input corpus");
    clean->add_option("--out", clean_opts.out_path, "output corpus");
    clean->add_option("--min-words", clean_opts.min_words,
                      "drop docstrings shorter than this many words")
        ->capture_default_str();
    clean->add_option("--workers", clean_opts.workers, "worker threads")
        ->capture_default_str();

    EvalSeqOpts seq_opts;
    CLI::App* eval_seq = app.add_subcommand(
        "eval-seq", "BLEU/ROUGE-L/METEOR between two aligned corpora");
    eval_seq->add_option("--candidates", seq_opts.candidates_path)->required();
    eval_seq->add_option("--references", seq_opts.references_path)->required();
    eval_seq->add_option("--max-n", seq_opts.max_n, "BLEU n-gram order")
        ->capture_default_str();
    eval_seq->add_option("--per-pair", seq_opts.per_pair_path,
                         "per-pair CSV output path");
    eval_seq->add_option("--out", seq_opts.out_path, "summary output");
    eval_seq->add_option("--workers", seq_opts.workers, "worker threads")
        ->capture_default_str();

    EvalRuntimeOpts runtime_opts;
    CLI::App* eval_runtime = app.add_subcommand(
        "eval-runtime", "emulated runtime similarity between aligned corpora");
    eval_runtime->add_option("--candidates", runtime_opts.candidates_path)
        ->required();
    eval_runtime->add_option("--references", runtime_opts.references_path)
        ->required();
    eval_runtime->add_option("--seed", runtime_opts.seed_text, "rng seed")
        ->capture_default_str();
    eval_runtime->add_option("--max-instructions",
                             runtime_opts.max_instructions,
                             "instruction cap per execution")
        ->capture_default_str();
    eval_runtime->add_option("--out", runtime_opts.out_path,
                             "per-pair JSONL output");
    eval_runtime->add_option("--workers", runtime_opts.workers,
                             "worker threads")
        ->capture_default_str();

    InfonceOpts infonce_opts;
    CLI::App* infonce = app.add_subcommand(
        "infonce", "InfoNCE loss between two AEMB embedding files");
    infonce->add_option("--texts", infonce_opts.texts_path)->required();
    infonce->add_option("--asms", infonce_opts.asms_path)->required();
    infonce->add_option("--temperature", infonce_opts.temperature)
        ->capture_default_str();
    infonce->add_flag("--normalize", infonce_opts.normalize,
                      "cosine similarity instead of raw dot product");
    infonce->add_option("--grad-texts", infonce_opts.grad_texts_path,
                        "write text gradients (AEMB)");
    infonce->add_option("--grad-asms", infonce_opts.grad_asms_path,
                        "write assembly gradients (AEMB)");
    infonce->add_option("--out", infonce_opts.out_path, "loss report output");
    infonce->add_option("--workers", infonce_opts.workers, "worker threads")
        ->capture_default_str();

    EvalRetrievalOpts retrieval_opts;
    CLI::App* eval_retrieval = app.add_subcommand(
        "eval-retrieval", "recall@k and MAP over a seeded candidate pool");
    eval_retrieval->add_option("--queries", retrieval_opts.queries_path)
        ->required();
    eval_retrieval->add_option("--query-emb", retrieval_opts.query_emb_path)
        ->required();
    eval_retrieval->add_option("--pool-emb", retrieval_opts.pool_emb_path)
        ->required();
    eval_retrieval->add_option("--pool-size", retrieval_opts.pool_size)
        ->capture_default_str();
    eval_retrieval->add_option("--k", retrieval_opts.ks, "recall cutoffs")
        ->delimiter(',')
        ->capture_default_str();
    eval_retrieval->add_option("--seed", retrieval_opts.seed_text, "rng seed")
        ->capture_default_str();
    eval_retrieval->add_flag("--cosine", retrieval_opts.cosine,
                             "cosine scoring instead of raw dot product");
    eval_retrieval->add_option("--out", retrieval_opts.out_path,
                               "report output");
    eval_retrieval->add_option("--workers", retrieval_opts.workers,
                               "worker threads")
        ->capture_default_str();

    CommonOpts check_opts;
    CLI::App* parse_check = app.add_subcommand(
        "parse-check", "verify every assembly_text in a corpus parses");
    parse_check->add_option("input", check_opts.in_path, "corpus path")
        ->required();
    parse_check->add_option("--workers", check_opts.workers, "worker threads")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed())
            return cmd_build_dataset(build_opts);
        if (clean->parsed())
            return cmd_clean_docstrings(clean_opts);
        if (eval_seq->parsed())
            return cmd_eval_seq(seq_opts);
        if (eval_runtime->parsed())
            return cmd_eval_runtime(runtime_opts);
        if (infonce->parsed())
            return cmd_infonce(infonce_opts);
        if (eval_retrieval->parsed())
            return cmd_eval_retrieval(retrieval_opts);
        if (parse_check->parsed())
            return cmd_parse_check(check_opts);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const MalformedInput& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitMalformed;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitMalformed;
    } catch (const AembFormatError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitMalformed;
    }
    return kExitUsage;
}
