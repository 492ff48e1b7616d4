#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "landau/landau_bound.hpp"

namespace landau
{

/// All 4^t words of length t over {1,2,3,4}, in lexicographic order.
inline std::vector<Word> enumerate_words(std::uint64_t t)
{
    if (t > 12) {
        fail(ErrorCategory::resource_cap, "4^" + std::to_string(t) + " words is beyond the enumeration cap");
    }
    std::vector<Word> out;
    out.reserve(std::size_t{1} << (2 * t));
    Word w(t, 1);
    while (true) {
        out.push_back(w);
        std::size_t k = t;
        while (k > 0 && w[k - 1] == 4) {
            w[--k] = 1;
        }
        if (k == 0) {
            return out;
        }
        ++w[k - 1];
    }
}

/// Builds the bounds provider for one word's stream (it may read the stream).
using BoundsFactory = std::function<std::unique_ptr<BoundsProvider>(PiStream &, const BoundSchedule &)>;

struct SearchBudget {
    std::uint64_t max_t = 1;
    LambdaOptions pipeline; // per-word budgets; max_work is the per-pipeline work cap
};

struct WordResult {
    Word word;
    std::optional<Dyadic> l;
    std::uint64_t query_depth = 0;
    std::string error;
    friend bool operator==(const WordResult &, const WordResult &) = default;
};

struct StepSummary {
    std::uint64_t t = 0;
    std::uint64_t words = 0;
    bool completed = false;
    std::uint64_t max_depth = 0;
    std::optional<Dyadic> l_min;
    std::string error;
    friend bool operator==(const StepSummary &, const StepSummary &) = default;
};

struct SearchReport {
    std::uint64_t n = 0;
    std::uint64_t t_reached = 0;        // last fully completed step
    bool any_completed = false;
    std::optional<Dyadic> l_infimum;    // minimum of per_word at t_reached
    std::string status = "budget_exhausted";
    std::vector<WordResult> per_word;   // the words of step t_reached
    std::vector<StepSummary> steps;
    std::string context_lower = "0.5";
    std::string context_upper = "0.54325";
    friend bool operator==(const SearchReport &, const SearchReport &) = default;
};

inline bool exhausts_budget(ErrorCategory c)
{
    return c == ErrorCategory::budget_exhausted || c == ErrorCategory::resource_cap ||
           c == ErrorCategory::tolerance_too_tight;
}

/// Runs the pipeline on `stream` (labelled w) and records l and the query depth. Budget
/// exhaustion is recorded on the result; other failures propagate.
inline WordResult evaluate_stream(PiStream &stream, const Word &w, std::uint64_t n, const BoundSchedule &schedule,
                                  const BoundsFactory &bounds, const LambdaOptions &opt)
{
    WordResult r;
    r.word = w;
    try {
        const auto provider = bounds(stream, schedule);
        const LambdaCertificate c = lambda_lower_bound(stream, schedule, n, *provider, opt);
        r.l = c.l_reported;
    } catch (const Error &e) {
        if (!exhausts_budget(e.category())) {
            fail(e.category(), "word '" + word_string(w) + "': " + e.what());
        }
        r.error = e.what();
    }
    r.query_depth = query_depth(stream);
    return r;
}

/// Runs the pipeline on the stream w 1 1 1 ... and records l and the query depth.
inline WordResult evaluate_word(const Word &w, std::uint64_t n, const BoundSchedule &schedule,
                                const BoundsFactory &bounds, const LambdaOptions &opt)
{
    PiStream stream = PiStream::from_word(w, 1);
    return evaluate_stream(stream, w, n, schedule, bounds, opt);
}

/// For t = 0, 1, ...: evaluates every word w 1^inf with |w| = t. Certified once every run
/// at step t stayed within the first t stream positions; otherwise advances t until the
/// budget ends. A run that exhausts its budget ends the search at the previous step.
inline SearchReport landau_estimate(std::uint64_t n, const BoundSchedule &schedule, const BoundsFactory &bounds,
                                    const SearchBudget &budget, unsigned threads = 1)
{
    if (n < 1) {
        fail(ErrorCategory::invalid_argument, "precision index n must be >= 1");
    }
    SearchReport report;
    report.n = n;
    threads = resolve_threads(threads);
    for (std::uint64_t t = 0; t <= budget.max_t; ++t) {
        const auto words = enumerate_words(t);
        std::vector<WordResult> results(words.size());
        LambdaOptions opt = budget.pipeline;
        // parallel over words, or inside the single pipeline
        const unsigned outer = words.size() > 1 ? threads : 1;
        opt.threads = words.size() > 1 ? 1 : threads;
        parallel_for(words.size(), outer, [&](std::size_t b, std::size_t e, unsigned) {
            for (std::size_t k = b; k < e; ++k) {
                results[k] = evaluate_word(words[k], n, schedule, bounds, opt);
            }
        });

        StepSummary step;
        step.t = t;
        step.words = words.size();
        step.completed = true;
        for (const auto &r : results) {
            step.max_depth = std::max(step.max_depth, r.query_depth);
            if (!r.l) {
                step.completed = false;
                if (step.error.empty()) {
                    step.error = "word '" + word_string(r.word) + "': " + r.error;
                }
                continue;
            }
            step.l_min = step.l_min ? min(*step.l_min, *r.l) : *r.l;
        }
        report.steps.push_back(step);
        if (!step.completed) {
            report.status = "budget_exhausted";
            return report;
        }
        report.any_completed = true;
        report.t_reached = t;
        report.l_infimum = step.l_min;
        report.per_word = std::move(results);
        if (step.max_depth <= t) {
            report.status = "certified";
            return report;
        }
    }
    report.status = "budget_exhausted";
    return report;
}

inline nlohmann::ordered_json report_json(const SearchReport &r)
{
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["status"] = r.status;
    j["t_reached"] = r.any_completed ? nlohmann::ordered_json(r.t_reached) : nlohmann::ordered_json(nullptr);
    j["l_infimum"] = r.l_infimum ? nlohmann::ordered_json(r.l_infimum->str()) : nlohmann::ordered_json(nullptr);
    j["l_infimum_approx"] = r.l_infimum ? nlohmann::ordered_json(r.l_infimum->to_double()) : nlohmann::ordered_json(nullptr);
    j["context_bounds"] = {{"lower", r.context_lower}, {"upper", r.context_upper}};
    auto &steps = j["steps"] = nlohmann::ordered_json::array();
    for (const auto &s : r.steps) {
        nlohmann::ordered_json e;
        e["t"] = s.t;
        e["words"] = s.words;
        e["completed"] = s.completed;
        e["max_query_depth"] = s.max_depth;
        e["l_min"] = s.l_min ? nlohmann::ordered_json(s.l_min->str()) : nlohmann::ordered_json(nullptr);
        if (!s.error.empty()) {
            e["error"] = s.error;
        }
        steps.push_back(e);
    }
    auto &words = j["per_word"] = nlohmann::ordered_json::array();
    for (const auto &w : r.per_word) {
        nlohmann::ordered_json e;
        e["word"] = word_string(w.word);
        e["l"] = w.l ? nlohmann::ordered_json(w.l->str()) : nlohmann::ordered_json(nullptr);
        e["query_depth"] = w.query_depth;
        words.push_back(e);
    }
    return j;
}

/// "word,l,query_depth" per evaluated word of step t_reached.
inline void write_per_word_csv(std::ostream &out, const SearchReport &r)
{
    out << "word,l,query_depth\n";
    for (const auto &w : r.per_word) {
        out << word_string(w.word) << "," << (w.l ? w.l->str() : "") << "," << w.query_depth << "\n";
    }
}

} // namespace landau
