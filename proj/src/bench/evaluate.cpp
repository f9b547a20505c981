#include "ocreval/bench/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "ocreval/core/digest.hpp"
#include "ocreval/ingest/unicode.hpp"
#include "ocreval/metrics/aggregate.hpp"

namespace ocreval::bench {

using nlohmann::json;

void EvalConfig::validate() const {
  if (strategies.empty()) throw Error("at least one ordering strategy is required");
  for (const auto& s : strategies) s.validate();
  fca.validate();
}

json config_to_json(const EvalConfig& c) {
  json policy{{"case_fold", c.policy.case_fold},
              {"unicode_form", c.policy.unicode_form == ingest::UnicodeForm::nfc ? "nfc" : "none"},
              {"collapse_whitespace", c.policy.collapse_whitespace}};
  if (c.policy.charset) {
    std::u32string members(c.policy.charset->members().begin(), c.policy.charset->members().end());
    policy["charset"] = {{"name", c.policy.charset->name()}, {"members", ingest::to_utf8(members)}};
  } else {
    policy["charset"] = nullptr;
  }
  json strategies = json::array();
  for (const auto& s : c.strategies) {
    json js{{"kind", order::to_string(s.kind)}};
    if (s.kind == order::OrderingKind::reference_guided) js["tau"] = s.tau;
    if (s.kind == order::OrderingKind::blind_centroid) js["row_overlap_threshold"] = s.row_overlap_threshold;
    strategies.push_back(js);
  }
  return json{{"policy", policy},
              {"strategies", strategies},
              {"fca", {{"min_split_length", c.fca.min_split_length},
                       {"max_match_penalty", c.fca.max_match_penalty}}},
              {"reference", c.reference_label}};
}

std::string config_digest(const EvalConfig& c) { return sha256_hex(config_to_json(c).dump()); }

EngineOutput engine_output(const EngineAdapter& adapter, EngineRun run) {
  EngineOutput out;
  out.engine = adapter.name;
  out.detector = adapter.detector;
  out.predictions = std::move(run.predictions);
  out.timings = std::move(run.timings);
  for (const auto& f : run.failures) out.failed_pages.push_back(f.page_id);
  return out;
}

std::size_t gt_char_count(const PageAnnotation& gt, const ingest::NormalizationPolicy& policy) {
  std::size_t n = 0;
  for (const auto& line : gt.lines) n += ingest::normalize(ingest::to_u32(line.text), policy).size();
  return n;
}

namespace {

struct Task {
  std::size_t engine = 0;
  std::size_t strategy = 0;
  std::size_t page = 0;
};

}  // namespace

std::vector<CorpusRow> corpus_rows(const std::vector<PageRow>& pages,
                                   const std::vector<EngineOutput>& outputs) {
  // Keyed by first appearance so the row order follows the page rows.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<const PageRow*>> groups;
  for (const auto& row : pages) {
    auto key = std::make_pair(row.engine, row.strategy);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(&row);
  }
  std::vector<CorpusRow> rows;
  for (const auto& key : keys) {
    const auto& group = groups[key];
    std::vector<metrics::PageMetric> crr, fca;
    double seconds = 0.0;
    std::size_t timed = 0;
    CorpusRow row;
    row.engine = key.first;
    row.strategy = key.second;
    for (const auto& o : outputs) {
      if (o.engine == key.first) row.detector = o.detector;
    }
    for (const PageRow* p : group) {
      crr.push_back({p->page_id, p->crr, p->gt_chars});
      fca.push_back({p->page_id, p->fca, p->gt_chars});
      if (p->seconds) {
        seconds += *p->seconds;
        ++timed;
      }
      row.failed_pages += p->failed ? 1 : 0;
    }
    const auto c = metrics::aggregate(crr);
    const auto f = metrics::aggregate(fca);
    row.crr = c.weighted;
    row.crr_unweighted = c.unweighted;
    row.fca = f.weighted;
    row.fca_unweighted = f.unweighted;
    row.pages = c.pages;
    row.gt_chars = c.gt_chars;
    if (timed) row.mean_seconds = seconds / static_cast<double>(timed);
    rows.push_back(row);
  }
  return rows;
}

EvalReport evaluate(const Corpus& gt, const std::vector<EngineOutput>& outputs,
                    const EvalConfig& config, const Corpus* reference) {
  config.validate();
  if (gt.pages.empty()) throw EmptyCorpus("ground truth corpus has no pages");
  if (!reference) reference = &gt;

  std::unordered_map<std::string, std::size_t> gt_index;
  for (std::size_t i = 0; i < gt.pages.size(); ++i) gt_index.emplace(gt.pages[i].page_id, i);

  // Per engine: gt page index -> prediction / timing / failure flag.
  struct Lookup {
    std::vector<const PageAnnotation*> pred;
    std::vector<std::optional<double>> seconds;
    std::vector<bool> failed;
  };
  std::vector<Lookup> lookups;
  for (const auto& o : outputs) {
    Lookup l{std::vector<const PageAnnotation*>(gt.pages.size(), nullptr),
             std::vector<std::optional<double>>(gt.pages.size()),
             std::vector<bool>(gt.pages.size(), false)};
    for (const auto& page : o.predictions.pages) {
      auto it = gt_index.find(page.page_id);
      if (it == gt_index.end()) {
        throw UnknownPage("engine '" + o.engine + "': prediction page '" + page.page_id +
                          "' is not in the ground truth");
      }
      l.pred[it->second] = &page;
    }
    for (const auto& t : o.timings) {
      auto it = gt_index.find(t.page_id);
      if (it != gt_index.end()) l.seconds[it->second] = t.reported_seconds();
    }
    for (const auto& id : o.failed_pages) {
      auto it = gt_index.find(id);
      if (it != gt_index.end()) l.failed[it->second] = true;
    }
    lookups.push_back(std::move(l));
  }

  std::unordered_map<std::string, const PageAnnotation*> ref_index;
  for (const auto& p : reference->pages) ref_index.emplace(p.page_id, &p);

  std::vector<std::size_t> weights(gt.pages.size());
  for (std::size_t i = 0; i < gt.pages.size(); ++i) weights[i] = gt_char_count(gt.pages[i], config.policy);

  std::vector<Task> tasks;
  for (std::size_t e = 0; e < outputs.size(); ++e) {
    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      for (std::size_t p = 0; p < gt.pages.size(); ++p) tasks.push_back({e, s, p});
    }
  }

  EvalReport report;
  report.config = config_to_json(config);
  report.config_digest = sha256_hex(report.config.dump());
  report.reference_label = config.reference_label;
  report.pages.resize(tasks.size());

  auto run_task = [&](const Task& t) {
    const PageAnnotation& g = gt.pages[t.page];
    const Lookup& l = lookups[t.engine];
    PageAnnotation empty;
    empty.page_id = g.page_id;
    const PageAnnotation& pred = l.pred[t.page] ? *l.pred[t.page] : empty;
    const auto& strategy = config.strategies[t.strategy];
    const PageAnnotation* ref = nullptr;
    if (auto it = ref_index.find(g.page_id); it != ref_index.end()) ref = it->second;
    PageAnnotation ordered;
    try {
      ordered = order::apply_strategy(strategy, pred, ref, config.policy);
    } catch (const MissingGeometry& e) {
      throw MissingGeometry("engine '" + outputs[t.engine].engine + "', page '" + g.page_id + "': " + e.what());
    }

    PageRow row;
    row.page_id = g.page_id;
    row.engine = outputs[t.engine].engine;
    row.strategy = order::to_string(strategy.kind);
    row.crr = metrics::page_crr(g, ordered, config.policy).value;
    row.fca = metrics::fca(g, ordered, config.policy, config.fca).value.value;
    row.seconds = l.seconds[t.page];
    row.gt_chars = weights[t.page];
    row.failed = l.failed[t.page] || !l.pred[t.page];
    return row;
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        report.pages[k] = run_task(tasks[k]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  unsigned jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  report.corpus = corpus_rows(report.pages, outputs);
  return report;
}

}  // namespace ocreval::bench
