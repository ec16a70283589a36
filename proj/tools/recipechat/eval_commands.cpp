#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "recipechat/error.hpp"
#include "recipechat/history.hpp"
#include "recipechat/intent.hpp"
#include "recipechat/metrics.hpp"
#include "recipechat/service.hpp"
#include "recipechat/tracker.hpp"

namespace recipechat::cli {

using nlohmann::ordered_json;

namespace {

std::vector<Conversation> read_conversation_files(const std::vector<std::string>& paths) {
  std::vector<Conversation> out;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open " + p);
    try {
      auto part = read_conversations(in);
      std::move(part.begin(), part.end(), std::back_inserter(out));
    } catch (const ParseError& e) {
      throw ParseError(p + ": " + e.what(), e.raw());
    }
  }
  return out;
}

// Either one recipes file shared by every conversations file, or one per file.
Corpus load(const CorpusArgs& args) {
  if (args.recipes.size() == args.conversations.size()) {
    std::vector<Corpus> parts;
    for (std::size_t i = 0; i < args.recipes.size(); ++i) {
      parts.push_back(load_corpus(args.recipes[i], args.conversations[i]));
    }
    return parts.size() == 1 ? std::move(parts.front()) : merge(std::move(parts));
  }
  if (args.recipes.size() == 1) {
    std::ifstream in(args.recipes.front());
    if (!in) throw Error("cannot open " + args.recipes.front());
    return make_corpus(read_recipes(in), read_conversation_files(args.conversations));
  }
  throw ValidationError("give one --recipes file, or one per --conversations file");
}

BackendConfig load_backend(const std::string& path, bool for_intent) {
  const auto j = read_json_file(path);
  if (j.contains("kind")) {
    auto cfg = j.get<BackendConfig>();
    return cfg;
  }
  auto svc = service_config_from_json(j);
  if (for_intent && svc.intent_backend) return *svc.intent_backend;
  return svc.backend;
}

}  // namespace

int run_stats(const StatsArgs& args) {
  const auto format = parse_format(args.format);
  const auto corpus = load(args.corpus);
  const auto st = compute_stats(corpus);

  ordered_json out;
  out["dialogues"] = st.n_dialogues;
  out["recipes"] = st.n_recipes;
  out["utterances_per_dialogue"] = st.utterances_per_dialogue;
  out["steps_per_recipe"] = st.steps_per_recipe;
  out["tokens_per_recipe"] = st.tokens_per_recipe;
  out["sentences_per_step"] = st.sentences_per_step;
  out["tokens_per_step"] = st.tokens_per_step;

  Table table({"statistic", "value"});
  table.add({"dialogues", std::to_string(st.n_dialogues)});
  table.add({"recipes", std::to_string(st.n_recipes)});
  table.add({"utterances per dialogue", fixed(st.utterances_per_dialogue)});
  table.add({"steps per recipe", fixed(st.steps_per_recipe)});
  table.add({"tokens per recipe", fixed(st.tokens_per_recipe)});
  table.add({"sentences per step", fixed(st.sentences_per_step)});
  table.add({"tokens per step", fixed(st.tokens_per_step)});

  Table overlap({"n", "micro-token", "macro-token", "micro-type"});
  if (args.table2) {
    const auto utts = collect_utterances(corpus.conversations, args.include_user);
    const double d1 = distinct_n(utts, 1);
    const double d2 = distinct_n(utts, 2);
    ordered_json t2;
    t2["pool"] = args.include_user ? "all" : "agent";
    t2["distinct1"] = d1;
    t2["distinct2"] = d2;
    table.add({"distinct-1", fixed(d1)});
    table.add({"distinct-2", fixed(d2)});
    ordered_json ov = ordered_json::object();
    for (int n = 1; n <= 5; ++n) {
      ordered_json row;
      std::vector<std::string> cells{std::to_string(n)};
      for (auto v : {OverlapVariant::kMicroToken, OverlapVariant::kMacroToken, OverlapVariant::kMicroType}) {
        const double x = recipe_ngram_overlap(corpus, n, v);
        row[to_string(v)] = x;
        cells.push_back(fixed(x));
      }
      ov[std::to_string(n)] = row;
      overlap.add(std::move(cells));
    }
    t2["overlap"] = ov;
    out["table2"] = t2;
  }

  Table hist({"delta", "count"});
  if (args.histogram) {
    ordered_json h = ordered_json::object();
    for (const auto& [delta, count] : state_change_histogram(corpus.conversations)) {
      h[std::to_string(delta)] = count;
      hist.add({(delta > 0 ? "+" : "") + std::to_string(delta), std::to_string(count)});
    }
    out["state_change_histogram"] = h;
  }

  if (format == Format::kJson) {
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  table.print(std::cout);
  if (args.table2) {
    std::cout << "\nrecipe n-gram overlap (%)\n";
    overlap.print(std::cout);
  }
  if (args.histogram) {
    std::cout << "\nstate change histogram\n";
    hist.print(std::cout);
  }
  return 0;
}

int run_track(const TrackArgs& args) {
  const auto format = parse_format(args.format);
  TrackerConfig config;
  if (scorer_kind_from_string(args.scorer) == ScorerKind::kEmbedding) {
    if (args.embed_url.empty()) throw ValidationError("--scorer embedding needs --embed-url");
    EmbeddingEndpoint ep;
    ep.url = args.embed_url;
    ep.auth_env = args.embed_auth_env;
    config = TrackerConfig::sentence_embedding(ep);
  }
  if (args.alpha1) config.alpha1 = *args.alpha1;
  if (args.alpha2) config.alpha2 = *args.alpha2;
  config.validate();

  const auto corpus = load(args.corpus);
  const auto scorer = make_scorer(config);

  if (args.report) {
    const auto r = evaluate_corpus_tracking(corpus, config, *scorer);
    if (format == Format::kJson) {
      ordered_json out;
      out["scorer"] = to_string(config.scorer);
      out["alpha1"] = config.alpha1;
      out["alpha2"] = config.alpha2;
      out["annotated"] = r.annotated;
      out["correct"] = r.correct;
      out["accuracy"] = 100.0 * r.accuracy;
      std::cout << out.dump(2) << '\n';
    } else {
      Table t({"scorer", "alpha1", "alpha2", "turns", "correct", "accuracy"});
      t.add({to_string(config.scorer), fixed(config.alpha1, 2), fixed(config.alpha2, 2), std::to_string(r.annotated),
             std::to_string(r.correct), fixed(100.0 * r.accuracy)});
      t.print(std::cout);
    }
    return 0;
  }

  ordered_json all = ordered_json::array();
  Table t({"conversation", "turn", "state", "gold"});
  for (const auto& c : corpus.conversations) {
    const auto tracked = track_conversation(c, corpus.recipe_for(c), config, *scorer);
    ordered_json states = ordered_json::array();
    for (const auto& tt : tracked) {
      const auto& gold = c.turns[tt.turn_index].gold_state;
      ordered_json row{{"turn", tt.turn_index}, {"state", tt.state.current_step}};
      if (gold) row["gold"] = *gold;
      states.push_back(row);
      t.add({c.id, std::to_string(tt.turn_index), std::to_string(tt.state.current_step),
             gold ? std::to_string(*gold) : "-"});
    }
    all.push_back({{"id", c.id}, {"states", states}});
  }
  if (format == Format::kJson) {
    std::cout << all.dump(2) << '\n';
  } else {
    t.print(std::cout);
  }
  return 0;
}

int run_eval_intent(const EvalIntentArgs& args) {
  const auto format = parse_format(args.format);
  auto catalog = args.catalog.empty() ? IntentCatalog::cooking() : IntentCatalog::load(args.catalog);
  if (args.permutation_seed) {
    catalog = catalog.with_permutation(IntentCatalog::random_permutation(catalog.size(), *args.permutation_seed));
  }
  const auto backend = make_backend(load_backend(args.backend, true));
  const auto conversations = read_conversation_files(args.conversations);

  struct Target {
    const Conversation* conv;
    std::size_t turn;
  };
  std::vector<Target> targets;
  for (const auto& c : conversations) {
    for (std::size_t i = 0; i < c.turns.size(); ++i) {
      if (c.turns[i].role == Role::kUser && c.turns[i].gold_intents) targets.push_back({&c, i});
    }
  }
  if (targets.size() <= args.k_shot) throw ValidationError("not enough annotated user turns after the k-shot prefix");

  auto history_of = [](const Target& t) {
    return std::span<const Turn>(t.conv->turns.data(), t.turn);
  };

  IntentOptions options;
  options.char_budget = args.history_budget;
  for (std::size_t k = 0; k < args.k_shot; ++k) {
    const auto& t = targets[k];
    options.demonstrations.push_back(
        build_intent_prompt(catalog, history_of(t), t.conv->turns[t.turn].text, args.history_budget) + " " +
        format_prediction(*t.conv->turns[t.turn].gold_intents, catalog));
  }
  targets.erase(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(args.k_shot));

  std::vector<std::set<int>> predictions(targets.size()), golds(targets.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> parse_failures{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < targets.size();) {
      const auto& t = targets[i];
      golds[i] = *t.conv->turns[t.turn].gold_intents;
      try {
        predictions[i] = detect_intents(*backend, catalog, history_of(t), t.conv->turns[t.turn].text, options).intents;
      } catch (const ParseError& e) {
        ++parse_failures;
        std::cerr << "unparseable output for " << t.conv->id << " turn " << t.turn << ": " << e.raw() << '\n';
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = targets.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < std::min(args.jobs, targets.size()); ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  const double f1 = micro_f1(predictions, golds);
  if (format == Format::kJson) {
    ordered_json out;
    out["utterances"] = targets.size();
    out["k_shot"] = args.k_shot;
    out["parse_failures"] = parse_failures.load();
    out["micro_f1"] = 100.0 * f1;
    std::cout << out.dump(2) << '\n';
  } else {
    Table t({"utterances", "k-shot", "parse failures", "micro-F1"});
    t.add({std::to_string(targets.size()), std::to_string(args.k_shot), std::to_string(parse_failures.load()),
           fixed(100.0 * f1)});
    t.print(std::cout);
  }
  return 0;
}

int run_eval_gen(const EvalGenArgs& args) {
  const auto format = parse_format(args.format);
  const auto hyp = read_lines(args.hyp);
  const auto ref = read_lines(args.ref);
  BleuOptions options;
  options.smooth = args.smooth;
  const auto report = evaluate_generation(hyp, ref, options);
  const auto bleu = corpus_bleu4_stats(hyp, ref, options);

  if (format == Format::kJson) {
    ordered_json out;
    out["pairs"] = hyp.size();
    out["bleu4"] = report.bleu4;
    out["brevity_penalty"] = bleu.brevity_penalty;
    out["precisions"] = ordered_json::array();
    for (int n = 0; n < 4; ++n) {
      out["precisions"].push_back(bleu.totals[n] ? 100.0 * double(bleu.matches[n]) / double(bleu.totals[n]) : 0.0);
    }
    out["distinct1"] = report.distinct1;
    out["distinct2"] = report.distinct2;
    out["avg_length"] = report.avg_length;
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  Table t({"metric", "value"});
  t.add({"pairs", std::to_string(hyp.size())});
  t.add({"BLEU-4", fixed(report.bleu4, 2)});
  t.add({"brevity penalty", fixed(bleu.brevity_penalty, 3)});
  for (int n = 0; n < 4; ++n) {
    const double p = bleu.totals[n] ? 100.0 * double(bleu.matches[n]) / double(bleu.totals[n]) : 0.0;
    t.add({"p" + std::to_string(n + 1), fixed(p, 2)});
  }
  t.add({"distinct-1", fixed(report.distinct1)});
  t.add({"distinct-2", fixed(report.distinct2)});
  t.add({"avg length", fixed(report.avg_length)});
  t.print(std::cout);
  return 0;
}

}  // namespace recipechat::cli
