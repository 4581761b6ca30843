// Command-line front end: synthesis, checks, plumbing and the batch
// runner, over the line-oriented generator format.
//
// Exit codes: 0 success / check passed; 1 check failed (witness on
// standard output) or batch expectations missed; 2 usage, parse or
// precondition errors.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <des/des.hpp>

namespace {

using des::Generator;
using nlohmann::json;

struct Options {
  std::string plant_file, spec_file, ambient_file, input_file, batch_file;
  std::vector<std::string> product_files;
  std::string out_file, report_file, dot_file;
  std::optional<std::string> unobservable, uncontrollable;
  std::string condition_events = "all";
  bool json_report = false;
  bool minimize_result = false;
  int jobs = 1;
};

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

/// Replace event attributes when the override flags were given. A present
/// but empty list means "none": --unobservable= makes everything
/// observable.
des::EventTablePtr overridden(des::EventTablePtr table, const Options& o) {
  if (!o.unobservable && !o.uncontrollable) return table;
  auto uo = split_csv(o.unobservable.value_or(""));
  auto uc = split_csv(o.uncontrollable.value_or(""));
  return table->with_attributes(o.unobservable ? &uo : nullptr,
                                o.uncontrollable ? &uc : nullptr);
}

struct Inputs {
  Generator plant, candidate;
  std::optional<Generator> ambient;
};

/// Load the plant and the candidate onto one (possibly overridden)
/// alphabet. Synthesis commands compose a given --spec with the plant;
/// check commands take it as the candidate language verbatim.
Inputs load_inputs(const Options& o, bool compose_spec) {
  Inputs in;
  Generator plant = des::load_generator(o.plant_file);
  Generator candidate = plant;
  if (!o.spec_file.empty()) {
    Generator spec = des::load_generator(o.spec_file);
    candidate = compose_spec ? des::compose(spec, plant) : std::move(spec);
  }
  std::vector<Generator> parts{plant, candidate};
  if (!o.ambient_file.empty()) parts.push_back(des::load_generator(o.ambient_file));
  auto table = overridden(des::union_alphabet(parts), o);
  in.plant = des::remap_events(plant, table);
  in.candidate = des::remap_events(candidate, table);
  if (parts.size() == 3) in.ambient = des::remap_events(parts[2], table);
  return in;
}

json generator_stats(const Generator& g) {
  return json{{"states", g.num_states()},
              {"transitions", g.num_transitions()},
              {"marked", g.num_marked()},
              {"empty", g.empty()}};
}

/// Report goes to --report as JSON always, and to standard output when
/// --json asks for it (in which case the generator dump is suppressed
/// unless --out says where to put it).
void emit_report(const Options& o, json rep) {
  rep["schema"] = "desreport/1";
  if (!o.report_file.empty()) {
    std::ofstream f(o.report_file);
    if (!f)
      throw des::DesError(des::ErrorKind::UnknownReference,
                          "cannot write '" + o.report_file + "'");
    f << rep.dump(2) << '\n';
  }
  if (o.json_report) std::cout << rep.dump(2) << '\n';
}

void emit_generator(const Options& o, const Generator& g) {
  if (!o.out_file.empty() && o.out_file != "-") {
    des::save_generator(o.out_file, g);
    return;
  }
  if (!o.json_report) des::write_generator(std::cout, g);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string word_text(const Generator& g, const std::vector<int32_t>& w) {
  return des::format_word(*g.events, w);
}

int run_synthesis(const std::string& cmd, const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  Inputs in = load_inputs(o, /*compose_spec=*/true);
  json rep{{"command", cmd}};
  Generator result;
  if (cmd == "supcon") {
    result = des::supcon(in.plant, in.candidate);
  } else if (cmd == "supnorm") {
    result = des::supnorm(in.plant, in.candidate);
  } else if (cmd == "supnormcon") {
    result = des::supnorm_con(in.plant, in.candidate);
  } else if (cmd == "suprelobs") {
    auto filter = o.condition_events == "controllable"
                      ? des::ConditionEvents::ControllableOnly
                      : des::ConditionEvents::All;
    const Generator& ambient = in.ambient ? *in.ambient : in.candidate;
    auto sup = des::suprelobs(in.plant, ambient, in.candidate, filter);
    result = sup.result;
    rep["normalized"] = generator_stats(sup.normalized);
    json iterations = json::array();
    for (const auto& it : sup.iterations) {
      json removed = json::array();
      for (const auto& r : it.removed)
        removed.push_back(json{{"src", r.src}, {"event", r.event}, {"dst", r.dst}});
      iterations.push_back(json{{"group_sizes", it.family_sizes},
                                {"removed", removed},
                                {"unmarked", it.unmarked}});
    }
    rep["iterations"] = iterations;
  } else if (cmd == "suprelobscon") {
    auto pipe = des::suprelobs_con(in.plant, in.candidate);
    result = pipe.result;
    rep["rounds"] = pipe.rounds;
    json trace = json::array();
    for (const auto& round : pipe.trace)
      trace.push_back(json{{"after_control_pass", round.states_after_control_pass},
                           {"after_observation_pass", round.states_after_observation_pass},
                           {"sweeps", round.observation_iterations}});
    rep["trace"] = trace;
  }
  if (o.minimize_result) result = des::minimize(result);
  rep["result"] = generator_stats(result);
  rep["seconds"] = seconds_since(t0);
  emit_generator(o, result);
  emit_report(o, rep);
  std::cerr << cmd << ": " << result.num_states() << " states, "
            << result.num_transitions() << " transitions\n";
  return 0;
}

int run_check(const std::string& cmd, const Options& o) {
  json rep{{"command", cmd}};
  bool holds = true;
  if (cmd == "check-observer") {
    Generator k = des::load_generator(o.input_file);
    k.events = overridden(k.events, o);
    auto r = des::is_lm_observer(k);
    holds = r.holds;
    if (!holds) {
      std::cout << "observer property fails: after " << word_text(k, r.witness_s)
                << " the observed continuation " << word_text(k, r.witness_t)
                << " promises a marked completion no real run delivers\n";
      rep["witness_s"] = word_text(k, r.witness_s);
      rep["witness_t"] = word_text(k, r.witness_t);
    } else {
      std::cout << "observer property holds\n";
    }
  } else {
    Inputs in = load_inputs(o, /*compose_spec=*/false);
    if (cmd == "check-cont") {
      auto r = des::is_controllable(in.plant, in.candidate);
      holds = r.holds;
      if (!holds) {
        std::cout << "controllability violated: after " << word_text(in.plant, r.witness)
                  << " the plant allows uncontrollable "
                  << in.plant.events->name(r.event) << "\n";
        rep["witness"] = word_text(in.plant, r.witness);
        rep["event"] = in.plant.events->name(r.event);
      } else {
        std::cout << "controllable\n";
      }
    } else if (cmd == "check-norm") {
      auto r = des::is_normal(in.plant, in.candidate);
      holds = r.marked_normal && r.closed_normal;
      rep["marked_normal"] = r.marked_normal;
      rep["closed_normal"] = r.closed_normal;
      if (!holds) {
        std::cout << "normality violated:";
        if (r.marked_witness) {
          std::cout << " lookalike marked string " << word_text(in.plant, *r.marked_witness)
                    << " is outside the language;";
          rep["marked_witness"] = word_text(in.plant, *r.marked_witness);
        }
        if (r.closed_witness) {
          std::cout << " lookalike string " << word_text(in.plant, *r.closed_witness)
                    << " is outside the closure;";
          rep["closed_witness"] = word_text(in.plant, *r.closed_witness);
        }
        std::cout << "\n";
      } else {
        std::cout << "normal\n";
      }
    } else {  // check-obs, check-relobs
      des::RelObsReport r;
      if (cmd == "check-obs") {
        r = des::check_observability(in.plant, in.candidate);
      } else {
        const Generator& ambient = in.ambient ? *in.ambient : in.candidate;
        r = des::check_relative_observability(in.plant, ambient, in.candidate);
      }
      holds = r.holds;
      if (!holds) {
        rep["condition"] = r.condition;
        rep["witness_s"] = word_text(in.plant, r.witness_s);
        rep["witness_s_prime"] = word_text(in.plant, r.witness_s_prime);
        if (r.condition == 1) {
          rep["event"] = in.plant.events->name(r.event);
          std::cout << "condition 1 violated: s=" << word_text(in.plant, r.witness_s)
                    << " s'=" << word_text(in.plant, r.witness_s_prime)
                    << " event=" << in.plant.events->name(r.event) << "\n";
        } else {
          std::cout << "condition 2 violated: s=" << word_text(in.plant, r.witness_s)
                    << " is marked, lookalike s'=" << word_text(in.plant, r.witness_s_prime)
                    << " is marked in the plant but not in the candidate\n";
        }
      } else {
        std::cout << (cmd == "check-obs" ? "observable\n" : "relatively observable\n");
      }
    }
  }
  rep["holds"] = holds;
  emit_report(o, rep);
  return holds ? 0 : 1;
}

int run_plumbing(const std::string& cmd, const Options& o) {
  if (cmd == "product") {
    std::vector<Generator> parts;
    for (const auto& f : o.product_files) parts.push_back(des::load_generator(f));
    Generator r = des::compose_all(parts);
    auto table = overridden(r.events, o);
    r.events = table;
    if (o.minimize_result) r = des::minimize(r);
    emit_generator(o, r);
    emit_report(o, json{{"command", cmd}, {"result", generator_stats(r)}});
    return 0;
  }
  Generator g = des::load_generator(o.input_file);
  g.events = overridden(g.events, o);
  if (cmd == "trim") g = des::trim(g);
  if (cmd == "minimize") g = des::minimize(g);
  if (cmd == "stats") {
    if (o.minimize_result) g = des::minimize(g);
    json rep{{"command", cmd}, {"result", generator_stats(g)}};
    rep["events"] = json{{"total", g.events->size()},
                         {"controllable", (int)g.events->controllable_events().size()},
                         {"observable", (int)g.events->observable_events().size()}};
    rep["nonblocking"] = des::is_nonblocking(g);
    if (!o.json_report) {
      std::cout << "states " << g.num_states() << "\n"
                << "transitions " << g.num_transitions() << "\n"
                << "marked " << g.num_marked() << "\n"
                << "events " << g.events->size() << " (controllable "
                << g.events->controllable_events().size() << ", observable "
                << g.events->observable_events().size() << ")\n"
                << "nonblocking " << (des::is_nonblocking(g) ? "yes" : "no") << "\n";
    }
    if (!o.dot_file.empty()) {
      std::ofstream f(o.dot_file);
      if (!f)
        throw des::DesError(des::ErrorKind::UnknownReference,
                            "cannot write '" + o.dot_file + "'");
      des::write_dot(f, g, o.input_file);
    }
    emit_report(o, rep);
    return 0;
  }
  if (o.minimize_result) g = des::minimize(g);
  emit_generator(o, g);
  emit_report(o, json{{"command", cmd}, {"result", generator_stats(g)}});
  return 0;
}

int run_batch_cmd(const Options& o) {
  auto plan = des::load_batch(o.batch_file);
  auto outcomes = des::run_batch(plan, o.jobs);
  bool all_ok = true;
  json cases = json::array();
  for (const auto& out : outcomes) {
    all_ok = all_ok && out.ok;
    cases.push_back(json{{"name", out.name},
                         {"relobs_states", out.relobs_states},
                         {"normal_states", out.normal_states},
                         {"rounds", out.rounds},
                         {"seconds", out.seconds},
                         {"ok", out.ok},
                         {"mismatch", out.mismatch}});
  }
  if (!o.json_report) {
    std::cout << std::left << std::setw(16) << "case" << std::right << std::setw(8)
              << "relobs" << std::setw(8) << "normal" << std::setw(8) << "rounds"
              << std::setw(10) << "seconds"
              << "  status\n";
    for (const auto& out : outcomes) {
      std::cout << std::left << std::setw(16) << out.name << std::right << std::setw(8)
                << out.relobs_states << std::setw(8) << out.normal_states << std::setw(8)
                << out.rounds << std::setw(10) << std::fixed << std::setprecision(2)
                << out.seconds << "  " << (out.ok ? "ok" : out.mismatch) << "\n";
    }
  }
  emit_report(o, json{{"command", "batch"}, {"ok", all_ok}, {"cases", cases}});
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervisor synthesis for discrete-event systems under partial observation"};
  app.require_subcommand(1);
  Options o;
  std::string cmd;

  auto add_io = [&](CLI::App* sc) {
    sc->add_option("--out", o.out_file, "write the resulting generator here ('-' = stdout)");
    sc->add_option("--report", o.report_file, "write a JSON report here");
    sc->add_flag("--json", o.json_report,
                 "print the JSON report on stdout (suppresses the generator dump; "
                 "use --out to keep it)");
  };
  auto add_overrides = [&](CLI::App* sc) {
    sc->add_option("--unobservable", o.unobservable,
                   "comma-separated unobservable events, replacing the file "
                   "attributes ('' = all observable)");
    sc->add_option("--uncontrollable", o.uncontrollable,
                   "comma-separated uncontrollable events, replacing the file "
                   "attributes ('' = all controllable)");
  };
  auto add_plant_spec = [&](CLI::App* sc, bool spec_required) {
    sc->add_option("--plant", o.plant_file, "plant generator file")->required();
    auto* spec = sc->add_option("--spec", o.spec_file, "specification generator file");
    if (spec_required) spec->required();
    add_overrides(sc);
    add_io(sc);
  };

  for (const char* name : {"supcon", "supnorm", "supnormcon", "suprelobscon"}) {
    auto* sc = app.add_subcommand(
        name, std::string("supremal ") +
                  (name == std::string("supcon") ? "controllable"
                   : name == std::string("supnorm") ? "normal"
                   : name == std::string("supnormcon") ? "normal and controllable"
                   : "relatively observable and controllable") +
                  " sublanguage (candidate = spec composed with plant)");
    add_plant_spec(sc, false);
    sc->add_flag("--minimize", o.minimize_result, "minimize the result");
    sc->callback([&cmd, name] { cmd = name; });
  }
  {
    auto* sc = app.add_subcommand(
        "suprelobs", "supremal relatively observable sublanguage within an ambient");
    add_plant_spec(sc, false);
    sc->add_option("--ambient", o.ambient_file,
                   "ambient generator file (default: the candidate itself)");
    sc->add_option("--condition-events", o.condition_events,
                   "events the transition-removal condition acts on")
        ->check(CLI::IsMember({"all", "controllable"}));
    sc->add_flag("--minimize", o.minimize_result, "minimize the result");
    sc->callback([&cmd] { cmd = "suprelobs"; });
  }

  for (const char* name : {"check-obs", "check-relobs", "check-norm", "check-cont"}) {
    auto* sc = app.add_subcommand(
        name, std::string("check ") +
                  (name == std::string("check-obs") ? "observability"
                   : name == std::string("check-relobs") ? "relative observability"
                   : name == std::string("check-norm") ? "normality"
                   : "controllability") +
                  " of the --spec language against the plant (exit 1 + witness on failure)");
    add_plant_spec(sc, true);
    if (name == std::string("check-relobs"))
      sc->add_option("--ambient", o.ambient_file,
                     "ambient generator file (default: the candidate itself)");
    sc->callback([&cmd, name] { cmd = name; });
  }
  {
    auto* sc = app.add_subcommand("check-observer",
                                  "check the marked-language observer property of a "
                                  "generator's projection");
    sc->add_option("file", o.input_file, "generator file")->required();
    add_overrides(sc);
    add_io(sc);
    sc->callback([&cmd] { cmd = "check-observer"; });
  }

  {
    auto* sc = app.add_subcommand("product", "synchronous composition of generators");
    sc->add_option("files", o.product_files, "generator files")->expected(1, -1);
    add_overrides(sc);
    sc->add_flag("--minimize", o.minimize_result, "minimize the result");
    add_io(sc);
    sc->callback([&cmd] { cmd = "product"; });
  }
  for (const char* name : {"trim", "minimize", "stats"}) {
    auto* sc = app.add_subcommand(
        name, name == std::string("trim") ? "reachable and coreachable part"
              : name == std::string("minimize")
                  ? "language-equivalent minimal generator"
                  : "state/transition/event counts and nonblocking status");
    sc->add_option("file", o.input_file, "generator file")->required();
    add_overrides(sc);
    if (name == std::string("stats")) {
      sc->add_option("--dot", o.dot_file, "write a Graphviz rendering here");
      sc->add_flag("--minimize", o.minimize_result, "report minimized counts");
    }
    add_io(sc);
    sc->callback([&cmd, name] { cmd = name; });
  }
  {
    auto* sc = app.add_subcommand("batch", "run a batch plan and compare expectations");
    sc->add_option("file", o.batch_file, "batch plan file")->required();
    sc->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    add_io(sc);
    sc->callback([&cmd] { cmd = "batch"; });
  }

  try {
    app.parse(argc, argv);
    if (cmd == "batch") return run_batch_cmd(o);
    if (cmd.rfind("check", 0) == 0) return run_check(cmd, o);
    if (cmd == "product" || cmd == "trim" || cmd == "minimize" || cmd == "stats")
      return run_plumbing(cmd, o);
    return run_synthesis(cmd, o);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const des::DesError& e) {
    std::cerr << "error (" << des::to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
