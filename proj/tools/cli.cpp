#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fdp/adversary.hpp"
#include "fdp/bundling.hpp"
#include "fdp/dispatch.hpp"
#include "fdp/document.hpp"
#include "fdp/oracle.hpp"
#include "fdp/rng.hpp"
#include "fdp/sim.hpp"
#include "fdp/speeding.hpp"

namespace fdp::cli {

namespace {

using nlohmann::json;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Usage("cannot write " + path);
  f << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string capacity_str(const Capacity& c) { return c ? std::to_string(*c) : "inf"; }

Capacity parse_capacity(const std::string& s) {
  if (s.empty() || s == "inf") return std::nullopt;
  return std::stoi(s);
}

std::vector<Lean> parse_leans(const std::string& text, int p) {
  std::vector<Lean> out;
  for (char ch : text) out.push_back(parse_lean(ch));
  if (out.size() == 1) out.assign(static_cast<std::size_t>(p), out.front());
  return out;
}

/// Connected graph with unit edges: a random spanning tree plus chords.
MetricGraph random_unit_graph(std::uint64_t seed, int n, int chords) {
  Rng rng(seed);
  std::vector<Edge> es;
  for (int v = 1; v < n; ++v) es.push_back({static_cast<Vertex>(rng.uniform(0, v - 1)), static_cast<Vertex>(v), 1});
  for (int i = 0; i < chords; ++i) {
    const auto u = static_cast<Vertex>(rng.uniform(0, n - 1));
    const auto v = static_cast<Vertex>(rng.uniform(0, n - 1));
    if (u == v) continue;
    const bool dup = std::any_of(es.begin(), es.end(), [&](const Edge& e) {
      return (e.u == u && e.v == v) || (e.u == v && e.v == u);
    });
    if (!dup) es.push_back({u, v, 1});
  }
  return MetricGraph::dense(n, es, 0);
}

struct RunConfig {
  std::string algo = "tree";
  std::string f;
  std::string eps = "1/2";
  std::string mode = "exact";
  bool online = false;
};

struct RunOutput {
  Instance instance;
  Schedule schedule;
  FlowReport report;
  Rational speed{1};
  std::optional<Rational> bound;
  std::vector<std::string> trace;
  std::optional<std::uint64_t> trace_hash;
  std::vector<DoublingStage> stages;
};

std::optional<Rational> opt_f(const RunConfig& cfg) {
  if (cfg.f.empty()) return std::nullopt;
  return Rational::parse(cfg.f);
}

Rational need_f(const RunConfig& cfg) {
  auto f = opt_f(cfg);
  if (!f) throw Usage("--algo " + cfg.algo + " needs --F");
  if (*f <= Rational(0)) throw Usage("--F must be positive");
  return *f;
}

std::unique_ptr<OnlinePolicy> make_policy(const RunConfig& cfg, int k, Rational& speed,
                                          std::optional<Rational>& bound) {
  if (cfg.algo == "tree") {
    const Rational f = need_f(cfg);
    bound = Rational(k == 1 ? 8 : 24) * f;
    return tree_policy(f);
  }
  if (cfg.algo == "speeding") {
    const Rational f = need_f(cfg);
    SpeedConfig sc{Rational::parse(cfg.eps), parse_tour_mode(cfg.mode)};
    sc.check();
    speed = sc.speed();
    bound = sc.flow_bound(f);
    return speeding_policy(f, sc);
  }
  if (cfg.algo == "doubling") {
    // with --F read as a known F*, the wrapper is bounded by 8 beta F*
    if (auto f = opt_f(cfg)) bound = Rational(8) * tree_beta(k) * *f;
    return doubling_tree_policy(k);
  }
  if (cfg.algo == "fifo-single") return std::make_unique<FifoPolicy>(false);
  if (cfg.algo == "fifo-batch") return std::make_unique<FifoPolicy>(true);
  throw Usage("unknown --algo " + cfg.algo);
}

void collect(RunOutput& o, SimResult res, const OnlinePolicy& policy) {
  o.instance = std::move(res.instance);
  o.schedule = std::move(res.schedule);
  o.report = std::move(res.report);
  o.trace = std::move(res.trace);
  o.trace_hash = res.trace_hash;
  if (const auto* d = dynamic_cast<const DoublingPolicy*>(&policy)) o.stages = d->stages();
}

RunOutput run_instance(const Instance& inst, const RunConfig& cfg) {
  RunOutput o;
  const bool online = cfg.online || cfg.algo == "doubling" || cfg.algo.rfind("fifo", 0) == 0;
  if (online) {
    auto policy = make_policy(cfg, inst.k, o.speed, o.bound);
    collect(o, run_online(inst, *policy, o.speed), *policy);
    return o;
  }
  o.instance = inst;
  if (cfg.algo == "tree") {
    const Rational f = need_f(cfg);
    o.bound = Rational(inst.k == 1 ? 8 : 24) * f;
    o.schedule = run_tree_algorithm(inst, f).schedule;
  } else if (cfg.algo == "speeding") {
    const Rational f = need_f(cfg);
    SpeedConfig sc{Rational::parse(cfg.eps), parse_tour_mode(cfg.mode)};
    sc.check();
    o.speed = sc.speed();
    o.bound = sc.flow_bound(f);
    o.schedule = run_speeding(inst, f, sc).schedule;
  } else {
    throw Usage("unknown --algo " + cfg.algo);
  }
  o.report = validate(inst, o.schedule, o.speed);
  return o;
}

RunOutput run_adaptive(const json& desc, RunConfig cfg) {
  if (desc.value("adversary", "") != "capacity") throw Usage("--adaptive needs a capacity adversary descriptor");
  const int p = desc.at("p").get<int>();
  CapacityAdversary adv(p);
  AdversarySource source(adv);
  RunOutput o;
  auto policy = make_policy(cfg, 1, o.speed, o.bound);
  collect(o, run_online(adv.graph(), 1, 2, source, *policy, o.speed), *policy);
  return o;
}

bool passes(const RunOutput& o) { return !o.bound || o.report.max_flow <= *o.bound; }

json run_to_json(const RunOutput& o, const std::string& name, const RunConfig& cfg) {
  json doc;
  doc["instance"] = name;
  doc["algo"] = cfg.algo;
  doc["k"] = o.instance.k;
  doc["c"] = capacity_str(o.instance.capacity);
  doc["F"] = cfg.f.empty() ? json(nullptr) : rational_to_json(Rational::parse(cfg.f));
  doc["speed"] = rational_to_json(o.speed);
  doc["max_flow"] = rational_to_json(o.report.max_flow);
  doc["bound"] = o.bound ? rational_to_json(*o.bound) : json(nullptr);
  doc["pass"] = passes(o);
  if (o.trace_hash) {
    std::ostringstream h;
    h << std::hex << *o.trace_hash;
    doc["trace_hash"] = h.str();
  }
  if (!o.stages.empty()) {
    json st = json::array();
    for (const auto& s : o.stages) {
      st.push_back({{"start", rational_to_json(s.start)}, {"F", rational_to_json(s.f)},
                    {"delay", rational_to_json(s.delay)}});
    }
    doc["stages"] = st;
  }
  doc["released"] = instance_to_json(o.instance);
  doc["schedule"] = schedule_to_json(o.schedule, o.instance);
  doc["report"] = report_to_json(o.report);
  return doc;
}

// CSV rows shared by batch and report.
const char* kCsvHeader = "instance,algo,k,c,F,max_flow,bound,pass\n";

std::string json_field(const json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  return j.dump();
}

std::string csv_row(const json& doc) {
  std::ostringstream s;
  s << json_field(doc.at("instance")) << ',' << json_field(doc.at("algo")) << ',' << json_field(doc.at("k")) << ','
    << json_field(doc.at("c")) << ',' << json_field(doc.at("F")) << ',' << json_field(doc.at("max_flow")) << ','
    << json_field(doc.at("bound")) << ',' << json_field(doc.at("pass")) << '\n';
  return s.str();
}

std::string text_table(const std::vector<json>& docs) {
  std::ostringstream s;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-12s %3s %4s %8s %10s %10s %7s %s\n", "instance", "algo", "k", "c", "F",
                "max_flow", "bound", "ratio", "pass");
  s << line;
  for (const auto& d : docs) {
    std::string ratio = "-";
    if (!d.at("bound").is_null()) {
      const Rational mf = rational_from_json(d.at("max_flow"), "max_flow");
      const Rational b = rational_from_json(d.at("bound"), "bound");
      if (b > Rational(0)) {
        char r[32];
        std::snprintf(r, sizeof r, "%.3f", (mf / b).to_double());
        ratio = r;
      }
    }
    std::snprintf(line, sizeof line, "%-24s %-12s %3s %4s %8s %10s %10s %7s %s\n",
                  json_field(d.at("instance")).c_str(), json_field(d.at("algo")).c_str(),
                  json_field(d.at("k")).c_str(), json_field(d.at("c")).c_str(), json_field(d.at("F")).c_str(),
                  json_field(d.at("max_flow")).c_str(), json_field(d.at("bound")).c_str(), ratio.c_str(),
                  json_field(d.at("pass")).c_str());
    s << line;
  }
  return s.str();
}

void add_run_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--algo", cfg.algo, "tree | speeding | doubling | fifo-single | fifo-batch")
      ->check(CLI::IsMember({"tree", "speeding", "doubling", "fifo-single", "fifo-batch"}));
  cmd->add_option("--F", cfg.f, "flow time bound the algorithm is given");
  cmd->add_option("--eps", cfg.eps, "speeding slack, 0 < eps < 1");
  cmd->add_option("--mode", cfg.mode, "speeding tour builder")->check(CLI::IsMember({"exact", "tsp2", "cvrp"}));
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online food delivery: max flow time dispatch", "fdp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "seed for every random choice")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "write an instance document");
  std::string kind = "feasible";
  int p = 2;
  std::string lean = "L";
  std::string eps_text = "1/39";
  GenerateParams gp;
  std::string cap_text = "inf";
  Length tour_bound = 0;
  std::string gen_out;
  std::string witness_out;
  gen->add_option("--kind", kind)
      ->check(CLI::IsMember({"feasible", "base", "legs", "speeding", "hamiltonian", "copies", "capacity"}));
  gen->add_option("--p", p, "gadget size");
  gen->add_option("--lean", lean, "L, R, or one letter per phase");
  gen->add_option("--eps", eps_text, "speeding slack for --kind speeding");
  gen->add_option("--vertices", gp.vertices);
  gen->add_option("--k", gp.k);
  gen->add_option("--c", cap_text, "capacity or inf");
  gen->add_option("--requests", gp.requests);
  gen->add_option("--F", gp.f_target, "target optimum for --kind feasible");
  gen->add_option("--chords", gp.extra_edges, "extra edges beyond the tree");
  gen->add_option("--tour-bound", tour_bound, "claimed tour length for --kind copies");
  gen->add_option("-o,--out", gen_out);
  gen->add_option("--witness", witness_out, "also write the witness schedule (feasible only)");

  // run
  auto* run = app.add_subcommand("run", "run an algorithm on one instance");
  RunConfig rc;
  std::string run_in;
  std::string run_out;
  std::string trace_out;
  bool adaptive = false;
  add_run_flags(run, rc);
  run->add_option("-i,--instance", run_in, "instance document or adversary descriptor")->required();
  run->add_flag("--online", rc.online, "drive the algorithm through the event engine");
  run->add_flag("--adaptive", adaptive, "instance is an adversary descriptor");
  run->add_option("-o,--out", run_out);
  run->add_option("--trace", trace_out, "line-delimited event log");

  // batch
  auto* batch = app.add_subcommand("batch", "generate and run many seeded instances, CSV to stdout");
  RunConfig bc;
  GenerateParams bp;
  std::string batch_cap = "inf";
  int count = 20;
  int threads = 0;
  add_run_flags(batch, bc);
  batch->add_option("--count", count);
  batch->add_option("--threads", threads, "0 picks the hardware concurrency");
  batch->add_option("--vertices", bp.vertices);
  batch->add_option("--k", bp.k);
  batch->add_option("--c", batch_cap);
  batch->add_option("--requests", bp.requests);
  batch->add_option("--target", bp.f_target, "F_target of the generator; --F defaults to it");
  batch->add_flag("--online", bc.online);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact optimum for small instances");
  std::string oracle_in;
  int limit = 6;
  oracle->add_option("-i,--instance", oracle_in)->required();
  oracle->add_option("--limit", limit);

  // verify
  auto* verify = app.add_subcommand("verify", "validate a schedule and check a bound");
  std::string ver_inst;
  std::string ver_sched;
  std::string ver_speed;
  std::string ver_bound;
  verify->add_option("-i,--instance", ver_inst, "defaults to the instance recorded in a run output");
  verify->add_option("-s,--schedule", ver_sched, "schedule document or run output")->required();
  verify->add_option("--speed", ver_speed);
  verify->add_option("--bound", ver_bound);

  // report
  auto* report = app.add_subcommand("report", "tabulate run outputs");
  std::vector<std::string> report_in;
  std::string format = "text";
  report->add_option("inputs", report_in, "run output documents")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));

  // bundle
  auto* bundle = app.add_subcommand("bundle", "show the bundles the tree algorithm forms");
  std::string bundle_in;
  std::string bundle_f;
  bool bundle_dump = false;
  bundle->add_option("-i,--instance", bundle_in)->required();
  bundle->add_option("--F", bundle_f)->required();
  bundle->add_flag("--dump", bundle_dump);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*gen) {
      json doc;
      if (kind == "feasible") {
        gp.capacity = parse_capacity(cap_text);
        auto g = generate_feasible(seed, gp);
        doc = instance_to_json(g.instance);
        if (!witness_out.empty()) emit(witness_out, dump(schedule_to_json(g.witness, g.instance)), out);
      } else if (kind == "base") {
        doc = instance_to_json(base_instance(p, parse_leans(lean, 1).front()));
      } else if (kind == "legs") {
        doc = instance_to_json(legs_instance(p, parse_leans(lean, p)));
      } else if (kind == "speeding") {
        const Rational eps = Rational::parse(eps_text);
        doc = instance_to_json(speeding_instance(eps, parse_leans(lean, speeding_p(eps))));
      } else if (kind == "hamiltonian") {
        doc = instance_to_json(hamiltonian_instance(random_unit_graph(seed, gp.vertices, gp.extra_edges)));
      } else if (kind == "copies") {
        const Length bound = tour_bound > 0 ? tour_bound : gp.vertices;
        doc = instance_to_json(
            copies_instance(random_unit_graph(seed, gp.vertices, gp.extra_edges), bound, parse_capacity(cap_text)));
      } else {
        CapacityAdversary adv(p);  // validates p
        doc = {{"adversary", "capacity"}, {"p", p}, {"k", 1}, {"capacity", 2}};
      }
      emit(gen_out, dump(doc), out);
      return 0;
    }

    if (*run) {
      const json in = parse_json(read_file(run_in));
      RunOutput o = adaptive ? run_adaptive(in, rc) : run_instance(instance_from_json(in), rc);
      if (!trace_out.empty()) {
        std::string text;
        for (const auto& l : o.trace) text += l + "\n";
        emit(trace_out, text, out);
      }
      emit(run_out, dump(run_to_json(o, run_in, rc)), out);
      if (!passes(o)) {
        err << "bound violated: max_flow " << o.report.max_flow.str() << " > " << o.bound->str() << "\n";
        return 1;
      }
      return 0;
    }

    if (*batch) {
      if (count < 0) throw Usage("--count must be nonnegative");
      bp.capacity = parse_capacity(batch_cap);
      if (bc.f.empty()) bc.f = std::to_string(bp.f_target);
      std::vector<std::string> rows(static_cast<std::size_t>(count));
      std::vector<char> ok(static_cast<std::size_t>(count), 1);
      std::vector<std::string> errors;
      std::mutex mu;
      std::atomic<int> next{0};
      auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
          const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
          try {
            auto g = generate_feasible(s, bp);
            auto o = run_instance(g.instance, bc);
            rows[static_cast<std::size_t>(i)] = csv_row(run_to_json(o, "seed" + std::to_string(s), bc));
            ok[static_cast<std::size_t>(i)] = passes(o);
          } catch (const std::exception& e) {
            std::lock_guard lock(mu);
            errors.push_back("seed " + std::to_string(s) + ": " + e.what());
            ok[static_cast<std::size_t>(i)] = 0;
          }
        }
      };
      const int n = std::max(1, std::min(count, threads > 0 ? threads
                                                            : static_cast<int>(std::thread::hardware_concurrency())));
      std::vector<std::thread> pool;
      for (int t = 0; t < n; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      out << kCsvHeader;
      for (const auto& r : rows) out << r;
      for (const auto& e : errors) err << e << "\n";
      return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; }) ? 0 : 1;
    }

    if (*oracle) {
      const Instance inst = parse_instance(read_file(oracle_in));
      const OptResult r = optimal_max_flow(inst, limit);
      json doc{{"max_flow", rational_to_json(r.max_flow)}, {"nodes", r.nodes},
               {"witness", schedule_to_json(r.witness, inst)}};
      out << dump(doc);
      return 0;
    }

    if (*verify) {
      const json sdoc = parse_json(read_file(ver_sched));
      const bool wrapped = sdoc.contains("schedule");
      Instance inst;
      if (!ver_inst.empty()) {
        inst = parse_instance(read_file(ver_inst));
      } else if (wrapped && sdoc.contains("released")) {
        inst = instance_from_json(sdoc.at("released"));
      } else {
        throw Usage("verify needs --instance");
      }
      const Schedule sch = schedule_from_json(wrapped ? sdoc.at("schedule") : sdoc, inst);
      Rational speed(1);
      std::optional<Rational> bound;
      if (wrapped) {
        speed = rational_from_json(sdoc.at("speed"), "speed");
        if (!sdoc.at("bound").is_null()) bound = rational_from_json(sdoc.at("bound"), "bound");
      }
      if (!ver_speed.empty()) speed = Rational::parse(ver_speed);
      if (!ver_bound.empty()) bound = Rational::parse(ver_bound);
      FlowReport rep;
      try {
        rep = validate(inst, sch, speed);
      } catch (const ValidationError& e) {
        out << "FAIL invalid schedule: " << e.what() << "\n";
        return 1;
      }
      const bool ok = !bound || rep.max_flow <= *bound;
      out << (ok ? "PASS" : "FAIL") << " max_flow=" << rep.max_flow.str();
      if (bound) out << " bound=" << bound->str();
      out << "\n";
      return ok ? 0 : 1;
    }

    if (*report) {
      std::vector<json> docs;
      for (const auto& path : report_in) docs.push_back(parse_json(read_file(path)));
      if (format == "csv") {
        out << kCsvHeader;
        for (const auto& d : docs) out << csv_row(d);
      } else {
        out << text_table(docs);
      }
      return std::all_of(docs.begin(), docs.end(), [](const json& d) { return d.value("pass", false); }) ? 0 : 1;
    }

    if (*bundle) {
      const Instance inst = parse_instance(read_file(bundle_in));
      const Rational f = Rational::parse(bundle_f);
      auto tr = run_tree_algorithm(inst, f);
      for (std::size_t b = 0; b < tr.bundles.size(); ++b) {
        const auto& bd = tr.bundles[b];
        out << "bundle " << bd.index << " release=" << bd.release.str();
        auto part = [&](const char* name, const std::vector<int>& ids) {
          out << ' ' << name << '=';
          for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
        };
        part("prev", bd.from_prev);
        part("core", bd.core);
        part("next", bd.from_next);
        out << '\n';
        if (bundle_dump && b < tr.groups.size()) {
          for (const auto& g : tr.groups[b]) {
            out << "  group";
            for (int id : g.requests) out << ' ' << id;
            out << '\n';
          }
        }
      }
      return 0;
    }
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "invalid schedule: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed document: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace fdp::cli
