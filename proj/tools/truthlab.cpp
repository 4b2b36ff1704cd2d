#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "truthlab/scenarios.hpp"
#include "truthlab/schemas.hpp"
#include "truthlab/translations.hpp"

namespace tl = truthlab;

namespace {

// Exit codes: 0 pass / value produced; 1 counterexample or scenario failure;
// 2 usage or parse error; 3 budget exceeded or non-stabilized construction.
enum ExitCode { kOk = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct Options {
  std::string system_path;
  std::string theory;
  std::string model = "lfp-closure";
  std::string format = "text";
  int depth = 2;
  int max_names = 8;
  int max_pool = 2000;
  int max_stages = 64;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tl::Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

tl::RunConfig config_of(const Options& o) {
  tl::RunConfig c;
  c.depth = o.depth;
  c.max_names = o.max_names;
  c.max_pool = o.max_pool;
  c.max_stages = o.max_stages;
  if (const char* env = std::getenv("TRUTHLAB_THREADS")) {
    c.threads = std::max(1, std::atoi(env));  // hint only
  }
  return c;
}

struct LoadedSystem {
  tl::SentenceSystem sys;
  std::vector<tl::FixedPoint> fps;
  tl::FixedPoint lfp;
};

LoadedSystem load_system(const Options& o, bool enumerate = true) {
  LoadedSystem l;
  l.sys = tl::parse_system(read_file(o.system_path), o.max_pool);
  l.sys = tl::generate_pools(l.sys, o.depth, o.max_pool);
  l.lfp = tl::least_fixed_point(l.sys);
  if (enumerate) l.fps = tl::enumerate_fixed_points(l.sys, o.max_names);
  return l;
}

// Selectors: lfp-closure, fp#K-closure, inner, fp#K-inner, cd-cons/comp/sym,
// lemma-b[:variant]:B=<formula>, typed, fp#K-typed, fh.
tl::ModelPtr select_model(const std::string& sel, LoadedSystem& l, const Options& o) {
  auto fixed_point_of = [&](const std::string& spec) -> tl::FixedPoint {
    if (spec.empty() || spec == "lfp") return l.lfp;
    if (spec.rfind("fp#", 0) == 0) {
      if (l.fps.empty()) l.fps = tl::enumerate_fixed_points(l.sys, o.max_names);
      std::size_t k = static_cast<std::size_t>(std::stoul(spec.substr(3)));
      if (k >= l.fps.size()) throw tl::Error("fixed point index out of range: " + spec);
      return l.fps[k];
    }
    throw tl::Error("bad fixed point selector: " + spec);
  };
  auto split_head = [&](const std::string& s, const std::string& tail) {
    return s.substr(0, s.size() - tail.size());
  };

  if (sel == "inner") return tl::build_inner_model(l.lfp, l.sys);
  if (sel == "typed") return tl::build_typed_model(l.lfp, l.sys);
  if (sel.size() > 8 && sel.rfind("-closure") == sel.size() - 8)
    return tl::build_closure_model(fixed_point_of(split_head(sel, "-closure")), l.sys);
  if (sel.size() > 6 && sel.rfind("-inner") == sel.size() - 6)
    return tl::build_inner_model(fixed_point_of(split_head(sel, "-inner")), l.sys);
  if (sel.size() > 6 && sel.rfind("-typed") == sel.size() - 6)
    return tl::build_typed_model(fixed_point_of(split_head(sel, "-typed")), l.sys);
  if (sel == "cd-cons") return tl::build_cd_model(l.lfp, l.sys, tl::DetVariant::Cons);
  if (sel == "cd-comp") return tl::build_cd_model(l.lfp, l.sys, tl::DetVariant::Comp);
  if (sel == "cd-sym") return tl::build_cd_model(l.lfp, l.sys, tl::DetVariant::Sym);
  if (sel.rfind("lemma-b", 0) == 0) {
    std::string rest = sel.substr(7);
    tl::DetVariant variant = tl::DetVariant::Cons;
    if (rest.rfind(":cons:", 0) == 0) {
      rest = rest.substr(6);
    } else if (rest.rfind(":comp:", 0) == 0) {
      variant = tl::DetVariant::Comp;
      rest = rest.substr(6);
    } else if (rest.rfind(":sym:", 0) == 0) {
      variant = tl::DetVariant::Sym;
      rest = rest.substr(5);
    } else if (rest.rfind(":", 0) == 0) {
      rest = rest.substr(1);
    }
    if (rest.rfind("B=", 0) != 0) throw tl::Error("lemma-b selector needs B=<formula>");
    tl::FormulaPtr b = tl::parse_formula_text(rest.substr(2), l.sys);
    return tl::build_lemma_b_model(l.lfp, l.sys, variant, b);
  }
  if (sel == "fh") {
    tl::FHResult r = tl::fh_construct(l.sys, o.max_stages);
    if (std::holds_alternative<tl::NonStabilized>(r)) {
      const auto& ns = std::get<tl::NonStabilized>(r);
      std::ostringstream os;
      os << "fh construction did not stabilize (stages " << ns.stages_run;
      if (ns.cycle_start >= 0)
        os << ", cycle at " << ns.cycle_start << " period " << ns.cycle_period;
      os << ")";
      throw tl::PoolBudgetExceeded(os.str());
    }
    return tl::build_fh_model(std::get<tl::FHStages>(r), l.sys);
  }
  throw tl::Error("unknown model selector: " + sel);
}

int cmd_fixedpoints(const Options& o) {
  LoadedSystem l = load_system(o);
  int cons = 0, comp = 0, mixed = 0;
  for (const auto& fp : l.fps) {
    if (fp.flags.consistent) ++cons;
    if (fp.flags.complete) ++comp;
    if (fp.flags.mixed) ++mixed;
  }
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["system"] = o.system_path;
    j["names"] = nlohmann::ordered_json::array();
    for (const auto& n : l.sys.name_order) j["names"].push_back(n);
    j["fixed_points"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < l.fps.size(); ++i) {
      nlohmann::ordered_json e;
      e["index"] = i;
      std::string vals;
      for (std::size_t k = 0; k < l.fps[i].values.size(); ++k)
        vals += (k ? "," : "") + tl::to_string(l.fps[i].values[k]);
      e["values"] = vals;
      e["consistent"] = l.fps[i].flags.consistent;
      e["complete"] = l.fps[i].flags.complete;
      e["mixed"] = l.fps[i].flags.mixed;
      j["fixed_points"].push_back(e);
    }
    j["counts"] = {{"total", l.fps.size()},
                   {"consistent", cons},
                   {"complete", comp},
                   {"mixed", mixed}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << l.fps.size() << " fixed points over names";
    for (const auto& n : l.sys.name_order) std::cout << " " << n;
    std::cout << "\n";
    for (std::size_t i = 0; i < l.fps.size(); ++i) {
      std::cout << "  fp#" << i << " ";
      for (std::size_t k = 0; k < l.fps[i].values.size(); ++k)
        std::cout << (k ? "," : "") << tl::to_string(l.fps[i].values[k]);
      const auto& fl = l.fps[i].flags;
      std::cout << "  "
                << (fl.mixed                       ? "mixed"
                    : fl.consistent && fl.complete ? "classical"
                    : fl.consistent                ? "consistent"
                                                   : "complete")
                << "\n";
    }
    std::cout << "classes: consistent " << cons << " / complete " << comp << " / mixed " << mixed
              << "\n";
  }
  return kOk;
}

int cmd_check(const Options& o) {
  LoadedSystem l = load_system(o, false);
  tl::ModelPtr m = select_model(o.model, l, o);
  tl::CheckLimits limits;
  limits.max_pool = o.max_pool;
  tl::CheckReport rep = tl::check(m, o.theory, limits);
  std::cout << (o.format == "json" ? rep.to_json() + "\n" : rep.to_text());
  return rep.pass ? kOk : kFail;
}

int cmd_eval(const Options& o, const std::string& text) {
  LoadedSystem l = load_system(o, false);
  if (o.model == "lfp-value") {
    tl::FormulaPtr f = tl::parse_formula_text(text, l.sys);
    std::cout << tl::to_string(tl::eval_fde(f, l.lfp.values, l.sys)) << "\n";
    return kOk;
  }
  tl::ModelPtr m = select_model(o.model, l, o);
  tl::FormulaPtr f = tl::parse_formula_text(text, *m->sys);
  auto v = m->eval_opt(f);
  if (!v.has_value()) {
    std::cerr << "fragment-indeterminate on this model\n";
    return kBudget;
  }
  std::cout << (*v ? "true" : "false") << "\n";
  return kOk;
}

int cmd_translate(const Options& o, const std::string& id, const std::string& text) {
  tl::SentenceSystem sys;
  if (!o.system_path.empty())
    sys = tl::parse_system(read_file(o.system_path), o.max_pool);
  else
    sys = tl::parse_system("base 0 1;\n", o.max_pool);
  tl::FormulaPtr f = tl::parse_formula_text(text, sys);
  tl::FormulaPtr out;
  if (id == "delta-cons" || id == "delta-comp" || id == "delta-sym") {
    tl::DetVariant v = id == "delta-cons"   ? tl::DetVariant::Cons
                       : id == "delta-comp" ? tl::DetVariant::Comp
                                            : tl::DetVariant::Sym;
    out = tl::delta(f, v, sys).formula;
  } else if (id == "dual-c") {
    out = tl::dual_c(f, sys).formula;
  } else if (id == "tau") {
    out = tl::tau(f);
  } else if (id == "iota") {
    out = tl::iota(f, sys);
  } else if (id == "sigma") {
    out = tl::sigma(f, sys);
  } else {
    throw tl::Error("unknown translation: " + id);
  }
  std::cout << tl::to_text(out) << "\n";
  return kOk;
}

int cmd_scenario(const Options& o, const std::string& id, bool all) {
  tl::RunConfig cfg = config_of(o);
  std::vector<std::string> ids;
  if (all)
    for (const auto& s : tl::list_scenarios()) ids.push_back(s.id);
  else
    ids.push_back(id);
  bool pass = true;
  for (const auto& sid : ids) {
    tl::ScenarioReport rep = tl::run_scenario(sid, cfg);
    std::cout << (o.format == "json" ? rep.to_json() + "\n" : rep.to_text());
    if (!rep.pass) pass = false;
  }
  return pass ? kOk : kFail;
}

int cmd_countermodel(const Options& o, const std::string& item) {
  tl::RunConfig cfg = config_of(o);
  tl::ScenarioReport rep = tl::run_scenario("cd-irregular", cfg);
  bool found = false, pass = false;
  for (const auto& s : rep.steps) {
    if (s.name.rfind("(" + item + ")", 0) == 0) {
      found = true;
      pass = s.pass;
      std::cout << "[" << (s.pass ? "pass" : "FAIL") << "] " << s.name
                << (s.detail.empty() ? "" : " -- " + s.detail) << "\n";
    }
  }
  if (!found) {
    std::cerr << "unknown corollary item: " << item << " (use i..vii)\n";
    return kUsage;
  }
  return pass ? kOk : kFail;
}

int cmd_list(const Options& o) {
  if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& s : tl::list_scenarios())
      j.push_back({{"id", s.id}, {"description", s.description}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& s : tl::list_scenarios())
      std::cout << s.id << "\n    " << s.description << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truthlab: fixed points of self-referential truth, classical closures, and axiom "
               "checking at finite scale"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("system", o.system_path, "system file (.tl)")->required();
    c->add_option("--depth", o.depth, "pool generation depth (default 2)");
    c->add_option("--format", o.format, "text|json");
    c->add_option("--max-names", o.max_names, "enumeration cap");
    c->add_option("--max-pool", o.max_pool, "pool cap");
    c->add_option("--max-stages", o.max_stages, "stage cap for the fh construction");
  };

  auto* fps = app.add_subcommand("fixedpoints", "enumerate and classify fixed points");
  add_common(fps);

  auto* chk = app.add_subcommand("check", "check an axiom catalog against a model");
  add_common(chk);
  chk->add_option("--theory", o.theory, "theory id")->required();
  chk->add_option("--model", o.model, "model selector (default lfp-closure)");

  std::string eval_text;
  auto* ev = app.add_subcommand("eval", "evaluate a sentence in a model");
  add_common(ev);
  ev->add_option("sentence", eval_text, "sentence in DSL syntax")->required();
  ev->add_option("--model", o.model, "model selector, or lfp-value for the V4 value");

  std::string trans_id, trans_text;
  auto* tr = app.add_subcommand("translate", "apply a syntactic translation");
  tr->add_option("--id", trans_id, "delta-cons|delta-comp|delta-sym|dual-c|tau|iota|sigma")
      ->required();
  tr->add_option("formula", trans_text, "formula in DSL syntax")->required();
  tr->add_option("--system", o.system_path, "optional system file for name references");
  tr->add_option("--format", o.format, "text|json");

  std::string scen_id;
  bool scen_all = false;
  auto* sc = app.add_subcommand("scenario", "run a bundled scenario");
  sc->add_option("id", scen_id, "scenario id");
  sc->add_flag("--all", scen_all, "run every scenario");
  sc->add_option("--format", o.format, "text|json");
  sc->add_option("--max-stages", o.max_stages, "stage cap for the fh construction");

  std::string cm_item;
  auto* cm =
      app.add_subcommand("countermodel", "reproduce a corollary countermodel (items i..vii)");
  cm->add_option("item", cm_item, "corollary item: i, ii, ..., vii")->required();
  cm->add_option("--format", o.format, "text|json");

  auto* ls = app.add_subcommand("scenarios", "list bundled scenarios");
  ls->add_option("--format", o.format, "text|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (fps->parsed()) return cmd_fixedpoints(o);
    if (chk->parsed()) return cmd_check(o);
    if (ev->parsed()) return cmd_eval(o, eval_text);
    if (tr->parsed()) return cmd_translate(o, trans_id, trans_text);
    if (sc->parsed()) {
      if (!scen_all && scen_id.empty()) {
        std::cerr << "scenario: give an id or --all\n";
        return kUsage;
      }
      return cmd_scenario(o, scen_id, scen_all);
    }
    if (cm->parsed()) return cmd_countermodel(o, cm_item);
    if (ls->parsed()) return cmd_list(o);
  } catch (const tl::PoolBudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kBudget;
  } catch (const tl::EnumerationBudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kBudget;
  } catch (const tl::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
