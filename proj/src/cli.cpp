#include "topologic/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topologic/algebra.hpp"
#include "topologic/decide.hpp"
#include "topologic/error.hpp"
#include "topologic/formula.hpp"
#include "topologic/frames.hpp"
#include "topologic/normalform.hpp"
#include "topologic/semantics.hpp"
#include "topologic/splitting.hpp"

namespace topologic::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string formula;
  std::string formula_flag;
  std::string formula_file;
  std::string model;
  std::string frame;
  std::string algebra;
  std::string valuation;
  std::string point;
  std::optional<std::string> open;
  std::string atom;
  std::string output;
  std::string space_class = "topology";
  std::string law = "gma";
  std::size_t max_points = 3;
  std::optional<double> max_seconds;
  bool json_output = false;
  bool trace = false;
  bool want_valid = false;
  bool want_sat = false;
  bool prune = false;
  bool serial = false;
};

json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(std::string("cannot open ") + what + " file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

class Command {
 public:
  Command(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  Formula formula() const {
    const int given = !o_.formula.empty() + !o_.formula_flag.empty() + !o_.formula_file.empty();
    if (given == 0) throw CLI::ValidationError("formula", "a formula is required");
    if (given > 1) throw CLI::ValidationError("formula", "give the formula only once");
    if (!o_.formula_file.empty()) {
      std::ifstream in(o_.formula_file);
      if (!in) throw InvalidInput("cannot open formula file '" + o_.formula_file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      return parse(ss.str());
    }
    return parse(o_.formula.empty() ? o_.formula_flag : o_.formula);
  }

  Model model() const {
    if (o_.model.empty()) throw CLI::ValidationError("--model", "a model file is required");
    return load_model(o_.model);
  }

  BimodalFrame frame() const {
    if (o_.frame.empty()) throw CLI::ValidationError("--frame", "a frame file is required");
    return frame_from_json(read_json_file(o_.frame, "frame"));
  }

  MonadicAlgebra algebra() const {
    if (o_.algebra.empty()) throw CLI::ValidationError("--algebra", "an algebra file is required");
    return algebra_from_json(read_json_file(o_.algebra, "algebra"));
  }

  World world(const Model& m) const {
    if (o_.point.empty() || !o_.open) throw CLI::ValidationError("--point/--open", "both are required");
    const SubsetSpace& s = m.space();
    auto x = s.point_index(o_.point);
    if (!x) throw InvalidInput("unknown point '" + o_.point + "'");
    std::string list = *o_.open;
    if (list.size() >= 2 && list.front() == '{' && list.back() == '}') list = list.substr(1, list.size() - 2);
    json ids = json::array();
    std::stringstream ss(list);
    for (std::string id; std::getline(ss, id, ',');)
      if (!id.empty()) ids.push_back(id);
    auto u = s.open_index(set_from_json(s, ids));
    if (!u) throw InvalidInput("'" + *o_.open + "' is not an open of the model");
    World w{*x, *u};
    if (!m.is_world(w)) throw InvalidInput("point '" + o_.point + "' is not in the open " + s.render(s.opens()[*u]));
    return w;
  }

  SearchBudget budget() const {
    SearchBudget b;
    b.max_points = o_.max_points;
    b.space_class = space_class_from_string(o_.space_class);
    b.max_seconds = o_.max_seconds;
    b.prune_isomorphic = o_.prune;
    b.exec = o_.serial ? Execution::serial : Execution::parallel;
    return b;
  }

  static json world_json(const Model& m, const World& w) {
    const SubsetSpace& s = m.space();
    return {{"point", s.points()[w.point]}, {"open", set_to_json(s, s.opens()[w.open])}};
  }

  static json world_map_json(const Model& from, const Model& to, const std::map<World, World>& map) {
    json arr = json::array();
    for (const auto& [a, b] : map) arr.push_back({{"from", world_json(from, a)}, {"to", world_json(to, b)}});
    return arr;
  }

  void emit(const json& j, const std::string& text) const { out_ << (o_.json_output ? dump(j) : text); }

  int parse_cmd() const {
    Formula f = formula();
    json atom_list = json::array();
    for (const auto& a : atoms(f)) atom_list.push_back(a);
    json j{{"formula", print(f)},   {"desugared", print(desugar(f))}, {"size", f.size()},
           {"depth", f.depth()},    {"atoms", atom_list}};
    emit(j, print(f) + "\n");
    return kTrue;
  }

  int check_cmd() const {
    Model m = model();
    Formula f = formula();
    World w = world(m);
    bool value = eval(m, w, f);
    emit({{"formula", print(f)}, {"world", world_json(m, w)}, {"value", value}},
         m.render(w) + " |= " + print(f) + " : " + (value ? "true" : "false") + "\n");
    return value ? kTrue : kFalse;
  }

  int valid_cmd() const {
    Model m = model();
    Formula f = formula();
    Validity v = valid_in_model(m, f, o_.serial ? Execution::serial : Execution::parallel);
    json j{{"formula", print(f)}, {"valid", v.valid}};
    std::string text = v.valid ? "valid\n" : "not valid\n";
    if (v.counterexample) {
      j["counterexample"] = world_json(m, *v.counterexample);
      text += "counterexample: " + m.render(*v.counterexample) + "\n";
    }
    emit(j, text);
    return v.valid ? kTrue : kFalse;
  }

  int classify_cmd() const {
    Formula f = formula();
    SyntaxClass c = classify(f);
    PersistenceReport p = persistence_class(f, budget());
    json j{{"formula", print(f)},
           {"in_L_prime", c.in_L_prime},
           {"in_L_double_prime", c.in_L_double_prime},
           {"is_PNF", c.is_PNF},
           {"is_DNF", c.is_DNF},
           {"persistence", {{"verdict", to_string(p.verdict)},
                            {"persistent", p.persistent},
                            {"anti_persistent", p.anti_persistent},
                            {"bound", p.bound},
                            {"class", o_.space_class}}}};
    auto yn = [](bool b) { return b ? std::string("yes") : std::string("no"); };
    std::string text = "L': " + yn(c.in_L_prime) + "\nL'': " + yn(c.in_L_double_prime) + "\nPNF: " +
                       yn(c.is_PNF) + "\nDNF: " + yn(c.is_DNF) + "\npersistence: " + to_string(p.verdict) +
                       " (up to " + std::to_string(p.bound) + " points)\n";
    emit(j, text);
    return kTrue;
  }

  int dnf_cmd() const {
    Formula f = formula();
    DnfOptions opts;
    opts.verify_points = o_.max_points;
    Dnf d = to_dnf(f, opts);
    json blocks = json::array();
    for (const PnfBlock& b : d.blocks) {
      json ps = json::array();
      for (const Formula& p : b.possibles) ps.push_back(print(p));
      blocks.push_back({{"base", print(b.base)}, {"known", print(b.known)}, {"possibles", ps}});
    }
    json j{{"formula", print(f)}, {"dnf", print(d.render())}, {"blocks", blocks}, {"verified_up_to", o_.max_points}};
    std::string text = print(d.render()) + "\n";
    if (o_.trace) {
      j["trace"] = d.trace;
      for (const auto& step : d.trace) text += "  " + step + "\n";
    }
    emit(j, text);
    return kTrue;
  }

  int decide_cmd() const {
    if (o_.want_valid && o_.want_sat) throw CLI::ValidationError("--valid/--sat", "choose one");
    Formula f = formula();
    SearchBudget b = budget();
    Verdict v = o_.want_sat ? decide_sat(f, b) : decide_valid(f, b);
    json j{{"formula", print(f)},
           {"status", to_string(v.status)},
           {"class", to_string(b.space_class)},
           {"max_points", b.max_points},
           {"bound", v.bound},
           {"models_examined", v.models_examined}};
    std::string text = to_string(v.status) + "\n";
    if (v.model && v.world) {
      j["model"] = model_to_json(*v.model);
      j["world"] = world_json(*v.model, *v.world);
      text += "world: " + v.model->render(*v.world) + "\n" + dump(model_to_json(*v.model));
      if (v.raw_model && v.raw_world) {
        j["raw_model"] = model_to_json(*v.raw_model);
        j["raw_world"] = world_json(*v.raw_model, *v.raw_world);
      }
      if (!o_.output.empty()) save_model(o_.output, *v.model);
    }
    emit(j, text);
    switch (v.status) {
      case VerdictStatus::satisfiable:
      case VerdictStatus::valid_up_to_bound: return kTrue;
      case VerdictStatus::budget_exhausted: return kBudget;
      default: return kFalse;
    }
  }

  int split_cmd() const {
    Model m = model();
    Formula f = formula();
    StableSplittings s = build_stable_splittings(m, f);
    PartitionTheoremCheck check = verify_partition_theorem(m, s);
    if (!check.ok()) throw VerificationFailure("stable splitting failed its own check: " + check.detail);
    json report = splitting_report(m, s);
    emit(report, dump(report));
    return kTrue;
  }

  int quotient_cmd(bool require_formula) const {
    Model m = model();
    const bool has_formula = !o_.formula.empty() || !o_.formula_flag.empty() || !o_.formula_file.empty();
    json j;
    Model reduced;
    if (has_formula || require_formula) {
      Formula f = formula();
      Finitized fin = finitize(m, f);
      reduced = fin.model;
      json fam = json::array();
      for (std::size_t id : fin.family) fam.push_back(set_to_json(m.space(), m.space().opens()[id]));
      j = {{"formula", print(f)}, {"family", fam}, {"model", model_to_json(reduced)},
           {"world_map", world_map_json(m, reduced, fin.world_map)}};
    } else {
      Quotient q = quotient_points(m);
      reduced = q.model;
      json points = json::object();
      for (std::size_t i = 0; i < q.point_map.size(); ++i)
        points[m.space().points()[i]] = reduced.space().points()[q.point_map[i]];
      j = {{"model", model_to_json(reduced)}, {"point_map", points},
           {"world_map", world_map_json(m, reduced, q.world_map)}};
    }
    if (!o_.output.empty()) save_model(o_.output, reduced);
    emit(j, dump(j));
    return kTrue;
  }

  int characterize_cmd() const {
    Model m = model();
    if (o_.atom.empty()) throw CLI::ValidationError("--atom", "an atom is required");
    if (!is_valid_atom_name(o_.atom)) throw CLI::ValidationError("--atom", "invalid atom name");
    Characterization c = characterize(m, o_.atom);
    json j{{"atom", o_.atom}, {"open", c.open}, {"closed", c.closed}, {"dense", c.dense},
           {"nowhere_dense", c.nowhere_dense}};
    auto yn = [](bool b) { return b ? std::string("yes") : std::string("no"); };
    emit(j, "open: " + yn(c.open) + "\nclosed: " + yn(c.closed) + "\ndense: " + yn(c.dense) +
                "\nnowhere dense: " + yn(c.nowhere_dense) + "\n");
    return kTrue;
  }

  int frame_export_cmd() const {
    SubsetFrame sf = subset_frame(model());
    json j = frame_to_json(sf.frame);
    if (!o_.output.empty()) write_text_file(o_.output, dump(j));
    emit(j, dump(j));
    return kTrue;
  }

  int frame_check_cmd() const {
    BimodalFrame f = frame();
    ConditionReport r = check_conditions(f, o_.serial ? Execution::serial : Execution::parallel);
    std::string text;
    for (const auto& c : r.conditions) {
      text += std::to_string(c.id) + " " + c.name + ": " + to_string(c.status);
      if (!c.witness.empty()) {
        text += " at";
        for (std::size_t w : c.witness) text += " " + f.worlds[w];
      }
      if (!c.detail.empty()) text += " (" + c.detail + ")";
      text += "\n";
    }
    emit(report_to_json(f, r), text);
    return r.all_hold() ? kTrue : kFalse;
  }

  int frame_to_space_cmd() const {
    BimodalFrame f = frame();
    RecoveredSpace rec = frame_to_space(f);
    json fam = json::array();
    for (PointSet u : rec.family) {
      json members = json::array();
      for (std::size_t i = 0; i < rec.points.size(); ++i)
        if (contains(u, i)) members.push_back(rec.points[i]);
      fam.push_back(members);
    }
    json map = json::array();
    for (std::size_t w = 0; w < f.size(); ++w)
      map.push_back({{"world", f.worlds[w]}, {"point", rec.points[rec.world_map[w].point]},
                     {"open", fam[rec.world_map[w].open]}});
    json j{{"points", rec.points}, {"opens", fam}, {"world_map", map}, {"has_full_set", rec.space.has_value()}};
    emit(j, dump(j));
    return kTrue;
  }

  int algebra_check_cmd() const {
    MonadicAlgebra a = algebra();
    if (o_.law != "fma" && o_.law != "gma") throw CLI::ValidationError("--law", "expected fma or gma");
    const Execution exec = o_.serial ? Execution::serial : Execution::parallel;
    LawCheck r = o_.law == "fma" ? check_fma_laws(a, exec) : check_gma_laws(a, exec);
    json j = law_check_to_json(r);
    j["law_set"] = o_.law;
    std::string text = o_.law + ": " + (r.holds ? "holds" : "fails") + "\n";
    if (!r.holds) {
      text += "violated: " + r.law + " at";
      for (Element e : r.witness) text += " " + std::to_string(e);
      text += "\n";
    }
    emit(j, text);
    return r.holds ? kTrue : kFalse;
  }

  int algebra_from_model_cmd() const {
    Model m = model();
    ComplexAlgebra c = complex_algebra(m);
    json worlds = json::array();
    for (const World& w : c.worlds) worlds.push_back(world_json(m, w));
    json valuation = json::object();
    for (const auto& [atom, e] : world_valuation(c, m)) valuation[atom] = e;
    json j = algebra_to_json(c.algebra);
    if (!o_.output.empty()) write_text_file(o_.output, dump(j));
    j["worlds"] = worlds;
    j["valuation"] = valuation;
    emit(j, dump(j));
    return kTrue;
  }

  int algebra_eval_cmd() const {
    Formula f = formula();
    std::optional<MonadicAlgebra> alg;
    AlgValuation v;
    if (!o_.model.empty()) {
      if (!o_.algebra.empty()) throw CLI::ValidationError("--model/--algebra", "choose one");
      Model m = model();
      ComplexAlgebra c = complex_algebra(m);
      v = world_valuation(c, m);
      alg = std::move(c.algebra);
    } else {
      alg = algebra();
      if (!o_.valuation.empty()) {
        json jv;
        try {
          jv = json::parse(o_.valuation);
        } catch (const json::exception& e) {
          throw CLI::ValidationError("--valuation", e.what());
        }
        if (!jv.is_object()) throw CLI::ValidationError("--valuation", "expected a JSON object");
        for (const auto& [atom, e] : jv.items()) {
          if (!is_valid_atom_name(atom) || !e.is_number_unsigned())
            throw CLI::ValidationError("--valuation", "expected atom names mapped to element bitmasks");
          v[atom] = e.get<Element>();
        }
      }
    }
    Element value = alg_eval(*alg, v, f);
    const bool one = value == alg->top();
    emit({{"formula", print(f)}, {"value", value}, {"is_top", one}},
         std::to_string(value) + (one ? " (top)\n" : "\n"));
    return one ? kTrue : kFalse;
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

void add_formula(CLI::App* cmd, Options& o, bool positional = true) {
  if (positional) cmd->add_option("FORMULA", o.formula, "Formula text");
  cmd->add_option("--formula", o.formula_flag, "Formula text");
  cmd->add_option("--formula-file", o.formula_file, "File holding the formula");
}

void add_search(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-points", o.max_points, "Largest space searched")
      ->check(CLI::Range(std::size_t{1}, kMaxSearchPoints));
  cmd->add_option("--class", o.space_class, "topology | lattice | any-subset-space")
      ->check(CLI::IsMember({"topology", "lattice", "any-subset-space"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Model checker and decision tools for the logic of knowledge and effort on subset spaces",
               "topologic"};
  app.set_version_flag("--version", std::string("topologic ") + kVersion);
  app.require_subcommand(1);
  app.add_flag("--json", o.json_output, "Machine-readable output");
  app.add_flag("--serial", o.serial, "Disable parallel kernels");
  app.fallthrough();

  std::function<int(Command&)> action;
  auto on = [&](CLI::App* cmd, std::function<int(Command&)> f) {
    cmd->callback([&action, f] { action = f; });
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and print a formula");
  add_formula(parse_cmd, o);
  on(parse_cmd, [](Command& c) { return c.parse_cmd(); });

  auto* check = app.add_subcommand("check", "Evaluate a formula at one world");
  add_formula(check, o);
  check->add_option("--model", o.model, "Model file")->required();
  check->add_option("--point", o.point, "Point id")->required();
  check->add_option("--open", o.open, "Open as comma-separated point ids")->required();
  on(check, [](Command& c) { return c.check_cmd(); });

  auto* valid = app.add_subcommand("valid", "Check validity in a model");
  add_formula(valid, o);
  valid->add_option("--model", o.model, "Model file")->required();
  on(valid, [](Command& c) { return c.valid_cmd(); });

  auto* cls = app.add_subcommand("classify", "Syntactic classes and persistence");
  add_formula(cls, o);
  add_search(cls, o);
  on(cls, [](Command& c) { return c.classify_cmd(); });

  auto* dnf = app.add_subcommand("dnf", "Disjunctive normal form, verified up to --max-points");
  add_formula(dnf, o);
  dnf->add_option("--max-points", o.max_points, "Verification bound")->check(CLI::Range(1, 4));
  dnf->add_flag("--trace", o.trace, "Print the rewrite steps");
  on(dnf, [](Command& c) { return c.dnf_cmd(); });

  auto* decide = app.add_subcommand("decide", "Bounded satisfiability or validity search");
  add_formula(decide, o);
  add_search(decide, o);
  decide->add_flag("--valid", o.want_valid, "Search for a countermodel (default)");
  decide->add_flag("--sat", o.want_sat, "Search for a satisfying world");
  decide->add_option("--max-seconds", o.max_seconds, "Time budget")->check(CLI::PositiveNumber);
  decide->add_flag("--prune", o.prune, "Skip isomorphic spaces");
  decide->add_option("--output", o.output, "Write the witness model here");
  on(decide, [](Command& c) { return c.decide_cmd(); });

  auto* split = app.add_subcommand("split", "Stable splittings for a formula");
  add_formula(split, o);
  split->add_option("--model", o.model, "Model file")->required();
  on(split, [](Command& c) { return c.split_cmd(); });

  auto* quotient = app.add_subcommand("quotient", "Point quotient, or finitization when a formula is given");
  add_formula(quotient, o);
  quotient->add_option("--model", o.model, "Model file")->required();
  quotient->add_option("--output", o.output, "Write the reduced model here");
  on(quotient, [](Command& c) { return c.quotient_cmd(false); });

  auto* fin = app.add_subcommand("finitize", "Finite model preserving a formula");
  add_formula(fin, o);
  fin->add_option("--model", o.model, "Model file")->required();
  fin->add_option("--output", o.output, "Write the reduced model here");
  on(fin, [](Command& c) { return c.quotient_cmd(true); });

  auto* chr = app.add_subcommand("characterize", "Open/closed/dense/nowhere-dense tests for an atom");
  chr->add_option("--model", o.model, "Model file")->required();
  chr->add_option("--atom", o.atom, "Atom name")->required();
  on(chr, [](Command& c) { return c.characterize_cmd(); });

  auto* frame = app.add_subcommand("frame", "Bimodal frames");
  frame->require_subcommand(1);
  auto* fexport = frame->add_subcommand("export", "Subset frame of a model");
  fexport->add_option("--model", o.model, "Model file")->required();
  fexport->add_option("--output", o.output, "Write the frame here");
  on(fexport, [](Command& c) { return c.frame_export_cmd(); });
  auto* fcheck = frame->add_subcommand("check", "Evaluate the eight frame conditions");
  fcheck->add_option("--frame", o.frame, "Frame file")->required();
  on(fcheck, [](Command& c) { return c.frame_check_cmd(); });
  auto* fspace = frame->add_subcommand("to-space", "Rebuild the subset space of a frame");
  fspace->add_option("--frame", o.frame, "Frame file")->required();
  on(fspace, [](Command& c) { return c.frame_to_space_cmd(); });

  auto* algebra = app.add_subcommand("algebra", "Monadic algebras");
  algebra->require_subcommand(1);
  auto* acheck = algebra->add_subcommand("check", "Check the FMA or GMA laws");
  acheck->add_option("--algebra", o.algebra, "Algebra file")->required();
  acheck->add_option("--law", o.law, "fma | gma")->check(CLI::IsMember({"fma", "gma"}));
  on(acheck, [](Command& c) { return c.algebra_check_cmd(); });
  auto* afrom = algebra->add_subcommand("from-model", "Complex algebra of a model");
  afrom->add_option("--model", o.model, "Model file")->required();
  afrom->add_option("--output", o.output, "Write the algebra here");
  on(afrom, [](Command& c) { return c.algebra_from_model_cmd(); });
  auto* aeval = algebra->add_subcommand("eval", "Evaluate a formula in an algebra");
  add_formula(aeval, o);
  aeval->add_option("--algebra", o.algebra, "Algebra file");
  aeval->add_option("--valuation", o.valuation, "JSON object from atoms to elements");
  aeval->add_option("--model", o.model, "Use the complex algebra of this model");
  on(aeval, [](Command& c) { return c.algebra_eval_cmd(); });

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kTrue : kUsage;
  }

  Command command(o, out);
  try {
    return action(command);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kBadInput;
  } catch (const VerificationFailure& e) {
    err << "self-check failed: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
}

}  // namespace topologic::cli
