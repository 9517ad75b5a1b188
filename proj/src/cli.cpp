#include "caustic/cli.hpp"

#include <algorithm>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "caustic/verify.hpp"

namespace caustic {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> family_names{"collapse", "mushroom", "morin-1-0", "morin-1-1", "morin-2-0", "xi2", "cos2"};

struct FamilyArgs {
  std::string name;
  double eps = collapse_eps;
  double a = -0.05;
  double tau = 0;
  double kappa = MorinParams{}.kappa;
};

GenFun make_family(const FamilyArgs& fa) {
  if (fa.name == "collapse") return collapse_family(fa.eps);
  if (fa.name == "mushroom") return mushroom_family(fa.a);
  if (fa.name == "xi2") return xi_squared_family();
  if (fa.name == "cos2") return cos2_family();
  MorinParams P;
  P.kappa = fa.kappa;
  if (fa.name == "morin-1-0") return morin_family(MorinKind::birth, fa.tau, P);
  if (fa.name == "morin-1-1") return morin_family(MorinKind::band, fa.tau, P);
  if (fa.name == "morin-2-0") return morin_family(MorinKind::pair, fa.tau, P);
  throw UsageError("unknown family " + fa.name);
}

void add_family_options(CLI::App* sub, FamilyArgs& fa) {
  sub->add_option("family", fa.name, "generating family")->required()->check(CLI::IsMember(family_names));
  sub->add_option("--eps", fa.eps, "collapse amplitude")->check(CLI::Range(1e-3, 0.5));
  sub->add_option("--a", fa.a, "mushroom depth")->check(CLI::Range(-0.2, 0.0));
  sub->add_option("--tau", fa.tau, "Morin deformation parameter")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--kappa", fa.kappa, "Morin overshoot")->check(CLI::Range(1e-3, 2.0));
}

class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  RunConfig cfg;

  // empty path: standard output
  void emit(const json& j, const std::string& path) {
    if (path.empty()) out_ << canonical(j);
    else write_file(path, canonical(j));
  }
  void note(const std::string& s) { out_ << s << "\n"; }
  void warn(const std::string& s) { err_ << s << "\n"; }

  std::ostream& out() { return out_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

Chain2D plain(const ChainDocument& d) { return d.chain; }

int cmd_analyze(Session& s, const FamilyArgs& fa, const std::string& out_path) {
  Extraction x = extract_chain(make_family(fa), s.cfg.tol);
  s.emit(to_json(x), out_path);
  return 0;
}

int cmd_caustic(Session& s, const FamilyArgs& fa, std::string out_path, const SvgOptions& opt) {
  if (out_path.empty()) out_path = s.cfg.path("caustic.svg");
  CausticDiagram d = caustic(make_family(fa), s.cfg.tol);
  emit_svg(d, out_path, opt);
  s.note("wrote " + out_path + " (" + std::to_string(d.cusps.size()) + " cusps)");
  return 0;
}

int cmd_chain_svg(Session& s, const std::string& in, std::string out_path, const SvgOptions& opt) {
  ChainDocument d = read_chain(in);
  if (out_path.empty()) out_path = s.cfg.path("chain.svg");
  emit_svg(d.chain, out_path, opt);
  s.note("wrote " + out_path);
  return 0;
}

int cmd_validate(Session& s, const std::string& in) {
  try {
    ChainDocument d = read_chain(in);
    s.emit({{"ok", true}, {"kind", d.is_alpha() ? "alpha_chain" : "chain"}, {"violations", json::array()}}, "");
    return 0;
  } catch (const InvalidDocumentError& e) {
    s.emit(to_json(e.report), "");
    return 1;
  }
}

SurgeryBasis variant_for(const ChainDocument& d, SurgeryBasis b) {
  if (d.is_alpha() && b.variant != Variant::alpha) throw DomainError("basis variant is chain but the document is an alpha-chain");
  if (!d.is_alpha() && b.variant != Variant::chain) throw DomainError("basis variant is alpha but the document is a chain");
  return b;
}

int cmd_surgery_check(Session& s, const std::string& chain_path, const std::string& basis_path) {
  ChainDocument d = read_chain(chain_path);
  SurgeryBasis b = variant_for(d, parse_basis(read_file(basis_path)));
  ValidationReport r = d.is_alpha() ? check_basis(d.alpha(), b) : check_basis(d.chain, b);
  s.emit(to_json(r), "");
  return r.ok() ? 0 : 1;
}

int cmd_surgery_apply(Session& s, const std::string& chain_path, const std::string& basis_path, bool inverse,
                      const std::string& out_path) {
  ChainDocument d = read_chain(chain_path);
  json j = parse_json(read_file(basis_path));
  SurgerySequence seq;
  if (j.contains("steps")) {
    seq = parse_sequence(j.dump());
    if (inverse) {
      std::reverse(seq.begin(), seq.end());
      for (auto& st : seq) st.direction = st.direction == Direction::direct ? Direction::inverse : Direction::direct;
    }
  } else {
    seq.push_back({parse_basis(j.dump()), inverse ? Direction::inverse : Direction::direct});
  }
  for (auto& st : seq) st.basis = variant_for(d, st.basis);
  if (d.is_alpha()) s.emit(to_json(apply_sequence(d.alpha(), seq)), out_path);
  else s.emit(to_json(apply_sequence(d.chain, seq)), out_path);
  return 0;
}

int cmd_plan(Session& s, const std::string& chain_path, const std::string& goal, const std::string& target_path,
             bool alpha, int depth, const std::string& out_path) {
  ChainDocument d = read_chain(chain_path);
  PlanGoal g;
  if (!target_path.empty()) g = PlanGoal::to(read_chain(target_path).chain);
  else if (goal != "fold-only") throw UsageError("--goal must be fold-only unless --target is given");
  PlanResult p = alpha ? plan_surgeries(d.alpha(), g, depth) : plan_surgeries(plain(d), g, depth);
  s.emit(to_json(p), out_path);
  if (p.status != PlanStatus::found) {
    s.warn(std::string(to_string(p.status)) + ": " + p.message);
    return 1;
  }
  return 0;
}

int cmd_verify(Session& s, const std::string& json_path) {
  VerifyReport r = verify_suite(s.cfg.tol, s.cfg.seed);
  for (const auto& c : r.criteria) s.note(summary_line(c));
  std::string path = json_path.empty() && !s.cfg.out_dir.empty() ? s.cfg.path("verify.json") : json_path;
  if (!path.empty()) s.emit(to_json(r), path);
  s.note(r.ok() ? "verify: all criteria pass" : "verify: FAILED");
  return r.ok() ? 0 : 1;
}

// ---- demos ----

std::string signs_text(const std::vector<int>& v) {
  std::string t;
  for (int x : v) t += x > 0 ? '+' : '-';
  return t;
}

std::string show(const Vec3& p) {
  char b[96];
  std::snprintf(b, sizeof b, "q=(%.6f, %.6f) xi=%.6f", p[0], p[1], p[2]);
  return b;
}

// Artifacts land in out_dir only when one is configured.
struct Artifacts {
  Session& s;
  bool on() const { return !s.cfg.out_dir.empty(); }
  void json_file(const std::string& name, const json& j) {
    if (on()) s.emit(j, s.cfg.path(name));
  }
  template <class D>
  void svg(const std::string& name, const D& d) {
    if (on()) emit_svg(d, s.cfg.path(name));
  }
};

int demo_collapse(Session& s) {
  Artifacts art{s};
  Extraction x = extract_chain(collapse_family(collapse_eps), s.cfg.tol);
  int cusps = x.report.cusps;
  s.note("collapse eps=0.1: " + std::to_string(x.report.circles) + " fold circle(s), " + std::to_string(cusps) +
         " cusps found");
  for (const auto& [id, where] : x.cusp_point) s.note("  cusp " + std::to_string(id) + " at " + show(x.cusp(id).location));
  s.note("n1=" + std::to_string(x.report.n1) + " n2=" + std::to_string(x.report.n2) +
         " euler_value=" + std::to_string(euler_value(x.chain)));
  for (const auto& [c, v] : x.alpha.arc_signs) s.note("alpha arc signs on circle " + std::to_string(c) + ": " + signs_text(v));
  art.json_file("collapse_chain.json", to_json(x.chain));
  art.json_file("collapse_alpha.json", to_json(x.alpha));
  art.svg("collapse_caustic.svg", caustic_from(collapse_family(collapse_eps), x.report.curves));
  art.svg("collapse_chain.svg", x.chain);

  PlanResult p = plan_surgeries(x.chain, PlanGoal::fold_only(), 8);
  s.note(std::string("chain plan: ") + to_string(p.status) + ", length " + std::to_string(p.sequence.size()));
  art.json_file("collapse_plan.json", to_json(p));
  bool ok = cusps == 4 && p.status == PlanStatus::found && p.sequence.size() == 2;
  if (p.status == PlanStatus::found) {
    Chain2D end = apply_sequence(x.chain, p.sequence);
    SurgeryBasis b = with_variant(p.sequence.front().basis, Variant::alpha);
    b.binding.reset();
    ValidationReport r = check_basis(x.alpha, b);
    s.note("same arcs on the alpha-chain: " + (r.ok() ? std::string("accepted") : "rejected (" + r.summary() + ")"));
    s.note(std::string("chain plan result: ") + (detail::cusp_total(end) == 0 ? "fold-only" : "cusps remain"));
    ok = ok && !r.ok() && detail::cusp_total(end) == 0;
  }
  PlanResult pa = plan_surgeries(x.alpha, PlanGoal::fold_only(), 8);
  s.note(std::string("alpha plan: ") + to_string(pa.status) + ", length " + std::to_string(pa.sequence.size()));
  art.json_file("collapse_alpha_plan.json", to_json(pa));
  if (pa.status == PlanStatus::found) {
    AlphaChain2D end = apply_sequence(x.alpha, pa.sequence);
    bool fold_only = detail::cusp_total(end.chain) == 0;
    s.note(std::string("final: ") + (fold_only ? "fold-only" : "cusps remain"));
    ok = ok && fold_only;
  } else {
    ok = false;
  }
  return ok ? 0 : 1;
}

int demo_mushroom(Session& s) {
  Artifacts art{s};
  Extraction before = extract_chain(mushroom_family(0), s.cfg.tol);
  Extraction after = extract_chain(mushroom_family(-0.05), s.cfg.tol);
  s.note("mushroom a=0: " + std::to_string(before.report.circles) + " fold circles, euler_value " +
         std::to_string(euler_value(before.chain)));
  s.note("mushroom a=-0.05: " + std::to_string(after.report.circles) + " fold circles, " +
         std::to_string(after.report.cusps) + " cusps, euler_value " + std::to_string(euler_value(after.chain)));
  for (const auto& f : after.chain.circles)
    s.note("  circle " + std::to_string(f.id) + ": v1 into region " + std::to_string(f.v1_into) + " (" +
           to_string(after.chain.region_at(f.v1_into).side) + ")");
  bool eq = chains_equivalent(after.chain, catalog::double_fold_disk());
  s.note(std::string("double fold on a disk: ") + (eq ? "yes" : "no"));
  RealizationReport r = verify_surgery_realization(mushroom_path(), mushroom_expectation(), s.cfg.tol, 10);
  s.note("realization: " + r.message);
  art.json_file("mushroom_chain.json", to_json(after.chain));
  art.json_file("mushroom_realization.json", to_json(r));
  art.svg("mushroom_caustic.svg", caustic_from(mushroom_family(-0.05), after.report.curves));
  art.svg("mushroom_chain.svg", after.chain);
  return eq && r.success ? 0 : 1;
}

int demo_morin(Session& s) {
  Artifacts art{s};
  bool ok = true;
  json all = json::array();
  for (auto k : {MorinKind::birth, MorinKind::band, MorinKind::pair}) {
    RealizationReport r = verify_surgery_realization(morin_path(k), morin_expectation(k), s.cfg.tol, 10);
    int emb = static_cast<int>(std::count(r.embedded.begin(), r.embedded.end(), true));
    s.note(std::string("morin (") + to_string(k) + "): " + r.message + ", embedded at " + std::to_string(emb) + "/" +
           std::to_string(r.embedded.size()) + " samples");
    ok = ok && r.success;
    all.push_back(to_json(r));
  }
  art.json_file("morin_realizations.json", {{"schema_version", schema_version}, {"kind", "realizations"}, {"reports", all}});
  return ok ? 0 : 1;
}

int demo_quadrot(Session& s) {
  Artifacts art{s};
  bool ok = true;
  json all = json::object();
  for (double tau : {-0.1, 0.0, 0.05}) {
    Sigma2Report r = detect_sigma2_events(QuadRot{tau});
    std::string line = "tau=" + detail::fmt(tau, "%g") + ": " + std::to_string(r.events.size()) + " event(s)";
    for (const auto& e : r.events)
      line += ", theta=" + detail::fmt(e.theta, "%.12f") + " q=(" + detail::fmt(e.q[0], "%.2e") + ", " +
              detail::fmt(e.q[1], "%.2e") + ")";
    if (r.inconclusive) line += " [inconclusive: " + r.message + "]";
    s.note(line);
    ok = ok && !r.inconclusive && r.events.size() == (tau < 0 ? 0u : 1u);
    all[detail::fmt(tau, "%g")] = to_json(r);
  }
  art.json_file("quadrot_sigma2.json", {{"schema_version", schema_version}, {"kind", "sigma2"}, {"tau", all}});
  return ok ? 0 : 1;
}

const std::vector<std::pair<std::string, std::string>> config_keys{
    {"tol_root", "--tol-root"}, {"tol_guard", "--tol-guard"}, {"tol_close", "--tol-close"}, {"grid_n", "--grid-n"},
    {"step_min", "--step-min"}, {"step_max", "--step-max"}, {"out_dir", "--out-dir"},     {"seed", "--seed"}};

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fold and cusp surgery on generating families", "caustic_forge"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::string> flags;
  app.add_option("--config", config_path, "key = value configuration file");
  for (const auto& [key, flag] : config_keys) app.add_option(flag, flags[key], key);

  FamilyArgs fa;
  std::string out_path, in1, in2, goal = "fold-only", target, scenario, json_path;
  bool inverse = false, alpha = false, timestamp = false;
  int depth = 8;

  auto* analyze = app.add_subcommand("analyze", "extract the chain and alpha-chain of a family");
  add_family_options(analyze, fa);
  analyze->add_option("-o,--output", out_path, "output file (default: standard output)");

  auto* caus = app.add_subcommand("caustic", "render the caustic of a family as SVG");
  add_family_options(caus, fa);
  caus->add_option("-o,--output", out_path, "SVG path");
  caus->add_flag("--timestamp", timestamp, "stamp the SVG with the generation time");

  auto* csvg = app.add_subcommand("chain-svg", "render a chain document as SVG");
  csvg->add_option("chain", in1, "chain document")->required();
  csvg->add_option("-o,--output", out_path, "SVG path");
  csvg->add_flag("--timestamp", timestamp, "stamp the SVG with the generation time");

  auto* validate = app.add_subcommand("validate", "validate a chain document");
  validate->add_option("chain", in1, "chain document")->required();

  auto* scheck = app.add_subcommand("surgery-check", "check a surgery basis against a chain");
  scheck->add_option("chain", in1, "chain document")->required();
  scheck->add_option("basis", in2, "surgery basis document")->required();

  auto* sapply = app.add_subcommand("surgery-apply", "apply a surgery basis or sequence");
  sapply->add_option("chain", in1, "chain document")->required();
  sapply->add_option("basis", in2, "surgery basis or sequence document")->required();
  sapply->add_flag("--inverse", inverse, "apply the inverse surgery");
  sapply->add_option("-o,--output", out_path, "output chain (default: standard output)");

  auto* plan = app.add_subcommand("plan", "search for a surgery sequence");
  plan->add_option("chain", in1, "chain document")->required();
  plan->add_option("--goal", goal, "goal predicate")->check(CLI::IsMember({"fold-only"}));
  plan->add_option("--target", target, "target chain document");
  plan->add_flag("--alpha", alpha, "plan with alpha-variant surgeries");
  plan->add_option("--max-depth", depth, "search depth")->check(CLI::Range(1, 16));
  plan->add_option("-o,--output", out_path, "output sequence (default: standard output)");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--json", json_path, "machine-readable report path");

  auto* demo = app.add_subcommand("demo", "reproduce a worked scenario end to end");
  demo->add_option("scenario", scenario, "collapse, mushroom, morin or quadrot")
      ->required()
      ->check(CLI::IsMember({"collapse", "mushroom", "morin", "quadrot"}));

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args.front();
    if (!known) {
      err << "error: unknown subcommand " << args.front() << "\n" << app.help();
      return 2;
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
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

  Session s(out, err);
  try {
    if (!config_path.empty()) s.cfg.load(read_file(config_path));
    s.cfg.apply_env();
    for (const auto& [key, flag] : config_keys)
      if (app.count(flag) > 0) s.cfg.set(key, flags[key]);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  SvgOptions svg;
  svg.timestamp = timestamp;
  try {
    if (analyze->parsed()) return cmd_analyze(s, fa, out_path);
    if (caus->parsed()) return cmd_caustic(s, fa, out_path, svg);
    if (csvg->parsed()) return cmd_chain_svg(s, in1, out_path, svg);
    if (validate->parsed()) return cmd_validate(s, in1);
    if (scheck->parsed()) return cmd_surgery_check(s, in1, in2);
    if (sapply->parsed()) return cmd_surgery_apply(s, in1, in2, inverse, out_path);
    if (plan->parsed()) return cmd_plan(s, in1, goal, target, alpha, depth, out_path);
    if (verify->parsed()) return cmd_verify(s, json_path);
    if (demo->parsed()) {
      if (scenario == "collapse") return demo_collapse(s);
      if (scenario == "mushroom") return demo_mushroom(s);
      if (scenario == "morin") return demo_morin(s);
      return demo_quadrot(s);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace caustic
