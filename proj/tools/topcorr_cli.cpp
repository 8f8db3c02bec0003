#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topcorr/correlation_measures.hpp"
#include "topcorr/decay.hpp"
#include "topcorr/errors.hpp"
#include "topcorr/io.hpp"
#include "topcorr/parallel.hpp"
#include "topcorr/production.hpp"
#include "topcorr/state_spec.hpp"
#include "topcorr/tomography.hpp"
#include "topcorr/witnesses.hpp"

using namespace topcorr;

namespace {

enum class Kind
{
  text,
  real,
  integer,
  boolean,
  reals
};

struct Param
{
  std::string name;
  Kind kind;
  std::string fallback;
  std::string help;
};

struct Command
{
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<std::string(const Config&)> run;
};

std::string canonical(const Param& p, const std::string& raw)
{
  const std::string v = trim(raw);
  if (v.empty() && p.kind != Kind::text && p.kind != Kind::reals)
    throw ConfigError("parameter '" + p.name + "' needs a value");
  try {
    switch (p.kind) {
    case Kind::text:
      return v;
    case Kind::real:
      return format_double(parse_double(v, p.name));
    case Kind::integer: {
      std::size_t used = 0;
      const long long x = std::stoll(v, &used);
      if (used != v.size())
        throw ConfigError("parameter '" + p.name + "' is not an integer: '" + v + "'");
      return std::to_string(x);
    }
    case Kind::boolean:
      if (v == "true" || v == "1" || v == "yes")
        return "true";
      if (v == "false" || v == "0" || v == "no")
        return "false";
      throw ConfigError("parameter '" + p.name + "' is not a boolean: '" + v + "'");
    case Kind::reals: {
      std::string out;
      if (v.empty())
        return out;
      for (const auto& f : split_csv(v))
        out += (out.empty() ? "" : ",") + format_double(parse_double(f, p.name));
      return out;
    }
    }
  } catch (const InputDataError& e) {
    throw ConfigError(e.what());
  } catch (const std::logic_error&) {
    throw ConfigError("parameter '" + p.name + "' is not an integer: '" + v + "'");
  }
  return v;
}

std::string text(const Config& c, const std::string& key)
{
  return c.get(key).value_or("");
}

double real(const Config& c, const std::string& key)
{
  return parse_double(text(c, key), key);
}

long long integer(const Config& c, const std::string& key)
{
  return std::stoll(text(c, key));
}

bool boolean(const Config& c, const std::string& key)
{
  return text(c, key) == "true";
}

std::vector<double> reals(const Config& c, const std::string& key)
{
  std::vector<double> out;
  const std::string v = text(c, key);
  if (!v.empty())
    for (const auto& f : split_csv(v))
      out.push_back(parse_double(f, key));
  return out;
}

std::size_t positive_count(const Config& c, const std::string& key, long long min = 1)
{
  const long long v = integer(c, key);
  if (v < min)
    throw ConfigError("parameter '" + key + "' must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

Vector3 vector3(const Config& c, const std::string& key)
{
  const auto v = reals(c, key);
  if (v.size() != 3)
    throw ConfigError("parameter '" + key + "' needs three numbers");
  return {v[0], v[1], v[2]};
}

std::uint64_t seed_of(const Config& c)
{
  const long long s = integer(c, "seed");
  if (s < 0)
    throw ConfigError("seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

// key,value report rows
class Report
{
public:
  Report() { out_ = "key,value\n"; }
  void add(const std::string& k, double v) { out_ += k + "," + format_double(v) + "\n"; }
  void add(const std::string& k, const std::string& v) { out_ += k + "," + v + "\n"; }
  void add_vector(const std::string& k, const Vector3& v)
  {
    static const char* xyz[] = {"_x", "_y", "_z"};
    for (int i = 0; i < 3; ++i)
      add(k + xyz[i], v[i]);
  }
  std::string str() const { return out_; }

private:
  std::string out_;
};

// ---- commands -------------------------------------------------------------

const Param kMt{"mt-gev", Kind::real, "173", "top mass in GeV"};
const Param kSeed{"seed", Kind::integer, "1", "generator seed"};

std::vector<Param> event_source_params()
{
  return {{"events", Kind::text, "", "event CSV (optionally .gz)"},
          {"state", Kind::text, "", "simulate from this state instead of reading events"},
          {"n", Kind::integer, "1000000", "events to simulate with --state"},
          kSeed,
          kMt};
}

EventBatch load_batch(const Config& c)
{
  const std::string events = text(c, "events");
  const std::string state = text(c, "state");
  if (events.empty() == state.empty())
    throw ConfigError("give exactly one of --events and --state");
  if (!events.empty())
    return parse_events_csv(read_text_file(events));
  return generate_events(parse_state_spec(state), positive_count(c, "n"), seed_of(c));
}

// Table weights at m; where both vanish (e.g. at threshold) the channel mix of the
// nearest row with weight is used.
std::pair<double, double> channel_weights(const LuminosityTable& lumi, double m)
{
  const auto w = lumi.weights_at(m);
  if (w.first + w.second > 0.0)
    return w;
  const LuminosityRow* best = nullptr;
  for (const auto& r : lumi.rows())
    if (r.weight_gg + r.weight_qq > 0.0 && (!best || std::abs(r.m_gev - m) < std::abs(best->m_gev - m)))
      best = &r;
  if (!best)
    throw InputDataError("luminosity table has no weight");
  return {best->weight_gg, best->weight_qq};
}

std::string run_map(const Config& c)
{
  const std::string channel = text(c, "channel");
  const std::string lumi_spec = text(c, "lumi");
  if (channel.empty() == lumi_spec.empty())
    throw ConfigError("give exactly one of --channel and --lumi");
  const double mt = real(c, "mt-gev");
  const std::size_t nb = positive_count(c, "beta-points", 2);
  const std::size_t nt = positive_count(c, "theta-points", 2);
  const double beta_max = real(c, "beta-max");
  if (!(beta_max > 0.0 && beta_max < 1.0))
    throw DomainError("beta-max must lie in (0, 1)");

  std::optional<LuminosityTable> lumi;
  Channel ch = Channel::gg;
  if (!lumi_spec.empty()) {
    lumi = LuminosityTable::resolve(lumi_spec, mt);
    lumi->validate(mt);
    if (mass_from_beta(beta_max, mt) > lumi->max_mass())
      throw DomainError("beta-max " + format_double(beta_max) + " lies beyond the end of the luminosity table");
  } else {
    ch = channel_from_string(channel);
  }

  std::vector<std::string> rows(nb * nt);
  parallel_for(nb * nt, [&](std::size_t k) {
    const std::size_t i = k / nt;
    const double beta = i + 1 == nb ? beta_max : beta_max * static_cast<double>(i) / static_cast<double>(nb - 1);
    const double theta = std::numbers::pi * static_cast<double>(k % nt) / static_cast<double>(nt - 1);
    TwoQubitState s;
    if (lumi) {
      const auto [w_gg, w_qq] = channel_weights(*lumi, mass_from_beta(beta, mt));
      const double a = w_gg * partonic_weight(Channel::gg, beta, theta);
      const double b = w_qq * partonic_weight(Channel::qqbar, beta, theta);
      if (!(a + b > 0.0))
        throw InputDataError("luminosity table has no weight at beta = " + format_double(beta));
      const TwoQubitState g = spin_state(Channel::gg, beta, theta);
      const TwoQubitState q = spin_state(Channel::qqbar, beta, theta);
      s.frame = FrameTag::helicity;
      s.corr = (a * g.corr + b * q.corr) / (a + b);
      s.bplus = (a * g.bplus + b * q.bplus) / (a + b);
      s.bminus = (a * g.bminus + b * q.bminus) / (a + b);
    } else {
      s = spin_state(ch, beta, theta);
    }
    const auto rep = classify_detailed(s);
    const int level = static_cast<int>(rep.cls);
    std::string row = format_double(beta) + "," + format_double(theta) + "," + format_double(rep.discord_a) + ",";
    row += std::to_string(level >= static_cast<int>(HierarchyClass::entangled_unsteerable)) + ",";
    row += std::to_string(level >= static_cast<int>(HierarchyClass::steerable_local)) + ",";
    row += std::to_string(level >= static_cast<int>(HierarchyClass::bell_nonlocal)) + ",";
    row += format_double(s.corr(0, 0)) + "," + format_double(s.corr(2, 2)) + "," + format_double(s.corr(1, 1)) + "," +
           format_double(s.corr(0, 2)) + "\n";
    rows[k] = std::move(row);
  });
  std::string out = "beta,theta,discord,entangled,steerable,bell,c_kk,c_rr,c_nn,c_kr\n";
  for (const auto& r : rows)
    out += r;
  return out;
}

std::string run_trajectory(const Config& c)
{
  const double mt = real(c, "mt-gev");
  const std::string spec = text(c, "lumi");
  if (spec.empty())
    throw ConfigError("trajectory needs --lumi");
  const LuminosityTable lumi = LuminosityTable::resolve(spec, mt);
  lumi.validate(mt);
  std::vector<double> cuts = reals(c, "cuts");
  if (cuts.empty()) {
    const std::size_t points = positive_count(c, "cut-points");
    for (std::size_t k = 1; k <= points; ++k)
      cuts.push_back(lumi.min_mass() + (lumi.max_mass() - lumi.min_mass()) * static_cast<double>(k) / points);
  }
  IntegrationOptions opts;
  opts.m_t = mt;
  std::vector<TrajectoryPoint> traj(cuts.size());
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (!(cuts[i] > cuts[i - 1]))
      throw DomainError("trajectory: cuts must be strictly ascending");
  parallel_for(cuts.size(), [&](std::size_t i) { traj[i] = {cuts[i], integrated_state(lumi, cuts[i], opts)}; });
  std::string out = "m_cut,c_perp,c_z,discord,class\n";
  for (const auto& p : traj) {
    const double d = discord_t_state(p.state.c_perp, p.state.c_perp, p.state.c_z);
    out += format_double(p.m_cut) + "," + format_double(p.state.c_perp) + "," + format_double(p.state.c_z) + "," +
           format_double(d) + "," + std::string(to_string(classify(to_two_qubit(p.state)))) + "\n";
  }
  return out;
}

std::string run_simulate(const Config& c)
{
  const std::string state = text(c, "state");
  const std::string lumi = text(c, "lumi");
  if (state.empty() == lumi.empty())
    throw ConfigError("give exactly one of --state and --lumi");
  const std::size_t n = positive_count(c, "n");
  const FrameTag frame = frame_tag_from_string(text(c, "frame"));
  EventBatch batch;
  if (!state.empty()) {
    batch = generate_events(parse_state_spec(state), n, seed_of(c), frame);
    batch.source = "state " + state;
  } else {
    ModelSource src;
    src.m_t = real(c, "mt-gev");
    src.lumi = LuminosityTable::resolve(lumi, src.m_t);
    src.m_cut = real(c, "m-cut");
    src.record_frame = frame;
    batch = generate_events(src, n, seed_of(c));
    batch.source = "model " + lumi + " m_cut=" + text(c, "m-cut");
  }
  return events_to_csv(batch);
}

std::string run_tomo(const Config& c)
{
  const EventBatch batch = load_batch(c);
  const StateEstimate est = estimate_state(batch);
  Report r;
  r.add("n_events", static_cast<double>(est.n_events));
  r.add("frame", std::string(to_string(est.state.frame)));
  static const char* xyz[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    r.add(std::string("b_plus_") + xyz[i], est.state.bplus[i]);
    r.add(std::string("b_plus_") + xyz[i] + "_err", est.std_errors[i]);
  }
  for (int i = 0; i < 3; ++i) {
    r.add(std::string("b_minus_") + xyz[i], est.state.bminus[i]);
    r.add(std::string("b_minus_") + xyz[i] + "_err", est.std_errors[3 + i]);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const std::string k = std::string("c_") + xyz[i] + xyz[j];
      r.add(k, est.state.corr(i, j));
      r.add(k + "_err", est.std_errors[6 + 3 * i + j]);
    }
  return r.str();
}

std::string run_discord_direct(const Config& c)
{
  const EventBatch batch = load_batch(c);
  DirectDiscordOptions opts;
  opts.grid_size = static_cast<int>(positive_count(c, "grid", 2));
  opts.alpha = real(c, "alpha");
  opts.debias = boolean(c, "debias");
  opts.extrapolate = boolean(c, "extrapolate");
  opts.bootstrap = static_cast<int>(positive_count(c, "bootstrap", 0));
  opts.bootstrap_seed = static_cast<std::uint64_t>(positive_count(c, "bootstrap-seed", 0));
  opts.entropy_noise_sigmas = real(c, "noise-sigmas");
  const DirectDiscordResult res = direct_discord(batch, opts);
  Report r;
  r.add("n_events", static_cast<double>(batch.events.size()));
  r.add("discord", res.value);
  r.add("std_error", res.std_error);
  r.add("entropy_b", res.entropy_b);
  r.add("entropy_total", res.entropy_total);
  r.add_vector("direction", res.optimal_direction);
  r.add("min_cone_events", static_cast<double>(res.min_cone_events));
  return r.str();
}

std::string run_ellipsoid(const Config& c)
{
  const EventBatch batch = load_batch(c);
  const auto rec = reconstruct_ellipsoid(batch, static_cast<int>(positive_count(c, "grid", 9)), real(c, "alpha"),
                                         boolean(c, "debias"));
  const auto& e = rec.fit.ellipsoid;
  Report r;
  r.add_vector("center", e.center);
  for (int i = 0; i < 3; ++i)
    r.add("semiaxis_" + std::to_string(i + 1), e.semiaxes[i]);
  for (int i = 0; i < 3; ++i)
    r.add_vector("axis_" + std::to_string(i + 1), e.orientation.col(i));
  r.add("rank", static_cast<double>(rec.fit.rank));
  r.add("degenerate", e.degenerate ? "1" : "0");
  r.add("degenerate_tol", rec.degenerate_tol);
  std::string out = r.str() + "\nn_x,n_y,n_z,p_hat,bx,by,bz,n_selected\n";
  for (const auto& d : rec.directions) {
    for (int i = 0; i < 3; ++i)
      out += format_double(d.direction[i]) + ",";
    out += format_double(d.prob) + ",";
    for (int i = 0; i < 3; ++i)
      out += format_double(d.bloch[i]) + ",";
    out += std::to_string(d.n_selected) + "\n";
  }
  return out;
}

std::string run_classify(const Config& c)
{
  const std::string spec = text(c, "state");
  if (spec.empty())
    throw ConfigError("classify needs --state");
  const auto rep = classify_detailed(parse_state_spec(spec));
  Report r;
  r.add("class", std::string(to_string(rep.cls)));
  r.add("discord_a", rep.discord_a);
  r.add("discord_b", rep.discord_b);
  r.add("negativity", rep.negativity);
  r.add("min_pt_eigenvalue", rep.min_pt_eigenvalue);
  r.add("steering", rep.steering);
  r.add("horodecki", rep.horodecki);
  return r.str();
}

std::string run_witness(const Config& c)
{
  const std::string spec = text(c, "state");
  const std::string lumi = text(c, "lumi");
  if (spec.empty() == lumi.empty())
    throw ConfigError("give exactly one of --state and --lumi");
  TwoQubitState s;
  if (!spec.empty()) {
    s = parse_state_spec(spec);
  } else {
    IntegrationOptions opts;
    opts.m_t = real(c, "mt-gev");
    const LuminosityTable table = LuminosityTable::resolve(lumi, opts.m_t);
    const double m_cut = real(c, "m-cut") > 0.0 ? real(c, "m-cut") : table.max_mass();
    const std::string basis = text(c, "basis");
    if (basis == "helicity")
      s = integrated_matrix_helicity(table, m_cut, opts);
    else if (basis == "beam")
      s = integrate_beam(table, m_cut, opts);
    else
      throw ConfigError("basis must be helicity or beam");
  }
  const Vector3 eps_b = vector3(c, "inject-b");
  const Vector3 w = vector3(c, "inject-c");
  Matrix3 eps_c;
  eps_c << 0.0, w[0], w[1], -w[0], 0.0, w[2], -w[1], -w[2], 0.0;
  const Injection inj = inject_cp_violation(s, eps_b, eps_c);
  std::string out = witness_report_csv(witness_report(inj.state));
  out += "injection_scale," + format_double(inj.scale) + "\n";
  out += std::string("zero_capacity,") + (inj.zero_capacity ? "1" : "0") + "\n";
  return out;
}

std::vector<Command> commands()
{
  std::vector<Command> cmds;
  cmds.push_back({"map",
                  "discord and hierarchy flags on a (beta, theta) grid",
                  {{"channel", Kind::text, "", "gg or qqbar"},
                   {"lumi", Kind::text, "", "luminosity table (builtin:<name> or CSV) mixing both channels"},
                   {"beta-points", Kind::integer, "21", "grid points in beta"},
                   {"theta-points", Kind::integer, "21", "grid points in theta over [0, pi]"},
                   {"beta-max", Kind::real, "0.999", "largest beta"},
                   kSeed,
                   kMt},
                  run_map});
  cmds.push_back({"trajectory",
                  "integrated beam-axis state as a function of the upper mass cut",
                  {{"lumi", Kind::text, "", "luminosity table (builtin:<name> or CSV)"},
                   {"cuts", Kind::reals, "", "comma separated mass cuts in GeV"},
                   {"cut-points", Kind::integer, "20", "evenly spaced cuts when --cuts is empty"},
                   kSeed,
                   kMt},
                  run_trajectory});
  cmds.push_back({"simulate",
                  "generate dilepton events",
                  {{"state", Kind::text, "", "fixed spin state"},
                   {"lumi", Kind::text, "", "production model with this luminosity table"},
                   {"m-cut", Kind::real, "0", "upper mass cut for the model, 0 for the whole table"},
                   {"frame", Kind::text, "helicity", "frame the directions are recorded in"},
                   {"n", Kind::integer, "100000", "number of events"},
                   kSeed,
                   kMt},
                  run_simulate});
  cmds.push_back({"tomo", "moment tomography of an event sample", event_source_params(), run_tomo});
  auto dd = event_source_params();
  dd.push_back({"grid", Kind::integer, "1000", "Fibonacci directions"});
  dd.push_back({"alpha", Kind::real, "0.2", "cone half-angle in radians"});
  dd.push_back({"debias", Kind::boolean, "true", "remove the cone-average bias"});
  dd.push_back({"extrapolate", Kind::boolean, "false", "Richardson extrapolation in alpha"});
  dd.push_back({"bootstrap", Kind::integer, "20", "Poisson bootstrap replicas"});
  dd.push_back({"bootstrap-seed", Kind::integer, "24301", "bootstrap seed"});
  dd.push_back({"noise-sigmas", Kind::real, "2", "noise floor of the reconstructed spectrum"});
  cmds.push_back({"discord-direct", "discord from conditional event selections", dd, run_discord_direct});
  auto el = event_source_params();
  el.push_back({"grid", Kind::integer, "1000", "Fibonacci directions"});
  el.push_back({"alpha", Kind::real, "0.2", "cone half-angle in radians"});
  el.push_back({"debias", Kind::boolean, "true", "remove the cone-average bias"});
  cmds.push_back({"ellipsoid", "steering ellipsoid reconstruction", el, run_ellipsoid});
  cmds.push_back(
    {"classify", "quantum correlation hierarchy of a state", {{"state", Kind::text, "", "state"}, kSeed, kMt}, run_classify});
  cmds.push_back({"witness",
                  "CP-odd witnesses, optionally after a toy injection",
                  {{"state", Kind::text, "", "state"},
                   {"lumi", Kind::text, "", "use the integrated state of this luminosity table"},
                   {"m-cut", Kind::real, "0", "upper mass cut, 0 for the whole table"},
                   {"basis", Kind::text, "helicity", "helicity or beam average"},
                   {"inject-b", Kind::reals, "0,0,0", "eps_b added to B+ and subtracted from B-"},
                   {"inject-c", Kind::reals, "0,0,0", "antisymmetric eps_c as (xy, xz, yz)"},
                   kSeed,
                   kMt},
                  run_witness});
  return cmds;
}

Config effective_config(const Command& cmd, const Config& file, const std::map<std::string, std::string>& flags)
{
  for (const auto& [k, v] : file.entries()) {
    if (k == "command") {
      if (v != cmd.name)
        throw ConfigError("configuration is for command '" + v + "', not '" + cmd.name + "'");
      continue;
    }
    const bool known =
      std::any_of(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.name == k; });
    if (!known)
      throw ConfigError("unknown configuration key '" + k + "' for command '" + cmd.name + "'");
  }
  Config eff;
  eff.set("command", cmd.name);
  for (const auto& p : cmd.params) {
    std::string v = p.fallback;
    if (auto f = file.get(p.name))
      v = *f;
    if (auto it = flags.find(p.name); it != flags.end())
      v = it->second;
    eff.set(p.name, canonical(p, v));
  }
  return eff;
}

void emit(const std::string& out_path, const Config& eff, const std::string& body)
{
  const std::string text = eff.to_header() + body;
  if (out_path.empty() || out_path == "-")
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    write_text_file(out_path, text);
}

int exit_code(const std::exception& e)
{
  if (dynamic_cast<const InsufficientStatisticsError*>(&e))
    return 4;
  if (dynamic_cast<const InputDataError*>(&e) || dynamic_cast<const ValidationError*>(&e))
    return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e))
    return 2;
  return 1;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Spin correlations and quantum discord of top-antitop pairs"};
  app.require_subcommand(1);

  const auto cmds = commands();
  std::string config_path, out_path;
  unsigned threads = 0;
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> flag_opts;
  std::map<std::string, CLI::App*> subs;

  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    sub->add_option("--config", config_path, "key = value configuration file; flags win");
    sub->add_option("--out", out_path, "output file, .gz compresses; stdout if omitted");
    sub->add_option("--threads", threads, "worker thread cap, 0 for all cores");
    for (const auto& p : cmd.params) {
      auto* opt = sub->add_option("--" + p.name, flag_values[cmd.name][p.name], p.help);
      if (!p.fallback.empty())
        opt->description(p.help + " [" + p.fallback + "]");
      flag_opts[cmd.name].emplace_back(p.name, opt);
    }
  }
  std::string rerun_path;
  auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in an output file header");
  rerun->add_option("file", rerun_path, "output file written by this tool")->required();
  rerun->add_option("--out", out_path, "output file, .gz compresses; stdout if omitted");
  rerun->add_option("--threads", threads, "worker thread cap, 0 for all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    set_thread_limit(threads);
    const Command* cmd = nullptr;
    Config file;
    std::map<std::string, std::string> given;
    if (rerun->parsed()) {
      file = Config::load(rerun_path);
      const auto name = file.get("command");
      if (!name)
        throw ConfigError("'" + rerun_path + "' has no recorded command");
      for (const auto& c : cmds)
        if (c.name == *name)
          cmd = &c;
      if (!cmd)
        throw ConfigError("unknown recorded command '" + *name + "'");
    } else {
      for (const auto& c : cmds)
        if (subs[c.name]->parsed())
          cmd = &c;
      if (!config_path.empty())
        file = Config::load(config_path);
      for (const auto& [name, opt] : flag_opts[cmd->name])
        if (opt->count() > 0)
          given[name] = flag_values[cmd->name][name];
    }
    const Config eff = effective_config(*cmd, file, given);
    emit(out_path, eff, cmd->run(eff));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "topcorr: " << e.what() << "\n";
    return exit_code(e);
  }
}
