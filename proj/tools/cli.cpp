#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "spectra_lab/errors.hpp"
#include "spectra_lab/io.hpp"
#include "spectra_lab/limit_integrals.hpp"
#include "spectra_lab/matrix_core.hpp"
#include "spectra_lab/random.hpp"
#include "spectra_lab/reference_laws.hpp"
#include "spectra_lab/spectra.hpp"
#include "spectra_lab/word_engine.hpp"
#include "spectra_lab/words.hpp"

namespace spectra_lab::cli {
namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string kind;
  std::vector<std::string> modifiers;
  int n = 0;
  std::string dist = "rademacher";
  std::uint64_t seed = 2024;
  std::string word;
  std::string sign = "unsigned";
  std::string weight = "unit";
  std::uint64_t samples = 1'000'000;
  std::vector<int> ladder;
  bool extrapolate = false;
  int reps = 20;
  std::vector<int> moments;
  std::string out;
  std::string format = "json";
  std::string vs;
  std::string reference;
  std::string relation = "exact-l";
  bool stratified = false;
  bool region = false;
  int k = 0;
  double budget = kDefaultCircuitBudget;
  int bins = 81;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Turns config-file entries into flags, skipping any flag also given on the command line.
std::vector<std::string> config_flags(const Json& config, const std::vector<std::string>& given) {
  const auto on_command_line = [&](const std::string& flag) {
    for (const auto& a : given) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  const auto scalar = [](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  std::vector<std::string> out;
  for (auto it = config.begin(); it != config.end(); ++it) {
    std::string name = it.key();
    std::replace(name.begin(), name.end(), '_', '-');
    const std::string flag = "--" + name;
    if (flag == "--config" || on_command_line(flag)) continue;
    const Json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      for (const auto& e : v) {
        out.push_back(flag);
        out.push_back(scalar(e));
      }
    } else if (!v.is_null()) {
      out.push_back(flag);
      out.push_back(scalar(v));
    }
  }
  return out;
}

std::vector<SignModifier> parse_modifiers(const std::vector<std::string>& names) {
  std::vector<SignModifier> mods;
  for (const auto& m : names) {
    const SignModifier s = parse_sign_modifier(m);
    if (s != SignModifier::None) mods.push_back(s);
  }
  return mods;
}

EnsembleSpec ensemble_from(const std::string& kind, const std::vector<std::string>& modifiers, const Options& o) {
  EnsembleSpec spec;
  spec.kind = parse_link_kind(kind);
  spec.modifiers = parse_modifiers(modifiers);
  spec.n = o.n;
  spec.dist = parse_input_distribution(o.dist);
  spec.seed = o.seed;
  return spec;
}

// KIND[:MOD,MOD]
std::pair<std::string, std::vector<std::string>> split_ensemble(const std::string& text) {
  const auto colon = text.find(':');
  std::vector<std::string> mods;
  if (colon == std::string::npos) return {text, mods};
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) mods.push_back(item);
  }
  return {text.substr(0, colon), mods};
}

Json ensemble_json(const EnsembleSpec& spec) {
  Json mods = Json::array();
  for (const auto m : spec.modifiers) mods.push_back(to_string(m));
  return {{"kind", to_string(spec.kind)}, {"modifiers", mods}, {"n", spec.n},
          {"dist", to_string(spec.dist)}, {"seed", spec.seed}};
}

void flatten(const Json& v, const std::string& prefix, std::string& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
  } else {
    out += prefix;
    out += ',';
    out += v.is_number_float() ? format_double(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump();
    out += '\n';
  }
}

int emit(const Options& o, const std::string& command, Json config, Json payload, std::ostream& out) {
  config["out"] = o.out;
  config["format"] = o.format;
  Json record;
  record["schema_version"] = kSchemaVersion;
  record["timestamp"] = timestamp_utc();
  record["command"] = command;
  record["config"] = std::move(config);
  record["payload"] = std::move(payload);

  std::string text;
  if (o.format == "csv") {
    text = "field,value\n";
    flatten(record, "", text);
  } else {
    text = dump_json(record) + "\n";
  }
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomic(o.out, text);
    out << "wrote " << o.out << "\n";
  }
  return kOk;
}

std::filesystem::path sibling(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const EnsembleSpec spec = ensemble_from(o.kind, o.modifiers, o);
  const PatternedMatrix m = build_matrix(spec);
  const RealSpectrum s = spectrum(m);
  const ESD e = esd(s);
  const auto edges = symmetric_bin_edges(s, o.bins);
  const auto hist = e.histogram(edges);

  Json payload;
  payload["ensemble"] = ensemble_json(spec);
  payload["symmetry"] = to_string(m.symmetry);
  Json moments;
  for (int h = 2; h <= 8; ++h) moments["beta_" + std::to_string(h)] = esd_moment(s, h);
  payload["moments"] = moments;

  std::optional<ReferenceLaw> law;
  if (o.reference.empty()) {
    law = default_reference(spec.kind, spec.modifiers);
  } else if (o.reference != "none") {
    law = parse_reference_law(o.reference);
  }
  if (law) {
    const ReferenceLaw ref = *law;
    payload["kolmogorov"] = {{"reference", ref.name()},
                             {"distance", kolmogorov_distance(e, [&](double x) { return reference_cdf(ref, x); })}};
  } else {
    payload["kolmogorov"] = nullptr;
  }
  payload["spectrum_min"] = s.values.front();
  payload["spectrum_max"] = s.values.back();
  Json bins = Json::array();
  for (const auto& b : hist) bins.push_back({{"bin_left", b.left}, {"bin_right", b.right}, {"count", b.count}});
  payload["histogram"] = bins;

  if (!o.out.empty()) {
    const auto hist_path = sibling(o.out, ".hist.csv");
    const auto spec_path = sibling(o.out, ".spectrum.txt");
    write_file_atomic(hist_path, histogram_csv(hist));
    write_file_atomic(spec_path, spectrum_text(s.values));
    payload["files"] = {{"histogram_csv", hist_path.string()}, {"spectrum", spec_path.string()}};
    out << "wrote " << hist_path.string() << "\nwrote " << spec_path.string() << "\n";
  }

  Json config = ensemble_json(spec);
  config["reference"] = o.reference.empty() ? (law ? law->name() : "none") : o.reference;
  config["bins"] = o.bins;
  return emit(o, "simulate", config, payload, out);
}

int cmd_words(const Options& o, std::ostream& out) {
  if (o.k < 1 || o.k > 6) throw UsageError("--k must be in 1..6");
  const auto words = enumerate_pair_matched(o.k);
  Json list = Json::array();
  int catalan = 0, symmetric = 0;
  for (const auto& w : words) {
    const bool c = is_catalan(w);
    const bool s = is_symmetric_word(w);
    catalan += c ? 1 : 0;
    symmetric += s ? 1 : 0;
    list.push_back({{"word", w.letters()}, {"catalan", c}, {"symmetric", s}});
  }
  Json payload{{"k", o.k}, {"count", words.size()}, {"catalan_count", catalan}, {"symmetric_count", symmetric},
               {"words", list}};
  return emit(o, "words", Json{{"k", o.k}}, payload, out);
}

Json count_json(const Word& w, LinkKind kind, SignKind sign, int n, const SignedCount& c) {
  return {{"word", w.letters()},
          {"kind", to_string(kind)},
          {"sign", to_string(sign)},
          {"n", n},
          {"raw", c.raw},
          {"loopless", c.loopless},
          {"signed_skew", c.signed_skew},
          {"signed_modified", c.signed_modified},
          {"p_estimate", p_from_count(c, sign, w.half_length(), n)}};
}

int cmd_count(const Options& o, std::ostream& out) {
  const Word w(o.word);
  const LinkKind kind = parse_link_kind(o.kind);
  const SignKind sign = parse_sign_kind(o.sign);
  const MatchRelation relation = parse_match_relation(o.relation);
  if (o.ladder.empty() && o.n < 1) throw UsageError("count needs --n or --ladder");
  if (o.extrapolate && o.ladder.size() < 2) throw UsageError("--extrapolate needs a ladder of at least two n");

  Json config{{"word", o.word}, {"kind", to_string(kind)}, {"sign", to_string(sign)},
              {"relation", to_string(relation)}, {"budget", o.budget}};
  Json payload;
  if (o.ladder.empty()) {
    config["n"] = o.n;
    payload = count_json(w, kind, sign, o.n, count_circuits(w, relation, kind, o.n, o.budget));
  } else {
    config["ladder"] = o.ladder;
    config["extrapolate"] = o.extrapolate;
    Json rungs = Json::array();
    std::vector<double> values;
    for (const int n : o.ladder) {
      const SignedCount c = count_circuits(w, relation, kind, n, o.budget);
      rungs.push_back(count_json(w, kind, sign, n, c));
      values.push_back(p_from_count(c, sign, w.half_length(), n));
    }
    payload["ladder"] = rungs;
    if (o.extrapolate) {
      const Extrapolation e = fit_inverse_n(o.ladder, values);
      payload["extrapolation"] = {{"model", "p + c/n"}, {"limit", e.limit}, {"slope", e.slope}, {"residual", e.residual}};
    }
  }
  return emit(o, "count", config, payload, out);
}

int cmd_integrate(const Options& o, std::ostream& out) {
  Json config{{"samples", o.samples}, {"seed", o.seed}};
  Json payload;
  if (o.region) {
    config["region_19_62208"] = true;
    const Rational exact = region_lower_bound_exact();
    const IntegralEstimate est = region_lower_bound_check(o.samples, o.seed);
    payload = {{"exact", std::to_string(exact.numerator()) + "/" + std::to_string(exact.denominator())},
               {"exact_value", boost::rational_cast<double>(exact)},
               {"value", est.value},
               {"std_error", est.std_error},
               {"samples", est.sample_count},
               {"method", to_string(est.method)}};
    return emit(o, "integrate", config, payload, out);
  }
  if (o.word.empty() || o.kind.empty()) throw UsageError("integrate needs --word and --kind (or --region-19-62208)");
  const Word w(o.word);
  const LinkKind kind = parse_link_kind(o.kind);
  const SignWeight weight = parse_sign_weight(o.weight);
  const IntegrationMethod method = o.stratified ? IntegrationMethod::Stratified : IntegrationMethod::MonteCarlo;
  config["word"] = o.word;
  config["kind"] = to_string(kind);
  config["weight"] = to_string(weight);
  config["stratified"] = o.stratified;
  const IntegralEstimate est = word_limit_integral(w, kind, weight, o.samples, o.seed, method);
  payload = {{"word", o.word},
             {"kind", to_string(kind)},
             {"weight", to_string(weight)},
             {"samples", est.sample_count},
             {"value", est.value},
             {"std_error", est.std_error},
             {"method", to_string(est.method)}};
  return emit(o, "integrate", config, payload, out);
}

Json band_json(const ReplicateMoments& m) {
  const double hw = m.band_halfwidth();
  return {{"mean", m.mean}, {"sd", std::sqrt(m.variance)}, {"halfwidth", hw}, {"band", {m.mean - hw, m.mean + hw}}};
}

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.vs.empty()) throw UsageError("compare needs --vs KIND[:MOD,MOD]");
  if (o.reps < 2) throw UsageError("--reps must be at least 2");
  const EnsembleSpec a = ensemble_from(o.kind, o.modifiers, o);
  const auto [vs_kind, vs_mods] = split_ensemble(o.vs);
  EnsembleSpec b = ensemble_from(vs_kind, vs_mods, o);
  b.seed = mix_seed(o.seed, 1);

  std::vector<int> orders = o.moments.empty() ? std::vector<int>{4} : o.moments;
  const auto sa = replicate_spectra(a, o.reps);
  const auto sb = replicate_spectra(b, o.reps);
  const auto ma = moments_of(sa, orders);
  const auto mb = moments_of(sb, orders);

  Json rows = Json::array();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const double gap = std::abs(ma[i].mean - mb[i].mean);
    const bool overlap = gap <= ma[i].band_halfwidth() + mb[i].band_halfwidth();
    rows.push_back({{"order", orders[i]},
                    {"a", band_json(ma[i])},
                    {"b", band_json(mb[i])},
                    {"verdict", overlap ? "same" : "different"}});
  }
  std::vector<double> pa, pb;
  for (const auto& s : sa) pa.insert(pa.end(), s.values.begin(), s.values.end());
  for (const auto& s : sb) pb.insert(pb.end(), s.values.begin(), s.values.end());

  Json payload{{"a", ensemble_json(a)},
               {"b", ensemble_json(b)},
               {"reps", o.reps},
               {"rule", "heuristic: bands mean +/- 3 sd/sqrt(reps) overlap => same"},
               {"moments", rows},
               {"kolmogorov_pooled", kolmogorov_distance(ESD(pa), ESD(pb))}};
  Json config = ensemble_json(a);
  config["vs"] = o.vs;
  config["reps"] = o.reps;
  config["moment"] = orders;
  return emit(o, "compare", config, payload, out);
}

int cmd_interlace(const Options& o, std::ostream& out) {
  const EnsembleSpec spec = ensemble_from(o.kind, o.modifiers, o);
  if (!has_modifier(spec.modifiers, SignModifier::Skew)) {
    throw UsageError("interlace is implemented for skew-symmetric matrices; add --modifier skew");
  }
  const double gap = interlacing_gap(build_matrix(spec));
  const double bound = 1.0 / spec.n;
  const bool pass = gap <= bound + 1e-10;
  Json payload{{"n", spec.n}, {"gap", gap}, {"bound", bound}, {"pass", pass}};
  const int code = emit(o, "interlace", ensemble_json(spec), payload, out);
  return pass ? code : kContract;
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Patterned random matrix experiments", "spectra-lab"};
  app.require_subcommand(1);
  Options o;
  std::string config_path;

  const auto add_ensemble = [&](CLI::App* sub, bool need_n) {
    sub->add_option("--kind", o.kind, "wigner | toeplitz | hankel | sc | rc | pt")->required();
    sub->add_option("--modifier", o.modifiers, "none | skew | modified | triangular (repeatable)");
    auto* n = sub->add_option("--n", o.n, "matrix dimension")->check(CLI::PositiveNumber);
    if (need_n) n->required();
    sub->add_option("--dist", o.dist, "rademacher | gaussian | uniform")->capture_default_str();
    sub->add_option("--seed", o.seed)->capture_default_str();
  };
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "write the record here instead of stdout");
    sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--config", config_path, "JSON file of flag values; flags on the command line win");
  };

  auto* simulate = app.add_subcommand("simulate", "spectrum, ESD histogram, moments, Kolmogorov distance");
  add_ensemble(simulate, true);
  simulate->add_option("--reference", o.reference, "semicircle | gaussian | rc | none");
  simulate->add_option("--bins", o.bins)->check(CLI::PositiveNumber)->capture_default_str();
  add_common(simulate);

  auto* words = app.add_subcommand("words", "pair-matched words of length 2k");
  words->add_option("--k", o.k)->required();
  add_common(words);

  auto* count = app.add_subcommand("count", "exhaustive circuit counts");
  count->add_option("--word", o.word)->required();
  count->add_option("--kind", o.kind)->required();
  count->add_option("--sign", o.sign, "unsigned | skew | modified")->capture_default_str();
  count->add_option("--relation", o.relation, "exact-l | toeplitz-sum | circulant-sum")->capture_default_str();
  count->add_option("--n", o.n)->check(CLI::PositiveNumber);
  count->add_option("--ladder", o.ladder, "comma-separated n values")->delimiter(',');
  count->add_flag("--extrapolate", o.extrapolate, "fit p + c/n over the ladder");
  count->add_option("--budget", o.budget)->capture_default_str();
  add_common(count);

  auto* integrate = app.add_subcommand("integrate", "word limits as integrals over the unit cube");
  integrate->add_option("--word", o.word);
  integrate->add_option("--kind", o.kind);
  integrate->add_option("--weight", o.weight, "unit | skew | modified")->capture_default_str();
  integrate->add_option("--samples", o.samples)->capture_default_str();
  integrate->add_option("--seed", o.seed)->capture_default_str();
  integrate->add_flag("--stratified", o.stratified, "8 strata per axis");
  integrate->add_flag("--region-19-62208", o.region, "the iterated-integral lower bound, exact and MC");
  add_common(integrate);

  auto* compare = app.add_subcommand("compare", "replicate moment bands of two ensembles");
  add_ensemble(compare, true);
  compare->add_option("--vs", o.vs, "second ensemble, KIND[:MOD,MOD]")->required();
  compare->add_option("--reps", o.reps)->capture_default_str();
  compare->add_option("--moment", o.moments, "moment orders (repeatable or comma-separated)")->delimiter(',');
  add_common(compare);

  auto* interlace = app.add_subcommand("interlace", "ESD distance to the leading principal submatrix");
  add_ensemble(interlace, true);
  add_common(interlace);

  for (auto* sub : {simulate, words, count, integrate, compare, interlace}) {
    for (auto* opt : sub->get_options()) {
      if (opt->get_expected_max() == 1 && opt->get_type_size() == 1) {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      }
    }
  }

  // Config-file entries go in front of the user's flags.
  std::vector<std::string> args = args_in;
  try {
    for (std::size_t i = 0; i < args_in.size(); ++i) {
      std::string path;
      if (args_in[i] == "--config" && i + 1 < args_in.size()) {
        path = args_in[i + 1];
      } else if (args_in[i].rfind("--config=", 0) == 0) {
        path = args_in[i].substr(9);
      }
      if (path.empty()) continue;
      std::ifstream f(path);
      if (!f) throw UsageError("cannot read config file " + path);
      const Json cfg = Json::parse(f);
      if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
      const auto extra = config_flags(cfg, args_in);
      if (!args.empty()) args.insert(args.begin() + 1, extra.begin(), extra.end());
      break;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Json::exception& e) {
    err << "error: bad config file: " << e.what() << "\n";
    return kUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (words->parsed()) return cmd_words(o, out);
    if (count->parsed()) return cmd_count(o, out);
    if (integrate->parsed()) return cmd_integrate(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (interlace->parsed()) return cmd_interlace(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << " (attempted states " << e.attempted_states() << ")\n";
    return kResource;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << "\n";
    return kContract;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedOperation& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace spectra_lab::cli
