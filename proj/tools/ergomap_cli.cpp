// ergomap: command-line front end for the ergomap library.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ergomap/entropy.hpp"
#include "ergomap/errors.hpp"
#include "ergomap/map_io.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/perturb.hpp"
#include "ergomap/stats.hpp"
#include "ergomap/structure.hpp"
#include "ergomap/svg.hpp"

namespace {

using ergomap::Interval;
using ergomap::IntervalSet;
using ergomap::PwaMap;
using ergomap::Rational;

constexpr int kUsageExit = 64;
constexpr int kContractExit = 2;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Rational rat(const std::string& s) { return Rational::parse(s); }

Interval interval_arg(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ergomap::ParseError("interval must be 'lo,hi', got '" + s + "'");
  return Interval(rat(s.substr(0, comma)), rat(s.substr(comma + 1)));
}

// "lo,hi" or "lo,hi;lo,hi;..."
IntervalSet set_arg(const std::string& s) {
  std::vector<Interval> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto semi = s.find(';', start);
    parts.push_back(interval_arg(s.substr(start, semi == std::string::npos ? std::string::npos : semi - start)));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return IntervalSet(std::move(parts));
}

void emit(const std::string& out, const std::string& content) { ergomap::write_text(out, content); }

// Deterministic random full-lap map: raw engine output only, so the
// result does not depend on the standard library's distributions.
PwaMap random_full_laps(std::uint64_t seed, int laps, long den) {
  std::mt19937_64 rng(seed);
  std::vector<long> w(static_cast<std::size_t>(laps));
  long total = 0;
  for (auto& x : w) {
    x = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(den));
    total += x;
  }
  std::vector<Rational> alphas;
  for (long x : w) alphas.emplace_back(x, total);
  const auto sign = rng() % 2 == 0 ? ergomap::LapSign::increasing : ergomap::LapSign::decreasing;
  return ergomap::from_full_laps(sign, alphas);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergomap: exact piecewise-affine Lebesgue-preserving interval maps"};
  app.require_subcommand(1);
  std::string out = "-";

  // build
  auto* build = app.add_subcommand("build", "construct a map file");
  build->require_subcommand(1);
  build->add_option("-o,--output", out, "output path ('-' for stdout)");
  std::string sign_s;
  std::vector<std::string> alpha_s;
  auto* b_full = build->add_subcommand("full-laps", "full-lap map from (sign, alpha...)");
  b_full->add_option("sign", sign_s, "+ or -")->required();
  b_full->add_option("alphas", alpha_s, "lap lengths summing to 1")->required();
  int zig_m = 3;
  auto* b_zig = build->add_subcommand("zigzag", "m-fold zigzag (regular window of id on [0,1])");
  b_zig->add_option("--m", zig_m, "fold")->check(CLI::PositiveNumber);
  std::string named;
  auto* b_named = build->add_subcommand("named", "tent, identity or flip");
  b_named->add_option("name", named)->required()->check(CLI::IsMember({"tent", "identity", "flip"}));
  std::uint64_t seed = 1;
  int rnd_laps = 3;
  long rnd_den = 10;
  auto* b_rand = build->add_subcommand("random", "seeded random full-lap map");
  b_rand->add_option("--seed", seed);
  b_rand->add_option("--laps", rnd_laps)->check(CLI::Range(1, 1000));
  b_rand->add_option("--den", rnd_den)->check(CLI::Range(1L, 1000000L));

  // perturb
  auto* perturb = app.add_subcommand("perturb", "window perturbations and pipelines");
  perturb->require_subcommand(1);
  perturb->add_option("-o,--output", out, "output path ('-' for stdout)");
  std::string map_path, window_s, mode_s = "regular", eps_s = "1/10";
  int fold = 3, hs_n = 2;
  auto* p_win = perturb->add_subcommand("window", "regular m-fold window perturbation");
  p_win->add_option("map", map_path)->required();
  p_win->add_option("--window", window_s, "a,b")->required();
  p_win->add_option("--fold", fold)->check(CLI::PositiveNumber);
  p_win->add_option("--mode", mode_s)->check(CLI::IsMember({"regular", "boundary-left", "boundary-right"}));
  auto* p_leo = perturb->add_subcommand("leoize", "perturb to a leo map");
  p_leo->add_option("map", map_path)->required();
  p_leo->add_option("--eps", eps_s);
  auto* p_mk = perturb->add_subcommand("markovize", "perturb to a leo Markov map");
  p_mk->add_option("map", map_path)->required();
  p_mk->add_option("--eps", eps_s);
  auto* p_hs = perturb->add_subcommand("horseshoe", "create an n-branch horseshoe");
  p_hs->add_option("map", map_path)->required();
  p_hs->add_option("--n", hs_n)->check(CLI::Range(2, 100000));
  p_hs->add_option("--eps", eps_s);

  // classify
  auto* classify = app.add_subcommand("classify", "transitive / mixing / leo verdict");
  classify->add_option("map", map_path)->required();
  bool full_report = false;
  classify->add_flag("--report", full_report, "print ℐ(f), permutation and Fix(f^2)");

  // markov
  auto* markov = app.add_subcommand("markov", "Markov partition and transition data");
  markov->add_option("map", map_path)->required();
  bool matrices = false;
  markov->add_flag("--matrices", matrices, "print P, p and the adjacency matrix");
  std::string other_path;
  markov->add_option("--conjugate-to", other_path, "decide conjugacy with another expanding Markov map");

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Rohlin entropy and two-slope constructions");
  entropy->require_subcommand(1);
  entropy->add_option("-o,--output", out, "output path ('-' for stdout)");
  std::string eta_s = "3/20", map_id;
  int m_laps = 3, stage_n = 1;
  long M = 20;
  double target = 0.5;
  bool csv = false;
  auto* e_rohlin = entropy->add_subcommand("rohlin", "Rohlin entropy of a map");
  e_rohlin->add_option("map", map_path)->required();
  e_rohlin->add_flag("--csv", csv, "CSV row: map-id, value, terms, slopes");
  e_rohlin->add_option("--id", map_id, "map id for CSV output");
  auto* e_two = entropy->add_subcommand("two-slope", "closed-form two-slope entropy");
  e_two->add_option("--eta", eta_s);
  e_two->add_option("--m", m_laps)->check(CLI::Range(2, 1000000));
  auto* e_solve = entropy->add_subcommand("solve-eta", "η with two-slope entropy c");
  e_solve->add_option("--c", target)->required();
  e_solve->add_option("--m", m_laps)->check(CLI::Range(3, 1000000));
  auto* e_build = entropy->add_subcommand("build-two-slope", "two-slope map H[η,M] from f");
  e_build->add_option("map", map_path)->required();
  e_build->add_option("--eta", eta_s);
  e_build->add_option("--M", M)->check(CLI::PositiveNumber);
  auto* e_set = entropy->add_subcommand("set", "Markov map with entropy c near f");
  e_set->add_option("map", map_path)->required();
  e_set->add_option("--c", target)->required();
  e_set->add_option("--eps", eps_s);
  auto* e_stage = entropy->add_subcommand("stage", "n rounds of nested windows, entropy > n");
  e_stage->add_option("map", map_path)->required();
  e_stage->add_option("--n", stage_n)->check(CLI::Range(1, 64));
  e_stage->add_option("--eps", eps_s);

  // stats
  auto* stats = app.add_subcommand("stats", "correlations, mixing scores, leo times, Birkhoff averages");
  stats->require_subcommand(1);
  stats->add_option("-o,--output", out, "output path ('-' for stdout)");
  std::string set_a = "0,1/2", set_b = "0,1/2", x_s = "1/3", y_s = "1/5", window2 = "0,1/8";
  int horizon = 10, cap = 64;
  long birk_n = 100;
  auto* s_corr = stats->add_subcommand("corr", "exact correlations j = 0..n-1 as CSV");
  s_corr->add_option("map", map_path)->required();
  s_corr->add_option("--a", set_a, "set A: lo,hi[;lo,hi...]");
  s_corr->add_option("--b", set_b, "set B");
  s_corr->add_option("--n", horizon)->check(CLI::Range(1, 100000));
  s_corr->add_option("--id", map_id);
  auto* s_mix = stats->add_subcommand("mixing", "ergodic / weak / strong scores");
  s_mix->add_option("map", map_path)->required();
  s_mix->add_option("--a", set_a);
  s_mix->add_option("--b", set_b);
  s_mix->add_option("--n", horizon)->check(CLI::Range(1, 100000));
  auto* s_leo = stats->add_subcommand("leo-time", "least n with f^n(J) = [0,1]");
  s_leo->add_option("map", map_path)->required();
  s_leo->add_option("--window", window2);
  s_leo->add_option("--cap", cap)->check(CLI::NonNegativeNumber);
  auto* s_birk = stats->add_subcommand("birkhoff", "exact Birkhoff average of obs(x) = x");
  s_birk->add_option("map", map_path)->required();
  s_birk->add_option("--x", x_s);
  s_birk->add_option("--n", birk_n)->check(CLI::PositiveNumber);
  std::string pair_y;
  s_birk->add_option("--pair-y", pair_y, "also average x*y along the pair orbit from (x, y)");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG of the graph");
  plot->add_option("map", map_path)->required();
  plot->add_option("-o,--output", out, "output path ('-' for stdout)");
  bool diag = false, part = false, comps = false;
  plot->add_flag("--diagonal", diag);
  plot->add_flag("--partition", part, "draw the Markov partition when it exists");
  plot->add_flag("--components", comps, "box the elements of ℐ(f)");

  // verify
  auto* verify = app.add_subcommand("verify", "exact Lebesgue-preservation check");
  verify->add_option("map", map_path)->required();

  // Let leaf subcommands accept their parent's -o option.
  for (auto* group : {build, perturb, entropy, stats}) {
    for (auto* leaf : group->get_subcommands([](const CLI::App*) { return true; })) leaf->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    if (*build) {
      PwaMap f = PwaMap::identity();
      if (*b_full) {
        if (sign_s != "+" && sign_s != "-") throw ergomap::ParseError("sign must be + or -");
        std::vector<Rational> alphas;
        for (const auto& a : alpha_s) alphas.push_back(rat(a));
        f = ergomap::from_full_laps(sign_s == "+" ? ergomap::LapSign::increasing : ergomap::LapSign::decreasing,
                                    alphas);
      } else if (*b_zig) {
        f = ergomap::regular_window(PwaMap::identity(), {Interval::unit(), zig_m, ergomap::WindowMode::regular});
      } else if (*b_named) {
        f = named == "tent" ? PwaMap::tent() : (named == "flip" ? PwaMap::flip() : PwaMap::identity());
      } else if (*b_rand) {
        f = random_full_laps(seed, rnd_laps, rnd_den);
      }
      emit(out, ergomap::serialize_map(f));
    } else if (*perturb) {
      const PwaMap f = ergomap::read_map_file(map_path);
      const Rational eps = rat(eps_s);
      if (*p_win) {
        const auto mode = mode_s == "regular"         ? ergomap::WindowMode::regular
                          : mode_s == "boundary-left" ? ergomap::WindowMode::boundary_left
                                                      : ergomap::WindowMode::boundary_right;
        emit(out, ergomap::serialize_map(ergomap::regular_window(f, {interval_arg(window_s), fold, mode})));
      } else if (*p_leo) {
        const PwaMap g = ergomap::leoize(f, eps);
        std::cerr << "rho " << ergomap::uniform_distance(f, g) << '\n';
        emit(out, ergomap::serialize_map(g));
      } else if (*p_mk) {
        const auto r = ergomap::markovize(f, eps);
        if (const auto* na = std::get_if<ergomap::NotAchieved>(&r)) {
          std::cerr << "error: markovize not achieved: " << na->reason << '\n';
          for (const auto& t : na->unresolved) std::cerr << "unresolved " << t << '\n';
          return kContractExit;
        }
        emit(out, ergomap::serialize_map(std::get<PwaMap>(r)));
      } else if (*p_hs) {
        const auto r = ergomap::horseshoe(f, hs_n, eps);
        std::cerr << "fixed-point " << r.fixed_point << "\nwindow " << r.window << "\nfold " << r.fold
                  << "\nentropy-bound " << num(r.entropy_bound) << "\ncertificate " << r.certificate << '\n';
        emit(out, ergomap::serialize_map(r.map));
      }
    } else if (*classify) {
      const PwaMap f = ergomap::read_map_file(map_path);
      const auto rep = ergomap::transitivity_components(f);
      std::cout << (full_report ? ergomap::format_report(rep) : to_string(rep.verdict) + "\n");
    } else if (*markov) {
      const PwaMap f = ergomap::read_map_file(map_path);
      if (!other_path.empty()) {
        const auto r = ergomap::conjugacy_check(f, ergomap::read_map_file(other_path));
        std::cout << to_string(r.verdict) << '\n';
        if (!r.reason.empty()) std::cout << "reason " << r.reason << '\n';
        for (const auto& [x, y] : r.node_map) std::cout << "h " << x << ' ' << y << '\n';
        return 0;
      }
      const auto mr = ergomap::markov_partition(f);
      if (const auto* nm = std::get_if<ergomap::NotMarkovWithinBound>(&mr)) {
        std::cerr << "error: not Markov within bound: orbit of " << nm->point << " (" << nm->reason << ")\n";
        return kContractExit;
      }
      const auto& ms = std::get<ergomap::MarkovSystem>(mr);
      const auto flags = ergomap::mixing_flags(ms);
      std::cout << "points";
      for (const auto& p : ms.points()) std::cout << ' ' << p;
      std::cout << "\nirreducible " << (flags.irreducible ? "yes" : "no") << "\naperiodic "
                << (flags.aperiodic ? "yes" : "no") << "\nperiod " << flags.period << "\nstrongly-mixing "
                << (flags.strongly_mixing ? (flags.certified ? "yes" : "yes (uncertified: not expanding)") : "no")
                << "\ntop-entropy " << num(ergomap::top_entropy(ms)) << '\n';
      if (matrices) std::cout << ergomap::format_matrices(ms);
    } else if (*entropy) {
      if (*e_rohlin) {
        const auto e = ergomap::rohlin_entropy(ergomap::read_map_file(map_path));
        if (csv) {
          emit(out, ergomap::entropy_csv_header() + ergomap::entropy_csv_row(map_id.empty() ? map_path : map_id, e));
        } else {
          emit(out, num(e.value) + "\n");
        }
      } else if (*e_two) {
        emit(out, num(ergomap::two_slope_entropy(rat(eta_s), m_laps)) + "\n");
      } else if (*e_solve) {
        const Rational eta = ergomap::solve_eta(target, m_laps);
        emit(out, eta.str() + " " + num(eta.to_double()) + "\n");
      } else if (*e_build) {
        emit(out, ergomap::serialize_map(ergomap::build_two_slope(ergomap::read_map_file(map_path), rat(eta_s), M)));
      } else if (*e_set) {
        const PwaMap f = ergomap::read_map_file(map_path);
        const PwaMap g = ergomap::set_entropy(f, target, rat(eps_s));
        std::cerr << "entropy " << num(ergomap::rohlin_entropy(g).value) << "\nrho "
                  << ergomap::uniform_distance(f, g) << '\n';
        emit(out, ergomap::serialize_map(g));
      } else if (*e_stage) {
        const auto tower = ergomap::entropy_stage(ergomap::read_map_file(map_path), stage_n, rat(eps_s));
        for (std::size_t k = 0; k < tower.stages.size(); ++k) {
          const auto& s = tower.stages[k];
          std::cerr << "stage " << k + 1 << " fold " << s.fold << " windows " << s.windows.size() << " entropy "
                    << num(s.entropy) << '\n';
        }
        emit(out, ergomap::serialize_map(tower.map));
      }
    } else if (*stats) {
      const PwaMap f = ergomap::read_map_file(map_path);
      if (*s_corr) {
        const auto A = set_arg(set_a), B = set_arg(set_b);
        const auto corr = ergomap::correlations(f, A, B, horizon);
        emit(out, ergomap::correlation_csv_header() +
                      ergomap::correlation_csv_rows(map_id.empty() ? map_path : map_id, A, B, corr));
      } else if (*s_mix) {
        const auto sc = ergomap::mixing_scores(f, set_arg(set_a), set_arg(set_b), horizon);
        emit(out, "horizon " + std::to_string(sc.horizon) + "\nergodic " + num(sc.ergodic_score) + "\nweak " +
                      num(sc.weak_score) + "\n");
      } else if (*s_leo) {
        const auto t = ergomap::leo_time(f, interval_arg(window2), cap);
        if (const int* n = std::get_if<int>(&t)) {
          emit(out, std::to_string(*n) + "\n");
        } else {
          emit(out, "not-within-cap " + std::to_string(cap) + "\n");
        }
      } else if (*s_birk) {
        const Rational x = rat(x_s);
        std::string text = ergomap::birkhoff(f, ergomap::PwaFunction::identity(), x, birk_n).str() + "\n";
        if (!pair_y.empty()) {
          ergomap::ProductObservable obs;
          obs.terms.emplace_back(ergomap::PwaFunction::identity(), ergomap::PwaFunction::identity());
          const auto pa = ergomap::birkhoff_pair(f, obs, x, rat(pair_y), birk_n);
          text += "pair " + pa.average.str() + " baseline " + pa.baseline.str() + "\n";
        }
        emit(out, text);
      }
    } else if (*plot) {
      const PwaMap f = ergomap::read_map_file(map_path);
      ergomap::SvgOverlays ov;
      ov.diagonal = diag;
      ov.title = map_path;
      if (part) {
        const auto mr = ergomap::markov_partition(f);
        if (const auto* ms = std::get_if<ergomap::MarkovSystem>(&mr)) ov.partition = ms->points();
      }
      if (comps) ov.boxes = ergomap::transitivity_components(f).components;
      emit(out, ergomap::render_svg(f, ov));
    } else if (*verify) {
      const auto r = ergomap::verify_lebesgue(ergomap::read_map_file(map_path));
      if (r.preserving) {
        std::cout << "preserving\n";
      } else {
        std::cout << "not-preserving\n";
        std::cerr << "witness " << r.witness->slab << " sum " << r.witness->sum << '\n';
        return kContractExit;
      }
    }
  } catch (const ergomap::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kContractExit;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
