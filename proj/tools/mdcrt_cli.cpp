// Command-line front end. Results go to stdout as JSON (or CSV for sweeps);
// failures go to stderr as {"error": {"code", "message"}}.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdcrt/io.hpp"
#include "mdcrt/mdcrt.hpp"

using namespace mdcrt;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;

void print_error(std::string_view code, const std::string& message) {
  Json j;
  j["error"]["code"] = std::string(code);
  j["error"]["message"] = message;
  std::cerr << j.dump() << '\n';
}

// Inline JSON when the argument looks like JSON, otherwise a file path.
Json load_arg(const std::string& arg) {
  const auto pos = arg.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && (arg[pos] == '[' || arg[pos] == '{')) return parse_json_text(arg, "argument");
  return read_json_file(arg);
}

IntMat load_matrix(const std::string& arg, const char* what) { return matrix_from_json(load_arg(arg), what); }

const Json& need(const Json& j, const char* key, const std::string& origin) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::ParseError, origin + ": missing key '" + key + "'");
  return j.at(key);
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string meta_line(std::uint64_t seed, const std::string& extra) {
  return "seed=" + std::to_string(seed) + ",version=" + MDCRT_VERSION + (extra.empty() ? "" : "," + extra);
}

std::vector<Rat> parse_grid(const std::string& spec) {
  // start:stop:step, or a comma separated list.
  std::vector<Rat> out;
  if (spec.find(':') != std::string::npos) {
    std::stringstream ss(spec);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c, ':');
    try {
      Rat lo(a), hi(b), st(c.empty() ? std::string("1") : c);
      lo.canonicalize();
      hi.canonicalize();
      st.canonicalize();
      if (st <= 0) fail(ErrorCode::InvalidArgument, "grid step must be positive");
      for (Rat x = lo; x <= hi; x += st) out.push_back(x);
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::InvalidArgument, "malformed grid '" + spec + "'");
    }
    return out;
  }
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      Rat q(tok);
      q.canonicalize();
      out.push_back(q);
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::InvalidArgument, "malformed grid entry '" + tok + "'");
    }
  }
  return out;
}

RobustCase load_case(const std::string& name) {
  if (name == "base") return simulation_case_base();
  if (name == "doubled") return simulation_case_doubled();
  Json j = read_json_file(name);
  RobustModuli rm(matrix_from_json(need(j, "M", name), "M"), matrix_list_from_json(need(j, "Gammas", name), "Gammas"));
  std::string label = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : name;
  return {label, rm};
}

Json trace_json(const RobustTrace& t) {
  Json j;
  j["algorithm"] = t.algorithm;
  j["success"] = t.success;
  if (!t.failure.empty()) j["failure"] = t.failure;
  j["cvp_points"] = Json::array();
  for (const auto& v : t.cvp_points) j["cvp_points"].push_back(to_json(v));
  j["residues"] = Json::array();
  for (const auto& v : t.residues) j["residues"].push_back(to_json(v));
  j["aggregate"] = to_json(t.aggregate);
  j["folding_vectors"] = Json::array();
  for (const auto& v : t.folding) j["folding_vectors"].push_back(to_json(v));
  return j;
}

Json bound_json(const Bound& b) {
  Json j;
  j["norm"] = std::string(norm_name(b.norm));
  j[b.norm == Norm::L2 ? "squared_measure" : "measure"] = to_json(b.measure);
  j["value"] = b.value();
  j["certified_lower_bound"] = b.conservative;
  return j;
}

std::optional<SmithForm> smith_from(const Json& j, const std::string& origin) {
  if (!j.contains("smith")) return std::nullopt;
  const Json& s = j["smith"];
  return SmithForm{matrix_from_json(need(s, "U", origin), "smith.U"), matrix_from_json(need(s, "V", origin), "smith.V"),
                   matrix_from_json(need(s, "Lambda", origin), "smith.Lambda")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact multidimensional CRT toolkit for integer vectors"};
  app.set_version_flag("--version", MDCRT_VERSION);
  app.require_subcommand(1);

  std::string a_arg, m_arg, n_arg, v_arg, sys_arg, method = "general", norm_s = "l2", out_path, w_arg, taus = "0:30:2";
  std::string f_arg = "1645,1373";
  bool raw = false, mindist = false;
  int algorithm = 1;
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  unsigned threads = 0;
  double snr_start = -38, snr_stop = -20, snr_step = 2;
  std::vector<std::string> cases;

  auto* smith_cmd = app.add_subcommand("smith", "Smith normal form U A V = Lambda");
  smith_cmd->add_option("--matrix,-A", a_arg, "matrix (JSON or file)")->required();

  auto pair_opts = [&](CLI::App* c) {
    c->add_option("--M", m_arg, "first matrix (JSON or file)")->required();
    c->add_option("--N", n_arg, "second matrix (JSON or file)")->required();
  };
  auto* gcld_cmd = app.add_subcommand("gcld", "greatest common left divisor with Bezout certificate");
  auto* gcrd_cmd = app.add_subcommand("gcrd", "greatest common right divisor with Bezout certificate");
  auto* lcrm_cmd = app.add_subcommand("lcrm", "least common right multiple");
  auto* lclm_cmd = app.add_subcommand("lclm", "least common left multiple");
  auto* coprime_cmd = app.add_subcommand("coprime", "coprimeness and commutativity of two matrices");
  for (auto* c : {gcld_cmd, gcrd_cmd, lcrm_cmd, lclm_cmd, coprime_cmd}) pair_opts(c);
  for (auto* c : {gcld_cmd, gcrd_cmd, lcrm_cmd, lclm_cmd})
    c->add_flag("--raw", raw, "skip Hermite canonicalization");

  auto* mod_cmd = app.add_subcommand("mod", "reduce an integer vector modulo a matrix");
  mod_cmd->add_option("--m", v_arg, "vector (JSON or file)")->required();
  mod_cmd->add_option("--M", m_arg, "modulus (JSON or file)")->required();

  auto* crt_cmd = app.add_subcommand("crt", "reconstruct from a residue system");
  crt_cmd->add_option("system", sys_arg, "system file {moduli, remainders, ...}")->required();
  crt_cmd->add_option("--method", method, "general | cc | explicit | diag")
      ->check(CLI::IsMember({"general", "cc", "explicit", "diag"}));

  auto* lat_cmd = app.add_subcommand("lattice", "shortest vector length or closest vector");
  lat_cmd->add_option("--basis,-B", a_arg, "basis (JSON or file)")->required();
  auto* md_flag = lat_cmd->add_flag("--mindist", mindist, "exact minimum distance");
  auto* cvp_opt = lat_cmd->add_option("--cvp", w_arg, "target vector (JSON, entries may be p/q)");
  md_flag->excludes(cvp_opt);
  lat_cmd->add_option("--norm", norm_s, "l1 | l2 | linf")->check(CLI::IsMember({"l1", "l2", "linf"}));

  auto* robust_cmd = app.add_subcommand("robust", "robust reconstruction for one instance");
  robust_cmd->add_option("instance", sys_arg, "instance file {M, Gammas, remainders | tau, ...}")->required();

  auto* fig1_cmd = app.add_subcommand("fig1", "reconstruction error versus remainder error bound");
  fig1_cmd->add_option("--taus", taus, "grid start:stop:step or list");

  auto* freq_cmd = app.add_subcommand("freqest", "detection probability and error versus SNR");
  freq_cmd->add_option("--snr-start", snr_start);
  freq_cmd->add_option("--snr-stop", snr_stop);
  freq_cmd->add_option("--snr-step", snr_step);
  freq_cmd->add_option("--f", f_arg, "frequency, comma separated");

  for (auto* c : {robust_cmd, fig1_cmd, freq_cmd}) {
    c->add_option("--algorithm", algorithm, "1 or 2")->check(CLI::IsMember({1, 2}));
    c->add_option("--norm", norm_s, "l1 | l2 | linf")->check(CLI::IsMember({"l1", "l2", "linf"}));
    c->add_option("--seed", seed, "master seed");
  }
  for (auto* c : {fig1_cmd, freq_cmd}) {
    c->add_option("--trials", trials, "trials per grid point");
    c->add_option("--case", cases, "base | doubled | path to {M, Gammas} (repeatable)");
    c->add_option("--out", out_path, "CSV path (stdout when absent)");
    c->add_option("--threads", threads, "worker threads, 0 = all cores");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("USAGE", e.what());
    return kExitUsage;
  }

  try {
    const Norm norm = parse_norm(norm_s);
    if (smith_cmd->parsed()) {
      IntMat a = load_matrix(a_arg, "matrix");
      SmithForm s = smith(a);
      Json j;
      j["U"] = to_json(s.U);
      j["V"] = to_json(s.V);
      j["Lambda"] = to_json(s.Lambda);
      j["invariant_factors"] = to_json(s.invariant_factors());
      j["verified"] = is_unimodular(s.U) && is_unimodular(s.V) && s.U * a * s.V == s.Lambda;
      emit(j);
    } else if (gcld_cmd->parsed() || gcrd_cmd->parsed()) {
      IntMat m = load_matrix(m_arg, "M"), n = load_matrix(n_arg, "N");
      const Form form = raw ? Form::Raw : Form::Canonical;
      Json j;
      if (gcld_cmd->parsed()) {
        BezoutCert c = gcld(m, n, form);
        j["L"] = to_json(c.L);
        j["P"] = to_json(c.P);
        j["Q"] = to_json(c.Q);
        j["identity_holds"] = m * c.P + n * c.Q == c.L;
        j["divides_both"] = left_divides(c.L, m) && left_divides(c.L, n);
        j["unimodular"] = is_unimodular(c.L);
      } else {
        GcrdCert c = gcrd(m, n, form);
        j["L"] = to_json(c.L);
        j["P"] = to_json(c.P);
        j["Q"] = to_json(c.Q);
        j["identity_holds"] = c.P * m + c.Q * n == c.L;
        j["divides_both"] = right_divides(c.L, m) && right_divides(c.L, n);
        j["unimodular"] = is_unimodular(c.L);
      }
      emit(j);
    } else if (lcrm_cmd->parsed() || lclm_cmd->parsed()) {
      IntMat m = load_matrix(m_arg, "M"), n = load_matrix(n_arg, "N");
      const Form form = raw ? Form::Raw : Form::Canonical;
      Json j;
      if (lcrm_cmd->parsed()) {
        IntMat c = lcrm(m, n, form);
        j["C"] = to_json(c);
        j["common_multiple"] = left_divides(m, c) && left_divides(n, c);
      } else {
        IntMat c = lclm(m, n, form);
        j["C"] = to_json(c);
        j["common_multiple"] = right_divides(m, c) && right_divides(n, c);
      }
      emit(j);
    } else if (coprime_cmd->parsed()) {
      IntMat m = load_matrix(m_arg, "M"), n = load_matrix(n_arg, "N");
      Json j;
      j["left_coprime"] = is_left_coprime(m, n);
      j["right_coprime"] = is_right_coprime(m, n);
      j["commute"] = commutes(m, n);
      emit(j);
    } else if (mod_cmd->parsed()) {
      IntVec v = vector_from_json(load_arg(v_arg), "m");
      IntMat m = load_matrix(m_arg, "M");
      Modulus mod(m);
      Json j;
      j["r"] = to_json(mod.reduce(v));
      j["n"] = to_json(mod.fold(v));
      emit(j);
    } else if (crt_cmd->parsed()) {
      Json in = load_arg(sys_arg);
      ResidueSystem sys{matrix_list_from_json(need(in, "moduli", sys_arg), "moduli"),
                        vector_list_from_json(need(in, "remainders", sys_arg), "remainders")};
      std::optional<IntMat> target;
      if (in.contains("target")) target = matrix_from_json(in["target"], "target");
      CrtSolution sol;
      CrtTrace trace;
      if (method == "general") {
        GeneralOptions o;
        o.target = target;
        if (in.contains("certificates"))
          for (const auto& c : in["certificates"]) {
            if (c.is_null()) {
              o.certificates.emplace_back();
              continue;
            }
            o.certificates.push_back(PairCertificate{matrix_from_json(need(c, "G", sys_arg), "G"),
                                                     matrix_from_json(need(c, "P1", sys_arg), "P1"),
                                                     matrix_from_json(need(c, "P2", sys_arg), "P2")});
          }
        if (in.contains("step_moduli"))
          for (const auto& b : in["step_moduli"])
            o.step_moduli.push_back(b.is_null() ? std::optional<IntMat>() : matrix_from_json(b, "step_moduli"));
        sol = crt_general(sys, o, &trace);
      } else if (method == "cc") {
        sol = crt_cc(sys, target, &trace);
      } else if (method == "explicit") {
        ExplicitOptions o;
        o.target = target;
        if (in.contains("W_hat"))
          for (const auto& w : matrix_list_from_json(in["W_hat"], "W_hat")) o.w_hat.emplace_back(w);
        sol = crt_explicit(sys, matrix_list_from_json(need(in, "Ns", sys_arg), "Ns"), o, &trace);
      } else {
        sol = crt_diagonalized(sys, matrix_from_json(need(in, "U", sys_arg), "U"),
                               matrix_list_from_json(need(in, "Lambdas", sys_arg), "Lambdas"));
      }
      Json j;
      j["method"] = method;
      j["m"] = to_json(sol.m);
      j["R"] = to_json(sol.R);
      j["canonical"] = sol.canonical;
      if (!trace.steps.empty()) {
        j["steps"] = Json::array();
        for (const auto& s : trace.steps)
          j["steps"].push_back({{"merged", s.merged}, {"raw", to_json(s.raw)}, {"R", to_json(s.R)},
                                {"reduced", to_json(s.reduced)}});
      }
      if (!trace.raw_sum.empty()) j["raw_sum"] = to_json(trace.raw_sum);
      emit(j);
    } else if (lat_cmd->parsed()) {
      IntMat b = load_matrix(a_arg, "basis");
      Json j;
      j["norm"] = std::string(norm_name(norm));
      const char* key = norm == Norm::L2 ? "squared_distance" : "distance";
      if (!w_arg.empty()) {
        CvpResult c = cvp(b, rat_vector_from_json(load_arg(w_arg), "target"), norm);
        j["point"] = to_json(c.point);
        j["coefficients"] = to_json(c.coeffs);
        j[key] = to_json(c.measure);
      } else {
        Rat m = min_distance(b, norm);
        j[norm == Norm::L2 ? "squared_min_distance" : "min_distance"] = to_json(m);
        j["value"] = magnitude(m, norm);
      }
      emit(j);
    } else if (robust_cmd->parsed()) {
      Json in = load_arg(sys_arg);
      RobustModuli rm(matrix_from_json(need(in, "M", sys_arg), "M"),
                      matrix_list_from_json(need(in, "Gammas", sys_arg), "Gammas"));
      RobustOptions opts;
      opts.norm = norm;
      if (in.contains("U1")) opts.u1 = matrix_from_json(in["U1"], "U1");
      if (algorithm == 2) opts.smith = smith_from(in, sys_arg);
      Json j;
      std::vector<IntVec> rtilde;
      std::optional<IntVec> truth;
      if (in.contains("remainders")) {
        rtilde = vector_list_from_json(in["remainders"], "remainders");
      } else {
        // Random instance: m uniform in the range set, errors uniform in the tau ball.
        Rng rng(derive_seed(seed, {0}));
        Rat tau = rat_vector_from_json(Json::array({need(in, "tau", sys_arg)}), "tau")[0];
        ErrorBall ball({tau, norm}, rm.dim());
        IntVec m = sample_m_in_A1(rng, rm, opts.u1);
        truth = m;
        j["m"] = to_json(m);
        j["true_folding_vectors"] = Json::array();
        j["errors"] = Json::array();
        for (const auto& mi : rm.moduli()) {
          IntVec e = ball.sample(rng);
          j["true_folding_vectors"].push_back(to_json(folding_vector(m, mi)));
          j["errors"].push_back(to_json(e));
          rtilde.push_back(mod_reduce(m, mi).value + e);
        }
        j["seed"] = seed;
      }
      RobustSolver solver(rm, algorithm, opts);
      RobustTrace t = solver.solve(rtilde);
      j["remainders"] = Json::array();
      for (const auto& r : rtilde) j["remainders"].push_back(to_json(r));
      j["trace"] = trace_json(t);
      j["bound"] = bound_json(algorithm == 1 ? bound_algorithm1(rm, norm) : bound_algorithm2(rm, norm, opts.smith));
      if (t.success) {
        Reconstruction rec = robust_reconstruct(t, rtilde, rm);
        j["reconstruction"] = to_json(rec.value);
        j["rounded"] = to_json(rec.rounded);
        if (truth) {
          j["folding_correct"] = Json(true);
          for (std::size_t i = 0; i < rm.size(); ++i)
            if (!(t.folding[i] == folding_vector(*truth, rm.moduli()[i]))) j["folding_correct"] = false;
        }
      }
      emit(j);
      if (!t.success) {
        print_error(error_code_name(ErrorCode::ConditionViolated), t.failure);
        return kExitDomain;
      }
    } else if (fig1_cmd->parsed() || freq_cmd->parsed()) {
      if (cases.empty()) cases = {"base", "doubled"};
      std::vector<RobustCase> rc;
      for (const auto& c : cases) rc.push_back(load_case(c));
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string> header;
      std::string extra;
      if (fig1_cmd->parsed()) {
        Fig1Config cfg;
        cfg.cases = rc;
        cfg.taus = parse_grid(taus);
        cfg.trials = trials ? trials : 500;
        cfg.seed = seed;
        cfg.norm = norm;
        cfg.algorithm = algorithm;
        cfg.threads = threads;
        header = {"case", "tau", "mean_error", "success_rate"};
        for (const auto& r : fig1_experiment(cfg))
          rows.push_back({r.case_name, r.tau.get_str(), format_double(r.mean_error), format_double(r.success_rate)});
        extra = "trials=" + std::to_string(cfg.trials);
      } else {
        SnrConfig cfg;
        cfg.cases = rc;
        std::vector<Int> fv;
        std::stringstream ss(f_arg);
        for (std::string tok; std::getline(ss, tok, ',');) {
          try {
            fv.emplace_back(tok);
          } catch (const std::invalid_argument&) {
            fail(ErrorCode::InvalidArgument, "malformed frequency component '" + tok + "'");
          }
        }
        cfg.f = IntVec(fv);
        if (snr_step <= 0) fail(ErrorCode::InvalidArgument, "--snr-step must be positive");
        for (int k = 0;; ++k) {
          const double s = snr_start + k * snr_step;
          if (s > snr_stop + 1e-9) break;
          cfg.snr_db.push_back(s);
        }
        cfg.trials = trials ? trials : 300;
        cfg.seed = seed;
        cfg.norm = norm;
        cfg.algorithm = algorithm;
        cfg.threads = threads;
        header = {"case", "snr_db", "p_detect", "mean_rel_error"};
        for (const auto& r : snr_sweep(cfg))
          rows.push_back({r.case_name, format_double(r.snr_db), format_double(r.p_detect),
                          format_double(r.mean_rel_error)});
        extra = "trials=" + std::to_string(cfg.trials);
      }
      extra += ",algorithm=" + std::to_string(algorithm) + ",norm=" + std::string(norm_name(norm));
      if (out_path.empty())
        emit_csv(std::cout, meta_line(seed, extra), header, rows);
      else
        emit_csv(out_path, meta_line(seed, extra), header, rows);
    }
  } catch (const Error& e) {
    print_error(error_code_name(e.code()), e.what());
    const bool usage = e.code() == ErrorCode::IoError || e.code() == ErrorCode::ParseError;
    return usage ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    print_error("INTERNAL", e.what());
    return kExitDomain;
  }
  return 0;
}
