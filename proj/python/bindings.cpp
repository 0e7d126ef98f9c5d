// Python bindings. Integers cross the boundary as Python ints (arbitrary size),
// rationals as fractions.Fraction; shape checks reuse the JSON decoders.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdcrt/mdcrt.hpp"
#include "mdcrt/io.hpp"

namespace py = pybind11;
using namespace mdcrt;

namespace {

Json to_jsonish(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) throw Error(ErrorCode::ParseError, "booleans are not integers");
  if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
    Json out = Json::array();
    for (auto item : h) out.push_back(to_jsonish(item));
    return out;
  }
  return Json(std::string(py::str(h)));
}

IntMat as_mat(const py::handle& h, const char* what) { return matrix_from_json(to_jsonish(h), what); }
IntVec as_vec(const py::handle& h, const char* what) { return vector_from_json(to_jsonish(h), what); }
RatVec as_ratvec(const py::handle& h, const char* what) { return rat_vector_from_json(to_jsonish(h), what); }
std::vector<IntMat> as_mats(const py::handle& h, const char* what) {
  return matrix_list_from_json(to_jsonish(h), what);
}
std::vector<IntVec> as_vecs(const py::handle& h, const char* what) {
  return vector_list_from_json(to_jsonish(h), what);
}
std::optional<IntMat> as_opt_mat(const py::object& h, const char* what) {
  if (h.is_none()) return std::nullopt;
  return as_mat(h, what);
}
Rat as_rat(const py::handle& h, const char* what) {
  Json j = Json::array({to_jsonish(h)});
  return rat_vector_from_json(j, what)[0];
}

py::int_ py_int(const Int& x) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

py::object py_rat(const Rat& q) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(py_int(q.get_num()), py_int(q.get_den()));
}

py::list py_vec(const IntVec& v) {
  py::list out;
  for (const auto& x : v) out.append(py_int(x));
  return out;
}

py::list py_ratvec(const RatVec& v) {
  py::list out;
  for (const auto& x : v) out.append(py_rat(x));
  return out;
}

py::list py_mat(const IntMat& m) {
  py::list out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(py_int(m(i, j)));
    out.append(row);
  }
  return out;
}

template <class T, class F>
py::list py_list(const std::vector<T>& xs, F f) {
  py::list out;
  for (const auto& x : xs) out.append(f(x));
  return out;
}

py::dict py_smith(const SmithForm& s) {
  py::dict d;
  d["U"] = py_mat(s.U);
  d["V"] = py_mat(s.V);
  d["Lambda"] = py_mat(s.Lambda);
  d["invariant_factors"] = py_vec(s.invariant_factors());
  return d;
}

std::optional<SmithForm> as_opt_smith(const py::object& h) {
  if (h.is_none()) return std::nullopt;
  py::dict d = h.cast<py::dict>();
  return SmithForm{as_mat(d["U"], "smith.U"), as_mat(d["V"], "smith.V"), as_mat(d["Lambda"], "smith.Lambda")};
}

Form form_of(bool raw) { return raw ? Form::Raw : Form::Canonical; }

py::dict py_solution(const CrtSolution& s) {
  py::dict d;
  d["m"] = py_vec(s.m);
  d["R"] = py_mat(s.R);
  d["canonical"] = s.canonical;
  return d;
}

py::dict py_trace(const RobustTrace& t) {
  py::dict d;
  d["algorithm"] = t.algorithm;
  d["success"] = t.success;
  d["failure"] = t.failure;
  d["folding_vectors"] = py_list(t.folding, py_vec);
  d["cvp_points"] = py_list(t.cvp_points, py_vec);
  d["residues"] = py_list(t.residues, py_vec);
  d["aggregate"] = py_vec(t.aggregate);
  return d;
}

py::dict py_bound(const Bound& b) {
  py::dict d;
  d["norm"] = std::string(norm_name(b.norm));
  d["measure"] = py_rat(b.measure);
  d["value"] = b.value();
  d["conservative"] = b.conservative;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.attr("__version__") = MDCRT_VERSION;

  static py::exception<Error> exc(mod, "MdcrtError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(error_code_name(e.code())), std::string(e.what()));
      PyErr_SetObject(exc.ptr(), args.ptr());
    }
  });

  mod.def("det", [](py::object a) { return py_int(det(as_mat(a, "A"))); }, py::arg("A"));
  mod.def("smith", [](py::object a) { return py_smith(smith(as_mat(a, "A"))); }, py::arg("A"));
  mod.def(
      "hermite",
      [](py::object b) {
        HermiteForm h = hermite_column(as_mat(b, "B"));
        return py::make_tuple(py_mat(h.H), py_mat(h.W));
      },
      py::arg("B"));

  mod.def(
      "gcld",
      [](py::object m, py::object n, bool raw) {
        BezoutCert c = gcld(as_mat(m, "M"), as_mat(n, "N"), form_of(raw));
        return py::make_tuple(py_mat(c.L), py_mat(c.P), py_mat(c.Q));
      },
      py::arg("M"), py::arg("N"), py::arg("raw") = false);
  mod.def(
      "gcrd",
      [](py::object m, py::object n, bool raw) {
        GcrdCert c = gcrd(as_mat(m, "M"), as_mat(n, "N"), form_of(raw));
        return py::make_tuple(py_mat(c.L), py_mat(c.P), py_mat(c.Q));
      },
      py::arg("M"), py::arg("N"), py::arg("raw") = false);
  mod.def(
      "lcrm", [](py::object m, py::object n, bool raw) { return py_mat(lcrm(as_mat(m, "M"), as_mat(n, "N"), form_of(raw))); },
      py::arg("M"), py::arg("N"), py::arg("raw") = false);
  mod.def(
      "lclm", [](py::object m, py::object n, bool raw) { return py_mat(lclm(as_mat(m, "M"), as_mat(n, "N"), form_of(raw))); },
      py::arg("M"), py::arg("N"), py::arg("raw") = false);
  mod.def("is_left_coprime", [](py::object m, py::object n) { return is_left_coprime(as_mat(m, "M"), as_mat(n, "N")); });
  mod.def("is_right_coprime", [](py::object m, py::object n) { return is_right_coprime(as_mat(m, "M"), as_mat(n, "N")); });

  mod.def(
      "mod_reduce", [](py::object m, py::object M) { return py_vec(mod_reduce(as_vec(m, "m"), as_mat(M, "M")).value); },
      py::arg("m"), py::arg("M"));
  mod.def(
      "folding_vector", [](py::object m, py::object M) { return py_vec(folding_vector(as_vec(m, "m"), as_mat(M, "M"))); },
      py::arg("m"), py::arg("M"));
  mod.def(
      "residue_set", [](py::object M) { return py_list(residue_set(as_mat(M, "M")), py_vec); }, py::arg("M"));

  mod.def(
      "crt",
      [](py::object moduli, py::object remainders, const std::string& method, py::object target, py::object ns) {
        ResidueSystem sys{as_mats(moduli, "moduli"), as_vecs(remainders, "remainders")};
        std::optional<IntMat> t = as_opt_mat(target, "target");
        if (method == "general") {
          GeneralOptions o;
          o.target = t;
          return py_solution(crt_general(sys, o));
        }
        if (method == "cc") return py_solution(crt_cc(sys, t));
        if (method == "explicit") {
          if (ns.is_none()) throw Error(ErrorCode::InvalidArgument, "explicit method needs Ns");
          ExplicitOptions o;
          o.target = t;
          return py_solution(crt_explicit(sys, as_mats(ns, "Ns"), o));
        }
        throw Error(ErrorCode::InvalidArgument, "unknown method " + method);
      },
      py::arg("moduli"), py::arg("remainders"), py::arg("method") = "general", py::arg("target") = py::none(),
      py::arg("ns") = py::none());
  mod.def(
      "scalar_crt",
      [](py::object pairs) {
        std::vector<std::pair<Int, Int>> rs;
        for (auto p : pairs) {
          IntVec v = as_vec(p, "pair");
          if (v.size() != 2) throw Error(ErrorCode::ShapeMismatch, "each entry is (remainder, modulus)");
          rs.emplace_back(v[0], v[1]);
        }
        return py_int(scalar_crt(rs));
      },
      py::arg("pairs"));

  mod.def(
      "min_distance",
      [](py::object b, const std::string& norm) { return py_rat(min_distance(as_mat(b, "B"), parse_norm(norm))); },
      py::arg("B"), py::arg("norm") = "l2",
      "Minimum measure over nonzero lattice vectors: squared length for l2, plain norm otherwise.");
  mod.def(
      "cvp",
      [](py::object b, py::object w, const std::string& norm) {
        CvpResult r = cvp(as_mat(b, "B"), as_ratvec(w, "w"), parse_norm(norm));
        py::dict d;
        d["point"] = py_vec(r.point);
        d["coefficients"] = py_vec(r.coeffs);
        d["measure"] = py_rat(r.measure);
        return d;
      },
      py::arg("B"), py::arg("w"), py::arg("norm") = "l2");

  auto robust = [](int algorithm) {
    return [algorithm](py::object rtilde, py::object M, py::object gammas, const std::string& norm, py::object u1,
                       py::object smith_of_m) {
      RobustModuli rm(as_mat(M, "M"), as_mats(gammas, "Gammas"));
      std::vector<IntVec> r = as_vecs(rtilde, "remainders");
      RobustTrace t = algorithm == 1
                          ? algorithm1(r, rm, parse_norm(norm), as_opt_mat(u1, "U1"))
                          : algorithm2(r, rm, parse_norm(norm), as_opt_mat(u1, "U1"), as_opt_smith(smith_of_m));
      py::dict d = py_trace(t);
      if (t.success) {
        Reconstruction rec = robust_reconstruct(t, r, rm);
        d["reconstruction"] = py_ratvec(rec.value);
        d["rounded"] = py_vec(rec.rounded);
      }
      return d;
    };
  };
  mod.def("algorithm1", robust(1), py::arg("remainders"), py::arg("M"), py::arg("Gammas"), py::arg("norm") = "l2",
          py::arg("U1") = py::none(), py::arg("smith") = py::none());
  mod.def("algorithm2", robust(2), py::arg("remainders"), py::arg("M"), py::arg("Gammas"), py::arg("norm") = "l2",
          py::arg("U1") = py::none(), py::arg("smith") = py::none());
  mod.def(
      "bound",
      [](py::object M, py::object gammas, int algorithm, const std::string& norm, py::object smith_of_m) {
        RobustModuli rm(as_mat(M, "M"), as_mats(gammas, "Gammas"));
        if (algorithm == 1) return py_bound(bound_algorithm1(rm, parse_norm(norm)));
        if (algorithm == 2) return py_bound(bound_algorithm2(rm, parse_norm(norm), as_opt_smith(smith_of_m)));
        throw Error(ErrorCode::InvalidArgument, "algorithm must be 1 or 2");
      },
      py::arg("M"), py::arg("Gammas"), py::arg("algorithm") = 1, py::arg("norm") = "l2", py::arg("smith") = py::none());
  mod.def(
      "below_bound",
      [](py::object tau, py::object M, py::object gammas, int algorithm, const std::string& norm) {
        RobustModuli rm(as_mat(M, "M"), as_mats(gammas, "Gammas"));
        Bound b = algorithm == 1 ? bound_algorithm1(rm, parse_norm(norm)) : bound_algorithm2(rm, parse_norm(norm));
        return below_bound(as_rat(tau, "tau"), b);
      },
      py::arg("tau"), py::arg("M"), py::arg("Gammas"), py::arg("algorithm") = 1, py::arg("norm") = "l2");

  mod.def(
      "fig1",
      [](std::vector<std::string> cases, py::object taus, std::size_t trials, std::uint64_t seed, int algorithm,
         const std::string& norm, unsigned threads) {
        Fig1Config cfg;
        for (const auto& c : cases) {
          if (c == "base") cfg.cases.push_back(simulation_case_base());
          else if (c == "doubled") cfg.cases.push_back(simulation_case_doubled());
          else throw Error(ErrorCode::InvalidArgument, "unknown case " + c);
        }
        for (const auto& t : as_ratvec(taus, "taus")) cfg.taus.push_back(t);
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.algorithm = algorithm;
        cfg.norm = parse_norm(norm);
        cfg.threads = threads;
        std::vector<Fig1Row> rows;
        {
          py::gil_scoped_release nogil;
          rows = fig1_experiment(cfg);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["case"] = r.case_name;
          d["tau"] = py_rat(r.tau);
          d["mean_error"] = r.mean_error;
          d["success_rate"] = r.success_rate;
          out.append(d);
        }
        return out;
      },
      py::arg("cases") = std::vector<std::string>{"base", "doubled"}, py::arg("taus") = py::make_tuple(0),
      py::arg("trials") = 500, py::arg("seed") = 1, py::arg("algorithm") = 1, py::arg("norm") = "l2",
      py::arg("threads") = 0);
}
