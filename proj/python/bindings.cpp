#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bratteli/constructions.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/dynamics.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/spectra.hpp"

namespace py = pybind11;
using namespace bratteli;

namespace {

// Big integers cross as Python ints and rationals as fractions.Fraction.
py::object to_py(const BigInt& x) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

py::object to_py(const Rational& x) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(x.get_str());
}

template <class T>
py::list to_py_list(const std::vector<T>& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

py::list to_py(const IntMatrix& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.append(to_py_list(m.row(i)));
  return rows;
}

py::tuple to_py(const Interval& x) {
  return py::make_tuple(x.lower_double(), x.upper_double());
}

py::list intervals(const IntervalVector& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

BigInt from_py(const py::handle& x) { return BigInt(py::str(x).cast<std::string>(), 10); }

IntVector int_vector(const py::iterable& xs) {
  IntVector out;
  for (const auto& x : xs) out.push_back(from_py(x));
  return out;
}

RatVector rat_vector(const py::iterable& xs) {
  RatVector out;
  for (const auto& x : xs) out.push_back(parse_rational(py::str(x).cast<std::string>()));
  return out;
}

Alpha alpha_from(const py::handle& a) { return parse_alpha(py::str(a).cast<std::string>()); }

py::tuple prefix_tuple(const PathPrefix& p) { return py::make_tuple(p.top(), p.order); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ordered Bratteli-Vershik diagrams: exact dynamics, measures and eigenvalue tests";
  m.attr("__version__") = BRATTELI_VERSION;

  static py::exception<Error> error(m, "BratteliError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(error.ptr());
      py::object exc = type(py::str(e.what()));
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("set_precision", &set_default_precision, py::arg("bits"),
        "Interval precision in bits for this thread.");
  m.def("precision", &default_precision);

  py::class_<OrderedDiagram>(m, "Diagram")
      .def_static("from_json", &diagram_from_json, py::arg("text"))
      .def_static("load", &load_diagram, py::arg("path"))
      .def_static("fibonacci", &fibonacci_diagram, py::arg("depth"))
      .def_static(
          "from_levels",
          [](const py::iterable& h1, const py::list& levels) {
            std::vector<Level> ls;
            std::size_t prev = py::len(h1);
            for (const auto& item : levels) {
              auto pair = item.cast<py::tuple>();
              Level l;
              std::vector<std::vector<BigInt>> rows;
              for (const auto& r : pair[0]) rows.push_back(int_vector(r.cast<py::iterable>()));
              l.matrix = IntMatrix(rows);
              for (const auto& w : pair[1]) l.words.push_back(word_from_string(w.cast<std::string>(), prev));
              prev = l.matrix.rows();
              ls.push_back(std::move(l));
            }
            return OrderedDiagram(int_vector(h1), std::move(ls));
          },
          py::arg("h1"), py::arg("levels"),
          "Build from h1 and a list of (matrix rows, order words) for levels 2, 3, ...")
      .def_property_readonly("depth", &OrderedDiagram::depth)
      .def("rank", &OrderedDiagram::rank, py::arg("n"))
      .def("matrix", [](const OrderedDiagram& d, std::size_t n) { return to_py(d.matrix(n)); }, py::arg("n"))
      .def("word",
           [](const OrderedDiagram& d, std::size_t n, std::size_t k) {
             return word_to_string(d.word(n, k - 1), d.rank(n - 1));
           },
           py::arg("n"), py::arg("vertex"), "Order word of a vertex (1-based) as a letter string.")
      .def("heights", [](const OrderedDiagram& d, std::size_t n) { return to_py_list(d.heights(n)); },
           py::arg("n"))
      .def("product", [](const OrderedDiagram& d, std::size_t lo, std::size_t hi) { return to_py(d.product(lo, hi)); },
           py::arg("m"), py::arg("n"), "P(n, m) = M(n) ... M(m+1).")
      .def("is_proper", [](const OrderedDiagram& d, std::size_t n) { return check_proper(d, n).proper(); },
           py::arg("n"))
      .def("truncated", &OrderedDiagram::truncated, py::arg("n"))
      .def("telescope", [](const OrderedDiagram& d, const std::vector<std::size_t>& cuts) { return telescope(d, cuts); },
           py::arg("cuts"))
      .def("to_json", [](const OrderedDiagram& d) { return diagram_to_json(d); })
      .def("save", [](const OrderedDiagram& d, const std::string& path) { save_diagram(d, path); }, py::arg("path"))
      .def("__repr__", [](const OrderedDiagram& d) {
        return "<Diagram depth=" + std::to_string(d.depth()) + " rank=" + std::to_string(d.rank(d.depth())) + ">";
      });

  // Prefixes cross as (top vertex, order indices), 0-based.
  m.def("enumerate_prefixes",
        [](const OrderedDiagram& d, std::size_t n) {
          py::list out;
          for (const auto& p : enumerate_prefixes(d, n)) out.append(prefix_tuple(p));
          return out;
        },
        py::arg("diagram"), py::arg("n"));
  m.def("return_time",
        [](const OrderedDiagram& d, std::size_t top, const std::vector<std::size_t>& order) {
          return to_py(return_time(d, make_prefix(d, top, order)));
        },
        py::arg("diagram"), py::arg("top"), py::arg("order"));
  m.def("vershik_step",
        [](const OrderedDiagram& d, std::size_t top, const std::vector<std::size_t>& order) -> py::object {
          auto next = vershik_step(d, make_prefix(d, top, order));
          if (!next) return py::none();
          return prefix_tuple(*next);
        },
        py::arg("diagram"), py::arg("top"), py::arg("order"));

  m.def("measure_candidates",
        [](const OrderedDiagram& d, std::size_t level, std::size_t horizon, double tol) {
          const MeasureSetReport r = measure_candidates(d, level, horizon, tol);
          py::list cands;
          for (const auto& c : r.candidates) cands.append(to_py_list(c));
          py::dict out;
          out["candidates"] = cands;
          out["diameter"] = to_py(r.diameter);
          out["clusters"] = r.clusters;
          out["unique_ergodicity"] = r.unique_ergodicity;
          return out;
        },
        py::arg("diagram"), py::arg("level"), py::arg("horizon"), py::arg("tol") = 1e-6);

  m.def("necessary_series",
        [](const OrderedDiagram& d, const py::object& alpha, std::size_t N) {
          const SeriesReport s = continuous_necessary_series(d, alpha_from(alpha), N);
          py::dict out;
          out["terms"] = s.exact_terms.empty() ? py::object(intervals(s.terms)) : py::object(to_py_list(s.exact_terms));
          out["classification"] = s.classification;
          out["exact"] = s.exact;
          return out;
        },
        py::arg("diagram"), py::arg("alpha"), py::arg("N"),
        "Terms |||alpha H(n)||| for n = 1..N; alpha as 'a/b', decimal or 'real:1/phi'.");

  m.def("stable_decompose",
        [](const OrderedDiagram& d, const py::object& alpha, std::size_t level, std::size_t horizon, double tol) {
          const StableDecomposition s = stable_decompose(d, alpha_from(alpha), level, horizon, tol);
          py::dict out;
          out["w"] = to_py_list(s.w);
          out["v"] = intervals(s.v);
          out["residuals"] = intervals(s.residuals);
          out["source"] = s.source;
          out["contracted"] = s.contracted;
          return out;
        },
        py::arg("diagram"), py::arg("alpha"), py::arg("level"), py::arg("horizon"), py::arg("tol") = 1e-6);

  m.def("dimension_group_witness",
        [](const OrderedDiagram& d, const py::iterable& z, std::size_t level, std::size_t horizon) -> py::object {
          const auto w = dimension_group_membership(d, rat_vector(z), level, horizon);
          if (!w.level) return py::none();
          return py::make_tuple(*w.level, to_py_list(w.image));
        },
        py::arg("diagram"), py::arg("z"), py::arg("level"), py::arg("horizon"),
        "(n, P(n,m) z) for the first integral image, or None.");

  m.def("toeplitz_classify",
        [](const py::object& alpha, const py::iterable& q, std::size_t rank, bool bounded) {
          const ToeplitzReport r = toeplitz_classify(alpha_from(alpha), int_vector(q), rank, bounded);
          py::dict out;
          out["verdict"] = to_string(r.verdict);
          out["witness"] = r.witness ? py::object(py::int_(*r.witness)) : py::object(py::none());
          out["reason"] = r.reason;
          return out;
        },
        py::arg("alpha"), py::arg("q"), py::arg("rank"), py::arg("bounded") = false);

  m.def("toeplitz_cyclic",
        [](const py::iterable& q, std::size_t depth, std::size_t rank) {
          return toeplitz_diagram(int_vector(q), cyclic_rule(), depth, rank);
        },
        py::arg("q"), py::arg("depth"), py::arg("rank"));
  m.def("toeplitz_rank3_example", &toeplitz_rank3_example, py::arg("l"), py::arg("depth"));
  m.def("minus_one_check",
        [](const OrderedDiagram& d, std::size_t depth) {
          const MinusOneReport r = minus_one_eigenfunction_check(d, depth);
          py::list levels;
          for (const auto& lv : r.levels) {
            py::dict x;
            x["n"] = lv.n;
            x["size"] = lv.size;
            x["matches_identity"] = lv.matches_identity;
            x["matches_brute_force"] = lv.matches_brute_force;
            x["mass"] = to_py(lv.mass);
            x["bound"] = to_py(lv.bound);
            levels.append(x);
          }
          py::dict out;
          out["levels"] = levels;
          out["ok"] = r.ok;
          return out;
        },
        py::arg("diagram"), py::arg("depth"));

  m.def("golden_construction",
        [](std::size_t depth, long precision) {
          Section6Params p = Section6Params::standard(depth);
          p.precision = precision;
          Section6Result r = build_section6(p);
          PrecisionScope scope(r.precision_used);
          py::list steps;
          for (const auto& st : r.steps) {
            py::dict x;
            x["n"] = st.n;
            x["k"] = st.k;
            x["w"] = intervals(st.w_direct);
            x["w_norm"] = to_py(st.w_norm);
            x["w_bound_ok"] = st.w_bound_ok;
            steps.append(x);
          }
          py::dict out;
          out["alpha"] = to_py(r.alpha);
          out["alpha_digits"] = r.alpha.lower_string(30);
          out["precision"] = r.precision_used;
          out["steps"] = steps;
          out["ok"] = r.all_ok();
          out["diagram"] = py::cast(std::move(r.diagram));
          return out;
        },
        py::arg("depth") = 6, py::arg("precision") = 128,
        "Golden-mean construction with eps_n = delta_n = 2^-n / phi and v_1 = eps_1 / 2.");
}
