#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ergomap/entropy.hpp"
#include "ergomap/errors.hpp"
#include "ergomap/map_io.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/perturb.hpp"
#include "ergomap/stats.hpp"
#include "ergomap/structure.hpp"
#include "ergomap/svg.hpp"

namespace py = pybind11;
using namespace ergomap;

namespace {

// ints, strings like "3/10" and fractions.Fraction all go through str().
Rational to_rational(const py::object& o) {
  if (py::isinstance<Rational>(o)) return o.cast<Rational>();
  return Rational::parse(py::str(o).cast<std::string>());
}

std::vector<Node> to_nodes(const py::iterable& pts) {
  std::vector<Node> nodes;
  for (const auto& p : pts) {
    auto t = p.cast<py::sequence>();
    if (t.size() != 2) throw DomainError("a node is an (x, y) pair");
    nodes.push_back({to_rational(t[0]), to_rational(t[1])});
  }
  return nodes;
}

template <class T>
std::string repr_of(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact piecewise-affine Lebesgue-preserving interval maps";

  static py::exception<Error> error(m, "ErgomapError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Rational>(m, "Rational")
      .def(py::init(&to_rational))
      .def("__str__", &Rational::str)
      .def("__repr__", [](const Rational& r) { return "Rational('" + r.str() + "')"; })
      .def("__float__", &Rational::to_double)
      .def("__hash__", [](const Rational& r) { return RationalHash{}(r); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def(py::self <= py::self)
      .def(py::self > py::self)
      .def(py::self >= py::self);
  py::implicitly_convertible<py::str, Rational>();
  py::implicitly_convertible<py::int_, Rational>();
  py::implicitly_convertible<py::object, Rational>();

  py::class_<Interval>(m, "Interval")
      .def(py::init([](const py::object& a, const py::object& b) { return Interval(to_rational(a), to_rational(b)); }))
      .def_property_readonly("lo", &Interval::lo)
      .def_property_readonly("hi", &Interval::hi)
      .def("length", &Interval::length)
      .def("contains", py::overload_cast<const Interval&>(&Interval::contains, py::const_))
      .def(py::self == py::self)
      .def("__repr__", &Interval::str);

  py::class_<IntervalSet>(m, "IntervalSet")
      .def(py::init<std::vector<Interval>>())
      .def_property_readonly("parts", &IntervalSet::parts)
      .def("measure", &IntervalSet::measure)
      .def(py::self == py::self)
      .def("__repr__", &IntervalSet::str);

  py::class_<PwaMap>(m, "PwaMap")
      .def(py::init([](const py::iterable& pts) { return PwaMap(to_nodes(pts)); }))
      .def_static("identity", &PwaMap::identity)
      .def_static("flip", &PwaMap::flip)
      .def_static("tent", &PwaMap::tent)
      .def_property_readonly("nodes",
                             [](const PwaMap& f) {
                               std::vector<std::pair<Rational, Rational>> out;
                               for (const auto& n : f.nodes()) out.emplace_back(n.x, n.y);
                               return out;
                             })
      .def("__call__", [](const PwaMap& f, const py::object& x) { return f.eval(to_rational(x)); })
      .def("laps", &PwaMap::laps)
      .def("expanding", &PwaMap::expanding)
      .def("normalized", &PwaMap::normalized)
      .def(py::self == py::self)
      .def("__repr__", [](const PwaMap& f) { return "PwaMap(" + std::to_string(f.size()) + " nodes)"; });

  m.def("from_full_laps", [](const std::string& sign, const std::vector<Rational>& alphas) {
    if (sign != "+" && sign != "-") throw InvalidTuple("sign must be '+' or '-'");
    return from_full_laps(sign == "+" ? LapSign::increasing : LapSign::decreasing, alphas);
  });
  m.def("compose", [](const PwaMap& f, const PwaMap& g) { return compose(f, g); });
  m.def("iterate", [](const PwaMap& f, int n) { return iterate(f, n); });
  m.def("image_interval", &image_interval);
  m.def("preimage_set", &preimage_set);
  m.def("uniform_distance", &uniform_distance);
  m.def("verify_lebesgue", [](const PwaMap& f) {
    const auto r = verify_lebesgue(f);
    py::dict d;
    d["preserving"] = r.preserving;
    if (r.witness) d["witness"] = py::make_tuple(r.witness->slab, r.witness->sum);
    return d;
  });
  m.def("serialize_map", &serialize_map);
  m.def("parse_map", [](const std::string& s) { return parse_map(s); });

  py::enum_<Verdict>(m, "Verdict")
      .value("not_transitive", Verdict::not_transitive)
      .value("transitive_not_mixing", Verdict::transitive_not_mixing)
      .value("mixing_not_leo", Verdict::mixing_not_leo)
      .value("leo", Verdict::leo);
  py::class_<StructureReport>(m, "StructureReport")
      .def_readonly("components", &StructureReport::components)
      .def_readonly("permutation", &StructureReport::permutation)
      .def_readonly("fixed_set", &StructureReport::fixed_set)
      .def_readonly("verdict", &StructureReport::verdict);
  m.def("fixed_set", [](const PwaMap& f, int k) { return fixed_set(f, k); });
  m.def("transitivity_components", &transitivity_components);
  m.def("classify", [](const PwaMap& f) { return to_string(classify(f)); });

  py::class_<MarkovSystem>(m, "MarkovSystem")
      .def_property_readonly("points", &MarkovSystem::points)
      .def_property_readonly("stoch", &MarkovSystem::stoch)
      .def_property_readonly("pvec", &MarkovSystem::pvec)
      .def_property_readonly("adjacency", &MarkovSystem::adjacency);
  py::class_<NotMarkovWithinBound>(m, "NotMarkovWithinBound")
      .def_readonly("point", &NotMarkovWithinBound::point)
      .def_readonly("reason", &NotMarkovWithinBound::reason);
  py::class_<MixingFlags>(m, "MixingFlags")
      .def_readonly("irreducible", &MixingFlags::irreducible)
      .def_readonly("aperiodic", &MixingFlags::aperiodic)
      .def_readonly("strongly_mixing", &MixingFlags::strongly_mixing)
      .def_readonly("period", &MixingFlags::period);
  m.def("markov_partition", [](const PwaMap& f) { return markov_partition(f); });
  m.def("mixing_flags", &mixing_flags);
  m.def("top_entropy", [](const MarkovSystem& ms) { return top_entropy(ms); });

  py::class_<WindowSpec>(m, "WindowSpec");
  m.def(
      "regular_window",
      [](const PwaMap& f, const Interval& w, int m, const std::string& mode) {
        WindowMode md = WindowMode::regular;
        if (mode == "boundary-left") md = WindowMode::boundary_left;
        else if (mode == "boundary-right") md = WindowMode::boundary_right;
        else if (mode != "regular") throw DomainError("unknown window mode '" + mode + "'");
        return regular_window(f, {w, m, md});
      },
      py::arg("f"), py::arg("window"), py::arg("m"), py::arg("mode") = "regular");
  m.def("leoize", [](const PwaMap& f, const Rational& eps) { return leoize(f, eps); });
  m.def("markovize", [](const PwaMap& f, const Rational& eps) -> py::object {
    auto r = markovize(f, eps);
    if (auto* g = std::get_if<PwaMap>(&r)) return py::cast(*g);
    throw BudgetError("markovize: " + std::get<NotAchieved>(r).reason);
  });
  py::class_<HorseshoeResult>(m, "HorseshoeResult")
      .def_readonly("map", &HorseshoeResult::map)
      .def_readonly("window", &HorseshoeResult::window)
      .def_readonly("fold", &HorseshoeResult::fold)
      .def_readonly("entropy_bound", &HorseshoeResult::entropy_bound);
  m.def("horseshoe", &horseshoe);

  m.def("rohlin_entropy", [](const PwaMap& f) { return rohlin_entropy(f).value; });
  m.def("two_slope_entropy", &two_slope_entropy);
  m.def("solve_eta", &solve_eta);
  m.def("build_two_slope", &build_two_slope);
  m.def("set_entropy", &set_entropy);
  m.def("entropy_stage", [](const PwaMap& f, int n, const Rational& eps) {
    const auto t = entropy_stage(f, n, eps);
    py::list stages;
    for (const auto& s : t.stages) stages.append(py::make_tuple(s.fold, s.windows, s.entropy));
    return py::make_tuple(t.map, stages);
  });

  m.def("correlation", [](const PwaMap& f, const IntervalSet& a, const IntervalSet& b, int n) {
    return correlation(f, a, b, n);
  });
  m.def("correlations", [](const PwaMap& f, const IntervalSet& a, const IntervalSet& b, int n) {
    return correlations(f, a, b, n);
  });
  m.def("weak_score", [](const PwaMap& f, const IntervalSet& a, const IntervalSet& b, int n) {
    return mixing_scores(f, a, b, n).weak_score;
  });
  m.def("leo_time", [](const PwaMap& f, const Interval& j, int cap) -> py::object {
    auto r = leo_time(f, j, cap);
    if (auto* n = std::get_if<int>(&r)) return py::int_(*n);
    return py::none();
  }, py::arg("f"), py::arg("J"), py::arg("cap") = 64);
  m.def("render_svg", [](const PwaMap& f, bool diagonal) {
    SvgOverlays ov;
    ov.diagonal = diagonal;
    return render_svg(f, ov);
  }, py::arg("f"), py::arg("diagonal") = false);
}
