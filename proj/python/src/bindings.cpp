#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fractspec/fourier.hpp"
#include "fractspec/hadamard.hpp"
#include "fractspec/spectra.hpp"

namespace py = pybind11;
using namespace fractspec;

// Rational <-> fractions.Fraction. Accepts int, Fraction and "a/b" strings;
// floats are refused so that exact inputs stay exact.
namespace pybind11::detail {

template <>
struct type_caster<Rational> {
  PYBIND11_TYPE_CASTER(Rational, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src || PyFloat_Check(src.ptr()) || PyBool_Check(src.ptr())) return false;
    try {
      if (PyLong_Check(src.ptr())) {
        value = Rational::parse(py::str(src).cast<std::string>());
        return true;
      }
      if (PyUnicode_Check(src.ptr())) {
        value = Rational::parse(src.cast<std::string>());
        return true;
      }
      static py::object fraction = py::module_::import("fractions").attr("Fraction");
      if (py::isinstance(src, fraction)) {
        const auto num = py::str(src.attr("numerator")).cast<std::string>();
        const auto den = py::str(src.attr("denominator")).cast<std::string>();
        value = Rational::parse(num + "/" + den);
        return true;
      }
    } catch (const DomainError&) {
      return false;
    }
    return false;
  }

  static handle cast(const Rational& r, return_value_policy, handle) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    py::int_ num(py::str(r.numerator().get_str()));
    py::int_ den(py::str(r.denominator().get_str()));
    return fraction(num, den).release();
  }
};

}  // namespace pybind11::detail

namespace {

std::vector<Rational> rationals(std::span<const Rational> xs) { return {xs.begin(), xs.end()}; }

// pybind11's variant caster needs a default-constructible first alternative.
MeasureSpec to_spec(const py::object& o) {
  if (py::isinstance<SelfSimilarSpec>(o)) return o.cast<SelfSimilarSpec>();
  if (py::isinstance<AlternatingSpec>(o)) return o.cast<AlternatingSpec>();
  if (py::isinstance<SymmetricAlternatingSpec>(o)) return o.cast<SymmetricAlternatingSpec>();
  if (py::isinstance<MoranSpec>(o)) return o.cast<MoranSpec>();
  throw py::type_error("expected a measure spec (SelfSimilarSpec, AlternatingSpec, SymmetricAlternatingSpec, MoranSpec)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and certified computations for spectral self-similar measures";
  m.attr("__version__") = FRACTSPEC_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  static py::exception<IndeterminateError> indeterminate(m, "IndeterminateError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IndeterminateError& e) {
      py::set_error(indeterminate, e.what());
    }
  });

  // exact core
  py::class_<RootOfUnitySum>(m, "RootOfUnitySum")
      .def(py::init<std::uint64_t>(), py::arg("order"))
      .def("add", &RootOfUnitySum::add, py::arg("residue"), py::arg("count") = 1)
      .def_property_readonly("order", &RootOfUnitySum::order)
      .def_property_readonly("coefficients", &RootOfUnitySum::coefficients)
      .def("value", &RootOfUnitySum::value)
      .def("is_zero", &RootOfUnitySum::is_zero);

  // digit sets
  py::class_<DigitSet>(m, "DigitSet")
      .def(py::init<std::vector<Rational>>(), py::arg("elements"))
      .def_static("consecutive", &DigitSet::consecutive, py::arg("n"))
      .def_static("block", &DigitSet::block, py::arg("scale"), py::arg("n"))
      .def_property_readonly("elements", [](const DigitSet& d) { return rationals(d.elements()); })
      .def_property_readonly("structured", [](const DigitSet& d) { return d.structure().has_value(); })
      .def("__len__", &DigitSet::size)
      .def("__contains__", &DigitSet::contains)
      .def("__eq__", [](const DigitSet& a, const DigitSet& b) { return a == b; })
      .def("__repr__", [](const DigitSet& d) {
        std::string s = "DigitSet([";
        for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + d.elements()[i].to_string();
        return s + "])";
      });
  py::implicitly_convertible<py::list, DigitSet>();

  m.def("direct_sum", &direct_sum, py::arg("a"), py::arg("b"));
  m.def("alternate_digit_set", &alternate_digit_set, py::arg("m"), py::arg("N"), py::arg("rho"));
  m.def("mask_eval", py::overload_cast<const DigitSet&, const Rational&>(&mask_eval), py::arg("digits"), py::arg("x"));
  m.def("mask_vanishes", [](const DigitSet& d, const Rational& x) { return mask_vanishes(d, x); }, py::arg("digits"),
        py::arg("x"));

  py::class_<ZeroSetExpr>(m, "ZeroSetExpr")
      .def("contains", &ZeroSetExpr::contains, py::arg("x"))
      .def("__contains__", &ZeroSetExpr::contains)
      .def("empty", &ZeroSetExpr::empty);
  m.def("mask_zero_set", &mask_zero_set, py::arg("digits"));

  // measures
  py::class_<SelfSimilarSpec>(m, "SelfSimilarSpec")
      .def(py::init<Rational, DigitSet>(), py::arg("rho"), py::arg("digits"))
      .def_property_readonly("rho", &SelfSimilarSpec::rho)
      .def_property_readonly("digits", &SelfSimilarSpec::digits);
  py::class_<AlternatingSpec>(m, "AlternatingSpec")
      .def(py::init<Rational, long long, long long>(), py::arg("rho"), py::arg("m"), py::arg("n"))
      .def_property_readonly("rho", &AlternatingSpec::rho)
      .def_property_readonly("m", &AlternatingSpec::period)
      .def_property_readonly("n", &AlternatingSpec::digit_count);
  py::class_<SymmetricAlternatingSpec>(m, "SymmetricAlternatingSpec")
      .def(py::init<Rational, long long>(), py::arg("rho"), py::arg("n"))
      .def_property_readonly("rho", &SymmetricAlternatingSpec::rho)
      .def_property_readonly("n", &SymmetricAlternatingSpec::half_width);
  py::class_<MoranStage>(m, "MoranStage")
      .def(py::init([](Rational b, DigitSet d) { return MoranStage{std::move(b), std::move(d)}; }), py::arg("b"),
           py::arg("digits"))
      .def_readonly("b", &MoranStage::b)
      .def_readonly("digits", &MoranStage::digits);
  py::class_<MoranSpec>(m, "MoranSpec")
      .def(py::init<std::vector<MoranStage>, std::vector<MoranStage>>(), py::arg("prefix"), py::arg("tail"))
      .def_property_readonly("prefix", &MoranSpec::prefix)
      .def_property_readonly("tail", &MoranSpec::tail);
  m.def("measure_zero_set", [](const py::object& s) { return measure_zero_set(to_spec(s)); }, py::arg("spec"));

  // Fourier transforms
  py::class_<CertifiedComplex>(m, "CertifiedComplex")
      .def_readonly("value", &CertifiedComplex::value)
      .def_readonly("error_bound", &CertifiedComplex::error_bound)
      .def("__repr__", [](const CertifiedComplex& c) {
        return "CertifiedComplex(" + std::to_string(c.value.real()) + (c.value.imag() < 0 ? "" : "+") +
               std::to_string(c.value.imag()) + "j, bound=" + std::to_string(c.error_bound) + ")";
      });
  m.def(
      "fourier_transform",
      [](const py::object& s, const Rational& xi, double tol) { return fourier_transform(to_spec(s), xi, tol); },
      py::arg("spec"), py::arg("xi"), py::arg("tol") = 1e-12);
  m.def(
      "fourier_transform",
      [](const py::object& s, double xi, double tol) { return fourier_transform(to_spec(s), xi, tol); },
      py::arg("spec"), py::arg("xi"), py::arg("tol") = 1e-12);
  m.def(
      "exact_product_zero", [](const py::object& s, const Rational& xi) { return exact_product_zero(to_spec(s), xi); },
      py::arg("spec"), py::arg("xi"));
  m.def(
      "sweep_ft",
      [](const py::object& s, double from, double to, std::size_t points, double tol, unsigned threads) {
        const MeasureSpec spec = to_spec(s);
        std::vector<SweepRow> raw;
        {
          py::gil_scoped_release release;
          raw = sweep_ft(spec, from, to, points, tol, threads);
        }
        std::vector<std::tuple<double, std::complex<double>, double>> rows;
        for (const auto& r : raw) rows.emplace_back(r.xi, r.ft.value, r.ft.error_bound);
        return rows;
      },
      py::arg("spec"), py::arg("start"), py::arg("stop"), py::arg("points"), py::arg("tol") = 1e-12,
      py::arg("threads") = 1);

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("samples", &IdentityReport::samples)
      .def_readonly("max_deviation", &IdentityReport::max_deviation)
      .def_readonly("worst_xi", &IdentityReport::worst_xi)
      .def_readonly("max_excess", &IdentityReport::max_excess)
      .def_readonly("passed", &IdentityReport::pass);
  m.def("verify_nu_equals_mu", &verify_nu_equals_mu, py::arg("m"), py::arg("N"), py::arg("rho"),
        py::arg("samples") = 200, py::arg("window") = 10.0, py::arg("tol") = 1e-8, py::arg("seed") = 20240601);
  m.def("verify_symmetric_example", &verify_symmetric_example, py::arg("n"), py::arg("rho"), py::arg("samples") = 200,
        py::arg("window") = 10.0, py::arg("tol") = 1e-8, py::arg("seed") = 20240601);

  // Hadamard triples
  py::class_<PairWitness>(m, "PairWitness")
      .def_readonly("l1", &PairWitness::l1)
      .def_readonly("l2", &PairWitness::l2)
      .def_readonly("sum", &PairWitness::sum);
  py::class_<HadamardCertificate>(m, "HadamardCertificate")
      .def_readonly("p", &HadamardCertificate::p)
      .def_readonly("digits", &HadamardCertificate::digits)
      .def_readonly("labels", &HadamardCertificate::labels)
      .def_readonly("witnesses", &HadamardCertificate::witnesses);
  py::class_<HadamardFailure>(m, "HadamardFailure")
      .def_readonly("l1", &HadamardFailure::l1)
      .def_readonly("l2", &HadamardFailure::l2)
      .def_readonly("value", &HadamardFailure::value);
  m.def("check_hadamard", &check_hadamard, py::arg("p"), py::arg("digits"), py::arg("labels"));
  m.def("verify_certificate", &verify_certificate, py::arg("certificate"));
  m.def("unitarity_deviation", &unitarity_deviation, py::arg("p"), py::arg("digits"), py::arg("labels"));
  m.def("search_companion", &search_companion, py::arg("p"), py::arg("digits"), py::arg("bound"),
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<ProductFormCertificate>(m, "ProductFormCertificate")
      .def_readonly("p", &ProductFormCertificate::p)
      .def_readonly("stage0", &ProductFormCertificate::stage0)
      .def_readonly("exponents", &ProductFormCertificate::exponents)
      .def_readonly("labels", &ProductFormCertificate::labels)
      .def_readonly("assembled", &ProductFormCertificate::assembled)
      .def_property_readonly("checks", [](const ProductFormCertificate& c) {
        std::vector<std::string> names;
        for (const auto& s : c.checks) names.push_back(s.name);
        return names;
      });
  py::class_<ProductFormReport>(m, "ProductFormReport")
      .def_readonly("ok", &ProductFormReport::ok)
      .def_readonly("checks_run", &ProductFormReport::checks_run)
      .def_readonly("detail", &ProductFormReport::detail);
  m.def("build_product_form", &build_product_form, py::arg("m"), py::arg("N"), py::arg("p_prime"));
  m.def("verify_product_form", &verify_product_form, py::arg("certificate"));

  // spectra
  py::class_<FrequencySet>(m, "FrequencySet")
      .def(py::init<std::vector<Rational>>(), py::arg("elements"))
      .def_property_readonly("elements", [](const FrequencySet& f) { return rationals(f.elements()); })
      .def("__len__", &FrequencySet::size)
      .def("__contains__", &FrequencySet::contains)
      .def("__eq__", [](const FrequencySet& a, const FrequencySet& b) { return a == b; });
  py::implicitly_convertible<py::list, FrequencySet>();

  py::enum_<Verdict>(m, "Verdict")
      .value("orthogonal", Verdict::orthogonal)
      .value("not_orthogonal", Verdict::not_orthogonal)
      .value("indeterminate", Verdict::indeterminate);
  py::class_<OrthogonalityResult>(m, "OrthogonalityResult")
      .def_readonly("verdict", &OrthogonalityResult::verdict)
      .def_readonly("pair", &OrthogonalityResult::pair)
      .def_readonly("difference", &OrthogonalityResult::difference)
      .def_readonly("method", &OrthogonalityResult::method)
      .def_readonly("pairs_checked", &OrthogonalityResult::pairs_checked);
  m.def(
      "is_orthogonal",
      [](const py::object& s, const FrequencySet& f, double tol) { return is_orthogonal(to_spec(s), f, tol); },
      py::arg("spec"), py::arg("frequencies"), py::arg("tol") = 1e-12);

  py::class_<CertifiedReal>(m, "CertifiedReal")
      .def_readonly("value", &CertifiedReal::value)
      .def_readonly("error_bound", &CertifiedReal::error_bound);
  m.def(
      "q_function",
      [](const py::object& s, const FrequencySet& f, double xi, double tol) { return q_function(to_spec(s), f, xi, tol); },
      py::arg("spec"), py::arg("frequencies"), py::arg("xi"), py::arg("tol") = 1e-9);
  m.def("canonical_spectrum", &canonical_spectrum, py::arg("p"), py::arg("labels"), py::arg("depth"));

  py::class_<FamilyResult>(m, "FamilyResult")
      .def_readonly("family", &FamilyResult::family)
      .def_readonly("upper_bound", &FamilyResult::upper_bound)
      .def_readonly("undecided_pairs", &FamilyResult::undecided_pairs)
      .def_readonly("explored_nodes", &FamilyResult::explored_nodes)
      .def_property_readonly("exact", &FamilyResult::exact);
  m.def(
      "max_orthogonal_family",
      [](const py::object& s, const FrequencySet& c, bool strict, double tol) {
        return max_orthogonal_family(to_spec(s), c, strict, tol);
      },
      py::arg("spec"), py::arg("candidates"), py::arg("strict") = false, py::arg("tol") = 1e-12);
  m.def("odd_superset_candidates", &odd_superset_candidates, py::arg("s"), py::arg("window"));
  m.def("even_superset_candidates", &even_superset_candidates, py::arg("p"), py::arg("s"), py::arg("window"));

  py::class_<DecompositionResult>(m, "DecompositionResult")
      .def_readonly("cells", &DecompositionResult::cells)
      .def_readonly("leftovers", &DecompositionResult::leftovers);
  m.def("decompose_spectrum", &decompose_spectrum, py::arg("frequencies"), py::arg("b1"), py::arg("c"), py::arg("q1"),
        py::arg("gamma1"));
  m.def("reassemble", &reassemble, py::arg("decomposition"));

  py::class_<SpectralityDecision>(m, "SpectralityDecision")
      .def_readonly("spectral", &SpectralityDecision::spectral)
      .def_readonly("reason", &SpectralityDecision::reason);
  m.def("spectrality_decision", &spectrality_decision, py::arg("m"), py::arg("N"), py::arg("rho"));
  m.def("orthogonality_bound", &orthogonality_bound, py::arg("p"), py::arg("s"));
  m.def("nu_zero_superset_member", &nu_zero_superset_member, py::arg("s"), py::arg("rho"), py::arg("x"));
}
