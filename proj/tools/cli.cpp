#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fractspec/fourier.hpp"
#include "fractspec/hadamard.hpp"
#include "fractspec/spectra.hpp"

namespace fractspec::cli {

using json = nlohmann::ordered_json;

namespace {

/// Payload that does not match the command schema. `path` locates the field.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg) {}
};

struct Options {
  std::string command;
  std::string format = "json";
  unsigned threads = 1;
  double tol = 1e-12;
  bool tol_set = false;
};

struct Outcome {
  int code = kTrue;
  json result = json::object();
  std::string csv;  // non-empty only for csv output
};

// ---------------------------------------------------------------------------
// Payload readers

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw InputError(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw InputError(path, "unknown field \"" + k + "\"");
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string sub(const std::string& path, const std::string& key) { return path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Rational read_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw InputError(path, e.what());
    }
  }
  throw InputError(path, "expected a rational string such as \"3/4\" or an integer");
}

long long read_int(const json& v, const std::string& path, long long lo) {
  if (!v.is_number_integer()) throw InputError(path, "expected an integer");
  const long long x = v.get<long long>();
  if (x < lo) throw InputError(path, "must be >= " + std::to_string(lo));
  return x;
}

double read_double(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return read_rational(v, path).to_double();
  throw InputError(path, "expected a number");
}

bool read_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw InputError(path, "expected true or false");
  return v.get<bool>();
}

std::vector<Rational> read_rationals(const json& v, const std::string& path) {
  if (!v.is_array()) throw InputError(path, "expected an array of rationals");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_rational(v[i], sub(path, i)));
  return out;
}

DigitSet read_digits(const json& v, const std::string& path) {
  try {
    return DigitSet(read_rationals(v, path));
  } catch (const DomainError& e) {
    throw InputError(path, e.what());
  }
}

FrequencySet read_frequencies(const json& v, const std::string& path) {
  try {
    return FrequencySet(read_rationals(v, path));
  } catch (const DomainError& e) {
    throw InputError(path, e.what());
  }
}

template <class F>
auto wrap_domain(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw InputError(path, e.what());
  }
}

std::vector<MoranStage> read_moran_stages(const json& v, const std::string& path) {
  if (!v.is_array()) throw InputError(path, "expected an array of stages");
  std::vector<MoranStage> stages;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = sub(path, i);
    allow_keys(v[i], p, {"b", "R"});
    stages.push_back({read_rational(field(v[i], p, "b"), sub(p, "b")), read_digits(field(v[i], p, "R"), sub(p, "R"))});
  }
  return stages;
}

MeasureSpec read_spec(const json& v, const std::string& path) {
  if (!v.is_object()) throw InputError(path, "expected a measure spec object");
  const json& type = field(v, path, "type");
  if (!type.is_string()) throw InputError(sub(path, "type"), "expected a string");
  const auto t = type.get<std::string>();
  if (t == "self_similar") {
    allow_keys(v, path, {"type", "rho", "digits", "blocks"});
    const Rational rho = read_rational(field(v, path, "rho"), sub(path, "rho"));
    const bool has_digits = v.contains("digits"), has_blocks = v.contains("blocks");
    if (has_digits == has_blocks) throw InputError(path, "give exactly one of \"digits\" or \"blocks\"");
    if (has_digits)
      return wrap_domain(path, [&] { return SelfSimilarSpec(rho, read_digits(v["digits"], sub(path, "digits"))); });
    // Direct sum of scaled consecutive blocks; keeps the structure for exact zero sets.
    const json& blocks = v["blocks"];
    const std::string bp = sub(path, "blocks");
    if (!blocks.is_array() || blocks.empty()) throw InputError(bp, "expected a nonempty array of blocks");
    std::optional<DigitSet> d;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string p = sub(bp, i);
      allow_keys(blocks[i], p, {"scale", "length"});
      const Rational scale = read_rational(field(blocks[i], p, "scale"), sub(p, "scale"));
      const long long len = read_int(field(blocks[i], p, "length"), sub(p, "length"), 1);
      DigitSet b = wrap_domain(p, [&] { return DigitSet::block(scale, len); });
      d = d ? wrap_domain(p, [&] { return direct_sum(*d, b); }) : b;
    }
    return wrap_domain(path, [&] { return SelfSimilarSpec(rho, *d); });
  }
  if (t == "alternating") {
    allow_keys(v, path, {"type", "rho", "m", "n"});
    const Rational rho = read_rational(field(v, path, "rho"), sub(path, "rho"));
    const long long m = read_int(field(v, path, "m"), sub(path, "m"), 1);
    const long long n = read_int(field(v, path, "n"), sub(path, "n"), 1);
    return wrap_domain(path, [&] { return AlternatingSpec(rho, m, n); });
  }
  if (t == "alternating_symmetric") {
    allow_keys(v, path, {"type", "rho", "n"});
    const Rational rho = read_rational(field(v, path, "rho"), sub(path, "rho"));
    const long long n = read_int(field(v, path, "n"), sub(path, "n"), 0);
    return wrap_domain(path, [&] { return SymmetricAlternatingSpec(rho, n); });
  }
  if (t == "moran") {
    allow_keys(v, path, {"type", "prefix", "tail"});
    auto prefix = v.contains("prefix") ? read_moran_stages(v["prefix"], sub(path, "prefix")) : std::vector<MoranStage>{};
    auto tail = v.contains("tail") ? read_moran_stages(v["tail"], sub(path, "tail")) : std::vector<MoranStage>{};
    return wrap_domain(path, [&] { return MoranSpec(std::move(prefix), std::move(tail)); });
  }
  throw InputError(sub(path, "type"),
                   "unknown measure type \"" + t + "\" (self_similar, alternating, alternating_symmetric, moran)");
}

double read_tol(const json& payload, const Options& opt) {
  double tol = opt.tol;
  if (payload.contains("tol")) tol = read_double(payload["tol"], "payload.tol");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("payload.tol", "must be a positive number");
  return tol;
}

// ---------------------------------------------------------------------------
// Report writers

json rationals_json(std::span<const Rational> xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x.to_string());
  return a;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json certified_json(const CertifiedComplex& c) {
  json j;
  j["re"] = c.value.real();
  j["im"] = c.value.imag();
  j["abs"] = std::abs(c.value);
  j["error_bound"] = c.error_bound;
  return j;
}

json root_sum_json(const RootOfUnitySum& s) {
  json j;
  j["order"] = s.order();
  json coeffs = json::array();
  for (const auto& [k, c] : s.coefficients()) coeffs.push_back(json::array({k, c}));
  j["coefficients"] = coeffs;
  return j;
}

json hadamard_certificate_json(const HadamardCertificate& cert) {
  json j;
  j["p"] = cert.p;
  j["digits"] = rationals_json(cert.digits.elements());
  j["labels"] = rationals_json(cert.labels.elements());
  json w = json::array();
  for (const auto& pw : cert.witnesses) {
    json e;
    e["l1"] = pw.l1.to_string();
    e["l2"] = pw.l2.to_string();
    e["sum"] = root_sum_json(pw.sum);
    w.push_back(e);
  }
  j["witnesses"] = w;
  return j;
}

json failure_json(const HadamardFailure& f) {
  json j;
  j["l1"] = f.l1.to_string();
  j["l2"] = f.l2.to_string();
  j["mask_value"] = complex_json(f.value);
  return j;
}

json stage_json(const StageMap& s) {
  if (s.branches.empty()) return rationals_json(s.constant.elements());
  json b = json::object();
  for (const auto& [d, set] : s.branches) b[d.to_string()] = rationals_json(set.elements());
  return json{{"branches", b}};
}

json product_form_json(const ProductFormCertificate& cert) {
  json j;
  j["p"] = cert.p;
  j["stage0"] = rationals_json(cert.stage0.elements());
  json stages = json::array();
  for (const auto& s : cert.stages) stages.push_back(stage_json(s));
  j["stages"] = stages;
  j["exponents"] = cert.exponents;
  json labels = json::array();
  for (const auto& l : cert.labels) labels.push_back(rationals_json(l.elements()));
  j["labels"] = labels;
  j["assembled"] = rationals_json(cert.assembled.elements());
  json checks = json::array();
  for (const auto& c : cert.checks) checks.push_back(c.name);
  j["checks"] = checks;
  return j;
}

std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void dump_into(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(k).dump() + ": ";
        dump_into(v, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short scalar arrays stay on one line.
      const bool flat = j.size() <= 16 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",\n";
        if (!flat) out += inner;
        dump_into(j[i], out, indent + 1);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string s(buf);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

// ---------------------------------------------------------------------------
// Commands

using Handler = std::function<Outcome(const json&, const Options&)>;

Outcome cmd_check_hadamard(const json& pl, const Options&) {
  allow_keys(pl, "payload", {"p", "digits", "labels"});
  const long long p = read_int(field(pl, "payload", "p"), "payload.p", 1);
  const DigitSet digits = read_digits(field(pl, "payload", "digits"), "payload.digits");
  const DigitSet labels = read_digits(field(pl, "payload", "labels"), "payload.labels");
  if (digits.size() != labels.size()) throw InputError("payload", "digits and labels must have the same size");
  Outcome o;
  const HadamardResult r = check_hadamard(p, digits, labels);
  if (const auto* cert = std::get_if<HadamardCertificate>(&r)) {
    o.result["hadamard"] = true;
    o.result["certificate"] = hadamard_certificate_json(*cert);
  } else {
    o.code = kFalse;
    o.result["hadamard"] = false;
    o.result["failure"] = failure_json(std::get<HadamardFailure>(r));
  }
  o.result["unitarity_deviation"] = unitarity_deviation(p, digits, labels);
  return o;
}

Outcome cmd_search_companion(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"p", "digits", "bound"});
  const long long p = read_int(field(pl, "payload", "p"), "payload.p", 1);
  const DigitSet digits = read_digits(field(pl, "payload", "digits"), "payload.digits");
  const long long bound = read_int(field(pl, "payload", "bound"), "payload.bound", 0);
  Outcome o;
  auto cert = search_companion(p, digits, bound, opt.threads);
  o.result["found"] = cert.has_value();
  o.result["bound"] = bound;
  if (cert) {
    o.result["certificate"] = hadamard_certificate_json(*cert);
  } else {
    o.code = kFalse;
  }
  return o;
}

Outcome cmd_build_product_form(const json& pl, const Options&) {
  allow_keys(pl, "payload", {"m", "N", "p_prime"});
  const long long m = read_int(field(pl, "payload", "m"), "payload.m", 1);
  const long long N = read_int(field(pl, "payload", "N"), "payload.N", 1);
  const long long pp = read_int(field(pl, "payload", "p_prime"), "payload.p_prime", 1);
  const auto cert = build_product_form(m, N, pp);
  const auto report = verify_product_form(cert);
  Outcome o;
  o.code = report.ok ? kTrue : kFalse;
  o.result["verified"] = report.ok;
  o.result["checks_run"] = report.checks_run;
  o.result["certificate"] = product_form_json(cert);
  return o;
}

StageMap read_stage(const json& v, const std::string& path) {
  StageMap s;
  if (v.is_array()) {
    s.constant = read_digits(v, path);
    return s;
  }
  allow_keys(v, path, {"branches"});
  const json& b = field(v, path, "branches");
  if (!b.is_object() || b.empty()) throw InputError(sub(path, "branches"), "expected a nonempty object");
  for (const auto& [k, set] : b.items())
    s.branches.emplace(read_rational(json(k), sub(path, "branches")), read_digits(set, sub(sub(path, "branches"), k)));
  return s;
}

Outcome cmd_verify_certificate(const json& pl, const Options&) {
  Outcome o;
  if (!pl.is_object()) throw InputError("payload", "expected an object");
  const long long p = read_int(field(pl, "payload", "p"), "payload.p", 1);
  if (!pl.contains("stages")) {
    allow_keys(pl, "payload", {"p", "digits", "labels", "witnesses"});
    HadamardCertificate cert;
    cert.p = p;
    cert.digits = read_digits(field(pl, "payload", "digits"), "payload.digits");
    cert.labels = read_digits(field(pl, "payload", "labels"), "payload.labels");
    bool ok = false;
    if (pl.contains("witnesses")) {
      const json& ws = pl["witnesses"];
      if (!ws.is_array()) throw InputError("payload.witnesses", "expected an array");
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::string wp = sub("payload.witnesses", i);
        allow_keys(ws[i], wp, {"l1", "l2", "sum"});
        const json& sum = field(ws[i], wp, "sum");
        allow_keys(sum, sub(wp, "sum"), {"order", "coefficients"});
        const json& order = field(sum, sub(wp, "sum"), "order");
        if (!order.is_number_unsigned() || order.get<std::uint64_t>() == 0)
          throw InputError(sub(sub(wp, "sum"), "order"), "expected a positive integer");
        RootOfUnitySum rs(order.get<std::uint64_t>());
        const json& coeffs = field(sum, sub(wp, "sum"), "coefficients");
        if (!coeffs.is_array()) throw InputError(sub(sub(wp, "sum"), "coefficients"), "expected an array");
        for (const auto& c : coeffs) {
          if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
            throw InputError(sub(sub(wp, "sum"), "coefficients"), "expected [residue, count] pairs");
          rs.add(c[0].get<std::int64_t>(), c[1].get<std::int64_t>());
        }
        cert.witnesses.push_back({read_rational(field(ws[i], wp, "l1"), sub(wp, "l1")),
                                  read_rational(field(ws[i], wp, "l2"), sub(wp, "l2")), rs});
      }
      ok = verify_certificate(cert);
      o.result["mode"] = "witnesses";
    } else {
      if (cert.digits.size() != cert.labels.size()) throw InputError("payload", "digits and labels must have the same size");
      const auto r = check_hadamard(p, cert.digits, cert.labels);
      ok = std::holds_alternative<HadamardCertificate>(r);
      if (!ok) o.result["failure"] = failure_json(std::get<HadamardFailure>(r));
      o.result["mode"] = "recomputed";
    }
    o.result["kind"] = "hadamard";
    o.result["verified"] = ok;
    o.code = ok ? kTrue : kFalse;
    return o;
  }

  allow_keys(pl, "payload", {"p", "stage0", "stages", "exponents", "labels", "assembled", "checks"});
  ProductFormCertificate cert;
  cert.p = p;
  cert.stage0 = read_digits(field(pl, "payload", "stage0"), "payload.stage0");
  const json& stages = field(pl, "payload", "stages");
  if (!stages.is_array()) throw InputError("payload.stages", "expected an array");
  for (std::size_t i = 0; i < stages.size(); ++i) cert.stages.push_back(read_stage(stages[i], sub("payload.stages", i)));
  const json& exps = field(pl, "payload", "exponents");
  if (!exps.is_array()) throw InputError("payload.exponents", "expected an array");
  for (std::size_t i = 0; i < exps.size(); ++i) cert.exponents.push_back(read_int(exps[i], sub("payload.exponents", i), 0));
  const json& labels = field(pl, "payload", "labels");
  if (!labels.is_array()) throw InputError("payload.labels", "expected an array of label sets");
  for (std::size_t i = 0; i < labels.size(); ++i) cert.labels.push_back(read_digits(labels[i], sub("payload.labels", i)));
  if (pl.contains("assembled")) {
    cert.assembled = read_digits(pl["assembled"], "payload.assembled");
  } else {
    try {
      cert.assembled = assemble_product_form(cert.p, cert.stage0, cert.stages, cert.exponents);
    } catch (const DomainError&) {
      cert.assembled = cert.stage0;  // verify_product_form reports the assembly failure
    }
  }
  const auto report = verify_product_form(cert);
  o.result["kind"] = "product_form";
  o.result["verified"] = report.ok;
  o.result["checks_run"] = report.checks_run;
  if (!report.ok) o.result["detail"] = report.detail;
  if (report.failure) o.result["failure"] = failure_json(*report.failure);
  o.code = report.ok ? kTrue : kFalse;
  return o;
}

Outcome cmd_eval_ft(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"spec", "xi", "tol"});
  const MeasureSpec spec = read_spec(field(pl, "payload", "spec"), "payload.spec");
  const double tol = read_tol(pl, opt);
  const json& xi = field(pl, "payload", "xi");
  Outcome o;
  CertifiedComplex v;
  if (xi.is_number_float()) {
    v = fourier_transform(spec, xi.get<double>(), tol);
    o.result["xi"] = xi.get<double>();
  } else {
    const Rational x = read_rational(xi, "payload.xi");
    v = fourier_transform(spec, x, tol);
    o.result["xi"] = x.to_string();
  }
  o.result["value"] = certified_json(v);
  return o;
}

Outcome cmd_sweep_ft(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"spec", "from", "to", "points", "tol"});
  const MeasureSpec spec = read_spec(field(pl, "payload", "spec"), "payload.spec");
  const double from = read_double(field(pl, "payload", "from"), "payload.from");
  const double to = read_double(field(pl, "payload", "to"), "payload.to");
  const auto points = static_cast<std::size_t>(read_int(field(pl, "payload", "points"), "payload.points", 1));
  const double tol = read_tol(pl, opt);
  const auto rows = sweep_ft(spec, from, to, points, tol, opt.threads);
  Outcome o;
  if (opt.format == "csv") {
    std::string csv = "xi,re,im,abs,error_bound\n";
    for (const auto& r : rows) {
      csv += shortest(r.xi) + "," + shortest(r.ft.value.real()) + "," + shortest(r.ft.value.imag()) + "," +
             shortest(std::abs(r.ft.value)) + "," + shortest(r.ft.error_bound) + "\n";
    }
    o.csv = std::move(csv);
    return o;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json row;
    row["xi"] = r.xi;
    row["re"] = r.ft.value.real();
    row["im"] = r.ft.value.imag();
    row["abs"] = std::abs(r.ft.value);
    row["error_bound"] = r.ft.error_bound;
    arr.push_back(row);
  }
  o.result["points"] = rows.size();
  o.result["rows"] = arr;
  return o;
}

const char* tri_name(Tri t) { return t == Tri::yes ? "yes" : (t == Tri::no ? "no" : "unknown"); }

Outcome cmd_zero_member(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"spec", "x", "tol"});
  const MeasureSpec spec = read_spec(field(pl, "payload", "spec"), "payload.spec");
  const Rational x = read_rational(field(pl, "payload", "x"), "payload.x");
  const ZeroOracle oracle(spec, read_tol(pl, opt));
  const ZeroDecision d = oracle.decide(x);
  Outcome o;
  o.result["x"] = x.to_string();
  o.result["zero"] = tri_name(d.zero);
  o.result["method"] = d.method;
  o.result["exact_zero_set"] = oracle.has_exact_zero_set();
  if (d.value) o.result["value"] = certified_json(*d.value);
  o.code = d.zero == Tri::yes ? kTrue : (d.zero == Tri::no ? kFalse : kIndeterminate);
  return o;
}

json pair_json(const std::pair<Rational, Rational>& p) {
  return json::array({p.first.to_string(), p.second.to_string()});
}

Outcome cmd_check_orthogonal(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"spec", "lambda", "tol"});
  const MeasureSpec spec = read_spec(field(pl, "payload", "spec"), "payload.spec");
  const FrequencySet lambda = read_frequencies(field(pl, "payload", "lambda"), "payload.lambda");
  const auto r = is_orthogonal(spec, lambda, read_tol(pl, opt));
  Outcome o;
  o.result["verdict"] = to_string(r.verdict);
  o.result["pairs_checked"] = r.pairs_checked;
  if (r.pair) o.result["pair"] = pair_json(*r.pair);
  if (r.difference) o.result["difference"] = r.difference->to_string();
  if (!r.method.empty()) o.result["method"] = r.method;
  o.code = r.verdict == Verdict::orthogonal ? kTrue : (r.verdict == Verdict::not_orthogonal ? kFalse : kIndeterminate);
  return o;
}

Outcome cmd_q_function(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"spec", "lambda", "canonical", "xi", "from", "to", "points", "tol"});
  const MeasureSpec spec = read_spec(field(pl, "payload", "spec"), "payload.spec");
  FrequencySet lambda;
  if (pl.contains("lambda") == pl.contains("canonical"))
    throw InputError("payload", "give exactly one of \"lambda\" or \"canonical\"");
  if (pl.contains("lambda")) {
    lambda = read_frequencies(pl["lambda"], "payload.lambda");
  } else {
    const json& c = pl["canonical"];
    allow_keys(c, "payload.canonical", {"p", "labels", "depth"});
    const long long p = read_int(field(c, "payload.canonical", "p"), "payload.canonical.p", 2);
    const DigitSet labels = read_digits(field(c, "payload.canonical", "labels"), "payload.canonical.labels");
    const long long depth = read_int(field(c, "payload.canonical", "depth"), "payload.canonical.depth", 1);
    lambda = wrap_domain("payload.canonical", [&] { return canonical_spectrum(p, labels, static_cast<int>(depth)); });
  }
  const double tol = read_tol(pl, opt);
  std::vector<double> xs;
  if (pl.contains("xi")) {
    if (pl.contains("from") || pl.contains("to") || pl.contains("points"))
      throw InputError("payload", "give either \"xi\" or a from/to/points grid");
    const json& xi = pl["xi"];
    if (xi.is_array()) {
      for (std::size_t i = 0; i < xi.size(); ++i) xs.push_back(read_double(xi[i], sub("payload.xi", i)));
    } else {
      xs.push_back(read_double(xi, "payload.xi"));
    }
  } else {
    // Half-open grid [from, to), matching a period sampling.
    const double from = read_double(field(pl, "payload", "from"), "payload.from");
    const double to = read_double(field(pl, "payload", "to"), "payload.to");
    const long long n = read_int(field(pl, "payload", "points"), "payload.points", 1);
    for (long long i = 0; i < n; ++i) xs.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(n));
  }
  std::vector<CertifiedReal> vals;
  for (double x : xs) vals.push_back(q_function(spec, lambda, x, tol));
  Outcome o;
  if (opt.format == "csv") {
    std::string csv = "xi,q,error_bound\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      csv += shortest(xs[i]) + "," + shortest(vals[i].value) + "," + shortest(vals[i].error_bound) + "\n";
    o.csv = std::move(csv);
    return o;
  }
  o.result["lambda_size"] = lambda.size();
  json rows = json::array();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rows.push_back(json{{"xi", xs[i]}, {"q", vals[i].value}, {"error_bound", vals[i].error_bound}});
    lo = std::min(lo, vals[i].value);
  }
  o.result["min_q"] = lo;
  o.result["values"] = rows;
  return o;
}

Outcome cmd_max_family(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"spec", "candidates", "generator", "strict", "tol"});
  const MeasureSpec spec = read_spec(field(pl, "payload", "spec"), "payload.spec");
  FrequencySet cands;
  if (pl.contains("candidates") == pl.contains("generator"))
    throw InputError("payload", "give exactly one of \"candidates\" or \"generator\"");
  if (pl.contains("candidates")) {
    cands = read_frequencies(pl["candidates"], "payload.candidates");
  } else {
    const json& g = pl["generator"];
    const std::string gp = "payload.generator";
    allow_keys(g, gp, {"kind", "p", "s", "window"});
    const json& kind = field(g, gp, "kind");
    const long long s = read_int(field(g, gp, "s"), sub(gp, "s"), 2);
    const Rational window = read_rational(field(g, gp, "window"), sub(gp, "window"));
    if (kind == "odd") {
      cands = wrap_domain(gp, [&] { return odd_superset_candidates(s, window); });
    } else if (kind == "even") {
      const long long p = read_int(field(g, gp, "p"), sub(gp, "p"), 2);
      cands = wrap_domain(gp, [&] { return even_superset_candidates(p, s, window); });
    } else {
      throw InputError(sub(gp, "kind"), "expected \"odd\" or \"even\"");
    }
  }
  const bool strict = pl.contains("strict") && read_bool(pl["strict"], "payload.strict");
  const double tol = read_tol(pl, opt);
  Outcome o;
  FamilyResult r;
  try {
    r = max_orthogonal_family(spec, cands, strict, tol);
  } catch (const IndeterminateError& e) {
    o.code = kIndeterminate;
    o.result["candidates"] = cands.size();
    o.result["error"] = e.what();
    o.result["pair"] = pair_json(e.pair);
    return o;
  }
  o.result["candidates"] = cands.size();
  o.result["size"] = r.family.size();
  o.result["family"] = rationals_json(r.family.elements());
  o.result["upper_bound"] = r.upper_bound;
  o.result["exact"] = r.exact();
  o.result["undecided_pairs"] = r.undecided_pairs;
  if (r.first_undecided) o.result["first_undecided"] = pair_json(*r.first_undecided);
  o.result["explored_nodes"] = r.explored_nodes;
  if (!r.exact()) o.code = kIndeterminate;
  return o;
}

Outcome cmd_decompose(const json& pl, const Options&) {
  allow_keys(pl, "payload", {"lambda", "b1", "c", "q1", "gamma1"});
  const FrequencySet lambda = read_frequencies(field(pl, "payload", "lambda"), "payload.lambda");
  const Rational b1 = read_rational(field(pl, "payload", "b1"), "payload.b1");
  const long long c = read_int(field(pl, "payload", "c"), "payload.c", 1);
  const long long q1 = read_int(field(pl, "payload", "q1"), "payload.q1", 1);
  const long long g1 = read_int(field(pl, "payload", "gamma1"), "payload.gamma1", 1);
  const auto d = wrap_domain("payload", [&] { return decompose_spectrum(lambda, b1, c, q1, g1); });
  Outcome o;
  json cells = json::object();
  for (const auto& [idx, zs] : d.cells) cells[std::to_string(idx)] = rationals_json(zs.elements());
  o.result["cells"] = cells;
  o.result["leftovers"] = rationals_json(d.leftovers.elements());
  o.result["reassembles"] = reassemble(d) == lambda;
  return o;
}

Outcome cmd_decide_spectral(const json& pl, const Options&) {
  allow_keys(pl, "payload", {"m", "N", "rho"});
  const long long m = read_int(field(pl, "payload", "m"), "payload.m", 1);
  const long long N = read_int(field(pl, "payload", "N"), "payload.N", 1);
  const Rational rho = read_rational(field(pl, "payload", "rho"), "payload.rho");
  const auto d = wrap_domain("payload.rho", [&] { return spectrality_decision(m, N, rho); });
  Outcome o;
  o.result["spectral"] = d.spectral;
  o.result["reason"] = d.reason;
  o.code = d.spectral ? kTrue : kFalse;
  return o;
}

json identity_json(const IdentityReport& r) {
  json j;
  j["pass"] = r.pass;
  j["samples"] = r.samples;
  j["max_deviation"] = r.max_deviation;
  j["worst_xi"] = r.worst_xi;
  j["max_excess"] = r.max_excess;
  return j;
}

Outcome cmd_verify_nu_mu(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"m", "N", "rho", "samples", "window", "tol", "seed"});
  const long long m = read_int(field(pl, "payload", "m"), "payload.m", 1);
  const long long N = read_int(field(pl, "payload", "N"), "payload.N", 1);
  const Rational rho = read_rational(field(pl, "payload", "rho"), "payload.rho");
  const auto samples = pl.contains("samples") ? read_int(pl["samples"], "payload.samples", 1) : 200;
  const double window = pl.contains("window") ? read_double(pl["window"], "payload.window") : 10.0;
  const auto seed = pl.contains("seed") ? read_int(pl["seed"], "payload.seed", 0) : 20240601;
  const double tol = pl.contains("tol") ? read_tol(pl, opt) : (opt.tol_set ? opt.tol : 1e-10);
  const auto r = wrap_domain("payload", [&] {
    return verify_nu_equals_mu(m, N, rho, static_cast<std::size_t>(samples), window, tol, static_cast<std::uint64_t>(seed));
  });
  Outcome o;
  o.result = identity_json(r);
  o.code = r.pass ? kTrue : kFalse;
  return o;
}

Outcome cmd_verify_symmetric(const json& pl, const Options& opt) {
  allow_keys(pl, "payload", {"n", "rho", "samples", "window", "tol", "seed"});
  const long long n = read_int(field(pl, "payload", "n"), "payload.n", 0);
  const Rational rho = read_rational(field(pl, "payload", "rho"), "payload.rho");
  const auto samples = pl.contains("samples") ? read_int(pl["samples"], "payload.samples", 1) : 200;
  const double window = pl.contains("window") ? read_double(pl["window"], "payload.window") : 10.0;
  const auto seed = pl.contains("seed") ? read_int(pl["seed"], "payload.seed", 0) : 20240601;
  const double tol = pl.contains("tol") ? read_tol(pl, opt) : (opt.tol_set ? opt.tol : 1e-10);
  const auto r = wrap_domain("payload", [&] {
    return verify_symmetric_example(n, rho, static_cast<std::size_t>(samples), window, tol,
                                    static_cast<std::uint64_t>(seed));
  });
  Outcome o;
  o.result = identity_json(r);
  o.code = r.pass ? kTrue : kFalse;
  return o;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"check-hadamard", cmd_check_hadamard},     {"search-companion", cmd_search_companion},
      {"build-product-form", cmd_build_product_form}, {"verify-certificate", cmd_verify_certificate},
      {"eval-ft", cmd_eval_ft},                   {"sweep-ft", cmd_sweep_ft},
      {"zero-member", cmd_zero_member},           {"check-orthogonal", cmd_check_orthogonal},
      {"q-function", cmd_q_function},             {"max-family", cmd_max_family},
      {"decompose", cmd_decompose},               {"decide-spectral", cmd_decide_spectral},
      {"verify-nu-mu", cmd_verify_nu_mu},         {"verify-symmetric", cmd_verify_symmetric},
  };
  return h;
}

const char* status_name(int code) {
  switch (code) {
    case kTrue: return "true";
    case kFalse: return "false";
    case kIndeterminate: return "indeterminate";
    default: return "invalid";
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string dump_report(const json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and certified computations for spectral self-similar measures", "fractspec"};
  Options opt;
  std::string input = "-";
  std::string inline_json;
  std::string output;
  std::vector<std::string> names;
  for (const auto& [k, v] : handlers()) names.push_back(k);
  app.add_option("command", opt.command, "Job to run")->required()->check(CLI::IsMember(names));
  app.add_option("payload", input, "Payload JSON file, or - for stdin");
  app.add_option("--json", inline_json, "Payload JSON given inline");
  app.add_option("-o,--output", output, "Write the report to PATH instead of stdout");
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", opt.threads, "Worker threads (0 = hardware concurrency)");
  auto* tol_opt = app.add_option("--tol", opt.tol, "Default error tolerance for certified evaluations");
  app.set_version_flag("--version", std::string(FRACTSPEC_VERSION));

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kTrue : kInvalid;
  }
  opt.tol_set = tol_opt->count() > 0;
  if (opt.threads == 0) opt.threads = std::max(1u, std::thread::hardware_concurrency());

  json report;
  report["command"] = opt.command;
  report["version"] = FRACTSPEC_VERSION;
  int code = kInvalid;
  std::string csv;

  std::string text;
  if (!inline_json.empty()) {
    text = inline_json;
  } else if (input == "-") {
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    std::ifstream f(input, std::ios::binary);
    if (!f) {
      err << "fractspec: cannot read " << input << "\n";
      report["status"] = "invalid";
      report["error"] = json{{"message", "cannot read " + input}};
      out << dump_report(report);
      return kInvalid;
    }
    text.assign(std::istreambuf_iterator<char>(f), {});
  }

  try {
    json payload;
    try {
      payload = json::parse(text);
    } catch (const json::parse_error& e) {
      report["payload_hash"] = nullptr;
      report["status"] = "invalid";
      report["error"] = json{{"message", "malformed JSON"}, {"position", e.byte}, {"detail", e.what()}};
      throw std::runtime_error(e.what());
    }
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(payload.dump())));
    report["payload_hash"] = hash;
    if (opt.format == "csv" && opt.command != "sweep-ft" && opt.command != "q-function")
      throw InputError("--format", "csv output is available for sweep-ft and q-function only");
    Outcome o = handlers().at(opt.command)(payload, opt);
    code = o.code;
    report["status"] = status_name(code);
    report["exit_code"] = code;
    report["result"] = std::move(o.result);
    csv = std::move(o.csv);
  } catch (const InputError& e) {
    report["status"] = "invalid";
    report["error"] = json{{"message", e.what()}};
  } catch (const DomainError& e) {
    report["status"] = "invalid";
    report["error"] = json{{"message", e.what()}};
  } catch (const json::exception& e) {
    report["status"] = "invalid";
    report["error"] = json{{"message", e.what()}};
  } catch (const std::exception& e) {
    if (!report.contains("error")) {
      report["status"] = "invalid";
      report["error"] = json{{"message", e.what()}};
    }
  }
  if (code == kInvalid) {
    report["exit_code"] = code;
    err << "fractspec: " << report["error"]["message"].get<std::string>() << "\n";
  }

  const std::string body = csv.empty() || code == kInvalid ? dump_report(report) : csv;
  if (output.empty()) {
    out << body;
  } else {
    std::ofstream f(output, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "fractspec: cannot write " << output << "\n";
      return kInvalid;
    }
    f << body;
  }
  return code;
}

}  // namespace fractspec::cli
