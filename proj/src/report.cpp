#include "report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "ergolab/errors.hpp"
#include "ergolab/growth.hpp"

namespace ergolab::report {
namespace {

std::int64_t horizon(const Settings& s, std::int64_t fallback) { return s.N.value_or(fallback); }

Json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json complex_json(std::complex<double> z) { return Json::array({num(z.real()), num(z.imag())}); }

Json witnessed(const Witnessed& w) { return Json{{"value", num(w.value)}, {"at", w.at}}; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json evidence_json(const std::vector<Evidence>& ev) {
  Json a = Json::array();
  for (const auto& e : ev)
    a.push_back({{"condition", e.condition},
                 {"method", e.method},
                 {"horizon", num(e.horizon)},
                 {"observed", num(e.observed)},
                 {"passed", e.passed}});
  return a;
}

Json growth_json(const GrowthClass& g) {
  return {{"verdict", growth_verdict_name(g.verdict)},
          {"index", g.index},
          {"symbolic", g.symbolic},
          {"note", g.note},
          {"evidence", evidence_json(g.evidence)}};
}

std::string complex_trace_csv(const ComplexTrace& t) {
  std::string out = "N,re,im,abs\n";
  for (std::size_t i = 0; i < t.checkpoints.size(); ++i)
    out += std::to_string(t.checkpoints[i]) + "," + fmt(t.values[i].real()) + "," + fmt(t.values[i].imag()) + "," +
           fmt(std::abs(t.values[i])) + "\n";
  return out;
}

Json weyl_json(const WeylResult& w) {
  Json traces = Json::array();
  for (std::size_t m = 0; m < w.traces.size(); ++m) {
    Json t = trace_json(w.traces[m].summary);
    t["m"] = m + 1;
    t["final"] = complex_json(w.traces[m].values.back());
    traces.push_back(t);
  }
  return {{"N", w.N}, {"m_max", w.m_max}, {"pass", w.pass}, {"phase_err", num(w.phase_err)}, {"traces", traces}};
}

std::string weyl_csv(const WeylResult& w) {
  std::string out = "m,N,re,im,abs\n";
  for (std::size_t m = 0; m < w.traces.size(); ++m)
    for (std::size_t i = 0; i < w.traces[m].checkpoints.size(); ++i) {
      const auto z = w.traces[m].values[i];
      out += std::to_string(m + 1) + "," + std::to_string(w.traces[m].checkpoints[i]) + "," + fmt(z.real()) + "," +
             fmt(z.imag()) + "," + fmt(std::abs(z)) + "\n";
    }
  return out;
}

Json bosh_json(const BoshResult& b) {
  Json j{{"verdict", bosh_verdict_name(b.verdict)},
         {"symbolic", b.symbolic},
         {"dense", b.dense},
         {"witness", b.witness ? Json(b.witness->str()) : Json(nullptr)},
         {"residual_scale", b.residual},
         {"reason", b.reason}};
  if (b.weyl) j["weyl"] = weyl_json(*b.weyl);
  return j;
}

PrecisionPolicy policy(const Settings& s) {
  PrecisionPolicy p;
  p.digits = s.precision_digits;
  return p;
}

WeightSpec weight_spec(const std::string& text, const Settings& s) {
  WeightSpec w = WeightSpec::parse(text);
  w.precision = policy(s);
  return w;
}

std::string tuple_label(const std::vector<long long>& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return "(" + s + ")";
}

// Every key of `expected` must match `actual`; scalars compare directly.
bool subset_match(const Json& expected, const Json& actual) {
  if (expected.is_object()) {
    if (!actual.is_object()) return false;
    for (auto it = expected.begin(); it != expected.end(); ++it)
      if (!actual.contains(it.key()) || !subset_match(it.value(), actual[it.key()])) return false;
    return true;
  }
  return expected == actual;
}

void check_expected(Output& out, const Json& expected) {
  if (expected.is_null()) return;
  out.json["expected"] = expected;
  const bool ok = expected.is_object() ? subset_match(expected, out.json) : expected == out.json["verdict"];
  out.json["expected_ok"] = ok;
  out.failed = out.failed || !ok;
}

std::string str_or(const Json& j, const char* key, const std::string& fallback) {
  return j.contains(key) ? j[key].get<std::string>() : fallback;
}

}  // namespace

std::string with_default_seed(const std::string& spec, std::uint64_t seed) {
  if ((spec.rfind("rand:", 0) == 0 || spec.rfind("bern:", 0) == 0) && spec.find("seed=") == std::string::npos)
    return spec + ",seed=" + std::to_string(seed);
  return spec;
}

Json trace_json(const TraceSummary& t) {
  return {{"verdict", verdict_name(t.verdict)},
          {"final_abs", num(t.final_abs)},
          {"tail_max_abs", num(t.tail_max_abs)},
          {"oscillation", num(t.oscillation)}};
}

std::string trace_csv(const AverageTrace& tr) {
  std::ostringstream os;
  write_trace_csv(os, tr);
  return os.str();
}

Output classify(const std::string& expr, const Settings& s) {
  const HardyExpr f = HardyExpr::parse(expr);
  GrowthOptions opt;
  opt.precision = policy(s);
  Output out;
  const GrowthClass pm = classify_Pm(f, opt);
  const GrowthClass pmp = classify_Pm_prime(f, opt);
  const GrowthClass ml = classify_Ml(f, 6, opt);
  std::string label = "Unclassified";
  if (pm.verdict == GrowthVerdict::Pm)
    label = "Pm(" + std::to_string(pm.index) + ")";
  else if (ml.verdict == GrowthVerdict::Ml)
    label = "Ml(" + std::to_string(ml.index) + ")";
  else if (ml.verdict == GrowthVerdict::RationalPolyResidue)
    label = growth_verdict_name(ml.verdict);
  out.json = {{"command", "classify"},
              {"expr", f.str()},
              {"verdict", label},
              {"Pm", growth_json(pm)},
              {"Pm_prime", growth_json(pmp)},
              {"Ml", growth_json(ml)}};
  return out;
}

Output sequence(const std::string& f, const std::string& h, bool dedup, bool binary, const Settings& s) {
  SubsequenceSpec spec{HardyExpr::parse(f), Perturbation::parse(with_default_seed(h, s.seed)), policy(s)};
  const std::int64_t N = horizon(s, 1000);
  GeneratedSequence g = generate_a(spec, N, s.jobs);
  std::vector<std::int64_t> a = dedup ? dedup_first(g.a) : g.a;
  const RatioDiagnostics r = ratio_diagnostics(a);
  Output out;
  Json head = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(a.size(), 20); ++i) head.push_back(a[i]);
  out.json = {{"command", "seq"},
              {"f", spec.f.str()},
              {"h", spec.h.str()},
              {"N", N},
              {"dedup", dedup},
              {"length", a.size()},
              {"flagged", g.flagged},
              {"last_flagged", g.last_flagged},
              {"perturbation_bound", g.perturbation_bound},
              {"head", head},
              {"ratio",
               {{"sup_a2n_over_an", witnessed(r.sup_a2n_over_an)},
                {"tail_sup_a2n_over_an", witnessed(r.tail_sup_a2n_over_an)},
                {"prev_sup_a2n_over_an", witnessed(r.prev_sup_a2n_over_an)},
                {"ratio_growing", r.ratio_growing},
                {"tail_max_step", witnessed(r.tail_max_step)},
                {"non_increasing", r.non_increasing},
                {"decreasing", r.decreasing},
                {"last_violation", r.last_violation}}},
              {"verdict", r.ratio_growing ? "ratio-growing" : "ratio-bounded"}};
  std::ostringstream os;
  if (binary)
    write_sequence_binary(os, a);
  else
    write_sequence_text(os, a);
  out.files.emplace_back(binary ? "sequence.bin" : "sequence.txt", os.str());
  return out;
}

Output bk(const std::string& f, std::int64_t K, const Settings& s) {
  const BkTable t = build_bk(HardyExpr::parse(f), K, policy(s));
  const BkDiagnostics d = bk_diagnostics(t);
  Output out;
  Json head = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(t.b.size(), 20); ++i) head.push_back(t.b[i]);
  out.json = {{"command", "bk"},
              {"f", t.f.str()},
              {"K", K},
              {"start", t.start},
              {"head", head},
              {"diagnostics",
               {{"sup_k_gap_over_b", witnessed(d.sup_k_gap_over_b)},
                {"tail_sup_k_gap_over_b", witnessed(d.tail_sup_k_gap_over_b)},
                {"tail_running_max_non_increasing", d.tail_running_max_non_increasing},
                {"running_max_growth", num(d.running_max_growth)},
                {"running_max_from", d.running_max_from},
                {"tail_b_ratio", witnessed(d.tail_b_ratio)},
                {"tail_b_ratio_excess", witnessed(d.tail_b_ratio_excess)},
                {"sup_gap_ratio", witnessed(d.sup_gap_ratio)},
                {"sup_gap_ratio_j", d.sup_gap_ratio_j}}},
              {"verdict", d.running_max_growth <= 0.01 ? "bounded" : "growing"}};
  std::string csv = "k,b_k,d_k\n";
  const auto gaps = t.gaps();
  for (std::size_t k = 0; k < t.b.size(); ++k)
    csv += std::to_string(k + 1) + "," + std::to_string(t.b[k]) + "," + (k < gaps.size() ? std::to_string(gaps[k]) : "") + "\n";
  out.files.emplace_back("bk.csv", csv);
  return out;
}

Output index_set(const std::string& spec, const SetOptions& opt, const Settings& s) {
  IndexSet A = IndexSet::parse(with_default_seed(spec, s.seed));
  const std::int64_t N = horizon(s, 1000000);
  if (opt.akm) A = extract_Akm(A, opt.akm->first, opt.akm->second, N);
  const auto cps = geometric_checkpoints(std::min<std::int64_t>(100, N), N, 4);
  const DensityTrace d = density(A, N, cps, s.tol.converge / 2);
  Output out;
  out.json = {{"command", "set"},
              {"spec", A.str()},
              {"N", N},
              {"nominal_density", num(A.nominal_density())},
              {"density", {{"value", num(d.value)}, {"band", num(d.band)}, {"converged", d.converged}, {"tolerance", d.tolerance}}},
              {"verdict", d.converged ? "density-converged" : "oscillating"}};
  std::string csv = "N,count,density\n";
  for (std::size_t i = 0; i < d.checkpoints.size(); ++i)
    csv += std::to_string(d.checkpoints[i]) + "," + std::to_string(d.counts[i]) + "," + fmt(d.density[i]) + "\n";
  out.files.emplace_back("density.csv", csv);
  if (opt.regularity_K >= 0) {
    const WordStats w = regularity_report(A, opt.regularity_K, N, s.tol.converge / 2);
    Json akm = Json::array();
    for (const auto& e : w.akm)
      akm.push_back({{"k", e.k}, {"m", e.m}, {"density", num(e.density)}, {"band", num(e.band)}, {"converged", e.converged}});
    out.json["regularity"] = {{"K", w.K},
                              {"verdict", regularity_name(w.verdict)},
                              {"words", w.words.size()},
                              {"converged", w.converged},
                              {"oscillating", w.oscillating},
                              {"rare", w.rare},
                              {"Akm", akm}};
    out.json["verdict"] = regularity_name(w.verdict);
    std::string wcsv = "word,density,band,verdict\n";
    for (const auto& e : w.words)
      wcsv += e.word + "," + fmt(e.density) + "," + fmt(e.band) + "," + word_verdict_name(e.verdict) + "\n";
    out.files.emplace_back("words.csv", wcsv);
  }
  if (opt.format != "none") {
    std::ostringstream os;
    if (opt.format == "rle1")
      write_rle1(os, A, N);
    else if (opt.format == "elements")
      write_elements(os, A, N);
    else
      throw Error(ErrorCode::InvalidArgument, "unknown set format '" + opt.format + "'");
    out.files.emplace_back(opt.format == "rle1" ? "set.rle1" : "elements.txt", os.str());
  }
  return out;
}

Output weyl(const std::string& weight, int m_max, const Settings& s) {
  const WeightSpec w = weight_spec(weight, s);
  const std::int64_t N = horizon(s, 100000);
  const WeylResult r = weyl_test(w, N, m_max, default_checkpoints(N), s.tol, s.jobs);
  Output out;
  out.json = {{"command", "weyl"}, {"weight", w.str()}, {"verdict", r.pass ? "pass" : "fail"}, {"weyl", weyl_json(r)}};
  out.files.emplace_back("weyl.csv", weyl_csv(r));
  return out;
}

Output bosh(const std::string& expr, const Settings& s) {
  BoshOptions opt;
  opt.N = horizon(s, 100000);
  opt.tol = s.tol;
  opt.jobs = s.jobs;
  const HardyExpr g = HardyExpr::parse(expr);
  const BoshResult b = boshernitzan_trichotomy(g, opt);
  Output out;
  out.json = {{"command", "bosh"}, {"expr", g.str()}};
  const Json bj = bosh_json(b);
  for (auto it = bj.begin(); it != bj.end(); ++it) out.json[it.key()] = it.value();
  if (b.weyl) out.files.emplace_back("weyl.csv", weyl_csv(*b.weyl));
  return out;
}

Output qtest(const std::string& weight, int k_max, int m_bound, const Settings& s) {
  QOptions opt;
  opt.k_max = k_max;
  opt.m_bound = m_bound;
  opt.N = horizon(s, 100000);
  opt.tol = s.tol;
  opt.jobs = s.jobs;
  const WeightSpec w = weight_spec(weight, s);
  const QVerdict q = q_test(w, opt);
  Output out;
  Json tuples = Json::array();
  for (const auto& t : q.tuples) {
    Json j{{"m", t.m}, {"symbolic", t.symbolic}, {"converges_symbolic", t.converges_symbolic}};
    if (t.traced) j["trace"] = trace_json(t.trace);
    tuples.push_back(j);
  }
  out.json = {{"command", "qtest"},
              {"weight", w.str()},
              {"verdict", q_overall_name(q.overall)},
              {"overall", q_overall_name(q.overall)},
              {"q1", q_status_name(q.q1)},
              {"route", q_route_name(q.route)},
              {"empirical_pass", q.empirical_pass},
              {"witness", q.witness ? Json(*q.witness) : Json(nullptr)},
              {"witness_label", q.witness ? Json(tuple_label(*q.witness)) : Json(nullptr)},
              {"witness_trace", q.witness_trace ? trace_json(q.witness_trace->summary) : Json(nullptr)},
              {"note", q.note},
              {"options", {{"k_max", k_max}, {"m_bound", m_bound}, {"N", opt.N}}},
              {"tuples", tuples}};
  if (q.bosh) out.json["equidistribution"] = bosh_json(*q.bosh);
  if (q.weyl) out.json["weyl"] = weyl_json(*q.weyl);
  if (q.witness_trace) out.files.emplace_back("witness_trace.csv", complex_trace_csv(*q.witness_trace));
  return out;
}

ExperimentConfig config_from_json(const Json& j, const Settings& s) {
  ExperimentConfig c;
  c.model = OperatorModel::parse(str_or(j, "model", "shift"));
  c.x = VectorModel::parse(str_or(j, "vector", "e:0"));
  c.seq.f = HardyExpr::parse(str_or(j, "f", "t"));
  c.seq.h = Perturbation::parse(with_default_seed(str_or(j, "h", "zero"), s.seed));
  c.seq.precision = policy(s);
  c.A = IndexSet::parse(with_default_seed(str_or(j, "A", "nat"), s.seed));
  c.weight = weight_spec(str_or(j, "weight", "0"), s);
  c.N = s.N.value_or(j.value("N", std::int64_t{100000}));
  if (j.contains("checkpoints") && !s.N) c.checkpoints = j["checkpoints"].get<std::vector<std::int64_t>>();
  c.dedup = j.value("dedup", false);
  if (j.contains("witnesses"))
    for (const auto& w : j["witnesses"]) c.witnesses.push_back(VectorModel::parse(w.get<std::string>()));
  c.tol = s.tol;
  if (j.contains("tol")) {
    c.tol.converge = j["tol"].value("converge", c.tol.converge);
    c.tol.diverge = j["tol"].value("diverge", c.tol.diverge);
  }
  c.jobs = s.jobs;
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json w = Json::array();
  for (const auto& x : c.witnesses) w.push_back(x.str());
  return {{"model", c.model.str()},
          {"vector", c.x.str()},
          {"f", c.seq.f.str()},
          {"h", c.seq.h.str()},
          {"A", c.A.str()},
          {"weight", c.weight.str()},
          {"N", c.N},
          {"dedup", c.dedup},
          {"witnesses", w},
          {"tol", {{"converge", c.tol.converge}, {"diverge", c.tol.diverge}}}};
}

Output average(const Json& j, const Settings& s) {
  const ExperimentConfig c = config_from_json(j, s);
  const int diff_k = j.value("difference_k", 0);
  const GeneratedSequence seq = generate_a(c.seq, c.N + diff_k, c.jobs);
  const AverageTrace tr = vector_average(c, seq);
  Output out;
  const PowerBound pb = c.model.power_bound(1000);
  Json spectrum = Json::array();
  for (auto z : c.model.peripheral_point_spectrum()) spectrum.push_back(complex_json(z));
  const TracePoint& last = tr.points.back();
  out.json = {{"command", "average"},
              {"config", config_to_json(c)},
              {"model",
               {{"kind", model_kind_name(c.model.kind())},
                {"power_bound", {{"M", num(pb.M)}, {"exact", pb.exact ? Json(pb.exact->str()) : Json(nullptr)},
                                 {"argmax", pb.argmax}, {"attained", pb.attained}, {"certified", pb.certified},
                                 {"norm_T", num(pb.norm_T)}}},
                {"peripheral_point_spectrum", spectrum}}},
              {"method", tr.method},
              {"exact", tr.exact},
              {"horizon", tr.horizon},
              {"flagged", tr.flagged},
              {"final", {{"N", last.N}, {"N_eff", last.N_eff}, {"norm2", num(last.norm2)}, {"value", complex_json(last.value)}}},
              {"summary", trace_json(tr.summary)},
              {"verdict", verdict_name(tr.summary.verdict)}};
  out.files.emplace_back("trace.csv", trace_csv(tr));
  if (diff_k > 0) {
    Json diffs = Json::array();
    bool all_zero = true;
    for (int k = 1; k <= diff_k; ++k) {
      const AverageTrace d = difference_average(c, k, seq);
      all_zero = all_zero && d.summary.verdict == Verdict::ConvergesToZero;
      diffs.push_back({{"k", k}, {"final_norm2", num(d.points.back().norm2)}, {"flagged", d.flagged},
                       {"summary", trace_json(d.summary)}});
      out.files.emplace_back("diff" + std::to_string(k) + ".csv", trace_csv(d));
    }
    const bool violation = all_zero && tr.summary.verdict == Verdict::Diverges;
    out.json["differences"] = diffs;
    out.json["van_der_corput"] = {{"hypothesis_met", all_zero},
                                  {"conclusion_met", tr.summary.verdict == Verdict::ConvergesToZero},
                                  {"violation", violation}};
    out.failed = out.failed || violation;
  }
  if (!c.witnesses.empty()) {
    const WeakAverage w = weak_average(c);
    Json per = Json::array();
    std::string csv = "witness,N,value\n";
    for (std::size_t k = 0; k < w.per_witness.size(); ++k) {
      const auto& t = w.per_witness[k];
      per.push_back({{"witness", t.witness}, {"final", num(t.values.back())}, {"summary", trace_json(t.summary)}});
      for (std::size_t i = 0; i < t.checkpoints.size(); ++i)
        csv += std::to_string(k) + "," + std::to_string(t.checkpoints[i]) + "," + fmt(t.values[i]) + "\n";
    }
    out.json["weak"] = {{"per_witness", per},
                        {"sup_lower_bound", num(w.sup_lower_bound.values.back())},
                        {"sup_summary", trace_json(w.sup_lower_bound.summary)},
                        {"note", "sup over a finite witness family; a lower bound for the sup over the dual unit ball"}};
    out.files.emplace_back("weak.csv", csv);
  }
  if (j.value("materialize", false)) {
    const AverageTrace m = vector_average_materialized(c);
    double max_diff = 0;
    bool identical = m.points.size() == tr.points.size();
    for (std::size_t i = 0; identical && i < m.points.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(m.points[i].norm2 - tr.points[i].norm2));
      identical = identical && m.points[i].norm2 == tr.points[i].norm2;
    }
    out.json["materialized"] = {{"identical", identical}, {"max_abs_diff", num(max_diff)}, {"exact", m.exact}};
  }
  check_expected(out, j.contains("expected") ? j["expected"] : Json(nullptr));
  return out;
}

namespace {

// Cartesian product over the arrays in "grid", in key order.
std::vector<Json> expand(const Json& defaults, const Json& e) {
  Json base = defaults.is_object() ? defaults : Json::object();
  for (auto it = e.begin(); it != e.end(); ++it)
    if (it.key() != "grid") base[it.key()] = it.value();
  std::vector<Json> out{base};
  if (!e.contains("grid")) return out;
  const Json& grid = e["grid"];
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    std::vector<Json> next;
    for (const auto& partial : out)
      for (const auto& v : it.value()) {
        Json j = partial;
        j[it.key()] = v;
        next.push_back(j);
      }
    out = std::move(next);
  }
  const std::string id = base.value("id", std::string("exp"));
  for (std::size_t i = 0; i < out.size(); ++i) out[i]["id"] = id + "-" + std::to_string(i + 1);
  return out;
}

Output run_one(const Json& e, const Settings& base) {
  Settings s = base;
  s.jobs = 1;
  if (e.contains("N") && !base.N) s.N = e["N"].get<std::int64_t>();
  const std::string kind = e.value("kind", std::string("average"));
  Output out;
  if (kind == "average") return average(e, s);
  if (kind == "classify")
    out = classify(e.at("expr").get<std::string>(), s);
  else if (kind == "weyl")
    out = weyl(e.at("weight").get<std::string>(), e.value("m_max", 5), s);
  else if (kind == "bosh")
    out = bosh(e.at("expr").get<std::string>(), s);
  else if (kind == "qtest")
    out = qtest(e.at("weight").get<std::string>(), e.value("k_max", 2), e.value("m_bound", 2), s);
  else if (kind == "set") {
    SetOptions opt;
    opt.regularity_K = e.value("regularity_K", -1);
    out = index_set(e.at("spec").get<std::string>(), opt, s);
  } else if (kind == "bk")
    out = bk(e.at("f").get<std::string>(), e.value("K", std::int64_t{200}), s);
  else
    throw Error(ErrorCode::InvalidArgument, "unknown battery experiment kind '" + kind + "'");
  check_expected(out, e.contains("expected") ? e["expected"] : Json(nullptr));
  return out;
}

}  // namespace

Output battery(const Json& spec, const Settings& s) {
  std::vector<Json> runs;
  const Json defaults = spec.contains("defaults") ? spec["defaults"] : Json::object();
  for (const auto& e : spec.at("experiments"))
    for (auto& j : expand(defaults, e)) runs.push_back(std::move(j));

  std::vector<Output> results(runs.size());
  std::vector<std::string> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < runs.size();) {
      try {
        results[i] = run_one(runs[i], s);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(s.jobs, static_cast<int>(runs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Output out;
  Json list = Json::array();
  Json violations = Json::array(), weak_conclusions = Json::array();
  std::int64_t checked = 0, hypothesis = 0, failures = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string id = runs[i].value("id", "exp" + std::to_string(i + 1));
    Json entry{{"id", id}, {"kind", runs[i].value("kind", std::string("average"))}};
    if (!errors[i].empty()) {
      entry["error"] = errors[i];
      entry["ok"] = false;
      ++failures;
      list.push_back(entry);
      continue;
    }
    const Json& r = results[i].json;
    entry["verdict"] = r.value("verdict", Json(nullptr));
    if (r.contains("config")) entry["config"] = r["config"];
    if (r.contains("final")) entry["final"] = r["final"];
    if (r.contains("expected")) entry["expected"] = r["expected"];
    entry["ok"] = !results[i].failed;
    if (r.contains("van_der_corput")) {
      ++checked;
      entry["van_der_corput"] = r["van_der_corput"];
      if (r["van_der_corput"]["hypothesis_met"].get<bool>()) {
        ++hypothesis;
        if (!r["van_der_corput"]["conclusion_met"].get<bool>()) weak_conclusions.push_back(id);
      }
      if (r["van_der_corput"]["violation"].get<bool>()) violations.push_back(id);
    }
    if (results[i].failed) ++failures;
    for (const auto& [name, body] : results[i].files) out.files.emplace_back(id + "." + name, body);
    list.push_back(entry);
  }
  out.json = {{"command", "battery"},
              {"name", spec.value("name", std::string("battery"))},
              {"experiments", list},
              {"van_der_corput_gate",
               {{"instances_checked", checked},
                {"hypothesis_met", hypothesis},
                {"violations", violations},
                {"hypothesis_met_but_not_converging", weak_conclusions},
                {"passed", violations.empty()}}},
              {"failures", failures},
              {"verdict", failures == 0 && violations.empty() ? "pass" : "fail"}};
  out.failed = failures > 0 || !violations.empty();
  return out;
}

}  // namespace ergolab::report
