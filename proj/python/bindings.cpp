// pybind11 bindings. Big counts cross as Python ints, records as the same
// JSON documents the CLI writes.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ekrf/counting.hpp"
#include "ekrf/functionals.hpp"
#include "ekrf/io.hpp"
#include "ekrf/process.hpp"
#include "ekrf/stats.hpp"

namespace py = pybind11;
using namespace ekrf;

namespace {

py::int_ to_py(const BigCount& c) { return py::int_(py::str(c.to_string())); }

py::object opt_to_py(const std::optional<BigCount>& c) { return c ? py::object(to_py(*c)) : py::object(py::none()); }

ConstraintInstance instance(int n, int r, const std::vector<std::vector<Vertex>>& edges, std::optional<Vertex> required,
                            std::optional<Vertex> excluded) {
  ConstraintInstance inst{n, r, edges, required, excluded};
  inst.validate();
  return inst;
}

TrialConfig make_config(int n, int r, const std::string& mode, const std::string& strategy, int ie_cap,
                        std::uint64_t t_max, int delta_stop, double eps_fix, bool continue_after_verdict) {
  TrialConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.stopping.mode = stop_mode_from_string(mode);
  cfg.sampler.kind = sampler_kind_from_string(strategy);
  cfg.sampler.ie_cap = ie_cap;
  cfg.stopping.t_max = t_max;
  cfg.stopping.delta_stop = delta_stop;
  cfg.stopping.eps_fix = eps_fix;
  cfg.stopping.continue_after_verdict = continue_after_verdict;
  validate_config(cfg);
  return cfg;
}

py::dict profile_to_py(const StepProfile& p) {
  py::dict d;
  d["t"] = p.t;
  d["nu_all"] = to_py(p.nu_all);
  d["pool"] = to_py(p.pool);
  d["keeps_simple"] = opt_to_py(p.keeps_simple);
  d["v"] = p.v ? py::object(py::int_(*p.v)) : py::object(py::none());
  d["nu_A"] = opt_to_py(p.nu_A);
  d["nu_B"] = opt_to_py(p.nu_B);
  d["emp_A"] = opt_to_py(p.emp_A);
  d["emp_B"] = opt_to_py(p.emp_B);
  d["p_keeps_simple"] = p.p_keeps_simple;
  d["p_hits_v"] = p.p_hits_v;
  d["p_avoids_v"] = p.p_avoids_v;
  d["p_emp_A"] = p.p_emp_A;
  d["p_emp_B"] = p.p_emp_B;
  return d;
}

py::dict verdict_to_py(const Verdict& v) {
  py::dict d;
  d["kind"] = to_string(v.kind);
  d["vertex"] = v.vertex ? py::object(py::int_(*v.vertex)) : py::object(py::none());
  d["size"] = opt_to_py(v.size);
  d["residual_ratio"] = v.residual_ratio;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ekrf, m) {
  m.doc() = "Random greedy intersecting hypergraph process: exact counts, functionals, trials";

  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
  py::register_exception<TrialError>(m, "TrialError", PyExc_RuntimeError);

  const auto no_edges = std::vector<std::vector<Vertex>>{};
  m.def(
      "nu_all",
      [](int n, int r, const std::vector<std::vector<Vertex>>& edges, std::optional<Vertex> required,
         std::optional<Vertex> excluded, int ie_cap) { return to_py(nu_all(instance(n, r, edges, required, excluded), ie_cap)); },
      py::arg("n"), py::arg("r"), py::arg("edges") = no_edges, py::arg("required") = py::none(),
      py::arg("excluded") = py::none(), py::arg("ie_cap") = kDefaultIeCap);
  m.def(
      "nu_split",
      [](int n, int r, const std::vector<std::vector<Vertex>>& edges, Vertex v, int ie_cap) {
        auto [a, b] = nu_split(instance(n, r, edges, std::nullopt, std::nullopt), v, ie_cap);
        return py::make_tuple(to_py(a), to_py(b));
      },
      py::arg("n"), py::arg("r"), py::arg("edges"), py::arg("v"), py::arg("ie_cap") = kDefaultIeCap);
  m.def("final_family_size", [](int n, int r, int tbar) { return to_py(final_family_size(n, r, tbar)); },
        py::arg("n"), py::arg("r"), py::arg("tbar"));
  m.def("nu_emp", [](int n, int r, int t) { return to_py(nu_emp(n, r, t)); }, py::arg("n"), py::arg("r"), py::arg("t"));
  m.def("nu_G", [](int n, int r, int t, int s, int f) { return to_py(nu_G(n, r, t, s, f)); }, py::arg("n"),
        py::arg("r"), py::arg("t"), py::arg("s"), py::arg("f"));
  m.def(
      "nu_emp_AB",
      [](int n, int r, int t, int delta) {
        auto [a, b] = nu_emp_AB(n, r, t, delta);
        return py::make_tuple(to_py(a), to_py(b));
      },
      py::arg("n"), py::arg("r"), py::arg("t"), py::arg("delta"));

  m.def("graph_sum_f1", [](int t, double x, double y) { return graph_sum_f1({t, x, y}); }, py::arg("t"), py::arg("x"),
        py::arg("y"));
  m.def(
      "graph_sum_class",
      [](int t, double x, double y, const std::string& cls) {
        if (cls == "nonmatching") return graph_sum_class({t, x, y}, GraphClass::NonMatching);
        if (cls == "matching_f2plus") return graph_sum_class({t, x, y}, GraphClass::MatchingF2Plus);
        throw py::value_error("class must be 'nonmatching' or 'matching_f2plus'");
      },
      py::arg("t"), py::arg("x"), py::arg("y"), py::arg("cls"));
  m.def("matching_count", [](int t, int f) { return to_py(matching_count(t, f)); }, py::arg("t"), py::arg("f"));
  m.def("grid_sum", [](int tbar, int delta, double x, double y) { return grid_sum({tbar, delta, x, y}); },
        py::arg("tbar"), py::arg("delta"), py::arg("x"), py::arg("y"));
  m.def("grid_leading", [](int tbar, int delta, double x, double y) { return grid_leading({tbar, delta, x, y}); },
        py::arg("tbar"), py::arg("delta"), py::arg("x"), py::arg("y"));
  m.def("grid_bound_nhul", [](int h, int u, int l) { return to_py(grid_bound_nhul(h, u, l)); }, py::arg("h"),
        py::arg("u"), py::arg("l"));

  m.def(
      "law_value",
      [](const std::string& law, int n, int r, double argument) { return law_value({law_from_string(law), n, r, argument}); },
      py::arg("law"), py::arg("n") = 0, py::arg("r") = 0, py::arg("argument"));
  m.def("regime_warnings", &regime_warnings, py::arg("n"), py::arg("r"));

  m.def(
      "_run_trial_json",
      [](int n, int r, std::uint64_t seed, const std::string& mode, const std::string& strategy, int ie_cap,
         std::uint64_t t_max, int delta_stop, double eps_fix, bool continue_after_verdict) {
        const auto cfg = make_config(n, r, mode, strategy, ie_cap, t_max, delta_stop, eps_fix, continue_after_verdict);
        py::gil_scoped_release release;
        return record_to_jsonl(run_trial(cfg, seed));
      },
      py::arg("n"), py::arg("r"), py::arg("seed"), py::arg("mode"), py::arg("strategy"), py::arg("ie_cap"),
      py::arg("t_max"), py::arg("delta_stop"), py::arg("eps_fix"), py::arg("continue_after_verdict"));
  m.def(
      "_run_trials_jsonl",
      [](int n, int r, std::uint64_t trials, std::uint64_t seed_base, unsigned workers, const std::string& mode,
         const std::string& strategy, int ie_cap, std::uint64_t t_max, int delta_stop, double eps_fix,
         bool continue_after_verdict) {
        RunConfig rc;
        rc.trial = make_config(n, r, mode, strategy, ie_cap, t_max, delta_stop, eps_fix, continue_after_verdict);
        rc.trials = trials;
        rc.seed_base = seed_base;
        rc.workers = std::max(1u, workers);
        std::ostringstream os;
        {
          py::gil_scoped_release release;
          run_trials(rc, [&](const TrialRecord& rec) { os << record_to_jsonl(rec) << '\n'; });
        }
        return os.str();
      },
      py::arg("n"), py::arg("r"), py::arg("trials"), py::arg("seed_base"), py::arg("workers"), py::arg("mode"),
      py::arg("strategy"), py::arg("ie_cap"), py::arg("t_max"), py::arg("delta_stop"), py::arg("eps_fix"),
      py::arg("continue_after_verdict"));
  m.def(
      "_summarize_json",
      [](const std::string& jsonl, std::vector<double> alphas, std::vector<double> cs, std::vector<double> xis,
         double scaled_x) {
        std::istringstream in(jsonl);
        const auto records = read_jsonl(in);
        SummaryRequest req;
        req.alphas = std::move(alphas);
        req.cs = std::move(cs);
        req.xis = std::move(xis);
        req.scaled_x = scaled_x;
        return summary_to_json(summarize(records, req)).dump();
      },
      py::arg("jsonl"), py::arg("alphas"), py::arg("cs"), py::arg("xis"), py::arg("scaled_x"));

  py::class_<ProcessState>(m, "ProcessState")
      .def(py::init([](int n, int r) { return ProcessState(n, r, default_delta0(n, r)); }), py::arg("n"), py::arg("r"))
      .def_property_readonly("n", &ProcessState::n)
      .def_property_readonly("r", &ProcessState::r)
      .def_property_readonly("t", &ProcessState::t)
      .def(
          "apply_edge",
          [](ProcessState& s, const std::vector<Vertex>& e) { s.apply_edge(Edge::make(e, s.n(), s.r())); },
          py::arg("edge"))
      .def_property_readonly("edges",
                             [](const ProcessState& s) {
                               std::vector<std::vector<Vertex>> out;
                               for (const auto& e : s.edges()) out.emplace_back(e.vertices().begin(), e.vertices().end());
                               return out;
                             })
      .def("degree", &ProcessState::degree, py::arg("v"))
      .def_property_readonly("maxdeg", [](const ProcessState& s) { return s.flags().maxdeg; })
      .def_property_readonly("is_simple", [](const ProcessState& s) { return s.flags().is_simple; })
      .def_property_readonly("common_intersection", &ProcessState::common_intersection)
      .def("nu_all", [](const ProcessState& s, int ie_cap) { return to_py(nu_all(ConstraintInstance::from_state(s), ie_cap)); },
           py::arg("ie_cap") = kDefaultIeCap)
      .def("nu_containing", [](const ProcessState& s, Vertex x, int ie_cap) { return to_py(nu_containing(s, x, ie_cap)); },
           py::arg("x"), py::arg("ie_cap") = kDefaultIeCap)
      .def("step_probability_profile",
           [](const ProcessState& s, int ie_cap) { return profile_to_py(step_probability_profile(s, ie_cap)); },
           py::arg("ie_cap") = kDefaultIeCap)
      .def(
          "verdict",
          [](const ProcessState& s, int delta_stop, double eps_fix, int ie_cap) {
            VerdictOptions opts;
            opts.delta_stop = delta_stop;
            opts.eps_fix = eps_fix;
            opts.ie_cap = ie_cap;
            return verdict_to_py(verdict(s, opts));
          },
          py::arg("delta_stop") = 0, py::arg("eps_fix") = 1e-6, py::arg("ie_cap") = kDefaultIeCap)
      .def(
          "sample_next",
          [](const ProcessState& s, std::uint64_t seed, const std::string& strategy) -> py::object {
            RngStream rng(seed);
            SamplerSettings settings;
            settings.kind = sampler_kind_from_string(strategy);
            const auto out = sample_next(s, rng, settings);
            if (std::holds_alternative<Exhausted>(out.result)) return py::none();
            const auto& e = std::get<Edge>(out.result);
            return py::cast(std::vector<Vertex>(e.vertices().begin(), e.vertices().end()));
          },
          py::arg("seed"), py::arg("strategy") = "auto");
}
