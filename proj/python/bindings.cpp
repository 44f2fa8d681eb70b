#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "critfluct/experiment.hpp"
#include "critfluct/expint.hpp"

namespace py = pybind11;
using namespace critfluct;

namespace {

// JSON crosses the boundary as text; Python callers json.loads the result.
std::string run_experiment_json(const std::string& config_json) {
    ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(config_json));
    return run_experiment(cfg).to_json().dump();
}

std::string default_config_json(const std::string& composition_id) {
    return default_config(composition_id).to_json().dump();
}

std::string verify_appendix_json(const std::vector<double>& xs) {
    return verify_appendix(xs).dump();
}

py::dict fit_to_dict(const PowerLawFit& fit) {
    py::dict d;
    d["k"] = fit.k;
    d["stderr_k"] = fit.stderr_k;
    d["intercept"] = fit.intercept;
    d["r_squared"] = fit.r_squared;
    d["window_lo"] = fit.window_lo;
    d["window_hi"] = fit.window_hi;
    d["bins_used"] = fit.bins_used;
    d["n_samples"] = fit.n_samples;
    d["excluded_zeros"] = fit.excluded_zeros;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "two-neuron fluctuation criticality toolkit (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DivergenceError>(m, "DivergenceError");
    py::register_exception<EstimationError>(m, "EstimationError");
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<MultiBranchError>(m, "MultiBranchError");

    m.def("composition_ids", [] {
        std::vector<std::string> ids;
        for (const auto& c : catalogue()) ids.push_back(c.id);
        return ids;
    });

    m.def(
        "predicted_exponents",
        [](const std::string& id) {
            const Composition& c = composition_by_id(id);
            py::dict d;
            d["minus"] = c.k_minus ? py::cast(*c.k_minus) : py::none();
            d["plus"] = c.k_plus ? py::cast(*c.k_plus) : py::none();
            return d;
        },
        py::arg("composition"));

    m.def(
        "composition_value",
        [](const std::string& id, double y, double x2) {
            return composition_value(y, composition_by_id(id), x2);
        },
        py::arg("composition"), py::arg("y"), py::arg("x2"));

    py::class_<ToyState>(m, "ToyState")
        .def(py::init([](double w, double b, double gamma) {
                 ToyState s;
                 s.w = w;
                 s.b = b;
                 s.gamma = gamma;
                 return s;
             }),
             py::arg("w"), py::arg("b"), py::arg("gamma"))
        .def_readwrite("w", &ToyState::w)
        .def_readwrite("b", &ToyState::b)
        .def_readwrite("gamma", &ToyState::gamma)
        .def_readonly("step_count", &ToyState::step_count);

    m.def(
        "train_to_equilibrium",
        [](const std::string& id, double w0, double b0, double gamma, uint64_t seed,
           uint64_t window, double rel_tol, uint64_t max_steps) {
            ToyState init;
            init.w = w0;
            init.b = b0;
            init.gamma = gamma;
            EquilibriumCriterion crit;
            crit.window = window;
            crit.rel_tol = rel_tol;
            crit.max_steps = max_steps;
            TrainResult r = train_to_equilibrium(init, composition_by_id(id), default_classes(),
                                                 crit, seed);
            py::dict d;
            d["w"] = r.state.w;
            d["b"] = r.state.b;
            d["steps"] = r.state.step_count;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("composition"), py::arg("w0"), py::arg("b0"), py::arg("gamma"), py::arg("seed"),
        py::arg("window") = 10000, py::arg("rel_tol") = 1e-3,
        py::arg("max_steps") = 10000000);

    m.def(
        "collect_jumps",
        [](const std::string& id, double w, double b, double gamma, const std::string& cls,
           uint64_t count, uint64_t seed, int workers) {
            ToyState s;
            s.w = w;
            s.b = b;
            s.gamma = gamma;
            ClassSpec spec = cls == "plus" ? plus_class() : minus_class();
            auto samples = collect_jumps(s, composition_by_id(id), spec, count, seed, workers);
            std::vector<double> x1, dw, db, y;
            x1.reserve(samples.size());
            for (const auto& smp : samples) {
                x1.push_back(smp.x1);
                dw.push_back(smp.dw);
                db.push_back(smp.db);
                y.push_back(smp.y);
            }
            py::dict d;
            d["x1"] = std::move(x1);
            d["dw"] = std::move(dw);
            d["db"] = std::move(db);
            d["y"] = std::move(y);
            return d;
        },
        py::arg("composition"), py::arg("w"), py::arg("b"), py::arg("gamma"), py::arg("cls"),
        py::arg("count"), py::arg("seed"), py::arg("workers") = 1);

    m.def(
        "estimate_theta",
        [](const std::vector<double>& dw, const std::vector<double>& db) {
            if (dw.size() != db.size())
                throw ConfigError("dw and db must have the same length");
            std::vector<FluctuationSample> samples(dw.size());
            for (size_t i = 0; i < dw.size(); ++i) {
                samples[i].dw = dw[i];
                samples[i].db = db[i];
            }
            ThetaEstimate est = estimate_theta(samples);
            py::dict d;
            d["theta"] = est.rot.theta;
            d["lambda1"] = est.lambda1;
            d["lambda2"] = est.lambda2;
            d["ratio"] = est.ratio;
            d["used"] = est.used;
            return d;
        },
        py::arg("dw"), py::arg("db"));

    m.def(
        "rotate",
        [](double theta, double dw, double db) {
            auto [dq1p, dq2p] = rotate(dw, db, Rotation{theta});
            return py::make_tuple(dq1p, dq2p);
        },
        py::arg("theta"), py::arg("dw"), py::arg("db"));

    m.def(
        "q1p_rate",
        [](const std::string& id, double theta, double w, double b, double gamma, double x1,
           double x2) {
            ToyState s;
            s.w = w;
            s.b = b;
            s.gamma = gamma;
            return q1p_rate(x1, composition_by_id(id), Rotation{theta}, s, x2);
        },
        py::arg("composition"), py::arg("theta"), py::arg("w"), py::arg("b"), py::arg("gamma"),
        py::arg("x1"), py::arg("x2"));

    m.def(
        "log_bin",
        [](const std::vector<double>& mags, int nbins, double lo, double hi) {
            LogHistogram h = log_bin(mags, nbins, lo, hi);
            py::dict d;
            d["edges"] = h.edges;
            d["counts"] = h.counts;
            d["densities"] = h.densities;
            d["included"] = h.included;
            d["excluded_zero"] = h.excluded_zero;
            d["excluded_outside"] = h.excluded_outside;
            return d;
        },
        py::arg("magnitudes"), py::arg("nbins"), py::arg("lo"), py::arg("hi"));

    m.def(
        "fit_power_law",
        [](const std::vector<double>& mags, int nbins, double lo, double hi) {
            LogHistogram h = log_bin(mags, nbins, lo, hi);
            return fit_to_dict(fit_power_law(h, lo, hi));
        },
        py::arg("magnitudes"), py::arg("nbins"), py::arg("lo"), py::arg("hi"));

    m.def("default_fit_window", &default_fit_window, py::arg("magnitudes"), py::arg("nbins"));

    m.def(
        "scaling_exponent_invariance",
        [](const std::vector<double>& mags, double c, int nbins, double lo, double hi) {
            auto [base, scaled] = scaling_exponent_invariance(mags, c, nbins, lo, hi);
            return py::make_tuple(fit_to_dict(base), fit_to_dict(scaled));
        },
        py::arg("magnitudes"), py::arg("c"), py::arg("nbins"), py::arg("lo"), py::arg("hi"));

    m.def("moment", &moment, py::arg("samples"), py::arg("m"));

    m.def("ks_distance", &ks_distance, py::arg("samples"), py::arg("grid"), py::arg("density"));

    m.def("expint_approx", &expint_approx, py::arg("x"));

    m.def(
        "expint_quadrature",
        [](double x0, double x, double tol) {
            IntegralResult r = expint_quadrature(x0, x, tol);
            return py::make_tuple(r.value, r.abs_err_est);
        },
        py::arg("x0"), py::arg("x"), py::arg("tol") = 1e-10);

    m.def("run_experiment", &run_experiment_json, py::arg("config_json"));
    m.def("default_config", &default_config_json, py::arg("composition"));
    m.def("verify_appendix", &verify_appendix_json, py::arg("xs"));
}
