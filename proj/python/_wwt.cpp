#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wwt/app/scenario.hpp"

namespace py = pybind11;
using namespace wwt;
using app::json;

namespace {

// Structured results cross the boundary as JSON text; the Python side decodes them.
std::string dumps(const json& j) { return j.dump(); }

py::dict series_dict(const AmplitudeSeries& s) {
    py::dict d;
    d["t"] = py::array_t<double>(s.times.size(), s.times.data());
    d["amplitude"] = py::array_t<cplx>(s.amplitude.size(), s.amplitude.data());
    d["probability"] = py::array_t<double>(s.probability.size(), s.probability.data());
    return d;
}

ContinuumModel model_from_json(const std::string& text) {
    return build_continuum(app::parse_continuum(json::parse(text)));
}

void translate(std::exception_ptr p, PyObject* schema, PyObject* model, PyObject* numerical) {
    try {
        if (p) std::rethrow_exception(p);
    } catch (const app::SchemaError& e) {
        PyErr_SetString(schema, e.what());
    } catch (const json::exception& e) {
        PyErr_SetString(schema, e.what());
    } catch (const NumericalError& e) {
        PyErr_SetString(numerical, e.what());
    } catch (const Error& e) {
        PyErr_SetString(model, e.what());
    }
}

}  // namespace

PYBIND11_MODULE(_wwt, m) {
    m.doc() = "Donor-acceptor transfer in the two-level Wigner-Weisskopf model";
    m.attr("__version__") = app::version;

    static py::exception<app::SchemaError> schema_error(m, "SchemaError", PyExc_ValueError);
    static py::exception<ModelError> model_error(m, "ModelError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        translate(p, schema_error.ptr(), model_error.ptr(), numerical_error.ptr());
    });

    py::class_<ContinuumModel>(m, "ContinuumModel")
        .def(py::init(&model_from_json), py::arg("model_json"),
             "Build from the JSON text of a continuum model block.")
        .def("density", &ContinuumModel::density, py::arg("j"), py::arg("omega"))
        .def("phase", &ContinuumModel::phase, py::arg("omega"))
        .def("formfactor", &ContinuumModel::formfactor, py::arg("j"), py::arg("omega"))
        .def("norm2", &ContinuumModel::norm2, py::arg("j"))
        .def_property_readonly("omega1", &ContinuumModel::omega1)
        .def_property_readonly("omega2", &ContinuumModel::omega2)
        .def_property_readonly("band", [](const ContinuumModel& c) { return py::make_tuple(c.band().lo, c.band().hi); })
        .def("to_json", [](const ContinuumModel& c) { return dumps(app::continuum_to_json(c.spec())); });

    py::class_<DiscreteNetwork>(m, "Network")
        .def(py::init([](const std::string& text) { return app::parse_network(json::parse(text)); }),
             py::arg("network_json"))
        .def_property_readonly("sites", &DiscreteNetwork::sites)
        .def_property_readonly("h", [](const DiscreteNetwork& n) { return CMatrix(n.h()); });

    m.def("decay_rate", &decay_rate, py::arg("model"), py::arg("j"), py::arg("omega"));
    m.def("radiative_shift", [](const ContinuumModel& c, int j, double w) { return radiative_shift(c, j, w); },
          py::arg("model"), py::arg("j"), py::arg("omega"));
    m.def("transfer_bound", py::overload_cast<const ContinuumModel&>(&transfer_bound), py::arg("model"));
    m.def(
        "optimal_transfer_time",
        [](const ContinuumModel& c) {
            TransferTime t = optimal_transfer_time(c);
            return dumps({{"t_opt", t.t_opt}, {"omega0", t.omega0}, {"gamma", t.gamma}, {"tau", t.tau},
                          {"phase_slope", t.phase_slope}, {"warnings", t.warnings}});
        },
        py::arg("model"));
    m.def("markov_peak_time", &markov_peak_time, py::arg("model"));
    m.def(
        "apet_report", [](const ContinuumModel& c) { return dumps(app::apet_json(apet_report(c))); },
        py::arg("model"));

    m.def(
        "amplitude_exact",
        [](const ContinuumModel& c, const std::vector<double>& t) {
            ExactResult r;
            {
                py::gil_scoped_release release;
                r = amplitude_exact(c, t);
            }
            return series_dict(r.series);
        },
        py::arg("model"), py::arg("times"));
    m.def(
        "amplitude_markov",
        [](const ContinuumModel& c, const std::vector<double>& t) {
            MarkovResult r;
            {
                py::gil_scoped_release release;
                r = amplitude_markov(c, t);
            }
            return series_dict(r.series);
        },
        py::arg("model"), py::arg("times"));
    m.def(
        "amplitude_oracle",
        [](const ContinuumModel& c, const std::vector<double>& t, int modes) {
            OracleResult r;
            {
                py::gil_scoped_release release;
                r = amplitude_oracle(discretize_continuum(c, modes), t);
            }
            return series_dict(r.series);
        },
        py::arg("model"), py::arg("times"), py::arg("modes") = 2000);
    m.def(
        "network_amplitude",
        [](const DiscreteNetwork& n, const std::vector<double>& t) {
            return series_dict(amplitude_oracle(network_system(n), t).series);
        },
        py::arg("network"), py::arg("times"));
    m.def(
        "embed_network",
        [](const DiscreteNetwork& n, double eta) {
            app::EmbedOutcome out = app::embed_network(n, eta);
            json j{{"report", out.report}, {"model", out.model ? *out.model : json(nullptr)}};
            return dumps(j);
        },
        py::arg("network"), py::arg("eta"));

    m.def(
        "run_scenario",
        [](const std::string& config, const std::string& base_dir) {
            app::Scenario sc = app::parse_scenario(json::parse(config), base_dir);
            app::RunOutcome out;
            {
                py::gil_scoped_release release;
                out = app::run_scenario(sc);
            }
            return py::make_tuple(out.exit_code, out.output_dir.string(), dumps(out.summary));
        },
        py::arg("config_json"), py::arg("base_dir") = ".");
}
