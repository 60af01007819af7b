#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmnoma/channel.hpp"
#include "mmnoma/config.hpp"
#include "mmnoma/harness.hpp"
#include "mmnoma/oracle.hpp"

namespace py = pybind11;
using namespace mmnoma;

namespace {

// Returns (csv text, metadata json text).
std::pair<std::string, std::string> run_json(const std::string& text) {
  const ExperimentConfig config = parse_config(nlohmann::json::parse(text));
  validate(config);
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = run_experiment(config);
  }
  std::ostringstream csv;
  write_csv(result, csv);
  return {csv.str(), metadata(config, result).dump()};
}

}  // namespace

PYBIND11_MODULE(_mmnoma, m) {
  m.doc() = "multi-AP mmWave-NOMA simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);

  m.def("default_config", [] {
    ExperimentConfig config;
    config.venue = default_venue();
    return to_json(config).dump();
  });
  m.def("run_json", &run_json, py::arg("config_json"));
  m.def("path_loss", &path_loss, py::arg("distance"), py::arg("exponent"),
        py::arg("carrier_hz") = 60e9);
  m.def(
      "array_response",
      [](double angle, int length) {
        const CVector a = array_response(angle, length);
        return std::vector<std::complex<double>>(a.data(), a.data() + a.size());
      },
      py::arg("angle"), py::arg("length"));
  m.def("count_schedules", &count_schedules, py::arg("users"), py::arg("aps"), py::arg("chains"));
}
