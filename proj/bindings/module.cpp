#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "subdiff/experiment.hpp"
#include "subdiff/gamma.hpp"
#include "subdiff/l1_weights.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/tridiagonal.hpp"

namespace py = pybind11;
using namespace subdiff;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Subdiffusion source discovery: L1 forward solver, exact inverse "
              "operator, noise models, and surrogate training";

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int, double, double>(), py::arg("nx"), py::arg("nt"),
             py::arg("length") = 1.0, py::arg("horizon") = 1.0)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("nt", &Grid::nt)
        .def_readonly("length", &Grid::length)
        .def_readonly("horizon", &Grid::horizon)
        .def_readonly("hx", &Grid::hx)
        .def_readonly("tau", &Grid::tau)
        .def("x", &Grid::x, py::arg("m"))
        .def("t", &Grid::t, py::arg("n"))
        .def("masked_count", &Grid::masked_count)
        .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; });

    py::class_<Field>(m, "Field")
        .def(py::init<const Grid&>(), py::arg("grid"))
        .def(py::init<const Grid&, Matrix>(), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &Field::grid)
        .def_property(
            "values", [](const Field& f) { return f.values; },
            [](Field& f, const Matrix& v) {
                f = Field(f.grid, v);
            })
        .def("all_finite", &Field::all_finite)
        .def_static("sample", &Field::sample, py::arg("grid"), py::arg("f"));

    m.def("gamma_fn", &gamma_fn, py::arg("x"));

    py::class_<L1Weights>(m, "L1Weights")
        .def_static("fractional", &L1Weights::fractional, py::arg("alpha"),
                    py::arg("tau"), py::arg("n_max"))
        .def_static("backward_difference", &L1Weights::backward_difference,
                    py::arg("tau"), py::arg("n_max") = 1)
        .def_static("for_order", &L1Weights::for_order, py::arg("alpha"), py::arg("tau"),
                    py::arg("n_max"))
        .def_property_readonly("alpha", &L1Weights::alpha)
        .def_property_readonly("tau", &L1Weights::tau)
        .def_property_readonly("max_level", &L1Weights::max_level)
        .def("omega0", &L1Weights::omega0)
        .def("weight", &L1Weights::weight, py::arg("j"))
        .def("initial_coefficient", &L1Weights::initial_coefficient, py::arg("n"))
        .def("level_coefficient", &L1Weights::level_coefficient, py::arg("n"), py::arg("j"))
        .def("apply", [](const L1Weights& w, const std::vector<double>& history) {
            return w.apply(history);
        });

    m.def("l1_weights", &l1_weights, py::arg("alpha"), py::arg("tau"), py::arg("n_max"));
    m.def("backward_difference_weights", &backward_difference_weights, py::arg("tau"),
          py::arg("n_max") = 1);
    m.def("caputo_apply",
          [](const L1Weights& w, const std::vector<double>& history) {
              return caputo_apply(w, history);
          },
          py::arg("weights"), py::arg("history"));

    py::class_<TridiagonalSystem>(m, "TridiagonalSystem")
        .def(py::init([](std::vector<double> lower, std::vector<double> diag,
                         std::vector<double> upper, std::vector<double> rhs) {
                 return TridiagonalSystem{std::move(lower), std::move(diag),
                                          std::move(upper), std::move(rhs)};
             }),
             py::arg("lower"), py::arg("diag"), py::arg("upper"), py::arg("rhs"))
        .def_readwrite("lower", &TridiagonalSystem::lower)
        .def_readwrite("diag", &TridiagonalSystem::diag)
        .def_readwrite("upper", &TridiagonalSystem::upper)
        .def_readwrite("rhs", &TridiagonalSystem::rhs);
    m.def("thomas_solve", &thomas_solve, py::arg("system"));

    m.def("laplacian_stencil",
          [](const std::vector<double>& column, int index, double hx) {
              return laplacian_stencil(column, index, hx);
          },
          py::arg("column"), py::arg("m"), py::arg("hx"));

    py::class_<Problem>(m, "Problem")
        .def(py::init<Grid, double, const std::function<double(double)>&, Field>(),
             py::arg("grid"), py::arg("alpha"), py::arg("initial"), py::arg("source"))
        .def_readonly("grid", &Problem::grid)
        .def_readonly("alpha", &Problem::alpha)
        .def_readonly("initial", &Problem::initial)
        .def_readonly("source", &Problem::source);
    m.def("forward_solve", &forward_solve, py::arg("problem"),
          py::call_guard<py::gil_scoped_release>());

    py::enum_<ExampleId>(m, "ExampleId")
        .value("ex1", ExampleId::ex1)
        .value("ex2", ExampleId::ex2)
        .value("ex3", ExampleId::ex3);
    m.def("benchmark_source", &benchmark_source, py::arg("example"), py::arg("x"),
          py::arg("t"));
    m.def("benchmark_initial", &benchmark_initial, py::arg("x"));

    py::enum_<NoiseKind>(m, "NoiseKind")
        .value("none", NoiseKind::none)
        .value("uniform", NoiseKind::uniform)
        .value("gaussian", NoiseKind::gaussian);
    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](NoiseKind kind, double level, std::uint64_t seed) {
                 return NoiseSpec{kind, level, seed};
             }),
             py::arg("kind") = NoiseKind::none, py::arg("level") = 0.0,
             py::arg("seed") = 0)
        .def_readwrite("kind", &NoiseSpec::kind)
        .def_readwrite("level", &NoiseSpec::level)
        .def_readwrite("seed", &NoiseSpec::seed)
        .def("active", &NoiseSpec::active);
    m.def("inject_noise", &inject_noise, py::arg("grid"), py::arg("base"), py::arg("spec"));
    m.def("sample_benchmark",
          [](const Grid& grid, ExampleId example, const NoiseSpec& spec) {
              return inject_noise(
                  grid,
                  [example](double x, double t) { return benchmark_source(example, x, t); },
                  spec);
          },
          py::arg("grid"), py::arg("example"), py::arg("spec") = NoiseSpec{},
          "Sample a benchmark source on the grid, optionally with noise");

    py::enum_<NetworkType>(m, "NetworkType")
        .value("type1", NetworkType::type1)
        .value("type2", NetworkType::type2);

    py::class_<DiscoveryTarget>(m, "DiscoveryTarget")
        .def_readonly("grid", &DiscoveryTarget::grid)
        .def_readonly("alpha", &DiscoveryTarget::alpha)
        .def_readonly("target", &DiscoveryTarget::target);
    m.def("discover_source", &discover_source, py::arg("u"), py::arg("alpha"),
          py::arg("grid"), py::call_guard<py::gil_scoped_release>());

    py::class_<TrainingSet>(m, "TrainingSet")
        .def_readonly("input_dim", &TrainingSet::input_dim)
        .def_readonly("inputs", &TrainingSet::inputs)
        .def_readonly("labels", &TrainingSet::labels)
        .def("__len__", [](const TrainingSet& s) { return s.size(); });
    m.def("assemble_training_set",
          [](const std::vector<DiscoveryTarget>& targets, NetworkType type,
             std::optional<std::uint64_t> shuffle_seed) {
              return assemble_training_set(targets, type, shuffle_seed);
          },
          py::arg("targets"), py::arg("type"), py::arg("shuffle_seed") = std::nullopt);

    py::enum_<InitKind>(m, "InitKind")
        .value("uniform", InitKind::uniform)
        .value("normal", InitKind::normal);

    py::class_<Mlp>(m, "Mlp")
        .def_readonly("weights", &Mlp::weights)
        .def_readonly("biases", &Mlp::biases)
        .def("layer_count", &Mlp::layer_count)
        .def("input_dim", &Mlp::input_dim)
        .def("output_dim", &Mlp::output_dim)
        .def("widths", &Mlp::widths);
    m.def("default_widths", &default_widths, py::arg("input_dim"));
    m.def("init_params",
          [](const std::vector<int>& widths, std::uint64_t seed, InitKind kind) {
              return init_params(widths, seed, kind);
          },
          py::arg("widths"), py::arg("seed"), py::arg("kind") = InitKind::uniform);
    m.def("forward", [](const Mlp& mlp, const Matrix& batch) { return forward(mlp, batch); },
          py::arg("mlp"), py::arg("batch"));
    m.def("save_checkpoint", &save_checkpoint, py::arg("mlp"), py::arg("path"));
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("network_type", &TrainConfig::network_type);

    py::class_<TrainReport>(m, "TrainReport")
        .def_readonly("epoch_loss", &TrainReport::epoch_loss)
        .def_readonly("final_relative_error", &TrainReport::final_relative_error)
        .def_readonly("final_residual_loss", &TrainReport::final_residual_loss)
        .def_readonly("wall_seconds", &TrainReport::wall_seconds)
        .def_readonly("skipped_steps", &TrainReport::skipped_steps);

    m.def("residual_loss",
          [](const std::vector<double>& pred, const std::vector<double>& labels,
             long normalizer) { return residual_loss(pred, labels, normalizer); },
          py::arg("predictions"), py::arg("labels"), py::arg("normalizer"));
    m.def("relative_error", &relative_error, py::arg("predicted"), py::arg("truth"));
    m.def("train",
          [](const TrainConfig& config, const TrainingSet& set, const Mlp& mlp) {
              return train(config, set, mlp);
          },
          py::arg("config"), py::arg("set"), py::arg("mlp"),
          py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_surrogate", &evaluate_surrogate, py::arg("mlp"), py::arg("grid"),
          py::arg("type"), py::arg("alpha"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("example", &ExperimentConfig::example)
        .def_readwrite("network_type", &ExperimentConfig::network_type)
        .def_readwrite("alpha", &ExperimentConfig::alpha)
        .def_readwrite("alpha_sequence", &ExperimentConfig::alpha_sequence)
        .def_readwrite("noise", &ExperimentConfig::noise)
        .def_readwrite("noise_level", &ExperimentConfig::noise_level)
        .def_readwrite("n", &ExperimentConfig::n)
        .def_readwrite("epochs", &ExperimentConfig::epochs)
        .def_readwrite("batch_size", &ExperimentConfig::batch_size)
        .def_readwrite("learning_rate", &ExperimentConfig::learning_rate)
        .def_readwrite("init", &ExperimentConfig::init)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir);
    m.def("resolved_epochs", &resolved_epochs, py::arg("config"));
    m.def("resolved_seed", &resolved_seed, py::arg("config"));

    py::class_<RunArtifacts>(m, "RunArtifacts")
        .def_readonly("dir", &RunArtifacts::dir)
        .def_readonly("error", &RunArtifacts::error)
        .def_readonly("report", &RunArtifacts::report);
    m.def("run_experiment", &run_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<TableConfig>(m, "TableConfig")
        .def(py::init<>())
        .def_readwrite("base", &TableConfig::base)
        .def_readwrite("levels", &TableConfig::levels)
        .def_readwrite("grids", &TableConfig::grids)
        .def_readwrite("alphas", &TableConfig::alphas)
        .def_readwrite("force_retrain", &TableConfig::force_retrain);

    py::class_<ResultTable>(m, "ResultTable")
        .def_readonly("levels", &ResultTable::levels)
        .def_readonly("grids", &ResultTable::grids)
        .def_readonly("alphas", &ResultTable::alphas)
        .def_readonly("cells", &ResultTable::cells)
        .def_readonly("notes", &ResultTable::notes)
        .def("complete", &ResultTable::complete)
        .def("__eq__", [](const ResultTable& a, const ResultTable& b) { return a == b; });
    m.def("run_table", &run_table, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("serialize_table_text", &serialize_table_text, py::arg("table"));
    m.def("parse_table_text", &parse_table_text, py::arg("text"));
    m.def("render_table_csv", &render_table_csv, py::arg("table"));
    m.def("export_fields", &export_fields, py::arg("run_dir"), py::arg("destination"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
