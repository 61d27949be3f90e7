//! Python bindings. Documents are returned as plain dicts and lists; every
//! library error surfaces as `ValueError`.

use clap::ValueEnum;
use forwind::cli::{comparison_json, main_with_args, scenario_json, solve_with, GateChoice, Selector, StartChoice};
use forwind::dsl::{parse_game, parse_game_tree, parse_restrictions, solution_document};
use forwind::game::validate as validate_tree;
use forwind::solvers::compare as compare_traces;
use forwind::stability::{parse_scenario, run_scenario};
use forwind::Game;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn choice<T: ValueEnum>(name: &str, what: &str) -> PyResult<T> {
    T::from_str(name, false).map_err(|_| PyValueError::new_err(format!("unknown {what} `{name}`")))
}

fn load(game: &str, restrictions: Option<&str>) -> PyResult<(Game, Option<forwind::belief::RestrictionProfile>)> {
    let g = parse_game(game).map_err(value_error)?;
    let r = restrictions.map(|t| parse_restrictions(t, &g)).transpose().map_err(value_error)?;
    Ok((g, r))
}

/// Structural problems of a game text; an empty list means valid.
#[pyfunction]
fn validate(game: &str) -> PyResult<Vec<String>> {
    let tree = parse_game_tree(game).map_err(value_error)?;
    Ok(validate_tree(&tree).violations.iter().map(ToString::to_string).collect())
}

/// Runs one procedure and returns the solution document.
#[pyfunction]
#[pyo3(signature = (game, procedure = "rationalizability", restrictions = None, start = "full", gate = "all"))]
fn solve<'py>(
    py: Python<'py>,
    game: &str,
    procedure: &str,
    restrictions: Option<&str>,
    start: &str,
    gate: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let (g, r) = load(game, restrictions)?;
    let sel: Selector = choice(procedure, "procedure")?;
    let (start, gate): (StartChoice, GateChoice) = (choice(start, "start set")?, choice(gate, "gate")?);
    let (_, trace) = py.detach(|| solve_with(&g, r.as_ref(), sel, start, gate)).map_err(value_error)?;
    to_python(py, &solution_document(&g, &trace))
}

/// Runs two procedures and returns the comparison document.
#[pyfunction]
#[pyo3(signature = (game, first, second, restrictions = None))]
fn compare<'py>(
    py: Python<'py>,
    game: &str,
    first: &str,
    second: &str,
    restrictions: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let (g, r) = load(game, restrictions)?;
    let (a, b): (Selector, Selector) = (choice(first, "procedure")?, choice(second, "procedure")?);
    let run = |sel| solve_with(&g, r.as_ref(), sel, StartChoice::Full, GateChoice::All).map(|(_, t)| t);
    let (ta, tb) = py.detach(|| Ok::<_, forwind::Error>((run(a)?, run(b)?))).map_err(value_error)?;
    to_python(py, &comparison_json(&g, &compare_traces(&g, &ta, &tb)))
}

/// Runs a stability scenario (TOML text) and returns the verdicts.
#[pyfunction]
fn stability<'py>(py: Python<'py>, game: &str, scenario: &str) -> PyResult<Bound<'py, PyAny>> {
    let g = parse_game(game).map_err(value_error)?;
    let sc = parse_scenario(scenario).map_err(value_error)?;
    let report = py.detach(|| run_scenario(&g, &sc)).map_err(value_error)?;
    to_python(py, &scenario_json(&report))
}

/// The command-line interface in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn main(py: Python<'_>, args: &Bound<'_, PyList>) -> PyResult<(i32, String, String)> {
    let mut argv = vec!["forwind".to_string()];
    for a in args.iter() {
        argv.push(a.extract()?);
    }
    let (code, out, err) = py.detach(|| {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(argv, &mut out, &mut err);
        (code, out, err)
    });
    Ok((code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned()))
}

#[pymodule(name = "forwind")]
fn forwind_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(stability, m)?)?;
    m.add_function(wrap_pyfunction!(main, m)?)?;
    m.add("SCHEMA", forwind::dsl::SCHEMA)?;
    Ok(())
}
