//! The subcommands. Each returns a [`Report`]; printing and exit codes are
//! handled by the caller.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use potentialkit::energy::{
    log_energy_direct, log_energy_fourier_with, log_energy_with, log_potential, riesz_energy_direct,
    riesz_energy_fourier, riesz_potential, tail_decay_report,
};
use potentialkit::equilibrium::{chebyshev_nodes, compare_to_arcsine, minimize_log_energy, EquilibriumSolution};
use potentialkit::identities::check_identity;
use potentialkit::measure::parse_measure;
use potentialkit::quadrature::radial_log_kernel_limit_with;
use potentialkit::{AtomicMeasure, EnergyResult, Extended, Identity, KernelOrder};
use serde_json::{json, Value};

use crate::args::{
    EnergyArgs, EquilibriumArgs, IdentityArgs, Kind, PotentialArgs, RouteArg, RunConfig, SweepArgs, SweepKind,
};
use crate::output::{Field, Report, Table};
use crate::CliError;

pub fn load_measure(path: &Path) -> Result<AtomicMeasure, CliError> {
    let at = |e: &dyn std::fmt::Display| CliError::input(format!("{}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| at(&e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| at(&e))?;
    parse_measure(&value).and_then(|s| s.into_measure()).map_err(|e| at(&e))
}

fn alpha_for(kind: Kind, alpha: Option<f64>) -> Result<Option<f64>, CliError> {
    match (kind, alpha) {
        (Kind::Riesz, None) => Err(CliError::input("--kind riesz needs --alpha")),
        (Kind::Log, Some(_)) => Err(CliError::input("--alpha only applies to --kind riesz")),
        (_, a) => Ok(a),
    }
}

fn value_fields(v: Extended<Complex64>) -> [Field; 2] {
    match v {
        Extended::Finite(z) => [Field::Num(z.re), Field::Num(z.im)],
        Extended::PosInf => [Field::Num(f64::INFINITY), Field::Empty],
        Extended::NegInf => [Field::Num(f64::NEG_INFINITY), Field::Empty],
    }
}

fn to_value(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

pub fn energy(args: &EnergyArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let alpha = alpha_for(args.kind, args.alpha)?;
    let mu = load_measure(&args.measure)?;
    let other = args.other.as_deref().map(load_measure).transpose()?;
    let nu = other.as_ref().unwrap_or(&mu);
    let routes: &[RouteArg] = match args.route {
        RouteArg::Both => &[RouteArg::Direct, RouteArg::Fourier],
        RouteArg::Direct => &[RouteArg::Direct],
        RouteArg::Fourier => &[RouteArg::Fourier],
    };
    let mut results: Vec<EnergyResult> = Vec::new();
    for route in routes {
        let r = match (args.kind, route) {
            (Kind::Log, RouteArg::Direct) => log_energy_direct(&mu, nu),
            (Kind::Log, _) if other.is_none() => log_energy_with(&mu, cfg.tol, &cfg.schedule),
            (Kind::Log, _) => log_energy_fourier_with(&mu, nu, cfg.tol, &cfg.schedule),
            (Kind::Riesz, RouteArg::Direct) => riesz_energy_direct(&mu, nu, alpha.unwrap_or_default()),
            (Kind::Riesz, _) => riesz_energy_fourier(&mu, nu, alpha.unwrap_or_default(), cfg.tol),
        }?;
        results.push(r);
    }

    let mut table = Table::new(["route", "value_re", "value_im", "error_estimate", "eps_final", "N_final", "converged"]);
    for r in &results {
        let [re, im] = value_fields(r.value);
        let route = to_value(&r.route);
        table.push(vec![
            Field::Text(route.as_str().unwrap_or_default().into()),
            re,
            im,
            r.error_estimate.into(),
            r.eps_final.into(),
            r.n_final.into(),
            r.converged.into(),
        ]);
    }
    let mut json = json!({
        "kind": match args.kind { Kind::Log => "log", Kind::Riesz => "riesz" },
        "alpha": alpha,
        "results": results.iter().map(to_value).collect::<Vec<_>>(),
    });
    if let [a, b] = results.as_slice() {
        let diff = match (a.value, b.value) {
            (Extended::Finite(x), Extended::Finite(y)) => (x - y).norm(),
            _ => f64::NAN,
        };
        json["difference"] = json!(diff);
        table.push(vec![
            "difference".into(),
            diff.into(),
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Empty,
        ]);
    }
    Ok(Report {
        json,
        table,
        converged: results.iter().all(|r| r.converged),
    })
}

pub fn identity(args: &IdentityArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let id = Identity::from_name(&args.name, args.a, args.n)?;
    let check = check_identity(id, cfg.tol)?;
    let (a, n) = match id {
        Identity::Im0 => (None, None),
        Identity::Im { a } | Identity::J0Cos { a } => (Some(a), None),
        Identity::Radial { n, a } => (Some(a), Some(n)),
    };
    let mut table = Table::new(["identity", "a", "n", "computed", "target", "abs_error", "error_estimate", "converged"]);
    table.push(vec![
        id.name().into(),
        a.map_or(Field::Empty, Field::Num),
        n.map_or(Field::Empty, Field::Int),
        check.computed.into(),
        check.target.into(),
        check.abs_error.into(),
        check.error_estimate.into(),
        check.converged.into(),
    ]);
    Ok(Report {
        json: to_value(&check),
        table,
        converged: check.abs_error < cfg.tol,
    })
}

fn weights_table(sol: &EquilibriumSolution) -> Table {
    let dim = sol.nodes.first().map_or(0, Vec::len);
    let mut table = Table::new((0..dim).map(|i| format!("x{i}")).chain(["weight".to_string()]));
    for (x, w) in sol.nodes.iter().zip(&sol.weights) {
        let mut row: Vec<Field> = x.iter().map(|c| Field::Num(*c)).collect();
        row.push(Field::Num(*w));
        table.push(row);
    }
    table
}

pub fn equilibrium(args: &EquilibriumArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let nodes = match (&args.nodes, args.chebyshev) {
        (Some(path), _) => {
            let mu = load_measure(path)?;
            (0..mu.len()).map(|j| mu.point(j).to_vec()).collect()
        }
        (None, Some(count)) => chebyshev_nodes(count),
        (None, None) => return Err(CliError::input("give a node file or --chebyshev")),
    };
    let sol = minimize_log_energy(&nodes, args.max_iters, cfg.tol)?;
    let table = weights_table(&sol);
    if let Some(path) = &args.weights {
        fs::write(path, table.render()).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    let mut json = to_value(&sol);
    // only meaningful for node sets inside [-1, 1] on the line
    if let Ok(d) = compare_to_arcsine(&sol) {
        json["arcsine_cdf_distance"] = json!(d);
    }
    Ok(Report {
        json,
        table,
        converged: sol.converged,
    })
}

fn check_grid(grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::input("--grid must not be empty"));
    }
    if grid.iter().any(|g| !g.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::input("--grid must be finite and strictly increasing"));
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    check_grid(&args.grid)?;
    let measure = || {
        args.measure
            .as_deref()
            .map(load_measure)
            .unwrap_or_else(|| Err(CliError::input("this sweep needs a measure file")))
    };
    let mut rows: Vec<(f64, f64, f64, bool)> = Vec::new();
    let mut extra = json!({});
    match args.kind {
        SweepKind::Tail => {
            let report = tail_decay_report(&measure()?, &args.grid)?;
            extra["verdict"] = to_value(&report.verdict);
            rows.extend(report.partials.iter().map(|&(n, v)| (n, v, 0.0, true)));
        }
        SweepKind::Radial => {
            let n = KernelOrder::new(args.n)?;
            for &a in &args.grid {
                let out = radial_log_kernel_limit_with(n, a, cfg.tol, &cfg.schedule)?;
                rows.push((a, out.value.re, out.error_estimate, out.converged));
            }
            extra["n"] = json!(args.n);
        }
        SweepKind::Riesz => {
            let mu = measure()?;
            for &alpha in &args.grid {
                let r = match args.route {
                    RouteArg::Direct => riesz_energy_direct(&mu, &mu, alpha)?,
                    RouteArg::Fourier => riesz_energy_fourier(&mu, &mu, alpha, cfg.tol)?,
                    RouteArg::Both => return Err(CliError::input("a sweep runs one route; pick direct or fourier")),
                };
                rows.push((alpha, r.re_f64(), r.error_estimate, r.converged));
            }
        }
    }
    let mut table = Table::new(["parameter", "value", "error_estimate"]);
    for &(p, v, e, _) in &rows {
        table.push(vec![p.into(), v.into(), e.into()]);
    }
    let kind = match args.kind {
        SweepKind::Tail => "tail",
        SweepKind::Radial => "radial",
        SweepKind::Riesz => "riesz",
    };
    let mut json = json!({
        "kind": kind,
        "rows": rows
            .iter()
            .map(|&(p, v, e, c)| json!({ "parameter": p, "value": v, "error_estimate": e, "converged": c }))
            .collect::<Vec<_>>(),
    });
    if let (Value::Object(target), Value::Object(more)) = (&mut json, extra) {
        target.extend(more);
    }
    Ok(Report {
        json,
        table,
        converged: rows.iter().all(|r| r.3),
    })
}

pub fn potential(args: &PotentialArgs, _cfg: &RunConfig) -> Result<Report, CliError> {
    let alpha = alpha_for(args.kind, args.alpha)?;
    let mu = load_measure(&args.measure)?;
    let dim = mu.dim();
    if args.at.is_empty() || args.at.len() % dim != 0 {
        return Err(CliError::input(format!(
            "--at takes points of {dim} coordinates; got {} numbers",
            args.at.len()
        )));
    }
    let mut values = Vec::new();
    for x in args.at.chunks(dim) {
        values.push(match alpha {
            None => log_potential(&mu, x)?,
            Some(a) => riesz_potential(&mu, x, a)?,
        });
    }
    let mut table = Table::new((0..dim).map(|i| format!("x{i}")).chain(["value_re".into(), "value_im".into()]));
    for p in &values {
        let mut row: Vec<Field> = p.point.iter().map(|c| Field::Num(*c)).collect();
        row.extend(value_fields(p.value));
        table.push(row);
    }
    Ok(Report {
        json: json!({ "potentials": values.iter().map(to_value).collect::<Vec<_>>() }),
        table,
        converged: true,
    })
}
