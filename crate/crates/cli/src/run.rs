//! Subcommand bodies. Each returns a [`Table`]; writing is left to the caller.

use std::f64::consts::PI;

use berry_core::berry::{berry_factor, trace_path, BerryResult};
use berry_core::lattice::{LatticeGeometry, CATALOG};
use berry_core::meanfield::{ModelParams, SpinSector};
use berry_core::twolevel::{
    berry_field_real, connection_line_integral, gauge_phase, loop_phase_factor, monopole_phase,
    planar_family, GaugeFunction, PlanarLoop,
};
use rayon::prelude::*;

use crate::config::{PathChoice, RunConfig};
use crate::error::{core_exit_code, CliError};
use crate::output::{Cell, Table};

#[derive(Clone, Copy, Debug)]
pub struct TwoLevelArgs {
    pub k: i64,
    pub samples: usize,
    pub radius: f64,
    pub start_angle: f64,
    pub cone_angle: f64,
    pub monopole_samples: usize,
}

impl Default for TwoLevelArgs {
    fn default() -> Self {
        Self {
            k: 1,
            samples: 256,
            radius: 1.0,
            start_angle: 0.0,
            cone_angle: PI / 2.0,
            monopole_samples: 2048,
        }
    }
}

pub fn twolevel(a: &TwoLevelArgs) -> Result<Table, CliError> {
    let lp = PlanarLoop::new(a.k, a.radius, a.samples, a.start_angle)?;
    let raw = loop_phase_factor(&lp)?;
    let gauge = GaugeFunction::new(0.5, 1)?;
    let mut b_max: f64 = 0.0;
    for s in 0..lp.samples {
        let theta = lp.angle(s);
        let point = [a.radius * theta.sin(), 0.0, a.radius * theta.cos()];
        let b = berry_field_real(planar_family, &point, 0, 1e-5 * a.radius)?;
        b_max = b.iter().fold(b_max, |m, x| m.max(x.abs()));
    }
    let mono = monopole_phase(a.cone_angle, a.monopole_samples)?;

    let mut t = Table::new([
        "k",
        "samples",
        "radius",
        "factor",
        "raw_product",
        "gauge_phase",
        "connection_integral",
        "monopole_cone_angle",
        "monopole_phase",
        "monopole_exact",
        "b_field_max_abs",
    ]);
    t.push(vec![
        Cell::Int(a.k),
        a.samples.into(),
        a.radius.into(),
        (if raw < 0.0 { -1 } else { 1 }).into(),
        raw.into(),
        gauge_phase(&gauge, &lp).into(),
        connection_line_integral(&gauge, &lp).into(),
        a.cone_angle.into(),
        mono.into(),
        (-PI * (1.0 - a.cone_angle.cos())).into(),
        b_max.into(),
    ]);
    Ok(t)
}

const BERRY_COLUMNS: [&str; 16] = [
    "U",
    "g",
    "path",
    "status",
    "factor",
    "abs_raw_product",
    "raw_product",
    "degeneracy_count",
    "parity_consistent",
    "switches",
    "min_step_overlap",
    "dynamic_phase_integral",
    "max_scf_iterations",
    "mean_scf_iterations",
    "samples",
    "message",
];

fn status(e: &berry_core::Error) -> &'static str {
    match core_exit_code(e) {
        3 => "scf_failure",
        4 => "resolution_failure",
        _ => "input_error",
    }
}

fn berry_row(u: f64, g: f64, path: &str, res: &Result<BerryResult, berry_core::Error>) -> Vec<Cell> {
    let head = vec![u.into(), g.into(), path.into()];
    let tail = match res {
        Ok(r) => vec![
            "ok".into(),
            r.factor.into(),
            r.raw_product.abs().into(),
            r.raw_product.into(),
            r.degeneracy_count.into(),
            r.parity_consistent.into(),
            r.switches.into(),
            r.min_step_overlap().into(),
            r.dynamic_phase_integral.into(),
            r.max_iterations().into(),
            r.mean_iterations().into(),
            r.samples.len().into(),
            Cell::Empty,
        ],
        Err(e) => {
            let mut v = vec![status(e).into()];
            v.extend(std::iter::repeat_n(Cell::Empty, 11));
            v.push(e.to_string().into());
            v
        }
    };
    head.into_iter().chain(tail).collect()
}

fn run_cell(rc: &RunConfig, model: &ModelParams, path: &PathChoice) -> Result<BerryResult, berry_core::Error> {
    let spec = path
        .resolve(&rc.lattice, rc.steps_per_segment)
        .map_err(|e| berry_core::Error::Input(e.to_string()))?;
    berry_factor(&rc.lattice, model, &spec, &rc.berry)
}

/// One Berry factor at the configured `U`, `g` and path.
pub fn path(rc: &RunConfig) -> (Table, Result<(), CliError>) {
    // Resolve first so a bad path name is a usage error rather than a failed row.
    if let Err(e) = rc.path.resolve(&rc.lattice, rc.steps_per_segment) {
        return (Table::new(BERRY_COLUMNS), Err(e));
    }
    let res = run_cell(rc, &rc.model, &rc.path);
    let mut t = Table::new(BERRY_COLUMNS);
    t.push(berry_row(rc.model.u, rc.model.g, rc.path.name(), &res));
    let outcome = res.map(|_| ()).map_err(CliError::Core);
    (t, outcome)
}

pub fn gap_profile(rc: &RunConfig, wide: bool) -> Result<Table, CliError> {
    let spec = rc.path.resolve(&rc.lattice, rc.profile_points)?;
    let trace = trace_path(&rc.lattice, &rc.model, &spec, &rc.berry)?;
    let mut columns: Vec<String> = [
        "arc_position",
        "tau_within_segment",
        "segment_index",
        "homo",
        "lumo",
        "gap",
        "energy",
        "hole_site",
        "switched",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    if wide {
        for sec in &trace.states[0].sectors {
            let tag = match sec.spin {
                SpinSector::Up => "up",
                SpinSector::Down => "down",
                SpinSector::Spinor => "spinor",
            };
            columns.extend((0..sec.spectrum.len()).map(|i| format!("{tag}_{i}")));
        }
    }
    let mut t = Table::new(columns);
    for (s, state) in trace.samples.iter().zip(&trace.states) {
        let mut row = vec![
            s.arc.into(),
            s.tau.into(),
            s.segment.into(),
            s.homo.into(),
            s.lumo.into(),
            s.gap.into(),
            s.energy.into(),
            s.hole_site.into(),
            s.switched.into(),
        ];
        if wide {
            for sec in &state.sectors {
                row.extend(sec.spectrum.iter().map(|&e| Cell::Float(e)));
            }
        }
        t.push(row);
    }
    let gaps: Vec<f64> = trace.samples.iter().map(|s| s.gap).collect();
    let n = gaps.len();
    let extrema = |pick: fn(f64, f64, f64) -> bool| -> String {
        (0..n)
            .filter(|&i| pick(gaps[(i + n - 1) % n], gaps[i], gaps[(i + 1) % n]))
            .map(|i| format!("{}", trace.samples[i].arc))
            .collect::<Vec<_>>()
            .join(" ")
    };
    t.footer.push(format!("gap_minima_at {}", extrema(|l, c, r| c < l && c <= r)));
    t.footer.push(format!("gap_maxima_at {}", extrema(|l, c, r| c > l && c >= r)));
    Ok(t)
}

/// Runs every `(U, g, path)` cell on a pool of `rc.workers` threads. Rows
/// come back sorted by `(U, g, path)`; the second value counts failed cells.
pub fn sweep(rc: &RunConfig) -> Result<(Table, usize), CliError> {
    if rc.sweep_u.is_empty() || rc.sweep_g.is_empty() || rc.sweep_paths.is_empty() {
        return Err(CliError::Usage("sweep grid is empty".into()));
    }
    for p in &rc.sweep_paths {
        p.resolve(&rc.lattice, rc.steps_per_segment)?;
    }
    let mut cells: Vec<(f64, f64, PathChoice)> = Vec::new();
    for &u in &rc.sweep_u {
        for &g in &rc.sweep_g {
            for p in &rc.sweep_paths {
                cells.push((u, g, p.clone()));
            }
        }
    }
    cells.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then_with(|| a.2.name().cmp(b.2.name()))
    });
    cells.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1 && a.2.name() == b.2.name());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(rc.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", rc.workers)))?;
    let results: Vec<Result<BerryResult, berry_core::Error>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(u, g, p)| {
                let model = ModelParams {
                    u: *u,
                    g: *g,
                    ..rc.model.clone()
                };
                run_cell(rc, &model, p)
            })
            .collect()
    });

    let mut t = Table::new(BERRY_COLUMNS);
    let mut failures = 0;
    for ((u, g, p), res) in cells.iter().zip(&results) {
        failures += usize::from(res.is_err());
        t.push(berry_row(*u, *g, p.name(), res));
    }
    t.footer = sign_boundaries(&cells, &results);
    Ok((t, failures))
}

/// For each path and `g`, brackets every change of factor between
/// consecutive successful `U` values and reports the bracket midpoint.
fn sign_boundaries(
    cells: &[(f64, f64, PathChoice)],
    results: &[Result<BerryResult, berry_core::Error>],
) -> Vec<String> {
    let mut keys: Vec<(String, f64)> = cells.iter().map(|(_, g, p)| (p.name().to_string(), *g)).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup();
    let mut lines = Vec::new();
    for (name, g) in keys {
        let series: Vec<(f64, i32)> = cells
            .iter()
            .zip(results)
            .filter(|((_, cg, p), _)| *cg == g && p.name() == name)
            .filter_map(|((u, _, _), r)| r.as_ref().ok().map(|r| (*u, r.factor)))
            .collect();
        let flips: Vec<String> = series
            .windows(2)
            .filter(|w| w[0].1 != w[1].1)
            .map(|w| {
                format!(
                    "U in ({}, {}) estimate {}",
                    w[0].0,
                    w[1].0,
                    0.5 * (w[0].0 + w[1].0)
                )
            })
            .collect();
        let body = if flips.is_empty() {
            "no sign change".to_string()
        } else {
            flips.join("; ")
        };
        lines.push(format!("sign_boundary path={name} g={g}: {body}"));
    }
    lines
}

pub fn catalog(geom: &LatticeGeometry) -> Table {
    let mut t = Table::new(["name", "segments", "sites"]);
    for (name, coords) in CATALOG {
        let sites: Vec<String> = coords
            .iter()
            .map(|c| {
                let (x, y) = geom.coords(geom.index(c[0], c[1]));
                format!("({x},{y})")
            })
            .collect();
        t.push(vec![(*name).into(), coords.len().into(), sites.join("->").into()]);
    }
    t
}
