//! Overlap products of mean-field ground states around closed distortion
//! loops, gap profiles and degenerate-point counting.
//!
//! Each sample on a segment keeps the lowest-energy self-consistent solution
//! reached from three seeds: the previous sample's densities and the two
//! vertex solutions of the segment. A different seed wins only if it lowers
//! the energy by more than `switch_margin`, so near-ties stay on the current
//! branch.

use crate::error::{Error, Result};
use crate::lattice::{
    breathing_displacement, interpolate_segment, DisplacementField, LatticeGeometry, PathSpec,
};
use crate::meanfield::{
    homo_lumo_gap, scf_solve, GapSector, MeanFieldDensities, ModelParams, ScfOptions,
    ScfSolution, SlaterState,
};
use crate::numerics::{det, occupied_overlap};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchSelection {
    /// Lowest energy among continuation and vertex seeds.
    #[default]
    GroundState,
    /// Previous sample's densities only.
    Continuation,
}

impl std::str::FromStr for BranchSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground-state" => Ok(Self::GroundState),
            "continuation" => Ok(Self::Continuation),
            other => Err(Error::Input(format!("unknown branch selection {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BerryOptions {
    pub scf: ScfOptions,
    pub selection: BranchSelection,
    pub switch_margin: f64,
    /// Smallest admissible `|⟨k|k−1⟩|` for a single step.
    pub min_step_overlap: f64,
    /// Minimum depth of a counted gap minimum, as a fraction of the largest gap.
    pub degeneracy_frac: f64,
    pub gap_sector: GapSector,
}

impl Default for BerryOptions {
    fn default() -> Self {
        Self {
            scf: ScfOptions::default(),
            selection: BranchSelection::GroundState,
            switch_margin: 1e-7,
            min_step_overlap: 0.1,
            degeneracy_frac: 0.2,
            gap_sector: GapSector::Global,
        }
    }
}

/// One converged point on the loop.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSample {
    pub segment: usize,
    pub tau: f64,
    /// `segment + tau`.
    pub arc: f64,
    pub energy: f64,
    pub homo: f64,
    pub lumo: f64,
    pub gap: f64,
    pub iterations: usize,
    pub residual: f64,
    /// True when a vertex seed beat the continuation seed here.
    pub switched: bool,
    pub ambiguous_filling: bool,
    /// Site with the largest hole density `1 − n(i)`.
    pub hole_site: usize,
    /// `Σ_i n(i)`.
    pub electron_count: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathTrace {
    pub samples: Vec<PathSample>,
    pub states: Vec<SlaterState>,
}

impl PathTrace {
    pub fn switches(&self) -> usize {
        self.samples.iter().filter(|s| s.switched).count()
    }

    pub fn gap_profile(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.arc, s.gap)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerryResult {
    pub raw_product: f64,
    pub factor: i32,
    /// `⟨k|k−1⟩` for every step, closure last.
    pub overlap_trace: Vec<f64>,
    pub samples: Vec<PathSample>,
    pub degeneracy_count: usize,
    /// `Σ E_total Δτ` over the loop, with `Δτ = 1/N_s`.
    pub dynamic_phase_integral: f64,
    pub parity_consistent: bool,
    pub switches: usize,
}

impl BerryResult {
    pub fn gap_profile(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.arc, s.gap)).collect()
    }

    pub fn max_iterations(&self) -> usize {
        self.samples.iter().map(|s| s.iterations).max().unwrap_or(0)
    }

    pub fn mean_iterations(&self) -> f64 {
        let total: usize = self.samples.iter().map(|s| s.iterations).sum();
        total as f64 / self.samples.len().max(1) as f64
    }

    pub fn min_step_overlap(&self) -> f64 {
        self.overlap_trace.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()))
    }
}

/// `⟨a|b⟩` for Slater determinants: the product over spin blocks of
/// `det(occupied_overlap)`.
pub fn slater_overlap(a: &SlaterState, b: &SlaterState) -> Result<f64> {
    if a.sectors.len() != b.sectors.len() {
        return Err(Error::Input("states have different spin blocks".into()));
    }
    let mut prod = 1.0;
    for (sa, sb) in a.sectors.iter().zip(&b.sectors) {
        if sa.spin != sb.spin || sa.occupied() != sb.occupied() {
            return Err(Error::Input(format!(
                "occupations differ: {:?}x{} vs {:?}x{}",
                sa.spin,
                sa.occupied(),
                sb.spin,
                sb.occupied()
            )));
        }
        prod *= det(&occupied_overlap(&sa.orbitals, &sb.orbitals)?)?;
    }
    Ok(prod)
}

/// Step overlaps `⟨s_k|s_{k−1}⟩` for `k = 1…n−1` followed by the closure `⟨s_0|s_{n−1}⟩`.
pub fn overlap_chain(states: &[SlaterState]) -> Result<Vec<f64>> {
    let n = states.len();
    (0..n)
        .map(|k| slater_overlap(&states[(k + 1) % n], &states[k]))
        .collect()
}

/// Selected states this close to the continuation result count as the same branch.
const SAME_STATE_OVERLAP: f64 = 0.999;

/// Néel seed whose majority spin on `site` matches the spin of the hole.
pub fn vertex_seed(geom: &LatticeGeometry, p: &ModelParams, site: usize) -> MeanFieldDensities {
    let hole_is_up = p.n_up <= p.n_down;
    let phase = geom.stagger(site) * if hole_is_up { 1.0 } else { -1.0 };
    MeanFieldDensities::neel(geom, p, phase)
}

fn sample_info(sol: &ScfSolution, segment: usize, tau: f64, switched: bool, sector: GapSector) -> PathSample {
    let gap = homo_lumo_gap(&sol.state, sector);
    let (homo, lumo) = match sector {
        GapSector::Global => {
            let lumo = sol.state.sectors.iter().map(|s| s.lumo()).fold(f64::INFINITY, f64::min);
            let homo = sol.state.sectors.iter().map(|s| s.homo()).fold(f64::NEG_INFINITY, f64::max);
            (homo, lumo)
        }
        GapSector::Up | GapSector::Down => {
            let spin = if sector == GapSector::Up {
                crate::meanfield::SpinSector::Up
            } else {
                crate::meanfield::SpinSector::Down
            };
            let sec = sol.state.sector(spin).unwrap_or(&sol.state.sectors[0]);
            (sec.homo(), sec.lumo())
        }
    };
    let n = &sol.densities.n;
    let hole_site = (0..n.len()).fold(0, |b, i| if n[i] < n[b] { i } else { b });
    PathSample {
        segment,
        tau,
        arc: segment as f64 + tau,
        energy: sol.state.e_total,
        homo,
        lumo,
        gap,
        iterations: sol.report.iterations,
        residual: sol.report.residual,
        switched,
        ambiguous_filling: sol.report.ambiguous_filling,
        hole_site,
        electron_count: n.iter().sum(),
    }
}

/// Solves the mean-field ground state at every sample `τ_j = j/N_s` of every segment.
pub fn trace_path(
    geom: &LatticeGeometry,
    p: &ModelParams,
    path: &PathSpec,
    opts: &BerryOptions,
) -> Result<PathTrace> {
    p.validate(geom)?;
    let fields: Vec<DisplacementField> = path
        .sites
        .iter()
        .map(|&s| breathing_displacement(geom, s, p.d))
        .collect::<Result<_>>()?;
    let nseg = path.segment_count();
    let ns = path.steps_per_segment;

    let mut vertices = Vec::with_capacity(nseg);
    for (k, &site) in path.sites.iter().enumerate() {
        let sol = scf_solve(geom, p, &fields[k], &vertex_seed(geom, p, site), &opts.scf).map_err(|e| {
            Error::PathFailure {
                sample: k * ns,
                segment: k,
                tau: 0.0,
                source: Box::new(e),
            }
        })?;
        vertices.push(sol.densities);
    }

    let mut samples = Vec::with_capacity(nseg * ns);
    let mut states = Vec::with_capacity(nseg * ns);
    let mut seed = vertices[0].clone();
    for seg in 0..nseg {
        let next = (seg + 1) % nseg;
        for tau in path.taus() {
            let field = interpolate_segment(&fields[seg], &fields[next], tau)?;
            let sample = samples.len();
            let fail = |e: Error| Error::PathFailure {
                sample,
                segment: seg,
                tau,
                source: Box::new(e),
            };

            let mut best = scf_solve(geom, p, &field, &seed, &opts.scf);
            let continuation = best.as_ref().ok().map(|s| s.state.clone());
            let mut switched = false;
            if opts.selection == BranchSelection::GroundState {
                for cand in [&vertices[seg], &vertices[next]] {
                    if *cand == seed {
                        continue;
                    }
                    let Ok(sol) = scf_solve(geom, p, &field, cand, &opts.scf) else {
                        continue;
                    };
                    let better = match &best {
                        Ok(b) => sol.state.e_total < b.state.e_total - opts.switch_margin,
                        Err(_) => true,
                    };
                    if better {
                        // A lower-energy copy of the continuation state is not a branch change.
                        switched = match &continuation {
                            Some(c) => slater_overlap(&sol.state, c)?.abs() < SAME_STATE_OVERLAP,
                            None => true,
                        };
                        best = Ok(sol);
                    }
                }
            }
            let sol = best.map_err(fail)?;
            if sample == 0 {
                switched = false;
            }
            samples.push(sample_info(&sol, seg, tau, switched, opts.gap_sector));
            seed = sol.densities;
            states.push(sol.state);
        }
    }
    Ok(PathTrace { samples, states })
}

pub fn berry_factor(
    geom: &LatticeGeometry,
    p: &ModelParams,
    path: &PathSpec,
    opts: &BerryOptions,
) -> Result<BerryResult> {
    if path.steps_per_segment < 8 {
        return Err(Error::Input(format!(
            "need at least 8 steps per segment, got {}",
            path.steps_per_segment
        )));
    }
    let trace = trace_path(geom, p, path, opts)?;
    let overlaps = overlap_chain(&trace.states)?;
    for (step, &ov) in overlaps.iter().enumerate() {
        if ov.abs() < opts.min_step_overlap {
            return Err(Error::Resolution {
                step,
                overlap: ov,
                threshold: opts.min_step_overlap,
            });
        }
    }
    let raw_product: f64 = overlaps.iter().product();
    if raw_product == 0.0 || !raw_product.is_finite() {
        return Err(Error::Resolution {
            step: overlaps.len() - 1,
            overlap: raw_product,
            threshold: opts.min_step_overlap,
        });
    }
    let gaps: Vec<f64> = trace.samples.iter().map(|s| s.gap).collect();
    let degeneracy_count = count_degenerate_points(&gaps, default_threshold(&gaps, opts.degeneracy_frac))?;
    let factor = if raw_product < 0.0 { -1 } else { 1 };
    let dtau = 1.0 / path.steps_per_segment as f64;
    let switches = trace.switches();
    let mut result = BerryResult {
        raw_product,
        factor,
        overlap_trace: overlaps,
        dynamic_phase_integral: trace.samples.iter().map(|s| s.energy * dtau).sum(),
        samples: trace.samples,
        degeneracy_count,
        parity_consistent: false,
        switches,
    };
    result.parity_consistent = parity_check(&result);
    Ok(result)
}

/// Gap profile on the path's own grid; pass a path with an even step count
/// to sample the segment midpoints exactly.
pub fn gap_profile(
    geom: &LatticeGeometry,
    p: &ModelParams,
    path: &PathSpec,
    opts: &BerryOptions,
) -> Result<Vec<PathSample>> {
    Ok(trace_path(geom, p, path, opts)?.samples)
}

pub fn default_threshold(profile: &[f64], frac: f64) -> f64 {
    frac * profile.iter().fold(0.0, |m: f64, x| m.max(*x))
}

/// Counts local minima of a cyclic profile whose depth below the lower of
/// the two flanking maxima is at least `threshold`. Runs of equal values
/// (within 1e−12) count as one point.
pub fn count_degenerate_points(profile: &[f64], threshold: f64) -> Result<usize> {
    if profile.is_empty() {
        return Err(Error::Input("empty gap profile".into()));
    }
    let mut runs: Vec<f64> = Vec::new();
    for &v in profile {
        if runs.last().is_none_or(|&last| (v - last).abs() > 1e-12) {
            runs.push(v);
        }
    }
    if runs.len() > 1 && (runs[0] - runs[runs.len() - 1]).abs() <= 1e-12 {
        runs.pop();
    }
    let n = runs.len();
    if n < 3 {
        return Ok(0);
    }
    let at = |i: isize| runs[i.rem_euclid(n as isize) as usize];
    let mut count = 0;
    for i in 0..n as isize {
        let v = at(i);
        if !(v < at(i - 1) && v < at(i + 1)) {
            continue;
        }
        let mut l = i - 1;
        while at(l - 1) > at(l) && l > i - n as isize {
            l -= 1;
        }
        let mut r = i + 1;
        while at(r + 1) > at(r) && r < i + n as isize {
            r += 1;
        }
        if at(l).min(at(r)) - v >= threshold {
            count += 1;
        }
    }
    Ok(count)
}

/// `factor == (−1)^k`.
pub fn parity_check(r: &BerryResult) -> bool {
    let expected = if r.degeneracy_count.is_multiple_of(2) { 1 } else { -1 };
    r.factor == expected
}
