//! Hartree-Fock decoupling of the Holstein-Hubbard model at fixed lattice
//! distortion, with a linear-mixing self-consistency loop.
//!
//! Collinear mode keeps the two spin sectors separate (two `N×N` blocks).
//! Noncollinear mode works with `2N` spin-orbitals ordered `(0↑…N−1↑, 0↓…N−1↓)`
//! and keeps the transverse `⟨S_±⟩` fields.

use crate::error::{Error, Result};
use crate::lattice::{elastic_energy, DisplacementField, LatticeGeometry};
use crate::numerics::{eig_sym, OrbitalSet, SymmetricMatrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecouplingMode {
    #[default]
    Collinear,
    Noncollinear,
}

impl std::str::FromStr for DecouplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collinear" => Ok(Self::Collinear),
            "noncollinear" => Ok(Self::Noncollinear),
            other => Err(Error::Input(format!("unknown decoupling mode {other:?}"))),
        }
    }
}

/// Couplings in units of `t`; `d` in lattice constants.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub t: f64,
    pub u: f64,
    pub g: f64,
    pub k: f64,
    pub d: f64,
    pub mode: DecouplingMode,
    pub n_up: usize,
    pub n_down: usize,
}

impl Default for ModelParams {
    /// One spin-up hole in a half-filled 4×4 cell.
    fn default() -> Self {
        Self {
            t: 1.0,
            u: 6.0,
            g: 6.0,
            k: 1.0,
            d: 0.1,
            mode: DecouplingMode::Collinear,
            n_up: 7,
            n_down: 8,
        }
    }
}

impl ModelParams {
    pub fn validate(&self, geom: &LatticeGeometry) -> Result<()> {
        let all = [self.t, self.u, self.g, self.k, self.d];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("model parameters must be finite".into()));
        }
        if self.t <= 0.0 {
            return Err(Error::Input(format!("t must be positive, got {}", self.t)));
        }
        if self.u < 0.0 || self.g < 0.0 || self.k < 0.0 {
            return Err(Error::Input("U, g and K must be non-negative".into()));
        }
        let n = geom.n_sites();
        if self.n_up > n || self.n_down > n {
            return Err(Error::Input(format!(
                "filling {}up/{}down does not fit {n} sites",
                self.n_up, self.n_down
            )));
        }
        Ok(())
    }

    pub fn electrons(&self) -> usize {
        self.n_up + self.n_down
    }
}

/// Site-resolved `⟨n⟩`, `⟨S_z⟩`, `⟨S_+⟩`, `⟨S_−⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanFieldDensities {
    pub n: Vec<f64>,
    pub sz: Vec<f64>,
    pub sp: Vec<f64>,
    pub sm: Vec<f64>,
}

impl MeanFieldDensities {
    /// Uniform charge with a staggered moment `⟨S_z(i)⟩ = phase·0.4·(−1)^{ix+iy}`.
    pub fn neel(geom: &LatticeGeometry, p: &ModelParams, phase: f64) -> Self {
        let ns = geom.n_sites();
        let n0 = p.electrons() as f64 / ns as f64;
        let amp = 0.4f64.min(n0 / 2.0).min(1.0 - n0 / 2.0);
        Self {
            n: vec![n0; ns],
            sz: (0..ns).map(|i| phase * amp * geom.stagger(i)).collect(),
            sp: vec![0.0; ns],
            sm: vec![0.0; ns],
        }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    pub fn validate(&self, sites: usize) -> Result<()> {
        if [&self.n, &self.sz, &self.sp, &self.sm].iter().any(|v| v.len() != sites) {
            return Err(Error::Input(format!("densities must cover {sites} sites")));
        }
        for i in 0..sites {
            let (n, sz) = (self.n[i], self.sz[i]);
            if !(n.is_finite() && sz.is_finite() && self.sp[i].is_finite() && self.sm[i].is_finite()) {
                return Err(Error::Input(format!("non-finite density at site {i}")));
            }
            if !(-1e-12..=2.0 + 1e-12).contains(&n) || sz.abs() > n / 2.0 + 1e-12 {
                return Err(Error::Input(format!("unphysical density at site {i}: n={n}, sz={sz}")));
            }
        }
        Ok(())
    }

    pub fn staggered_magnetization(&self, geom: &LatticeGeometry) -> f64 {
        self.sz
            .iter()
            .enumerate()
            .map(|(i, s)| geom.stagger(i) * s)
            .sum::<f64>()
            / self.len() as f64
    }

    /// Largest componentwise change between two density sets.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let pairs = [
            (&self.n, &other.n),
            (&self.sz, &other.sz),
            (&self.sp, &other.sp),
            (&self.sm, &other.sm),
        ];
        pairs
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    fn mix(&self, other: &Self, alpha: f64) -> Self {
        let m = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| (1.0 - alpha) * x + alpha * y).collect()
        };
        Self {
            n: m(&self.n, &other.n),
            sz: m(&self.sz, &other.sz),
            sp: m(&self.sp, &other.sp),
            sm: m(&self.sm, &other.sm),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HfHamiltonian {
    Collinear {
        up: SymmetricMatrix,
        down: SymmetricMatrix,
    },
    Noncollinear(SymmetricMatrix),
}

fn hopping(geom: &LatticeGeometry, t: f64, offset: usize, h: &mut SymmetricMatrix) {
    for (i, j) in geom.bonds() {
        let v = h.get(offset + i, offset + j) - t;
        h.set(offset + i, offset + j, v);
    }
}

pub fn build_hf_hamiltonian(
    geom: &LatticeGeometry,
    p: &ModelParams,
    r: &[f64],
    dens: &MeanFieldDensities,
) -> Result<HfHamiltonian> {
    let ns = geom.n_sites();
    if r.len() != ns || dens.len() != ns {
        return Err(Error::Input("Holstein coordinates or densities have the wrong length".into()));
    }
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("Holstein coordinates must be finite".into()));
    }
    let onsite = |i: usize, spin: f64| -p.g * r[i] + p.u * (0.5 * dens.n[i] - spin * dens.sz[i]);
    match p.mode {
        DecouplingMode::Collinear => {
            let mut up = SymmetricMatrix::zeros(ns);
            let mut down = SymmetricMatrix::zeros(ns);
            hopping(geom, p.t, 0, &mut up);
            hopping(geom, p.t, 0, &mut down);
            for i in 0..ns {
                up.add_diagonal(i, onsite(i, 1.0));
                down.add_diagonal(i, onsite(i, -1.0));
            }
            Ok(HfHamiltonian::Collinear { up, down })
        }
        DecouplingMode::Noncollinear => {
            let mut h = SymmetricMatrix::zeros(2 * ns);
            hopping(geom, p.t, 0, &mut h);
            hopping(geom, p.t, ns, &mut h);
            for i in 0..ns {
                h.add_diagonal(i, onsite(i, 1.0));
                h.add_diagonal(ns + i, onsite(i, -1.0));
                // Real orbitals make ⟨S_+⟩ = ⟨S_−⟩; the average keeps H exactly symmetric.
                h.set(i, ns + i, -p.u * 0.5 * (dens.sm[i] + dens.sp[i]));
            }
            Ok(HfHamiltonian::Noncollinear(h))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinSector {
    Up,
    Down,
    Spinor,
}

/// Occupied orbitals and full spectrum of one block of the HF Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorState {
    pub spin: SpinSector,
    pub orbitals: OrbitalSet,
    pub spectrum: Vec<f64>,
}

impl SectorState {
    pub fn occupied(&self) -> usize {
        self.orbitals.count()
    }

    pub fn homo(&self) -> f64 {
        match self.occupied() {
            0 => f64::NEG_INFINITY,
            k => self.spectrum[k - 1],
        }
    }

    pub fn lumo(&self) -> f64 {
        self.spectrum.get(self.occupied()).copied().unwrap_or(f64::INFINITY)
    }

    pub fn band_energy(&self) -> f64 {
        self.spectrum[..self.occupied()].iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlaterState {
    pub sectors: Vec<SectorState>,
    pub e_total: f64,
}

impl SlaterState {
    pub fn sector(&self, spin: SpinSector) -> Option<&SectorState> {
        self.sectors.iter().find(|s| s.spin == spin)
    }

    pub fn band_energy(&self) -> f64 {
        self.sectors.iter().map(SectorState::band_energy).sum()
    }
}

/// Aufbau fill of each block; degenerate Fermi levels are filled in eigensolver order.
pub fn fill(h: &HfHamiltonian, p: &ModelParams) -> Result<Vec<SectorState>> {
    let sector = |m: &SymmetricMatrix, count: usize, spin| -> Result<SectorState> {
        let es = eig_sym(m)?;
        Ok(SectorState {
            spin,
            orbitals: es.lowest(count),
            spectrum: es.values,
        })
    };
    match h {
        HfHamiltonian::Collinear { up, down } => Ok(vec![
            sector(up, p.n_up, SpinSector::Up)?,
            sector(down, p.n_down, SpinSector::Down)?,
        ]),
        HfHamiltonian::Noncollinear(m) => Ok(vec![sector(m, p.electrons(), SpinSector::Spinor)?]),
    }
}

pub fn densities_from_state(sites: usize, s: &SlaterState) -> MeanFieldDensities {
    densities_from_sectors(sites, &s.sectors)
}

fn densities_from_sectors(ns: usize, sectors: &[SectorState]) -> MeanFieldDensities {
    let mut up = vec![0.0; ns];
    let mut down = vec![0.0; ns];
    let mut flip = vec![0.0; ns];
    for sec in sectors {
        for phi in sec.orbitals.orbitals() {
            match sec.spin {
                SpinSector::Up => up.iter_mut().zip(phi).for_each(|(u, x)| *u += x * x),
                SpinSector::Down => down.iter_mut().zip(phi).for_each(|(d, x)| *d += x * x),
                SpinSector::Spinor => {
                    for i in 0..ns {
                        up[i] += phi[i] * phi[i];
                        down[i] += phi[ns + i] * phi[ns + i];
                        flip[i] += phi[i] * phi[ns + i];
                    }
                }
            }
        }
    }
    MeanFieldDensities {
        n: up.iter().zip(&down).map(|(u, d)| u + d).collect(),
        sz: up.iter().zip(&down).map(|(u, d)| 0.5 * (u - d)).collect(),
        sp: flip.clone(),
        sm: flip,
    }
}

/// `U Σ_i [S_z² + S_+S_− − n²/4]`.
pub fn double_counting(u: f64, dens: &MeanFieldDensities) -> f64 {
    let sum: f64 = (0..dens.len())
        .map(|i| dens.sz[i] * dens.sz[i] + dens.sp[i] * dens.sm[i] - 0.25 * dens.n[i] * dens.n[i])
        .sum();
    u * sum
}

/// Occupied orbital energies plus the constant mean-field term plus the elastic energy.
pub fn total_energy(
    s: &SlaterState,
    dens: &MeanFieldDensities,
    p: &ModelParams,
    f: &DisplacementField,
) -> f64 {
    s.band_energy() + double_counting(p.u, dens) + elastic_energy(f, p.k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScfOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub mixing: f64,
    /// Fermi-level gaps below this flag the filling as ambiguous.
    pub gap_floor: f64,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 500,
            mixing: 0.5,
            gap_floor: 1e-9,
        }
    }
}

impl ScfOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 || !(self.mixing > 0.0 && self.mixing <= 1.0) {
            return Err(Error::Input(format!("invalid SCF options {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScfReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub energy_history: Vec<f64>,
    pub final_mixing: f64,
    pub ambiguous_filling: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScfSolution {
    pub state: SlaterState,
    pub densities: MeanFieldDensities,
    pub report: ScfReport,
}

// A non-decaying sign alternation of the last three energy steps.
fn oscillating(history: &[f64]) -> bool {
    if history.len() < 4 {
        return false;
    }
    let h = &history[history.len() - 4..];
    let d: Vec<f64> = h.windows(2).map(|w| w[1] - w[0]).collect();
    d[0] * d[1] < 0.0 && d[1] * d[2] < 0.0 && d[2].abs() >= d[0].abs()
}

pub fn scf_solve(
    geom: &LatticeGeometry,
    p: &ModelParams,
    f: &DisplacementField,
    init: &MeanFieldDensities,
    opts: &ScfOptions,
) -> Result<ScfSolution> {
    p.validate(geom)?;
    opts.validate()?;
    let ns = geom.n_sites();
    init.validate(ns)?;
    let r = crate::lattice::holstein_coordinate(geom, f);

    let mut dens = init.clone();
    let mut alpha = opts.mixing;
    let mut history = Vec::new();
    let mut best = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let h = build_hf_hamiltonian(geom, p, &r, &dens)?;
        let sectors = fill(&h, p)?;
        let band: f64 = sectors.iter().map(SectorState::band_energy).sum();
        history.push(band + double_counting(p.u, &dens) + elastic_energy(f, p.k));
        let out = densities_from_sectors(ns, &sectors);
        // Without U the Hamiltonian ignores the densities, so one fill is the fixed point.
        let residual = if p.u == 0.0 { 0.0 } else { out.max_diff(&dens) };
        best = best.min(residual);
        if residual <= opts.tol {
            let ambiguous_filling = sectors
                .iter()
                .any(|s| s.lumo() - s.homo() < opts.gap_floor);
            let mut state = SlaterState {
                sectors,
                e_total: 0.0,
            };
            state.e_total = total_energy(&state, &out, p, f);
            return Ok(ScfSolution {
                state,
                densities: out,
                report: ScfReport {
                    iterations: iter,
                    residual,
                    converged: true,
                    energy_history: history,
                    final_mixing: alpha,
                    ambiguous_filling,
                },
            });
        }
        if residual > 100.0 * opts.tol && oscillating(&history) {
            alpha = (alpha / 2.0).max(opts.mixing / 64.0);
        }
        dens = dens.mix(&out, alpha);
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: best,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapSector {
    Up,
    Down,
    Global,
}

/// LUMO − HOMO. In noncollinear mode every request uses the single spinor block.
pub fn homo_lumo_gap(s: &SlaterState, which: GapSector) -> f64 {
    let pick = match which {
        GapSector::Up => s.sector(SpinSector::Up),
        GapSector::Down => s.sector(SpinSector::Down),
        GapSector::Global => None,
    };
    match pick {
        Some(sec) => sec.lumo() - sec.homo(),
        None => {
            let lumo = s.sectors.iter().map(SectorState::lumo).fold(f64::INFINITY, f64::min);
            let homo = s.sectors.iter().map(SectorState::homo).fold(f64::NEG_INFINITY, f64::max);
            lumo - homo
        }
    }
}
