//! Periodic square lattice, oxygen displacement fields, Holstein coordinates
//! and closed loops of breathing distortions.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeGeometry {
    lx: usize,
    ly: usize,
}

impl Default for LatticeGeometry {
    fn default() -> Self {
        Self { lx: 4, ly: 4 }
    }
}

impl LatticeGeometry {
    /// Both extents must be at least 3 so that every site has four distinct neighbours.
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        if lx < 3 || ly < 3 {
            return Err(Error::Input(format!("lattice {lx}x{ly} is too small (min 3x3)")));
        }
        Ok(Self { lx, ly })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn n_sites(&self) -> usize {
        self.lx * self.ly
    }

    /// Row-major index of `(ix, iy)`, wrapped periodically.
    pub fn index(&self, ix: i64, iy: i64) -> usize {
        let x = ix.rem_euclid(self.lx as i64) as usize;
        let y = iy.rem_euclid(self.ly as i64) as usize;
        y * self.lx + x
    }

    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site % self.lx, site / self.lx)
    }

    pub fn shift(&self, site: usize, dx: i64, dy: i64) -> usize {
        let (x, y) = self.coords(site);
        self.index(x as i64 + dx, y as i64 + dy)
    }

    /// Neighbours in the order `+x, −x, +y, −y`.
    pub fn neighbours(&self, site: usize) -> [usize; 4] {
        [
            self.shift(site, 1, 0),
            self.shift(site, -1, 0),
            self.shift(site, 0, 1),
            self.shift(site, 0, -1),
        ]
    }

    /// Each nearest-neighbour bond once, as `(i, i+x̂)` and `(i, i+ŷ)`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        (0..self.n_sites())
            .flat_map(|i| [(i, self.shift(i, 1, 0)), (i, self.shift(i, 0, 1))])
            .collect()
    }

    /// Néel sublattice sign `(−1)^{ix+iy}`.
    pub fn stagger(&self, site: usize) -> f64 {
        let (x, y) = self.coords(site);
        if (x + y) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites() {
            return Err(Error::Input(format!(
                "site {site} outside a {}-site lattice",
                self.n_sites()
            )));
        }
        Ok(())
    }
}

/// Oxygen displacements `Δ^x_i`, `Δ^y_i` in lattice-constant units.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementField {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

impl DisplacementField {
    pub fn zeros(geom: &LatticeGeometry) -> Self {
        Self {
            dx: vec![0.0; geom.n_sites()],
            dy: vec![0.0; geom.n_sites()],
        }
    }

    pub fn len(&self) -> usize {
        self.dx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dx.is_empty()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let mix = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| a * x + b * y).collect();
        Self {
            dx: mix(&self.dx, &other.dx),
            dy: mix(&self.dy, &other.dy),
        }
    }

    /// Field moved rigidly by the lattice vector `(tx, ty)`.
    pub fn translate(&self, geom: &LatticeGeometry, tx: i64, ty: i64) -> Self {
        let mut out = Self::zeros(geom);
        for i in 0..geom.n_sites() {
            let j = geom.shift(i, tx, ty);
            out.dx[j] = self.dx[i];
            out.dy[j] = self.dy[i];
        }
        out
    }
}

/// Four oxygens around `center` displaced by `d` towards it.
pub fn breathing_displacement(
    geom: &LatticeGeometry,
    center: usize,
    amplitude: f64,
) -> Result<DisplacementField> {
    geom.check_site(center)?;
    let mut f = DisplacementField::zeros(geom);
    f.dx[center] = -amplitude;
    f.dx[geom.shift(center, -1, 0)] = amplitude;
    f.dy[center] = -amplitude;
    f.dy[geom.shift(center, 0, -1)] = amplitude;
    Ok(f)
}

/// `R_i = Δ^x_i − Δ^x_{i−x̂} + Δ^y_i − Δ^y_{i−ŷ}`.
pub fn holstein_coordinate(geom: &LatticeGeometry, f: &DisplacementField) -> Vec<f64> {
    (0..geom.n_sites())
        .map(|i| {
            f.dx[i] - f.dx[geom.shift(i, -1, 0)] + f.dy[i] - f.dy[geom.shift(i, 0, -1)]
        })
        .collect()
}

pub fn elastic_energy(f: &DisplacementField, k: f64) -> f64 {
    let sq: f64 = f.dx.iter().chain(&f.dy).map(|x| x * x).sum();
    0.5 * k * sq
}

pub fn interpolate_segment(
    a: &DisplacementField,
    b: &DisplacementField,
    tau: f64,
) -> Result<DisplacementField> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Input(format!("tau {tau} outside [0, 1]")));
    }
    if a.len() != b.len() {
        return Err(Error::Input("displacement fields differ in size".into()));
    }
    Ok(a.combine(1.0 - tau, b, tau))
}

/// A closed loop of breathing centres; segment `s` runs from `sites[s]` to
/// `sites[(s+1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    pub name: String,
    pub sites: Vec<usize>,
    pub steps_per_segment: usize,
}

impl PathSpec {
    pub fn new(
        geom: &LatticeGeometry,
        name: impl Into<String>,
        sites: Vec<usize>,
        steps_per_segment: usize,
    ) -> Result<Self> {
        if sites.len() < 3 {
            return Err(Error::Input(format!(
                "a loop needs at least 3 sites, got {}; a 2-site loop retraces itself",
                sites.len()
            )));
        }
        for &s in &sites {
            geom.check_site(s)?;
        }
        for k in 0..sites.len() {
            if sites[k] == sites[(k + 1) % sites.len()] {
                return Err(Error::Input(format!("segment {k} starts and ends at site {}", sites[k])));
            }
        }
        if steps_per_segment == 0 {
            return Err(Error::Input("steps per segment must be positive".into()));
        }
        Ok(Self {
            name: name.into(),
            sites,
            steps_per_segment,
        })
    }

    /// Builds a path from `[ix, iy]` pairs.
    pub fn from_coords(
        geom: &LatticeGeometry,
        name: impl Into<String>,
        coords: &[[i64; 2]],
        steps_per_segment: usize,
    ) -> Result<Self> {
        for c in coords {
            if c[0] < 0 || c[1] < 0 || c[0] >= geom.lx() as i64 || c[1] >= geom.ly() as i64 {
                return Err(Error::Input(format!("site {c:?} outside the lattice")));
            }
        }
        let sites = coords.iter().map(|c| geom.index(c[0], c[1])).collect();
        Self::new(geom, name, sites, steps_per_segment)
    }

    pub fn segment_count(&self) -> usize {
        self.sites.len()
    }

    pub fn segment_ends(&self, segment: usize) -> (usize, usize) {
        (self.sites[segment], self.sites[(segment + 1) % self.sites.len()])
    }

    /// Sample offsets `τ_j = j/N_s`, `j = 0…N_s−1`, within each segment.
    pub fn taus(&self) -> Vec<f64> {
        (0..self.steps_per_segment)
            .map(|j| j as f64 / self.steps_per_segment as f64)
            .collect()
    }

    /// Segment midpoints as positions along the loop (`segment + 0.5`).
    pub fn midpoints(&self) -> Vec<f64> {
        (0..self.segment_count()).map(|s| s as f64 + 0.5).collect()
    }

    pub fn coords(&self, geom: &LatticeGeometry) -> Vec<[i64; 2]> {
        self.sites
            .iter()
            .map(|&s| {
                let (x, y) = geom.coords(s);
                [x as i64, y as i64]
            })
            .collect()
    }
}

/// Named loops. `triangle` and `square` stay on one Néel sublattice with
/// diagonal legs; `triangle-nn` and `plaquette` use nearest-neighbour legs.
pub const CATALOG: &[(&str, &[[i64; 2]])] = &[
    ("triangle", &[[0, 0], [1, 1], [2, 0]]),
    ("square", &[[0, 0], [1, 1], [2, 0], [1, 3]]),
    ("triangle-nn", &[[0, 0], [1, 0], [1, 1]]),
    ("plaquette", &[[0, 0], [1, 0], [1, 1], [0, 1]]),
];

pub fn path_catalog(geom: &LatticeGeometry, name: &str, steps_per_segment: usize) -> Result<PathSpec> {
    let (_, coords) = CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownPath(name.to_string()))?;
    // Wrap rather than reject so catalog loops exist on any lattice size.
    let sites = coords.iter().map(|c| geom.index(c[0], c[1])).collect();
    PathSpec::new(geom, name, sites, steps_per_segment)
}
