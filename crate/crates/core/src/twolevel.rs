//! Two-level models: the real planar `σ·R` family, gauge phases, the
//! vanishing curvature of real eigenstates, and the complex monopole loop.
//!
//! Complex arithmetic is confined to this module.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{dot, eig_sym, Matrix, SymmetricMatrix};

/// Gap below which a sample counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Closed circle `θ(s) = θ₀ + 2πk·s/N` in the `(R₁, R₃)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarLoop {
    pub winding: i64,
    pub radius: f64,
    pub samples: usize,
    pub start_angle: f64,
}

impl PlanarLoop {
    pub fn new(winding: i64, radius: f64, samples: usize, start_angle: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::DegenerateFamily(format!("radius must be positive, got {radius}")));
        }
        if samples < 8 {
            return Err(Error::Input(format!("need at least 8 samples, got {samples}")));
        }
        if !start_angle.is_finite() {
            return Err(Error::Input("start angle must be finite".into()));
        }
        Ok(Self {
            winding,
            radius,
            samples,
            start_angle,
        })
    }

    pub fn angle(&self, s: usize) -> f64 {
        self.start_angle + 2.0 * PI * self.winding as f64 * s as f64 / self.samples as f64
    }

    pub fn final_angle(&self) -> f64 {
        self.angle(self.samples)
    }
}

/// `λ_n(θ) = n·k·θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeFunction {
    pub n: f64,
    pub k: i64,
}

impl GaugeFunction {
    pub fn new(n: f64, k: i64) -> Result<Self> {
        if (2.0 * n).fract() != 0.0 || !n.is_finite() {
            return Err(Error::Input(format!("spin label {n} is not a half-integer")));
        }
        Ok(Self { n, k })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.n * self.k as f64 * theta
    }
}

pub fn planar_hamiltonian(theta: f64, radius: f64) -> Result<SymmetricMatrix> {
    if !(radius > 0.0) {
        return Err(Error::DegenerateFamily(format!(
            "radius {radius} is at or below the degeneracy point"
        )));
    }
    let r3 = radius * theta.cos();
    let r1 = radius * theta.sin();
    SymmetricMatrix::from_rows(&[vec![r3, r1], vec![r1, -r3]])
}

/// `H(R) = R₃σ_z + R₁σ_x` as a function of `(R₁, R₂, R₃)`; `R₂` is unused.
pub fn planar_family(r: &[f64; 3]) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(2, |i, j| match (i, j) {
        (0, 0) => r[2],
        (1, 1) => -r[2],
        _ => r[0],
    })
}

/// Continuous (double-valued) branch `(cos θ/2, sin θ/2)`.
pub fn planar_eigenstate(theta: f64) -> [f64; 2] {
    [(theta / 2.0).cos(), (theta / 2.0).sin()]
}

/// Ground states of the planar Hamiltonian at each loop sample (closure excluded).
pub fn loop_states(lp: &PlanarLoop) -> Result<Vec<Vec<f64>>> {
    (0..lp.samples)
        .map(|s| {
            let es = eig_sym(&planar_hamiltonian(lp.angle(s), lp.radius)?)?;
            let gap = es.values[1] - es.values[0];
            if gap < DEGENERACY_GAP {
                return Err(Error::DegeneracyOnPath { sample: s, gap });
            }
            Ok(es.vector(0))
        })
        .collect()
}

/// `Π ⟨ψ_{s+1}|ψ_s⟩` around the closed list, including `⟨ψ_0|ψ_{N−1}⟩`.
pub fn overlap_product(states: &[Vec<f64>]) -> f64 {
    let n = states.len();
    let mut prod = 1.0;
    for s in 0..n {
        prod *= dot(&states[(s + 1) % n], &states[s]);
    }
    prod
}

pub fn loop_phase_factor(lp: &PlanarLoop) -> Result<f64> {
    let states = loop_states(lp)?;
    if lp.winding == 0 {
        // Every sample is the same state; each overlap is its squared norm.
        return Ok(1.0);
    }
    Ok(overlap_product(&states))
}

/// `−[λ_n(θ_final) − λ_n(θ_start)]`.
pub fn gauge_phase(g: &GaugeFunction, lp: &PlanarLoop) -> f64 {
    -(g.eval(lp.final_angle()) - g.eval(lp.start_angle))
}

fn gauged_state(g: &GaugeFunction, theta: f64) -> [Complex64; 2] {
    let phase = Complex64::from_polar(1.0, g.eval(theta));
    let [c, s] = planar_eigenstate(theta);
    [phase * c, phase * s]
}

/// `i⟨n'|∂_θ n'⟩` for `|n'⟩ = e^{iλ_n(θ)}|n;θ⟩`, by central differences.
pub fn transformed_connection(g: &GaugeFunction, theta: f64, h: f64) -> f64 {
    let bra = gauged_state(g, theta);
    let plus = gauged_state(g, theta + h);
    let minus = gauged_state(g, theta - h);
    let deriv: Complex64 = (0..2)
        .map(|i| bra[i].conj() * (plus[i] - minus[i]) / (2.0 * h))
        .sum();
    (Complex64::i() * deriv).re
}

/// Midpoint-rule line integral of the transformed connection around the loop.
pub fn connection_line_integral(g: &GaugeFunction, lp: &PlanarLoop) -> f64 {
    let dtheta = 2.0 * PI * lp.winding as f64 / lp.samples as f64;
    let h = 1e-5;
    (0..lp.samples)
        .map(|s| transformed_connection(g, lp.angle(s) + 0.5 * dtheta, h) * dtheta)
        .sum()
}

/// Transformed connection as a field over `(R₁, R₂, R₃)`, with `θ = atan2(R₁, R₃)`.
pub fn planar_connection_field(g: &GaugeFunction, r: &[f64; 3], h: f64) -> Result<[f64; 3]> {
    let rho = r[0].hypot(r[2]);
    if rho <= 2.0 * h {
        return Err(Error::SingularPoint { gap: 2.0 * rho });
    }
    let state = |p: &[f64; 3]| gauged_state(g, p[0].atan2(p[2]));
    let bra = state(r);
    let mut out = [0.0; 3];
    for (a, slot) in out.iter_mut().enumerate() {
        let mut plus = *r;
        let mut minus = *r;
        plus[a] += h;
        minus[a] -= h;
        let (sp, sm) = (state(&plus), state(&minus));
        let d: Complex64 = (0..2)
            .map(|i| bra[i].conj() * (sp[i] - sm[i]) / (2.0 * h))
            .sum();
        *slot = (Complex64::i() * d).re;
    }
    Ok(out)
}

fn central_difference<F>(family: &F, point: &[f64; 3], axis: usize, h: f64) -> Matrix
where
    F: Fn(&[f64; 3]) -> SymmetricMatrix,
{
    let mut plus = *point;
    let mut minus = *point;
    plus[axis] += h;
    minus[axis] -= h;
    let hp = family(&plus);
    let hm = family(&minus);
    let n = hp.dim();
    Matrix::from_fn(n, n, |i, j| (hp.get(i, j) - hm.get(i, j)) / (2.0 * h))
}

/// Curvature `B_n = −Im Σ_{m≠n} ⟨n|∇H|m⟩ × ⟨m|∇H|n⟩ / (E_m − E_n)²`.
///
/// `∇H` is a Richardson-extrapolated central difference with steps `h` and `h/2`.
pub fn berry_field_real<F>(family: F, point: &[f64; 3], level: usize, h: f64) -> Result<[f64; 3]>
where
    F: Fn(&[f64; 3]) -> SymmetricMatrix,
{
    if !(h > 0.0) {
        return Err(Error::Input(format!("step must be positive, got {h}")));
    }
    let es = eig_sym(&family(point))?;
    let dim = es.dim();
    if level >= dim {
        return Err(Error::Input(format!("level {level} out of range for dim {dim}")));
    }
    let grads: Vec<Matrix> = (0..3)
        .map(|a| {
            let coarse = central_difference(&family, point, a, h);
            let fine = central_difference(&family, point, a, h / 2.0);
            Matrix::from_fn(dim, dim, |i, j| (4.0 * fine[(i, j)] - coarse[(i, j)]) / 3.0)
        })
        .collect();

    let grad_norm = grads.iter().fold(0.0, |m: f64, g| m.max(g.max_abs()));
    let gap = (0..dim)
        .filter(|&m| m != level)
        .map(|m| (es.values[m] - es.values[level]).abs())
        .fold(f64::INFINITY, f64::min);
    if gap == 0.0 || gap < 2.0 * grad_norm * h {
        return Err(Error::SingularPoint { gap });
    }

    let vn = es.vector(level);
    let element = |g: &Matrix, bra: &[f64], ket: &[f64]| -> Complex64 {
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                acc += bra[i] * g[(i, j)] * ket[j];
            }
        }
        Complex64::new(acc, 0.0)
    };

    let mut b = [0.0; 3];
    for m in (0..dim).filter(|&m| m != level) {
        let vm = es.vector(m);
        let nm: Vec<Complex64> = grads.iter().map(|g| element(g, &vn, &vm)).collect();
        let mn: Vec<Complex64> = grads.iter().map(|g| element(g, &vm, &vn)).collect();
        let cross = [
            nm[1] * mn[2] - nm[2] * mn[1],
            nm[2] * mn[0] - nm[0] * mn[2],
            nm[0] * mn[1] - nm[1] * mn[0],
        ];
        let denom = (es.values[m] - es.values[level]).powi(2);
        for a in 0..3 {
            b[a] -= cross[a].im / denom;
        }
    }
    Ok(b)
}

// Normalised eigenvector of a 2×2 Hermitian matrix for eigenvalue `lambda`,
// in whatever gauge the construction happens to produce.
fn hermitian2_eigenvector(h: [[Complex64; 2]; 2], lambda: f64) -> [Complex64; 2] {
    let a = [h[0][1], Complex64::new(lambda, 0.0) - h[0][0]];
    let b = [Complex64::new(lambda, 0.0) - h[1][1], h[1][0]];
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&a) >= norm(&b) { a } else { b };
    let n = norm(&v);
    [v[0] / n, v[1] / n]
}

/// Berry phase of the spin-along-field state of `σ·R̂` around the circle of
/// polar angle `cone_angle`, traversed with increasing azimuth.
///
/// The result lies in `(−2π, 0]` and approaches `−π(1 − cos θ_c)`.
pub fn monopole_phase(cone_angle: f64, samples: usize) -> Result<f64> {
    if !(0.0..=PI).contains(&cone_angle) {
        return Err(Error::Input(format!("cone angle {cone_angle} outside [0, π]")));
    }
    if samples < 8 {
        return Err(Error::Input(format!("need at least 8 samples, got {samples}")));
    }
    if cone_angle == 0.0 {
        return Ok(0.0);
    }
    if cone_angle == PI {
        return Ok(-2.0 * PI);
    }
    let (st, ct) = cone_angle.sin_cos();
    let states: Vec<[Complex64; 2]> = (0..samples)
        .map(|s| {
            let phi = 2.0 * PI * s as f64 / samples as f64;
            let (sp, cp) = phi.sin_cos();
            // σ·R̂ with R̂ = (sinθ cosφ, sinθ sinφ, cosθ); eigenvalue +1.
            let h = [
                [Complex64::new(ct, 0.0), Complex64::new(st * cp, -st * sp)],
                [Complex64::new(st * cp, st * sp), Complex64::new(-ct, 0.0)],
            ];
            hermitian2_eigenvector(h, 1.0)
        })
        .collect();
    let mut prod = Complex64::new(1.0, 0.0);
    for s in 0..samples {
        let (u, v) = (&states[s], &states[(s + 1) % samples]);
        prod *= u[0].conj() * v[0] + u[1].conj() * v[1];
    }
    let mut gamma = -prod.arg();
    if gamma > 0.0 {
        gamma -= 2.0 * PI;
    }
    Ok(gamma)
}
