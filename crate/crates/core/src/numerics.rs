//! Dense real linear algebra for small matrices (dimension up to a few dozen).
//!
//! The eigensolver is Householder tridiagonalisation followed by implicit QL
//! with Wilkinson-style shifts. Output is sorted ascending and every
//! eigenvector is sign-normalised: its largest-magnitude component is
//! positive (ties go to the lowest index).

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Input(format!(
                "matmul shape mismatch: {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute entry (0 for an empty matrix).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// A square matrix whose stored entries are exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Input(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        for i in 0..m.rows {
            for j in (i + 1)..m.cols {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::Input(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Builds the matrix from its upper triangle (`i <= j`), mirroring it below.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Sets `(i, j)` and `(j, i)` together.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    pub fn add_diagonal(&mut self, i: usize, v: f64) {
        self.0[(i, i)] += v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// The `count` lowest eigenvectors as an orbital set.
    pub fn lowest(&self, count: usize) -> OrbitalSet {
        let n = self.dim();
        let count = count.min(n);
        let mut data = Vec::with_capacity(count * n);
        for k in 0..count {
            data.extend((0..n).map(|i| self.vectors[(i, k)]));
        }
        OrbitalSet {
            count,
            dim: n,
            data,
        }
    }
}

pub fn eig_sym(m: &SymmetricMatrix) -> Result<EigenSystem> {
    let a = m.as_matrix();
    if !a.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(EigenSystem {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    implicit_ql(&mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut lead = 0;
        for i in 1..n {
            if v[i][k].abs() > v[lead][k].abs() {
                lead = i;
            }
        }
        let sign = if v[lead][k] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, col)] = sign * v[i][k];
        }
    }
    Ok(EigenSystem { values, vectors })
}

// Householder reduction to tridiagonal form, accumulating the transform in `v`.
fn tridiagonalize(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e[..i].iter_mut() {
                *ej = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[j][i] = f;
                let mut g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn implicit_ql(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 * n {
                    return Err(Error::Input("eigensolver failed to converge".into()));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Determinant by LU factorisation with partial pivoting.
pub fn det(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Input(format!(
            "determinant of non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if !m.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in (col + 1)..n {
            if a[(r, col)].abs() > a[(pivot, col)].abs() {
                pivot = r;
            }
        }
        if a[(pivot, col)] == 0.0 {
            return Ok(0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.data.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for r in (col + 1)..n {
            let factor = a[(r, col)] / p;
            if factor == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                a[(r, j)] -= factor * a[(col, j)];
            }
        }
    }
    Ok(det)
}

/// `count` single-particle orbitals of dimension `dim`, stored one per row.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitalSet {
    count: usize,
    dim: usize,
    data: Vec<f64>,
}

impl OrbitalSet {
    pub fn new(orbitals: &[Vec<f64>]) -> Result<Self> {
        let dim = orbitals.first().map_or(0, Vec::len);
        if orbitals.iter().any(|o| o.len() != dim) {
            return Err(Error::Input("orbitals differ in dimension".into()));
        }
        Ok(Self {
            count: orbitals.len(),
            dim,
            data: orbitals.iter().flatten().copied().collect(),
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orbital(&self, a: usize) -> &[f64] {
        &self.data[a * self.dim..(a + 1) * self.dim]
    }

    pub fn orbitals(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.dim.max(1)).take(self.count)
    }

    pub fn negate_orbital(&mut self, a: usize) {
        for x in &mut self.data[a * self.dim..(a + 1) * self.dim] {
            *x = -*x;
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Matrix of inner products `<bra_a | ket_b>`.
pub fn occupied_overlap(bra: &OrbitalSet, ket: &OrbitalSet) -> Result<Matrix> {
    if bra.count != ket.count || bra.dim != ket.dim {
        return Err(Error::Input(format!(
            "orbital sets differ in shape: {}x{} vs {}x{}",
            bra.count, bra.dim, ket.count, ket.dim
        )));
    }
    Ok(Matrix::from_fn(bra.count, ket.count, |a, b| {
        dot(bra.orbital(a), ket.orbital(b))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut impl Rng) -> SymmetricMatrix {
        SymmetricMatrix::from_upper(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    fn reconstruction_error(m: &SymmetricMatrix, es: &EigenSystem) -> f64 {
        let n = m.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let vlv: f64 = (0..n)
                    .map(|k| es.vectors[(i, k)] * es.values[k] * es.vectors[(j, k)])
                    .sum();
                worst = worst.max((vlv - m.get(i, j)).abs());
            }
        }
        worst
    }

    // Laplace expansion along the first row; independent of the LU path.
    fn cofactor_det(m: &Matrix) -> f64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|c| {
                let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                    m[(i + 1, if j < c { j } else { j + 1 })]
                });
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, c)] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn identity_eigenvalues() {
        let es = eig_sym(&SymmetricMatrix::new(Matrix::identity(3)).unwrap()).unwrap();
        assert_eq!(es.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted_with_permuted_basis() {
        let m = SymmetricMatrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let es = eig_sym(&m).unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(es.vector(0), vec![0.0, 1.0, 0.0]);
        assert_eq!(es.vector(1), vec![0.0, 0.0, 1.0]);
        assert_eq!(es.vector(2), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn pauli_x() {
        let m = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let es = eig_sym(&m).unwrap();
        assert_relative_eq!(es.values[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(es.values[1], 1.0, epsilon = 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // Both components tie in magnitude; the lowest index is made positive.
        let v0 = es.vector(0);
        assert_relative_eq!(v0[0], r, epsilon = 1e-15);
        assert_relative_eq!(v0[1], -r, epsilon = 1e-15);
        let v1 = es.vector(1);
        assert_relative_eq!(v1[0], r, epsilon = 1e-15);
        assert_relative_eq!(v1[1], r, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        let m = SymmetricMatrix::from_rows(&[vec![f64::NAN, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(eig_sym(&m), Err(Error::Input(_))));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(SymmetricMatrix::new(m).is_err());
    }

    #[test]
    fn residual_and_orthonormality_up_to_dim_32() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 5, 8, 16, 31, 32] {
            let m = random_symmetric(n, &mut rng);
            let es = eig_sym(&m).unwrap();
            let norm = m.as_matrix().max_abs();
            assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
            for a in 0..n {
                let va = es.vector(a);
                for b in 0..n {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot(&va, &es.vector(b)) - want).abs() <= 1e-12);
                }
                let hv = m.as_matrix().matmul(&Matrix::from_fn(n, 1, |i, _| va[i])).unwrap();
                let resid = (0..n)
                    .map(|i| (hv[(i, 0)] - es.values[a] * va[i]).abs())
                    .fold(0.0, f64::max);
                assert!(resid <= 1e-10 * norm, "n={n} residual {resid}");
            }
        }
    }

    #[test]
    fn sign_convention_largest_component_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_symmetric(12, &mut rng);
        let es = eig_sym(&m).unwrap();
        for k in 0..12 {
            let v = es.vector(k);
            let lead = v
                .iter()
                .enumerate()
                .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
            assert!(v[lead] > 0.0);
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::identity(4)).unwrap(), 1.0);
        let mut swapped = Matrix::identity(4);
        swapped[(0, 0)] = 0.0;
        swapped[(1, 1)] = 0.0;
        swapped[(0, 1)] = 1.0;
        swapped[(1, 0)] = 1.0;
        assert_eq!(det(&swapped).unwrap(), -1.0);
        assert!(matches!(det(&Matrix::zeros(2, 3)), Err(Error::Input(_))));
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = Matrix::from_fn(5, 5, |_, _| rng.gen_range(-2.0..2.0));
            let lu = det(&m).unwrap();
            let oracle = cofactor_det(&m);
            assert!((lu - oracle).abs() <= 1e-10 * oracle.abs().max(1.0));
        }
    }

    #[test]
    fn det_relative_accuracy_dim_16() {
        // Orthogonal eigenvector matrices have |det| = 1 exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let es = eig_sym(&random_symmetric(16, &mut rng)).unwrap();
        assert!((det(&es.vectors).unwrap().abs() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn occupied_overlap_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let es = eig_sym(&random_symmetric(4, &mut rng)).unwrap();
        let bra = es.lowest(2);
        let same = occupied_overlap(&bra, &bra).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((same[(a, b)] - want).abs() < 1e-14);
            }
        }

        let mut ket = bra.clone();
        ket.negate_orbital(1);
        let flipped = occupied_overlap(&bra, &ket).unwrap();
        assert!((flipped[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((flipped[(1, 1)] + 1.0).abs() < 1e-14);

        let other = eig_sym(&random_symmetric(4, &mut rng)).unwrap().lowest(2);
        let s = occupied_overlap(&bra, &other).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let direct: f64 = (0..4).map(|i| es.vectors[(i, a)] * other.orbital(b)[i]).sum();
                assert!((s[(a, b)] - direct).abs() < 1e-15);
            }
        }

        let three = eig_sym(&random_symmetric(4, &mut rng)).unwrap().lowest(3);
        assert!(occupied_overlap(&bra, &three).is_err());
    }

    proptest! {
        #[test]
        fn reconstruction(seed in any::<u64>(), n in 2usize..=32) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_symmetric(n, &mut rng);
            let es = eig_sym(&m).unwrap();
            prop_assert!(reconstruction_error(&m, &es) <= 1e-10 * m.as_matrix().max_abs());
        }

        #[test]
        fn det_is_multiplicative(seed in any::<u64>(), n in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let b = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let lhs = det(&a.matmul(&b).unwrap()).unwrap();
            let rhs = det(&a).unwrap() * det(&b).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }

        #[test]
        fn eig_is_deterministic(seed in any::<u64>(), n in 2usize..=16) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_symmetric(n, &mut rng);
            let a = eig_sym(&m).unwrap();
            let b = eig_sym(&m.clone()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
