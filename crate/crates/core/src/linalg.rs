//! Small dense complex/real linear algebra.
//!
//! The covariance and Schur-complement machinery needs complex matrix
//! products and inverses at sizes of a few dozen, generic over the scalar
//! width. None of the common pure-Rust crates expose a generic complex LU,
//! so a plain partial-pivoting implementation lives here.

use num_complex::Complex;

use crate::scalar::Scalar;
use crate::Error;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Complex<T>>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[Complex<T>]) {
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self[(r, c)] = v[r];
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] = out[(r, c)] + a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn add_scaled_identity(&mut self, s: T) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)].re += s;
        }
    }

    pub fn trace_real(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).sum()
    }

    /// Frobenius inner product `Tr(A† B)`.
    pub fn frob_inner(&self, other: &Self) -> Complex<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.data.iter().zip(&other.data) {
            acc = acc + a.conj() * b;
        }
        acc
    }

    /// Quadratic form `a† M a`.
    pub fn herm_quad(&self, a: &[Complex<T>]) -> Complex<T> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(a.len(), self.rows);
        let mut acc = Complex::new(T::zero(), T::zero());
        for r in 0..self.rows {
            let mut row = Complex::new(T::zero(), T::zero());
            for c in 0..self.cols {
                row = row + self[(r, c)] * a[c];
            }
            acc = acc + a[r].conj() * row;
        }
        acc
    }

    pub fn max_abs_deviation_from_hermitian(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn lu(&self) -> Result<Lu<T>, Error> {
        Lu::decompose(self)
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        self.lu()?.inverse()
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.cols + c]
    }
}

/// LU factorization with partial pivoting of a square complex matrix.
pub struct Lu<T> {
    lu: CMat<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    pub(crate) fn decompose(m: &CMat<T>) -> Result<Self, Error> {
        assert_eq!(m.rows, m.cols, "LU requires a square matrix");
        let n = m.rows;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut pivot_row, mut pivot_mag) = (k, lu[(k, k)].norm_sqr());
            for r in k + 1..n {
                let mag = lu[(r, k)].norm_sqr();
                if mag > pivot_mag {
                    pivot_row = r;
                    pivot_mag = mag;
                }
            }
            if pivot_mag.is_zero() {
                return Err(Error::Singular("zero pivot in LU factorization".into()));
            }
            if pivot_row != k {
                perm.swap(k, pivot_row);
                for c in 0..n {
                    let tmp = lu[(k, c)];
                    lu[(k, c)] = lu[(pivot_row, c)];
                    lu[(pivot_row, c)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for r in k + 1..n {
                let factor = lu[(r, k)] / pivot;
                lu[(r, k)] = factor;
                for c in k + 1..n {
                    let sub = factor * lu[(k, c)];
                    lu[(r, c)] = lu[(r, c)] - sub;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Crude condition estimate: ratio of extreme pivot magnitudes.
    pub fn pivot_condition(&self) -> T {
        let n = self.lu.rows;
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for i in 0..n {
            let m = self.lu[(i, i)].norm();
            lo = lo.min(m);
            hi = hi.max(m);
        }
        if lo.is_zero() {
            T::infinity()
        } else {
            hi / lo
        }
    }

    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            for c in 0..r {
                let sub = self.lu[(r, c)] * x[c];
                x[r] = x[r] - sub;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let sub = self.lu[(r, c)] * x[c];
                x[r] = x[r] - sub;
            }
            x[r] = x[r] / self.lu[(r, r)];
        }
        x
    }

    pub fn inverse(&self) -> Result<CMat<T>, Error> {
        let n = self.lu.rows;
        let mut out = CMat::zeros(n, n);
        let mut e = vec![Complex::new(T::zero(), T::zero()); n];
        for c in 0..n {
            e[c] = Complex::new(T::one(), T::zero());
            let col = self.solve(&e);
            out.set_column(c, &col);
            e[c] = Complex::new(T::zero(), T::zero());
        }
        Ok(out)
    }
}

/// In-place Gauss-Jordan inverse for small real matrices.
pub fn real_inverse<T: Scalar>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>, Error> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            assert_eq!(row.len(), n, "real_inverse requires a square matrix");
            let mut ext = row.clone();
            ext.extend((0..n).map(|c| if c == r { T::one() } else { T::zero() }));
            ext
        })
        .collect();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| m[i][k].abs().partial_cmp(&m[j][k].abs()).unwrap())
            .unwrap();
        if m[pivot_row][k].abs().is_zero() {
            return Err(Error::Singular("singular real matrix".into()));
        }
        m.swap(k, pivot_row);
        let pivot = m[k][k];
        for c in 0..2 * n {
            m[k][c] = m[k][c] / pivot;
        }
        for r in 0..n {
            if r == k {
                continue;
            }
            let factor = m[r][k];
            for c in 0..2 * n {
                let sub = factor * m[k][c];
                m[r][c] = m[r][c] - sub;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det2<T: Scalar>(a: T, b: T, c: T, d: T) -> T {
    a * d - b * c
}

pub fn det3<T: Scalar>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2])
        - m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2])
        + m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1])
}
