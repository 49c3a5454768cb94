//! Dense exact matrices, the power and product matrix builders, and three
//! independent determinant engines (Laplace, Bareiss, Dodgson condensation).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, parse_scalar, pow, Scalar};
use crate::sequences::{HoradamSequence, RecurrenceParams};

/// Largest dimension accepted by [`det_cofactor`].
pub const COFACTOR_MAX_DIM: usize = 6;

/// Square matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn new(dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition(
                "matrix dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::Precondition(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let entries = (0..dim * dim).map(|idx| f(idx / dim, idx % dim)).collect();
        Self { dim, entries }
    }

    pub fn from_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| Scalar::from_integer(rows[i][j].into()))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn scale_row(&mut self, row: usize, q: &Scalar) {
        for j in 0..self.dim {
            let v = self.get(row, j) * q;
            self.set(row, j, v);
        }
    }

    /// Contiguous `size x size` block with top-left corner `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        assert!(row + size <= self.dim && col + size <= self.dim);
        Self::from_fn(size, |i, j| self.get(row + i, col + j).clone())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.is_integer())
    }

    /// Parses the plain-text format: the dimension on the first line, then
    /// `dim` lines of `dim` whitespace-separated rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dim: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension line {header:?}")))?;
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {row}")))?;
            let vals = line
                .split_whitespace()
                .map(parse_scalar)
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != dim {
                return Err(Error::Parse(format!(
                    "row {row} has {} entries, expected {dim}",
                    vals.len()
                )));
            }
            entries.extend(vals);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content {extra:?}")));
        }
        Self::new(dim, entries)
    }
}

impl fmt::Display for ExactMatrix {
    /// Same text format that [`ExactMatrix::parse`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| format_scalar(self.get(i, j)))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `(r+1) x (r+1)` matrix with entries `W_{s+k(n+i+j)}^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerMatrixSpec {
    pub params: RecurrenceParams,
    pub r: u32,
    pub s: i64,
    pub k: i64,
    pub n: i64,
}

/// `(r+1) x (r+1)` matrix with entries
/// `prod_{l=j+1..r} W_{s+k(n+i+d_l)} * prod_{m=1..j} W_{s+k(n+i+e_m)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductMatrixSpec {
    pub params: RecurrenceParams,
    pub r: u32,
    pub s: i64,
    pub k: i64,
    pub n: i64,
    d: Vec<i64>,
    e: Vec<i64>,
}

impl ProductMatrixSpec {
    pub fn new(
        params: RecurrenceParams,
        s: i64,
        k: i64,
        n: i64,
        d: Vec<i64>,
        e: Vec<i64>,
    ) -> Result<Self> {
        if d.len() != e.len() {
            return Err(Error::Precondition(format!(
                "d and e must have equal length, got {} and {}",
                d.len(),
                e.len()
            )));
        }
        Ok(Self {
            params,
            r: d.len() as u32,
            s,
            k,
            n,
            d,
            e,
        })
    }

    /// `d_1..d_r` (1-based in the formulas, 0-based here).
    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn e(&self) -> &[i64] {
        &self.e
    }
}

pub fn build_power_matrix(spec: &PowerMatrixSpec) -> ExactMatrix {
    power_matrix_from(
        &HoradamSequence::new(spec.params.clone()),
        spec.r,
        spec.s,
        spec.k,
        spec.n,
    )
}

/// [`build_power_matrix`] over an already-memoized sequence.
pub fn power_matrix_from(w: &HoradamSequence, r: u32, s: i64, k: i64, n: i64) -> ExactMatrix {
    let dim = r as usize + 1;
    // the matrix is Hankel: only 2r+1 distinct entries
    let diag: Vec<Scalar> = (0..2 * dim - 1)
        .map(|t| pow(&w.term(s + k * (n + t as i64)), i64::from(r)).expect("nonnegative exponent"))
        .collect();
    ExactMatrix::from_fn(dim, |i, j| diag[i + j].clone())
}

pub fn build_product_matrix(spec: &ProductMatrixSpec) -> ExactMatrix {
    product_matrix_from(&HoradamSequence::new(spec.params.clone()), spec)
}

/// [`build_product_matrix`] over an already-memoized sequence for `spec.params`.
pub fn product_matrix_from(w: &HoradamSequence, spec: &ProductMatrixSpec) -> ExactMatrix {
    let r = spec.r as usize;
    let at = |i: usize, offset: i64| w.term(spec.s + spec.k * (spec.n + i as i64 + offset));
    ExactMatrix::from_fn(r + 1, |i, j| {
        let from_d = spec.d[j..r].iter().map(|&dl| at(i, dl));
        let from_e = spec.e[..j].iter().map(|&em| at(i, em));
        from_d.chain(from_e).fold(Scalar::one(), |acc, v| acc * v)
    })
}

/// Laplace expansion along the first row. Reference oracle for small matrices.
pub fn det_cofactor(m: &ExactMatrix) -> Result<Scalar> {
    if m.dim > COFACTOR_MAX_DIM {
        return Err(Error::Size {
            what: "cofactor expansion",
            got: m.dim,
            max: COFACTOR_MAX_DIM,
        });
    }
    let cols: Vec<usize> = (0..m.dim).collect();
    Ok(laplace(m, 0, &cols))
}

fn laplace(m: &ExactMatrix, row: usize, cols: &[usize]) -> Scalar {
    if cols.len() == 1 {
        return m.get(row, cols[0]).clone();
    }
    let mut acc = Scalar::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let entry = m.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * laplace(m, row + 1, &rest);
        if pos % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Fraction-free Gaussian elimination.
///
/// Each row is first cleared of denominators by its LCM, so the elimination
/// runs over integers where every division is exact; the row scales are
/// divided back out at the end.
pub fn det_bareiss(m: &ExactMatrix) -> Scalar {
    let dim = m.dim;
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let row = &m.entries[i * dim..(i + 1) * dim];
        let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        a.push(row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect());
        scale *= lcm;
    }
    let det = bareiss_integer(&mut a);
    Scalar::new(det, scale)
}

/// Bareiss on an integer matrix, consuming it.
pub fn bareiss_integer(a: &mut [Vec<BigInt>]) -> BigInt {
    let dim = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..dim.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..dim).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            for j in k + 1..dim {
                let v = &row[j] * pivot - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
    }
    let last = a
        .last()
        .map(|row| row[dim - 1].clone())
        .unwrap_or_else(BigInt::one);
    if negate {
        -last
    } else {
        last
    }
}

/// Dodgson condensation.
///
/// Level `t` holds the determinants of all contiguous `t x t` blocks. The next
/// level uses the Desnanot-Jacobi identity
/// `det(B) det(interior) = det(NW) det(SE) - det(NE) det(SW)`;
/// wherever the interior determinant vanishes, the block is evaluated with
/// [`det_bareiss`] instead.
pub fn det_dodgson(m: &ExactMatrix) -> Scalar {
    let dim = m.dim;
    // level 0: the (dim+1)x(dim+1) all-ones matrix (empty determinants)
    let mut prev: Vec<Vec<Scalar>> = vec![vec![Scalar::one(); dim + 1]; dim + 1];
    let mut cur: Vec<Vec<Scalar>> = (0..dim)
        .map(|i| (0..dim).map(|j| m.get(i, j).clone()).collect())
        .collect();
    for size in 1..dim {
        let len = dim - size;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let mut row = Vec::with_capacity(len);
            for j in 0..len {
                let interior = &prev[i + 1][j + 1];
                let v = if interior.is_zero() {
                    det_bareiss(&m.block(i, j, size + 1))
                } else {
                    (&cur[i][j] * &cur[i + 1][j + 1] - &cur[i][j + 1] * &cur[i + 1][j]) / interior
                };
                row.push(v);
            }
            next.push(row);
        }
        prev = cur;
        cur = next;
    }
    cur[0][0].clone()
}

/// Number of zero interior determinants Dodgson condensation meets on `m`,
/// i.e. how many times [`det_dodgson`] falls back to elimination.
pub fn dodgson_fallbacks(m: &ExactMatrix) -> usize {
    let dim = m.dim;
    (1..dim)
        .map(|size| {
            // interiors for blocks of size+1 are the (size-1)-blocks at (i+1, j+1)
            if size == 1 {
                return 0;
            }
            let len = dim - size;
            (0..len)
                .flat_map(|i| (0..len).map(move |j| (i, j)))
                .filter(|&(i, j)| det_bareiss(&m.block(i + 1, j + 1, size - 1)).is_zero())
                .count()
        })
        .sum()
}

fn without(m: &ExactMatrix, drop_rows: &[usize], drop_cols: &[usize]) -> ExactMatrix {
    let rows: Vec<usize> = (0..m.dim).filter(|i| !drop_rows.contains(i)).collect();
    let cols: Vec<usize> = (0..m.dim).filter(|j| !drop_cols.contains(j)).collect();
    ExactMatrix::from_fn(rows.len(), |i, j| m.get(rows[i], cols[j]).clone())
}

/// Both sides of the Desnanot-Jacobi identity for `m`, all minors by Bareiss.
pub fn desnanot_jacobi_sides(m: &ExactMatrix) -> Result<(Scalar, Scalar)> {
    if m.dim < 3 {
        return Err(Error::Precondition(format!(
            "Desnanot-Jacobi check needs dim >= 3, got {}",
            m.dim
        )));
    }
    let last = m.dim - 1;
    let lhs = det_bareiss(m) * det_bareiss(&without(m, &[0, last], &[0, last]));
    let nw = det_bareiss(&without(m, &[last], &[last]));
    let se = det_bareiss(&without(m, &[0], &[0]));
    let ne = det_bareiss(&without(m, &[last], &[0]));
    let sw = det_bareiss(&without(m, &[0], &[last]));
    Ok((lhs, nw * se - ne * sw))
}

pub fn desnanot_jacobi_check(m: &ExactMatrix) -> Result<bool> {
    desnanot_jacobi_sides(m).map(|(l, r)| l == r)
}

/// Largest entry bit size (numerator or denominator).
pub fn max_entry_bits(m: &ExactMatrix) -> u64 {
    m.entries
        .iter()
        .map(crate::scalar::bit_size)
        .max()
        .unwrap_or(0)
}
