//! Sparse multivariate polynomials over the integers, a symbolic determinant,
//! and exact certificates for the power/product determinant lemmas.
//!
//! A polynomial carries its own sorted variable list; binary operations work
//! over the union of both lists. Equality ignores variables that do not occur,
//! so two expansions of the same polynomial compare structurally.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial_row_product, Scalar};

pub const SYM_DET_MAX_DIM: usize = 5;

type Monomial = Vec<u32>;

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Orders `x2` before `x10`: alphabetic prefix, then numeric suffix.
fn var_key(name: &str) -> (&str, u64, &str) {
    let split = name
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(name.len());
    let (prefix, rest) = name.split_at(split);
    let digits = rest
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(rest.len());
    let num = rest[..digits].parse().unwrap_or(0);
    (prefix, num, &rest[digits..])
}

fn cmp_vars(a: &str, b: &str) -> Ordering {
    var_key(a).cmp(&var_key(b)).then_with(|| a.cmp(b))
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().chain(b).cloned().collect();
    out.sort_by(|x, y| cmp_vars(x, y));
    out.dedup();
    out
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], BigInt::one());
        Self {
            vars: vec![name.to_string()],
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Coefficient of the monomial given as `(variable, exponent)` pairs.
    pub fn coefficient(&self, monomial: &[(&str, u32)]) -> BigInt {
        let mut key = vec![0u32; self.vars.len()];
        for &(name, e) in monomial {
            match self.vars.iter().position(|v| v == name) {
                Some(idx) => key[idx] += e,
                None if e == 0 => {}
                None => return BigInt::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable of `self`.
    fn aligned(&self, vars: &[String]) -> Self {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut key = vec![0u32; vars.len()];
                for (src, &dst) in map.iter().enumerate() {
                    key[dst] = m[src];
                }
                (key, c.clone())
            })
            .collect();
        Self {
            vars: vars.to_vec(),
            terms,
        }
    }

    /// Drops variables that occur in no term.
    pub fn trimmed(&self) -> Self {
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (used.iter().map(|&i| m[i]).collect(), c.clone()))
            .collect();
        Self { vars, terms }
    }

    fn binary_vars(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = merge_vars(&self.vars, &other.vars);
        (self.aligned(&vars), other.aligned(&vars))
    }

    fn add_impl(&self, other: &Self) -> Self {
        let (mut a, b) = self.binary_vars(other);
        for (m, c) in b.terms {
            *a.terms.entry(m).or_insert_with(BigInt::zero) += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }

    fn neg_impl(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&other.neg_impl())
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let (a, b) = self.binary_vars(other);
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let key: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *acc.entry(key).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Self {
            vars: a.vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 {
            return Err(Error::Domain(format!("negative polynomial exponent {exp}")));
        }
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.mul_impl(self);
        }
        Ok(acc)
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a MultiPoly>) -> Self {
        factors
            .into_iter()
            .fold(Self::one(), |acc, f| acc.mul_impl(f))
    }

    /// Evaluates at an assignment; unassigned variables are an error.
    pub fn eval(&self, assignment: &HashMap<String, Scalar>) -> Result<Scalar> {
        let values = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::Domain(format!("no value for variable {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = Scalar::from_integer(c.clone());
            for (value, &e) in values.iter().zip(m) {
                for _ in 0..e {
                    term *= value;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Terms in graded lexicographic order (highest total degree first).
    pub fn grlex_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        out
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.trimmed(), other.trimmed());
        a.vars == b.vars && a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.trimmed();
        if p.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in p.grlex_terms().into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let factors: Vec<String> = p
                .vars
                .iter()
                .zip(m)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            match (factors.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", factors.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$imp(rhs)
            }
        }
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_impl()
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_impl()
    }
}

pub fn poly_add(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    p + q
}

pub fn poly_mul(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    p * q
}

pub fn poly_pow(p: &MultiPoly, exp: i64) -> Result<MultiPoly> {
    p.pow(exp)
}

/// Exact determinant by cofactor expansion, memoized over column subsets.
pub fn sym_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let dim = m.len();
    if dim > SYM_DET_MAX_DIM {
        return Err(Error::Size {
            what: "symbolic determinant",
            got: dim,
            max: SYM_DET_MAX_DIM,
        });
    }
    if m.iter().any(|row| row.len() != dim) {
        return Err(Error::Precondition("symbolic matrix must be square".into()));
    }
    if dim == 0 {
        return Ok(MultiPoly::one());
    }
    // share one variable list so the inner products skip realignment
    let vars = m
        .iter()
        .flatten()
        .fold(Vec::new(), |acc: Vec<String>, p| merge_vars(&acc, &p.vars));
    let m: Vec<Vec<MultiPoly>> = m
        .iter()
        .map(|row| row.iter().map(|p| p.aligned(&vars)).collect())
        .collect();

    // minors[mask] = det of the last popcount(mask) rows restricted to columns in mask
    let mut minors: HashMap<u32, MultiPoly> = HashMap::new();
    minors.insert(0, MultiPoly::one().aligned(&vars));
    for row in (0..dim).rev() {
        let size = (dim - row) as u32;
        for mask in 0u32..(1 << dim) {
            if mask.count_ones() != size {
                continue;
            }
            let mut acc = MultiPoly::zero().aligned(&vars);
            for (pos, col) in (0..dim).filter(|c| mask & (1 << c) != 0).enumerate() {
                let entry = &m[row][col];
                if entry.is_zero() {
                    continue;
                }
                let term = entry * &minors[&(mask & !(1 << col))];
                acc = if pos % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            minors.insert(mask, acc);
        }
    }
    Ok(minors
        .remove(&((1u32 << dim) - 1))
        .expect("full mask computed"))
}

/// Both sides of a polynomial identity.
#[derive(Clone, Debug)]
pub struct PolyIdentity {
    pub lhs: MultiPoly,
    pub rhs: MultiPoly,
}

impl PolyIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn v(prefix: &str, idx: usize) -> MultiPoly {
    MultiPoly::var(&format!("{prefix}{idx}"))
}

fn guard(what: &'static str, r: u32, max: u32) -> Result<()> {
    if r > max {
        return Err(Error::Size {
            what,
            got: r as usize,
            max: max as usize,
        });
    }
    Ok(())
}

fn pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=r).flat_map(move |i| (i + 1..=r).map(move |j| (i, j)))
}

/// `det((c_j x_i + 1)^r) = prod_{i<j}(x_i - x_j) prod_{i<j}(c_i - c_j) prod_i C(r,i)`.
pub fn lemma3_sides(r: u32) -> Result<PolyIdentity> {
    guard("lemma 3 (r)", r, 4)?;
    let ru = r as usize;
    let entries: Vec<Vec<MultiPoly>> = (0..=ru)
        .map(|i| {
            (0..=ru)
                .map(|j| (v("c", j) * v("x", i) + MultiPoly::one()).pow(i64::from(r)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let lhs = sym_det(&entries)?;
    let mut rhs = MultiPoly::constant(binomial_row_product(r));
    for (i, j) in pairs(ru) {
        rhs = rhs * (v("x", i) - v("x", j)) * (v("c", i) - v("c", j));
    }
    Ok(PolyIdentity { lhs, rhs })
}

/// `det((A_j X_i + B_j Y_i)^r) = prod_{i<j}(X_i Y_j - X_j Y_i) prod_{i<j}(A_i B_j - A_j B_i) prod_i C(r,i)`.
pub fn corollary4_sides(r: u32) -> Result<PolyIdentity> {
    guard("corollary 4 (r)", r, 3)?;
    let ru = r as usize;
    let entries: Vec<Vec<MultiPoly>> = (0..=ru)
        .map(|i| {
            (0..=ru)
                .map(|j| (v("A", j) * v("X", i) + v("B", j) * v("Y", i)).pow(i64::from(r)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let lhs = sym_det(&entries)?;
    let mut rhs = MultiPoly::constant(binomial_row_product(r));
    for (i, j) in pairs(ru) {
        rhs = rhs
            * (v("X", i) * v("Y", j) - v("X", j) * v("Y", i))
            * (v("A", i) * v("B", j) - v("A", j) * v("B", i));
    }
    Ok(PolyIdentity { lhs, rhs })
}

/// `det(prod_{l>j}(X_i + D_l) prod_{m<=j}(X_i + E_m)) = prod_{i<j}(X_j - X_i) prod_{1<=i<=j<=r}(D_j - E_i)`.
pub fn lemma6_sides(r: u32) -> Result<PolyIdentity> {
    guard("lemma 6 (r)", r, 4)?;
    let ru = r as usize;
    let entries: Vec<Vec<MultiPoly>> = (0..=ru)
        .map(|i| {
            (0..=ru)
                .map(|j| {
                    let ds = (j + 1..=ru).map(|l| v("X", i) + v("D", l));
                    let es = (1..=j).map(|m| v("X", i) + v("E", m));
                    ds.chain(es).fold(MultiPoly::one(), |acc, f| acc * f)
                })
                .collect()
        })
        .collect();
    let lhs = sym_det(&entries)?;
    let mut rhs = MultiPoly::one();
    for (i, j) in pairs(ru) {
        rhs = rhs * (v("X", j) - v("X", i));
    }
    for j in 1..=ru {
        for i in 1..=j {
            rhs = rhs * (v("D", j) - v("E", i));
        }
    }
    Ok(PolyIdentity { lhs, rhs })
}

/// The bilinear form of the product lemma: the entry factors are
/// `A(d_l) X_i + B(d_l) Y_i` and `A(e_m) X_i + B(e_m) Y_i`, and the right side is
/// `prod_{i<j}(X_i Y_j - X_j Y_i) prod_{1<=i<=j<=r}(B(e_i) A(d_j) - A(e_i) B(d_j))`.
pub fn lemma6_bilinear_sides(r: u32) -> Result<PolyIdentity> {
    guard("bilinear lemma 6 (r)", r, 3)?;
    let ru = r as usize;
    let lin =
        |a: &str, b: &str, idx: usize, i: usize| v(a, idx) * v("X", i) + v(b, idx) * v("Y", i);
    let entries: Vec<Vec<MultiPoly>> = (0..=ru)
        .map(|i| {
            (0..=ru)
                .map(|j| {
                    let ds = (j + 1..=ru).map(|l| lin("Ad", "Bd", l, i));
                    let es = (1..=j).map(|m| lin("Ae", "Be", m, i));
                    ds.chain(es).fold(MultiPoly::one(), |acc, f| acc * f)
                })
                .collect()
        })
        .collect();
    let lhs = sym_det(&entries)?;
    let mut rhs = MultiPoly::one();
    for (i, j) in pairs(ru) {
        rhs = rhs * (v("X", i) * v("Y", j) - v("X", j) * v("Y", i));
    }
    for j in 1..=ru {
        for i in 1..=j {
            rhs = rhs * (v("Be", i) * v("Ad", j) - v("Ae", i) * v("Bd", j));
        }
    }
    Ok(PolyIdentity { lhs, rhs })
}

pub fn verify_lemma3(r: u32) -> Result<bool> {
    lemma3_sides(r).map(|id| id.holds())
}

pub fn verify_corollary4(r: u32) -> Result<bool> {
    corollary4_sides(r).map(|id| id.holds())
}

/// Checks the product lemma, and for `r <= 3` its bilinear restatement too.
pub fn verify_lemma6(r: u32) -> Result<bool> {
    let plain = lemma6_sides(r)?.holds();
    if r <= 3 {
        Ok(plain && lemma6_bilinear_sides(r)?.holds())
    } else {
        Ok(plain)
    }
}
