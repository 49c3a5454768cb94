//! The generalized Catalan identity family and the two-term decomposition
//! `W_{s+k(n+t)} = A(t) W_{s+kn} + B(t) U_{s+k(n+r)}`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{pow, Scalar};
use crate::sequences::{HoradamSequence, RecurrenceParams};

/// Both sides of one identity instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityInstance {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
}

impl IdentityInstance {
    pub fn new(lhs: Scalar, rhs: Scalar) -> Self {
        let holds = lhs == rhs;
        Self { lhs, rhs, holds }
    }
}

/// `(-c2)^s`. `c2` is nonzero so this never fails.
fn neg_c2_pow(params: &RecurrenceParams, s: i64) -> Scalar {
    pow(&-params.c2().clone(), s).expect("c2 is nonzero")
}

/// Memoized `W`, `Y` and `U` sharing `(c1, c2)`; evaluates the Catalan family
/// without rebuilding sequences per instance.
#[derive(Clone, Debug)]
pub struct CatalanFamily {
    w: HoradamSequence,
    y: HoradamSequence,
    u: HoradamSequence,
}

impl CatalanFamily {
    pub fn new(w: &RecurrenceParams, y: &RecurrenceParams) -> Result<Self> {
        if !w.same_coefficients(y) {
            return Err(Error::Precondition(format!(
                "W = {w} and Y = {y} must share (c1, c2)"
            )));
        }
        Ok(Self {
            u: HoradamSequence::new(w.fundamental_of()),
            w: HoradamSequence::new(w.clone()),
            y: HoradamSequence::new(y.clone()),
        })
    }

    pub fn w(&self) -> &HoradamSequence {
        &self.w
    }

    pub fn y(&self) -> &HoradamSequence {
        &self.y
    }

    pub fn u(&self) -> &HoradamSequence {
        &self.u
    }

    /// `W_{s+i} Y_{s+j} - W_s Y_{s+i+j}` against `(-c2)^s (W_1 Y_j - W_0 Y_{j+1}) U_i`.
    pub fn general(&self, s: i64, i: i64, j: i64) -> IdentityInstance {
        let (w, y, u) = (&self.w, &self.y, &self.u);
        let lhs = w.term(s + i) * y.term(s + j) - w.term(s) * y.term(s + i + j);
        let base = w.term(1) * y.term(j) - w.term(0) * y.term(j + 1);
        let rhs = neg_c2_pow(self.w.params(), s) * base * u.term(i);
        IdentityInstance::new(lhs, rhs)
    }
}

pub fn catalan_general(
    w: &RecurrenceParams,
    y: &RecurrenceParams,
    s: i64,
    i: i64,
    j: i64,
) -> Result<IdentityInstance> {
    Ok(CatalanFamily::new(w, y)?.general(s, i, j))
}

/// `U_{s+i} U_{s+j} - U_s U_{s+i+j} = (-c2)^s U_i U_j`.
pub fn catalan_uu(params: &RecurrenceParams, s: i64, i: i64, j: i64) -> IdentityInstance {
    let u = HoradamSequence::new(params.fundamental_of());
    let lhs = u.term(s + i) * u.term(s + j) - u.term(s) * u.term(s + i + j);
    let rhs = neg_c2_pow(params, s) * u.term(i) * u.term(j);
    IdentityInstance::new(lhs, rhs)
}

/// `U_{s+i} W_{s+j} - U_s W_{s+i+j} = (-c2)^s U_i W_j`.
pub fn catalan_wu(params: &RecurrenceParams, s: i64, i: i64, j: i64) -> IdentityInstance {
    let u = HoradamSequence::new(params.fundamental_of());
    let w = HoradamSequence::new(params.clone());
    let lhs = u.term(s + i) * w.term(s + j) - u.term(s) * w.term(s + i + j);
    let rhs = neg_c2_pow(params, s) * u.term(i) * w.term(j);
    IdentityInstance::new(lhs, rhs)
}

/// `W_{s+i} W_{s+j} - W_s W_{s+i+j} = (-c2)^s Δ U_i U_j`.
pub fn catalan_ww(params: &RecurrenceParams, s: i64, i: i64, j: i64) -> IdentityInstance {
    let u = HoradamSequence::new(params.fundamental_of());
    let w = HoradamSequence::new(params.clone());
    let lhs = w.term(s + i) * w.term(s + j) - w.term(s) * w.term(s + i + j);
    let rhs = neg_c2_pow(params, s) * params.delta() * u.term(i) * u.term(j);
    IdentityInstance::new(lhs, rhs)
}

/// Coefficients of `W_{s+k(n+t)} = A(t) W_{s+kn} + B(t) U_{s+k(n+r)}`
/// for fixed `(k, r, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompCoeffs {
    pub a_t: Scalar,
    pub b_t: Scalar,
    pub k: i64,
    pub r: i64,
    pub t: i64,
}

impl DecompCoeffs {
    /// Evaluates both sides of the decomposition at `(s, n)`.
    pub fn reconstruct(
        &self,
        w: &HoradamSequence,
        u: &HoradamSequence,
        s: i64,
        n: i64,
    ) -> IdentityInstance {
        let (k, r, t) = (self.k, self.r, self.t);
        let lhs = w.term(s + k * (n + t));
        let rhs = &self.a_t * w.term(s + k * n) + &self.b_t * u.term(s + k * (n + r));
        IdentityInstance::new(lhs, rhs)
    }
}

/// `A(t) = W_{k(t-r)} / W_{-kr}`, `B(t) = -(-c2)^{-kr} Δ U_{kt} / W_{-kr}`.
pub fn decompose_coeffs(params: &RecurrenceParams, k: i64, r: i64, t: i64) -> Result<DecompCoeffs> {
    let w = HoradamSequence::new(params.clone());
    let u = HoradamSequence::new(params.fundamental_of());
    let denom = w.term(-k * r);
    if denom.is_zero() {
        return Err(Error::SingularDenominator(format!(
            "W_{{-kr}} = W_{} vanishes for {params}",
            -k * r
        )));
    }
    let a_t = w.term(k * (t - r)) / &denom;
    let b_t = -(neg_c2_pow(params, -k * r) * params.delta() * u.term(k * t)) / denom;
    Ok(DecompCoeffs { a_t, b_t, k, r, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn fib() -> RecurrenceParams {
        RecurrenceParams::fibonacci()
    }

    #[test]
    fn classic_catalan() {
        let inst = catalan_general(&fib(), &fib(), 2, 3, 3).unwrap();
        assert_eq!(inst.lhs, int(4));
        assert_eq!(inst.rhs, int(4));
        assert!(inst.holds);
    }

    #[test]
    fn zero_shift_is_trivial() {
        let w = RecurrenceParams::from_ints(2, -1, 3, -2).unwrap();
        let y = RecurrenceParams::from_ints(-1, 5, 3, -2).unwrap();
        let inst = catalan_general(&w, &y, 4, 0, -3).unwrap();
        assert!(inst.lhs.is_zero() && inst.rhs.is_zero() && inst.holds);
    }

    #[test]
    fn lucas_instance() {
        let l = RecurrenceParams::lucas_numbers();
        let inst = catalan_general(&l, &l, 1, 1, 1).unwrap();
        assert_eq!((inst.lhs.clone(), inst.rhs.clone()), (int(5), int(5)));
        let ww = catalan_ww(&l, 1, 1, 1);
        assert_eq!((ww.lhs, ww.rhs), (int(5), int(5)));
    }

    #[test]
    fn negative_shift() {
        assert!(catalan_general(&fib(), &fib(), -3, 2, 1).unwrap().holds);
    }

    #[test]
    fn mismatched_coefficients() {
        let y = RecurrenceParams::from_ints(0, 1, 1, 2).unwrap();
        assert!(matches!(
            catalan_general(&fib(), &y, 0, 1, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn specializations() {
        let uu = catalan_uu(&fib(), 1, 2, 3);
        assert_eq!((uu.lhs.clone(), uu.rhs.clone()), (int(-2), int(-2)));
        let p = RecurrenceParams::from_ints(3, -2, 2, 3).unwrap();
        let wu = catalan_wu(&p, 5, 0, 4);
        assert!(wu.lhs.is_zero() && wu.holds);
    }

    #[test]
    fn specialization_coherence() {
        for (a0, a1, c1, c2) in [(2, 1, 1, 1), (1, -2, 2, -3), (-1, 2, 0, 2)] {
            let p = RecurrenceParams::from_ints(a0, a1, c1, c2).unwrap();
            let u = p.fundamental_of();
            for s in -4..=4 {
                for i in -4..=4 {
                    for j in -4..=4 {
                        assert_eq!(
                            catalan_uu(&p, s, i, j),
                            catalan_general(&u, &u, s, i, j).unwrap()
                        );
                        assert_eq!(
                            catalan_wu(&p, s, i, j),
                            catalan_general(&u, &p, s, i, j).unwrap()
                        );
                        // Δ form against the (W1 W_j - W0 W_{j+1}) U_i form
                        let ww = catalan_ww(&p, s, i, j);
                        assert!(ww.holds);
                        assert_eq!(ww, catalan_general(&p, &p, s, i, j).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn fibonacci_addition_law() {
        let c = decompose_coeffs(&fib(), 1, 1, 5).unwrap();
        let f = HoradamSequence::fibonacci();
        assert_eq!(c.a_t, f.term(4));
        assert_eq!(c.b_t, f.term(5));
        let u = HoradamSequence::fibonacci();
        for s in -4..=4 {
            for n in -4..=4 {
                assert!(c.reconstruct(&f, &u, s, n).holds);
            }
        }
    }

    #[test]
    fn singular_basis() {
        assert!(matches!(
            decompose_coeffs(&fib(), 0, 3, 1),
            Err(Error::SingularDenominator(_))
        ));
        assert!(matches!(
            decompose_coeffs(&fib(), 2, 0, 1),
            Err(Error::SingularDenominator(_))
        ));
    }

    #[test]
    fn t_equals_r() {
        let p = RecurrenceParams::from_ints(2, 3, -1, 2).unwrap();
        let (k, r) = (2, 3);
        let c = decompose_coeffs(&p, k, r, r).unwrap();
        let w = HoradamSequence::new(p.clone());
        assert_eq!(c.a_t, w.term(0) / w.term(-k * r));
        let u = HoradamSequence::new(p.fundamental_of());
        let rec = c.reconstruct(&w, &u, 0, 0);
        assert_eq!(rec.lhs, w.term(k * r));
        assert!(rec.holds);
    }

    #[test]
    fn decomposition_soundness_grid() {
        for a0 in -2..=2 {
            for a1 in -2..=2 {
                for (c1, c2) in [(1, 1), (-2, 1), (2, -1), (0, 2), (1, -2)] {
                    let p = RecurrenceParams::from_ints(a0, a1, c1, c2).unwrap();
                    let w = HoradamSequence::new(p.clone());
                    let u = HoradamSequence::new(p.fundamental_of());
                    for (k, r, t) in [(1, 1, 0), (1, 2, 3), (2, 1, -1), (-1, 2, 2), (3, 1, 2)] {
                        let Ok(c) = decompose_coeffs(&p, k, r, t) else {
                            assert!(w.term(-k * r).is_zero());
                            continue;
                        };
                        for s in -4..=4 {
                            for n in -4..=4 {
                                assert!(c.reconstruct(&w, &u, s, n).holds);
                            }
                        }
                    }
                }
            }
        }
    }
}
