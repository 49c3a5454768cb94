//! Closed-form values of the power and product determinants, evaluated from
//! sequence terms, binomials and sign rules without building any matrix.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::matrices::{PowerMatrixSpec, ProductMatrixSpec};
use crate::scalar::{binomial, binomial_row_product, format_scalar, pow, sign_power, Scalar};
use crate::sequences::{HoradamSequence, RecurrenceParams};

/// One named multiplicative factor of a closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub value: Scalar,
}

/// A closed-form value with its audit trail:
/// `value = (-1)^sign_exponent * prod(factor_trace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormResult {
    pub value: Scalar,
    pub sign_exponent: i64,
    pub factor_trace: Vec<Factor>,
}

impl ClosedFormResult {
    /// Recomputes the value from the trace.
    pub fn recompute(&self) -> Scalar {
        self.factor_trace
            .iter()
            .fold(sign_power(self.sign_exponent), |acc, f| acc * &f.value)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct F<'a> {
            name: &'a str,
            value: String,
        }
        serde_json::json!({
            "value": format_scalar(&self.value),
            "sign_exponent": self.sign_exponent,
            "factor_trace": self.factor_trace.iter().map(|f| F { name: &f.name, value: format_scalar(&f.value) }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Default)]
struct Trace {
    sign_exponent: i64,
    factors: Vec<Factor>,
}

impl Trace {
    fn sign(&mut self, e: i64) -> &mut Self {
        self.sign_exponent += e;
        self
    }

    fn factor(&mut self, name: impl Into<String>, value: Scalar) -> &mut Self {
        self.factors.push(Factor {
            name: name.into(),
            value,
        });
        self
    }

    fn power(&mut self, label: &str, base: &Scalar, exp: i64) -> &mut Self {
        let value = pow(base, exp).expect("closed-form bases with negative exponents are nonzero");
        self.factor(format!("{label}^{exp}"), value)
    }

    /// Pushes `prod seq_m^{e_m}`, one trace entry per distinct index.
    fn term_powers(
        &mut self,
        symbol: &str,
        seq: &HoradamSequence,
        exps: &BTreeMap<i64, i64>,
    ) -> &mut Self {
        for (&m, &e) in exps.iter().filter(|(_, &e)| e != 0) {
            self.power(&format!("{symbol}_{m}"), &seq.term(m), e);
        }
        self
    }

    fn binomials(&mut self, r: u32) -> &mut Self {
        self.factor(
            format!("prod_i C({r},i)"),
            Scalar::from_integer(binomial_row_product(r)),
        )
    }

    fn finish(&mut self) -> ClosedFormResult {
        let factors = std::mem::take(&mut self.factors);
        let value = factors
            .iter()
            .fold(sign_power(self.sign_exponent), |acc, f| acc * &f.value);
        ClosedFormResult {
            value,
            sign_exponent: self.sign_exponent,
            factor_trace: factors,
        }
    }
}

fn add_exp(map: &mut BTreeMap<i64, i64>, index: i64, e: i64) {
    *map.entry(index).or_insert(0) += e;
}

fn c2_choose(r: u32) -> i64 {
    binomial(i64::from(r) + 1, 2)
}

fn c3_choose(r: u32) -> i64 {
    binomial(i64::from(r) + 1, 3)
}

/// `det(F_{n+i+j}^r)` for `i, j = 0..=r`.
pub fn carlitz_d(r: u32, n: i64) -> ClosedFormResult {
    generalized_d(r, 0, 1, n)
}

/// `det(F_{s+k(n+i+j)}^r)` for `i, j = 0..=r`.
pub fn generalized_d(r: u32, s: i64, k: i64, n: i64) -> ClosedFormResult {
    let fib = HoradamSequence::fibonacci();
    let big_c = c2_choose(r);
    let mut exps = BTreeMap::new();
    // (F_k^r F_2k^(r-1) ... F_rk)^2
    for i in 1..=i64::from(r) {
        add_exp(&mut exps, i * k, 2 * (i64::from(r) + 1 - i));
    }
    Trace::default()
        .sign((s + k * n + 1) * big_c)
        .term_powers("F", &fib, &exps)
        .binomials(r)
        .finish()
}

/// Determinant of the power matrix `(W_{s+k(n+i+j)}^r)` for arbitrary parameters.
pub fn theorem5_det(spec: &PowerMatrixSpec) -> ClosedFormResult {
    let u = HoradamSequence::new(spec.params.fundamental_of());
    theorem5_with(&spec.params, &u, spec.r, spec.s, spec.k, spec.n)
}

/// [`theorem5_det`] with a caller-supplied memoized `U` for `params`.
pub fn theorem5_with(
    params: &RecurrenceParams,
    u: &HoradamSequence,
    r: u32,
    s: i64,
    k: i64,
    n: i64,
) -> ClosedFormResult {
    let big_c = c2_choose(r);
    let shift = s + k * n;
    let mut exps = BTreeMap::new();
    for i in 0..i64::from(r) {
        add_exp(&mut exps, (i + 1) * k, 2 * (i64::from(r) - i));
    }
    Trace::default()
        .sign((shift + 1) * big_c)
        .power("c2", params.c2(), shift * big_c + 2 * k * c3_choose(r))
        .power("Delta", &params.delta(), big_c)
        .binomials(r)
        .term_powers("U", u, &exps)
        .finish()
}

/// Determinant of the product matrix built from `d` and `e`.
pub fn theorem7_det(spec: &ProductMatrixSpec) -> ClosedFormResult {
    let u = HoradamSequence::new(spec.params.fundamental_of());
    theorem7_with(&spec.params, &u, spec)
}

/// [`theorem7_det`] with a caller-supplied memoized `U` for `spec.params`.
pub fn theorem7_with(
    params: &RecurrenceParams,
    u: &HoradamSequence,
    spec: &ProductMatrixSpec,
) -> ClosedFormResult {
    let r = spec.r;
    let k = spec.k;
    let big_c = c2_choose(r);
    let (d, e) = (spec.d(), spec.e());
    let mut exps = BTreeMap::new();
    for l in 1..=i64::from(r) {
        add_exp(&mut exps, k * l, i64::from(r) + 1 - l);
    }
    // prod_{1<=i<=j<=r} (-c2)^{k d_j} U_{k(e_i - d_j)}
    let mut neg_c2_exp = (spec.s + k * spec.n) * big_c + k * c3_choose(r);
    for j in 0..r as usize {
        neg_c2_exp += (j as i64 + 1) * k * d[j];
        for ei in &e[..=j] {
            add_exp(&mut exps, k * (ei - d[j]), 1);
        }
    }
    Trace::default()
        .sign(big_c + neg_c2_exp)
        .power("Delta", &params.delta(), big_c)
        .power("c2", params.c2(), neg_c2_exp)
        .term_powers("U", u, &exps)
        .finish()
}

/// The basic power determinant `(F_{s+ik}^{r-j} F_{s+(i+1)k}^j)`.
pub fn corollary8_det(r: u32, s: i64, k: i64) -> ClosedFormResult {
    let fib = HoradamSequence::fibonacci();
    let big_c = c2_choose(r);
    let mut exps = BTreeMap::new();
    add_exp(&mut exps, k, big_c);
    for l in 1..=i64::from(r) {
        add_exp(&mut exps, k * l, i64::from(r) + 1 - l);
    }
    Trace::default()
        .sign((s + 1) * big_c + k * c3_choose(r))
        .term_powers("F", &fib, &exps)
        .finish()
}

/// The product determinant with `d_j = p - 1 + j` and `e_j = j - 1`.
pub fn corollary9_det(
    params: &RecurrenceParams,
    r: u32,
    s: i64,
    k: i64,
    n: i64,
    p: i64,
) -> ClosedFormResult {
    let u = HoradamSequence::new(params.fundamental_of());
    let big_c = c2_choose(r);
    let neg_c2_exp = (s + k * n) * big_c + 2 * k * c3_choose(r);
    let mut exps = BTreeMap::new();
    for l in 1..=i64::from(r) {
        add_exp(&mut exps, l * k, i64::from(r) + 1 - l);
    }
    for l in 0..i64::from(r) {
        add_exp(&mut exps, k * (p + l), i64::from(r) - l);
    }
    Trace::default()
        .sign(neg_c2_exp)
        .power("Delta", &params.delta(), big_c)
        .power("c2", params.c2(), neg_c2_exp)
        .term_powers("U", &u, &exps)
        .finish()
}

/// `d = [0; r]`, `e = [1; r]`, `n = 0` over the Fibonacci numbers.
pub fn corollary8_spec(r: u32, s: i64, k: i64) -> ProductMatrixSpec {
    ProductMatrixSpec::new(
        RecurrenceParams::fibonacci(),
        s,
        k,
        0,
        vec![0; r as usize],
        vec![1; r as usize],
    )
    .expect("equal lengths")
}

/// `d_j = p - 1 + j`, `e_j = j - 1` for `j = 1..=r`.
pub fn corollary9_spec(
    params: &RecurrenceParams,
    r: u32,
    s: i64,
    k: i64,
    n: i64,
    p: i64,
) -> ProductMatrixSpec {
    let d = (1..=i64::from(r)).map(|j| p - 1 + j).collect();
    let e = (1..=i64::from(r)).map(|j| j - 1).collect();
    ProductMatrixSpec::new(params.clone(), s, k, n, d, e).expect("equal lengths")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{
        build_power_matrix, build_product_matrix, det_bareiss, det_cofactor, ExactMatrix,
    };
    use crate::scalar::int;
    use num_traits::Zero;

    fn fib() -> RecurrenceParams {
        RecurrenceParams::fibonacci()
    }

    #[test]
    fn carlitz_values() {
        for n in -3..=4 {
            assert_eq!(carlitz_d(2, n).value, int(2) * sign_power(n + 1));
            assert_eq!(carlitz_d(0, n).value, int(1));
            assert_eq!(carlitz_d(0, n).sign_exponent, 0);
            assert_eq!(carlitz_d(4, n).value, int(13824));
        }
        // (1*1*4*3)^2 * (1*4*6*4*1)
        assert_eq!(int(144) * int(96), int(13824));
    }

    #[test]
    fn generalized_values() {
        for n in -2..=3 {
            assert_eq!(generalized_d(2, 0, 1, n).value, int(2) * sign_power(n + 1));
        }
        let brute = det_cofactor(&ExactMatrix::from_rows([
            [1, 4, 25],
            [4, 25, 169],
            [25, 169, 1156],
        ]))
        .unwrap();
        assert_eq!(brute, int(18));
        assert_eq!(generalized_d(2, 1, 2, 0).value, int(18));
        for r in 1..=4 {
            assert!(generalized_d(r, 1, 0, 3).value.is_zero());
        }
    }

    #[test]
    fn theorem5_examples() {
        for n in -3..=3 {
            let spec = PowerMatrixSpec {
                params: fib(),
                r: 1,
                s: 0,
                k: 1,
                n,
            };
            assert_eq!(theorem5_det(&spec).value, sign_power(n + 1));
        }
        let lucas = PowerMatrixSpec {
            params: RecurrenceParams::lucas_numbers(),
            r: 1,
            s: 0,
            k: 1,
            n: 0,
        };
        assert_eq!(theorem5_det(&lucas).value, int(5));
        assert_eq!(det_bareiss(&build_power_matrix(&lucas)), int(5));
    }

    #[test]
    fn theorem5_matches_eq2_for_fibonacci() {
        for r in 0..=4 {
            for s in -2..=3 {
                for k in -2..=3 {
                    for n in -2..=3 {
                        let spec = PowerMatrixSpec {
                            params: fib(),
                            r,
                            s,
                            k,
                            n,
                        };
                        assert_eq!(theorem5_det(&spec).value, generalized_d(r, s, k, n).value);
                    }
                }
            }
        }
    }

    #[test]
    fn theorem7_examples() {
        let spec = ProductMatrixSpec::new(fib(), 0, 1, 0, vec![0], vec![1]).unwrap();
        assert_eq!(theorem7_det(&spec).value, int(-1));
        assert_eq!(det_bareiss(&build_product_matrix(&spec)), int(-1));
        let empty = ProductMatrixSpec::new(
            RecurrenceParams::from_ints(1, 2, 3, -1).unwrap(),
            2,
            -1,
            1,
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(theorem7_det(&empty).value, int(1));
        let same = ProductMatrixSpec::new(
            RecurrenceParams::from_ints(1, 2, 3, -1).unwrap(),
            1,
            2,
            0,
            vec![1, -2],
            vec![1, -2],
        )
        .unwrap();
        assert!(theorem7_det(&same).value.is_zero());
        assert!(det_bareiss(&build_product_matrix(&same)).is_zero());
    }

    #[test]
    fn corollary8_examples() {
        for s in -2..=3 {
            for k in -2..=3 {
                let f = HoradamSequence::fibonacci();
                let expected = sign_power(s + 1) * f.term(k) * f.term(k);
                assert_eq!(corollary8_det(1, s, k).value, expected);
                let cassini_like = f.term(s) * f.term(s + 2 * k) - f.term(s + k) * f.term(s + k);
                assert_eq!(expected, cassini_like);
            }
        }
        assert_eq!(corollary8_det(2, 0, 1).value, int(1));
        for r in 1..=3 {
            assert!(corollary8_det(r, 2, 0).value.is_zero());
        }
    }

    #[test]
    fn corollary9_examples() {
        let c = corollary9_det(&fib(), 1, 0, 1, 0, 2);
        assert_eq!(c.value, int(1));
        let m = build_product_matrix(&corollary9_spec(&fib(), 1, 0, 1, 0, 2));
        assert_eq!(m, ExactMatrix::from_rows([[1, 0], [2, 1]]));
        for r in 1..=3 {
            assert!(corollary9_det(&fib(), r, 1, 2, 0, 0).value.is_zero());
        }
        let p = RecurrenceParams::from_ints(2, -1, 1, 2).unwrap();
        assert_eq!(corollary9_det(&p, 0, 3, 2, 1, 5).value, int(1));
    }

    #[test]
    fn trace_reproduces_value() {
        let p = RecurrenceParams::from_ints(1, -2, 2, -2).unwrap();
        let results = [
            theorem5_det(&PowerMatrixSpec {
                params: p.clone(),
                r: 3,
                s: -2,
                k: 3,
                n: 1,
            }),
            theorem7_det(
                &ProductMatrixSpec::new(p.clone(), 1, -2, 2, vec![1, 0, -2], vec![3, 1, 1])
                    .unwrap(),
            ),
            corollary9_det(&p, 3, -1, 2, 1, -2),
            corollary8_det(3, -2, 3),
            generalized_d(4, 3, -2, 1),
        ];
        for res in results {
            assert_eq!(res.recompute(), res.value);
            assert!(!res.factor_trace.is_empty());
        }
    }

    #[test]
    fn json_trace_shape() {
        let res = theorem5_det(&PowerMatrixSpec {
            params: RecurrenceParams::lucas_numbers(),
            r: 1,
            s: 0,
            k: 1,
            n: 0,
        });
        let js = res.to_json();
        assert_eq!(js["value"], "5");
        assert_eq!(js["sign_exponent"], 1);
        assert!(js["factor_trace"]
            .as_array()
            .unwrap()
            .iter()
            .any(|f| f["name"] == "Delta^1"));
    }
}
