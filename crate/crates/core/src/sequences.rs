//! Second-order linear recurrences `W_n = c1 W_{n-1} + c2 W_{n-2}` at any signed index.

use std::cell::RefCell;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{int, pow, sign_power, Scalar};

/// The quadruple `(a0, a1; c1, c2)`. `c2` is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct RecurrenceParams {
    a0: Scalar,
    a1: Scalar,
    c1: Scalar,
    c2: Scalar,
}

impl RecurrenceParams {
    pub fn new(a0: Scalar, a1: Scalar, c1: Scalar, c2: Scalar) -> Result<Self> {
        if c2.is_zero() {
            return Err(Error::InvalidParams("c2 must be nonzero".into()));
        }
        Ok(Self { a0, a1, c1, c2 })
    }

    pub fn from_ints(a0: i64, a1: i64, c1: i64, c2: i64) -> Result<Self> {
        Self::new(int(a0), int(a1), int(c1), int(c2))
    }

    pub fn fibonacci() -> Self {
        Self::from_ints(0, 1, 1, 1).unwrap()
    }

    /// The Lucas numbers `L_n = W_n(2, 1; 1, 1)`.
    pub fn lucas_numbers() -> Self {
        Self::from_ints(2, 1, 1, 1).unwrap()
    }

    /// The fundamental sequence `U_n = W_n(0, 1; c1, c2)`.
    pub fn fundamental(c1: Scalar, c2: Scalar) -> Result<Self> {
        Self::new(Scalar::zero(), Scalar::one(), c1, c2)
    }

    /// The fundamental sequence sharing this sequence's coefficients.
    pub fn fundamental_of(&self) -> Self {
        Self {
            a0: Scalar::zero(),
            a1: Scalar::one(),
            c1: self.c1.clone(),
            c2: self.c2.clone(),
        }
    }

    pub fn is_fundamental(&self) -> bool {
        self.a0.is_zero() && self.a1.is_one()
    }

    pub fn same_coefficients(&self, other: &Self) -> bool {
        self.c1 == other.c1 && self.c2 == other.c2
    }

    pub fn a0(&self) -> &Scalar {
        &self.a0
    }

    pub fn a1(&self) -> &Scalar {
        &self.a1
    }

    pub fn c1(&self) -> &Scalar {
        &self.c1
    }

    pub fn c2(&self) -> &Scalar {
        &self.c2
    }

    /// `a1^2 - c1 a0 a1 - c2 a0^2`, i.e. `W_1^2 - W_0 W_2`.
    pub fn delta(&self) -> Scalar {
        &self.a1 * &self.a1 - &self.c1 * &self.a0 * &self.a1 - &self.c2 * &self.a0 * &self.a0
    }
}

impl fmt::Display for RecurrenceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::scalar::format_scalar as s;
        write!(
            f,
            "W({},{};{},{})",
            s(&self.a0),
            s(&self.a1),
            s(&self.c1),
            s(&self.c2)
        )
    }
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a0: String,
    a1: String,
    c1: String,
    c2: String,
}

impl TryFrom<RawParams> for RecurrenceParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        use crate::scalar::parse_scalar as p;
        Self::new(p(&raw.a0)?, p(&raw.a1)?, p(&raw.c1)?, p(&raw.c2)?)
    }
}

impl From<RecurrenceParams> for RawParams {
    fn from(p: RecurrenceParams) -> Self {
        use crate::scalar::format_scalar as s;
        RawParams {
            a0: s(&p.a0),
            a1: s(&p.a1),
            c1: s(&p.c1),
            c2: s(&p.c2),
        }
    }
}

/// `delta(params)` as a free function.
pub fn delta(params: &RecurrenceParams) -> Scalar {
    params.delta()
}

#[derive(Clone, Debug)]
struct Memo {
    // forward[n] = W_n for n >= 0
    forward: Vec<Scalar>,
    // backward[m] = W_{-(m+1)}
    backward: Vec<Scalar>,
}

/// A memoized Horadam sequence.
///
/// The table grows on demand in both directions from `(W_0, W_1)`. Interior
/// mutability makes this type `!Sync`; clone it per worker instead.
#[derive(Clone, Debug)]
pub struct HoradamSequence {
    params: RecurrenceParams,
    memo: RefCell<Memo>,
}

impl HoradamSequence {
    pub fn new(params: RecurrenceParams) -> Self {
        let memo = Memo {
            forward: vec![params.a0.clone(), params.a1.clone()],
            backward: Vec::new(),
        };
        Self {
            params,
            memo: RefCell::new(memo),
        }
    }

    pub fn fibonacci() -> Self {
        Self::new(RecurrenceParams::fibonacci())
    }

    pub fn params(&self) -> &RecurrenceParams {
        &self.params
    }

    /// `W_n` for any signed `n`.
    pub fn term(&self, n: i64) -> Scalar {
        let mut memo = self.memo.borrow_mut();
        let p = &self.params;
        if n >= 0 {
            let n = n as usize;
            while memo.forward.len() <= n {
                let len = memo.forward.len();
                let next = &p.c1 * &memo.forward[len - 1] + &p.c2 * &memo.forward[len - 2];
                memo.forward.push(next);
            }
            memo.forward[n].clone()
        } else {
            let m = (-(n + 1)) as usize;
            while memo.backward.len() <= m {
                // W_{j-2} = (W_j - c1 W_{j-1}) / c2, with j-2 = -(len+1)
                let len = memo.backward.len();
                let (wj, wj1) = match len {
                    0 => (&memo.forward[1], &memo.forward[0]),
                    1 => (&memo.forward[0], &memo.backward[0]),
                    _ => (&memo.backward[len - 2], &memo.backward[len - 1]),
                };
                let prev = (wj - &p.c1 * wj1) / &p.c2;
                memo.backward.push(prev);
            }
            memo.backward[m].clone()
        }
    }

    /// `[W_lo, ..., W_hi]`.
    pub fn terms_range(&self, lo: i64, hi: i64) -> Result<Vec<Scalar>> {
        if lo > hi {
            return Err(Error::Range { lo, hi });
        }
        // warm the extremes first so the loop only reads
        self.term(lo);
        self.term(hi);
        Ok((lo..=hi).map(|n| self.term(n)).collect())
    }

    /// Checks `U_{-n} = (-1)^{n+1} c2^{-n} U_n`; only meaningful for fundamental sequences.
    pub fn reflect_check(&self, n: u32) -> Result<bool> {
        if !self.params.is_fundamental() {
            return Err(Error::Precondition(format!(
                "reflection formula requires a fundamental sequence (0,1;c1,c2), got {}",
                self.params
            )));
        }
        let n = i64::from(n);
        let expected = sign_power(n + 1) * pow(&self.params.c2, -n)? * self.term(n);
        Ok(self.term(-n) == expected)
    }
}
