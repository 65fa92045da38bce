use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{fmt_rational, from_f64, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    Deterministic,
    Randomized,
}

impl GridKind {
    pub fn name(self) -> &'static str {
        match self {
            GridKind::Deterministic => "det",
            GridKind::Randomized => "rand",
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "det" => Ok(GridKind::Deterministic),
            "rand" => Ok(GridKind::Randomized),
            _ => Err(format!("unknown grid `{s}` (expected det or rand)")),
        }
    }
}

/// Geometric grid points `tau_k`. Deterministic: `tau_0 = 0` and
/// `tau_k = 2^(k-1)`. Randomized: `tau_k = eta * 2^k` for `k >= 0`, with
/// `tau_{-1} = 0` opening the first interval `(0, eta]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSequence {
    kind: GridKind,
    eta: Rational,
}

fn pow2(k: i64) -> Rational {
    Rational::from_integer(num::BigInt::one() << k as usize)
}

impl IntervalSequence {
    pub fn deterministic() -> Self {
        IntervalSequence {
            kind: GridKind::Deterministic,
            eta: Rational::one(),
        }
    }

    /// `eta = 2^-X` with `X` uniform on `(0, 1]`, drawn from `seed`.
    pub fn randomized(seed: u64) -> Self {
        IntervalSequence {
            kind: GridKind::Randomized,
            eta: from_f64(eta_draw(seed)).expect("finite"),
        }
    }

    /// Randomized grid with a given `eta` in `[1/2, 1)`.
    pub fn with_eta(eta: Rational) -> Result<Self> {
        if eta < ratio(1, 2) || eta >= Rational::one() {
            return Err(Error::InvalidInstance(format!(
                "eta {} outside [1/2, 1)",
                fmt_rational(&eta)
            )));
        }
        Ok(IntervalSequence {
            kind: GridKind::Randomized,
            eta,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// `None` for the deterministic grid.
    pub fn eta(&self) -> Option<&Rational> {
        match self.kind {
            GridKind::Deterministic => None,
            GridKind::Randomized => Some(&self.eta),
        }
    }

    pub fn tau(&self, k: i64) -> Rational {
        match self.kind {
            GridKind::Deterministic if k <= 0 => Rational::zero(),
            GridKind::Deterministic => pow2(k - 1),
            GridKind::Randomized if k < 0 => Rational::zero(),
            GridKind::Randomized => &self.eta * pow2(k),
        }
    }

    /// Index of the first round.
    pub fn first_round(&self) -> i64 {
        match self.kind {
            GridKind::Deterministic => 1,
            GridKind::Randomized => 0,
        }
    }

    /// Interval length `tau_{k+1} - tau_k`, the deadline of round `k`.
    pub fn deadline(&self, k: i64) -> Rational {
        self.tau(k + 1) - self.tau(k)
    }

    /// First round `k` whose grid point is at or after `t`.
    pub fn first_round_at_or_after(&self, t: &Rational) -> i64 {
        let mut k = self.first_round();
        while self.tau(k) < *t {
            k += 1;
        }
        k
    }

    /// Start `tau_{k-1}` of the interval `(tau_{k-1}, tau_k]` containing `c > 0`.
    pub fn interval_start_of(&self, c: &Rational) -> Rational {
        let mut k = 0;
        while self.tau(k) < *c {
            k += 1;
        }
        self.tau(k - 1)
    }
}

/// The `eta` of `randomized_grid(seed)` as a float (exactly the same value).
pub fn eta_draw(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = 1.0 - rng.gen::<f64>();
    // 2^-x can round up to 1 for tiny x
    (-x).exp2().min(1.0 - f64::EPSILON / 2.0)
}

pub fn deterministic_grid() -> IntervalSequence {
    IntervalSequence::deterministic()
}

pub fn randomized_grid(seed: u64) -> IntervalSequence {
    IntervalSequence::randomized(seed)
}

pub fn interval_start_of(c: &Rational, grid: &IntervalSequence) -> Rational {
    grid.interval_start_of(c)
}

/// Rational just above `1 / ln 2`, so bounds built from it never understate.
pub fn inv_ln2_upper() -> Rational {
    ratio(14_426_950_408_889_635, 10_000_000_000_000_000)
}

/// `2 alpha beta + gamma` for the deterministic grid and
/// `alpha beta / ln 2 + gamma` (rounded up) for the randomized one.
pub fn competitive_factor(
    kind: GridKind,
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
) -> Rational {
    let lead = match kind {
        GridKind::Deterministic => int(2),
        GridKind::Randomized => inv_ln2_upper(),
    };
    lead * alpha * beta + gamma
}
